import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from dataclasses_json import dataclass_json

from craterlens.detect.merge import GeoDetectionSet, combine_models
from craterlens.utils import ArgumentError
from .catalog import CatalogEntry
from .matching import match
from .metrics import Metrics

__all__ = ["CombinationRow", "combination_table"]


@dataclass_json
@dataclass(frozen=True)
class CombinationRow:
    models: list[str]
    metrics: Metrics
    tp: int
    fp: int
    fn: int


def combination_table(
    named_sets: Mapping[str, GeoDetectionSet],
    catalog: Sequence[CatalogEntry],
    tau_combine: float = 0.5,
    iou_min: float = 0.5,
) -> list[CombinationRow]:
    """Metrics of every nonempty combination of models, smaller combinations first.

    Within a size, combinations follow the order of `named_sets`.
    """
    if not named_sets:
        raise ArgumentError("No detection sets to combine")
    names = list(named_sets)
    rows = []
    for k in range(1, len(names) + 1):
        for combo in itertools.combinations(names, k):
            merged = combine_models([named_sets[n] for n in combo], tau_combine)
            report = match(merged.detections, catalog, iou_min, merged.georef)
            rows.append(CombinationRow(list(combo), report.metrics(), report.tp_count, len(report.fp), len(report.fn)))
    return rows
