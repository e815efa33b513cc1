import json
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

from dataclasses_json import dataclass_json

from craterlens.detect.georef import DetectionGeo, GeoRef
from craterlens.utils import Provenance, atomic_write_text
from .arcimg import ArcImgBin, arcimg_binned_recall
from .catalog import CatalogEntry
from .localization import LocalizationBin, localization_stats
from .matching import MatchReport, match
from .metrics import Metrics
from .overlap import SubsetRecall, overlapping_subset, subset_recall

__all__ = ["DEFAULT_LOCALIZATION_EDGES", "EvaluationReport", "evaluate", "write_report_json"]

DEFAULT_LOCALIZATION_EDGES = [5.0, 6.0, 7.0, 8.0, 9.0, 10.0]


@dataclass_json
@dataclass
class EvaluationReport:
    """Summary of one detection set against a catalog.

    Attributes
    ----------
    metrics: Metrics
        Precision, recall and F1.
    tp, fp, fn: int
        Match counts.
    localization: list[LocalizationBin]
        IoU statistics per diameter bin, followed by one bin over all diameters.
    overlap: SubsetRecall
        Recall over the craters whose rims cross another crater's rim.
    arc_img: list[ArcImgBin]
        Recall per rim-completeness bin.
    provenance: Provenance, optional
        The producing run.
    """

    metrics: Metrics
    tp: int
    fp: int
    fn: int
    localization: list[LocalizationBin] = field(default_factory=list)
    overlap: Optional[SubsetRecall] = None
    arc_img: list[ArcImgBin] = field(default_factory=list)
    provenance: Optional[Provenance] = None


def evaluate(
    dets: Sequence[DetectionGeo],
    catalog: Sequence[CatalogEntry],
    georef: GeoRef,
    iou_min: float = 0.5,
    edges: Sequence[float] = DEFAULT_LOCALIZATION_EDGES,
) -> tuple[EvaluationReport, MatchReport]:
    report = match(dets, catalog, iou_min, georef)
    loc = localization_stats(report.tp_pairs, edges)
    if report.tp_pairs:
        loc += localization_stats(report.tp_pairs, [0.0, max(p.gt_diameter for p in report.tp_pairs)])
    summary = EvaluationReport(
        metrics=report.metrics(),
        tp=report.tp_count,
        fp=len(report.fp),
        fn=len(report.fn),
        localization=loc,
        overlap=subset_recall(report, overlapping_subset(catalog, georef.body_radius_m)),
        arc_img=arcimg_binned_recall(report, catalog),
    )
    return summary, report


def write_report_json(report: EvaluationReport, path: str | os.PathLike):
    atomic_write_text(path, json.dumps(report.to_dict(), indent=4, sort_keys=True) + "\n")  # type: ignore
