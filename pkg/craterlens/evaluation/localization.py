from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from dataclasses_json import dataclass_json

from craterlens.utils import ArgumentError
from .matching import MatchPair, MatchReport

__all__ = ["LocalizationBin", "localization_stats", "common_matches", "restrict_pairs"]


@dataclass_json
@dataclass(frozen=True)
class LocalizationBin:
    """IoU statistics (percent) of the true positives whose crater falls in a diameter bin.

    `mean_iou` and `std_iou` are None when the bin is empty. The standard
    deviation is the population one.
    """

    d_min: float
    d_max: float
    count: int
    mean_iou: Optional[float]
    std_iou: Optional[float]

    @property
    def defined(self) -> bool:
        return self.count > 0


def localization_stats(pairs: Sequence[MatchPair], edges: Sequence[float]) -> list[LocalizationBin]:
    """Per-bin localization quality for diameter bin `edges` (kilometers).

    Bins are ``[edges[i], edges[i + 1])``, the last one closed on the right.
    """
    if len(edges) < 2 or any(a >= b for a, b in zip(edges, edges[1:])):
        raise ArgumentError(f"Bin edges must be strictly increasing, got {list(edges)}")
    diameters = np.array([p.gt_diameter for p in pairs], dtype=np.float64)
    ious = 100.0 * np.array([p.iou for p in pairs], dtype=np.float64)

    bins = []
    last = len(edges) - 2
    for i, (lo, hi) in enumerate(zip(edges, edges[1:])):
        upper = diameters <= hi if i == last else diameters < hi
        sel = ious[(diameters >= lo) & upper]
        if sel.size:
            bins.append(LocalizationBin(lo, hi, int(sel.size), float(sel.mean()), float(sel.std())))
        else:
            bins.append(LocalizationBin(lo, hi, 0, None, None))
    return bins


def common_matches(reports: Sequence[MatchReport]) -> set[str]:
    """Catalog ids matched in every report."""
    if not reports:
        return set()
    return set.intersection(*(r.matched_ids for r in reports))


def restrict_pairs(report: MatchReport, ids: set[str]) -> list[MatchPair]:
    return [p for p in report.tp_pairs if p.catalog_id in ids]
