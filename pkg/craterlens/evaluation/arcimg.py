from dataclasses import dataclass
from typing import Optional, Sequence

from dataclasses_json import dataclass_json

from .catalog import CatalogEntry
from .matching import MatchReport

__all__ = ["ARC_IMG_BINS", "ArcImgBin", "arcimg_binned_recall"]

# (label, lower bound inclusive, upper bound exclusive); the top bin includes 1.
ARC_IMG_BINS = [
    (">=0.95", 0.95, None),
    ("0.75-0.95", 0.75, 0.95),
    ("0.5-0.75", 0.5, 0.75),
]


@dataclass_json
@dataclass(frozen=True)
class ArcImgBin:
    """Recall over the craters of one rim-completeness range; `recall` is None for an empty bin."""

    label: str
    matched: int
    total: int
    recall: Optional[float]


def _in_bin(value: float, lo: float, hi: Optional[float]) -> bool:
    return value >= lo and (hi is None or value < hi)


def arcimg_binned_recall(report: MatchReport, catalog: Sequence[CatalogEntry]) -> list[ArcImgBin]:
    """Recall per rim-completeness bin. Craters without arc_img or below 0.5 are ignored."""
    matched_ids = report.matched_ids
    result = []
    for label, lo, hi in ARC_IMG_BINS:
        members = [e for e in catalog if e.arc_img is not None and _in_bin(e.arc_img, lo, hi)]
        matched = sum(1 for e in members if e.id in matched_ids)
        recall = 100.0 * matched / len(members) if members else None
        result.append(ArcImgBin(label, matched, len(members), recall))
    return result
