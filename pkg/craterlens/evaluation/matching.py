from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from craterlens.detect.boxes import iou_matrix
from craterlens.detect.georef import DetectionGeo, GeoRef, meters_per_degree, square_boxes_deg
from craterlens.utils import ArgumentError
from .catalog import CatalogEntry
from .metrics import Metrics, metrics

__all__ = ["MatchPair", "MatchReport", "match"]


@dataclass(frozen=True)
class MatchPair:
    """A true positive: a detection and the catalog crater it was assigned to."""

    detection: DetectionGeo
    catalog_id: str
    iou: float
    gt_diameter: float


@dataclass
class MatchReport:
    """Outcome of matching detections against a catalog.

    Attributes
    ----------
    tp_pairs: list[MatchPair]
        One pair per matched crater.
    fp: list[DetectionGeo]
        Detections without a crater.
    fn: list[str]
        Ids of unmatched craters, in catalog order.
    """

    tp_pairs: list[MatchPair] = field(default_factory=list)
    fp: list[DetectionGeo] = field(default_factory=list)
    fn: list[str] = field(default_factory=list)

    @property
    def tp_count(self) -> int:
        return len(self.tp_pairs)

    @property
    def matched_ids(self) -> set[str]:
        return {p.catalog_id for p in self.tp_pairs}

    def metrics(self) -> Metrics:
        return metrics(len(self.tp_pairs), len(self.fp), len(self.fn))


def match(
    dets: Sequence[DetectionGeo],
    gt: Sequence[CatalogEntry],
    iou_min: float = 0.5,
    georef: Optional[GeoRef] = None,
) -> MatchReport:
    """One-to-one greedy matching of detections to catalog craters.

    Both sides become squares of side = diameter centered on (lon, lat), in
    degrees. Detections are visited by descending score (input order on
    ties); each takes the unmatched crater with the highest IoU if that IoU
    is at least `iou_min`.
    """
    if not 0.0 < iou_min <= 1.0:
        raise ArgumentError(f"iou_min must lie in (0, 1], got {iou_min}")
    mpd = meters_per_degree(georef or GeoRef())
    report = MatchReport()
    if not gt:
        report.fp = list(dets)
        return report

    gt_boxes = square_boxes_deg([e.lon for e in gt], [e.lat for e in gt], [e.diameter for e in gt], mpd)
    gt_half = (gt_boxes[:, 2] - gt_boxes[:, 0]) / 2.0
    tree = cKDTree((gt_boxes[:, :2] + gt_boxes[:, 2:]) / 2.0)
    max_half = float(gt_half.max())
    matched = np.zeros(len(gt), dtype=bool)

    order = np.argsort(-np.array([d.score for d in dets]), kind="stable")
    for i in order:
        det = dets[i]
        box = square_boxes_deg([det.lon], [det.lat], [det.diameter], mpd)
        half = (box[0, 2] - box[0, 0]) / 2.0
        # Squares can only intersect if their centers are closer than the half-sides in max-norm.
        candidates = [j for j in tree.query_ball_point([det.lon, det.lat], half + max_half, p=np.inf) if not matched[j]]
        if candidates:
            candidates.sort()
            ious = iou_matrix(box, gt_boxes[candidates])[0]
            k = int(np.argmax(ious))
            if ious[k] >= iou_min:
                j = candidates[k]
                matched[j] = True
                report.tp_pairs.append(MatchPair(det, gt[j].id, float(ious[k]), gt[j].diameter))
                continue
        report.fp.append(det)

    report.fn = [e.id for e, m in zip(gt, matched) if not m]
    return report
