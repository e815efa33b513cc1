from typing import Sequence

from craterlens.utils import ArgumentError
from .boxes import DetectionPx

__all__ = ["remove_boundary", "filter_score"]


def remove_boundary(dets: Sequence[DetectionPx], m: float, patch_w: float, patch_h: float) -> list[DetectionPx]:
    """Drops partial craters: keeps boxes inside the patch shrunk by `m` pixels on every side (edges inclusive)."""
    if m < 0:
        raise ArgumentError(f"Boundary margin must be non-negative, got {m}")
    if m == 0:
        return list(dets)
    return [
        d for d in dets if d.x_min >= m and d.y_min >= m and d.x_max <= patch_w - m and d.y_max <= patch_h - m
    ]


def filter_score(dets: Sequence[DetectionPx], s: float) -> list[DetectionPx]:
    """Keeps detections with ``score >= s``."""
    if not 0.0 <= s <= 1.0:
        raise ArgumentError(f"Score threshold must lie in [0, 1], got {s}")
    return [d for d in dets if d.score >= s]
