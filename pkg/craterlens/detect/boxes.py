from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from craterlens.utils import ArgumentError, FloatArray

__all__ = ["DetectionPx", "PatchDetections", "iou", "iou_matrix", "boxes_array", "scores_array"]


@dataclass(frozen=True)
class DetectionPx:
    """Axis-aligned detection box in the pixel frame of its patch.

    Attributes
    ----------
    x_min, y_min, x_max, y_max: float
        Box corners, pixels.
    score: float
        Detector confidence in [0, 1].
    patch_id: int
        Patch the box was detected in.
    """

    x_min: float
    y_min: float
    x_max: float
    y_max: float
    score: float
    patch_id: int = 0

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ArgumentError(f"Degenerate box ({self.x_min}, {self.y_min}, {self.x_max}, {self.y_max})")
        if not 0.0 <= self.score <= 1.0:
            raise ArgumentError(f"Score {self.score} outside [0, 1]")

    @property
    def box(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min


@dataclass
class PatchDetections:
    """Raw detections of one patch together with the patch's position in the mosaic."""

    patch_id: int
    offset_x: int
    offset_y: int
    detections: list[DetectionPx] = field(default_factory=list)


def boxes_array(dets: Sequence[DetectionPx]) -> FloatArray:
    return np.array([d.box for d in dets], dtype=np.float64).reshape(-1, 4)


def scores_array(dets: Sequence[DetectionPx]) -> FloatArray:
    return np.array([d.score for d in dets], dtype=np.float64)


def _check_boxes(boxes: FloatArray):
    if boxes.ndim != 2 or boxes.shape[1] != 4:
        raise ArgumentError(f"Boxes must have shape (N, 4), got {boxes.shape}")
    if np.any(boxes[:, 2] <= boxes[:, 0]) or np.any(boxes[:, 3] <= boxes[:, 1]):
        raise ArgumentError("Degenerate box")


def iou_matrix(a: FloatArray, b: FloatArray) -> FloatArray:
    """Pairwise intersection over union of (x_min, y_min, x_max, y_max) boxes, shape (len(a), len(b))."""
    a = np.asarray(a, dtype=np.float64).reshape(-1, 4)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 4)
    _check_boxes(a)
    _check_boxes(b)
    iw = np.minimum(a[:, None, 2], b[None, :, 2]) - np.maximum(a[:, None, 0], b[None, :, 0])
    ih = np.minimum(a[:, None, 3], b[None, :, 3]) - np.maximum(a[:, None, 1], b[None, :, 1])
    inter = np.clip(iw, 0.0, None) * np.clip(ih, 0.0, None)
    area_a = (a[:, 2] - a[:, 0]) * (a[:, 3] - a[:, 1])
    area_b = (b[:, 2] - b[:, 0]) * (b[:, 3] - b[:, 1])
    return inter / (area_a[:, None] + area_b[None, :] - inter)


def iou(a: Sequence[float], b: Sequence[float]) -> float:
    return float(iou_matrix(np.asarray(a), np.asarray(b))[0, 0])
