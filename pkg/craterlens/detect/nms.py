from typing import Sequence

import numpy as np

from craterlens.utils import ArgumentError, FloatArray, IntArray
from .boxes import DetectionPx, boxes_array, iou_matrix, scores_array

__all__ = ["nms_indices", "nms", "selection_order"]


def selection_order(boxes: FloatArray, scores: FloatArray) -> IntArray:
    """Indices sorted by score descending, then x_min and y_min ascending."""
    return np.lexsort((boxes[:, 1], boxes[:, 0], -scores))


def nms_indices(boxes: FloatArray, scores: FloatArray, tau: float) -> IntArray:
    """Greedy non-maximum suppression.

    Repeatedly keeps the best remaining box and discards every other box
    whose IoU with it exceeds `tau`. Returns kept indices in selection
    order. With ``tau = 1`` nothing is suppressed.
    """
    if not 0.0 < tau <= 1.0:
        raise ArgumentError(f"NMS threshold must lie in (0, 1], got {tau}")
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    scores = np.asarray(scores, dtype=np.float64)
    if boxes.shape[0] != scores.shape[0]:
        raise ArgumentError(f"{boxes.shape[0]} boxes but {scores.shape[0]} scores")
    if boxes.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)

    order = selection_order(boxes, scores)
    kept: list[int] = []
    while order.size:
        best = order[0]
        kept.append(int(best))
        rest = order[1:]
        if rest.size == 0:
            break
        overlaps = iou_matrix(boxes[best], boxes[rest])[0]
        order = rest[overlaps <= tau]
    return np.array(kept, dtype=np.int64)


def nms(dets: Sequence[DetectionPx], tau: float) -> list[DetectionPx]:
    """Non-maximum suppression of pixel detections; kept detections are returned in selection order."""
    return [dets[i] for i in nms_indices(boxes_array(dets), scores_array(dets), tau)]
