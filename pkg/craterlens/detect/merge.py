from dataclasses import dataclass, field
from typing import Optional, Sequence

from craterlens.utils import ArgumentError
from craterlens.utils.logging import get_logger
from .georef import DetectionGeo, GeoRef, geo_boxes_px
from .nms import nms_indices

__all__ = ["GeoDetectionSet", "geo_nms", "merge_patches", "combine_models"]

logger = get_logger(__name__)


@dataclass
class GeoDetectionSet:
    """Geographic detections that share one georeference."""

    georef: GeoRef
    detections: list[DetectionGeo] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.detections)


def geo_nms(dets: Sequence[DetectionGeo], georef: GeoRef, tau: float) -> list[DetectionGeo]:
    """NMS on square boxes rebuilt from (lon, lat, diameter) in the mosaic's pixel frame."""
    if not dets:
        return []
    scores = [d.score for d in dets]
    return [dets[i] for i in nms_indices(geo_boxes_px(dets, georef), scores, tau)]


def _shared_georef(sets: Sequence[GeoDetectionSet], georef: Optional[GeoRef]) -> GeoRef:
    refs = {s.georef for s in sets}
    if georef is not None:
        refs.add(georef)
    if len(refs) > 1:
        raise ArgumentError(f"Detection sets use {len(refs)} different georeferences")
    if not refs:
        raise ArgumentError("No detection sets and no georeference given")
    return refs.pop()


def merge_patches(
    per_patch: Sequence[GeoDetectionSet], tau: float, georef: Optional[GeoRef] = None
) -> GeoDetectionSet:
    """Concatenates the detections of all patches and removes duplicates from overlapping patches with NMS."""
    ref = _shared_georef(per_patch, georef)
    pooled = [d for s in per_patch for d in s.detections]
    merged = geo_nms(pooled, ref, tau)
    logger.debug("merged %d patch detections into %d", len(pooled), len(merged))
    return GeoDetectionSet(ref, merged)


def combine_models(sets: Sequence[GeoDetectionSet], tau_combine: float = 0.5) -> GeoDetectionSet:
    """Union of the detections of several models followed by cross-model NMS."""
    if not sets:
        raise ArgumentError("combine_models needs at least one detection set")
    ref = _shared_georef(sets, None)
    pooled = [d for s in sets for d in s.detections]
    return GeoDetectionSet(ref, geo_nms(pooled, ref, tau_combine))
