from dataclasses import dataclass
from typing import Sequence

from dataclasses_json import dataclass_json

from craterlens.utils import ArgumentError
from craterlens.utils.logging import get_logger
from .boxes import PatchDetections
from .filters import filter_score, remove_boundary
from .georef import GeoRef, px_to_geo
from .merge import GeoDetectionSet, merge_patches

__all__ = ["PostprocParams", "filter_patches", "patches_to_geo", "postprocess"]

logger = get_logger(__name__)


@dataclass_json
@dataclass(frozen=True)
class PostprocParams:
    """Post-processing parameters.

    Attributes
    ----------
    m: float
        Boundary margin, pixels.
    s: float
        Score threshold.
    tau: float
        NMS IoU threshold; 1 disables suppression.
    """

    m: float = 5.0
    s: float = 0.7
    tau: float = 0.5

    def __post_init__(self):
        if self.m < 0:
            raise ArgumentError(f"m must be non-negative, got {self.m}")
        if not 0.0 <= self.s <= 1.0:
            raise ArgumentError(f"s must lie in [0, 1], got {self.s}")
        if not 0.0 < self.tau <= 1.0:
            raise ArgumentError(f"tau must lie in (0, 1], got {self.tau}")


def filter_patches(
    patches: Sequence[PatchDetections], m: float, s: float, patch_w: int, patch_h: int
) -> list[PatchDetections]:
    """Boundary removal then score filtering, per patch."""
    return [
        PatchDetections(
            p.patch_id, p.offset_x, p.offset_y, filter_score(remove_boundary(p.detections, m, patch_w, patch_h), s)
        )
        for p in patches
    ]


def patches_to_geo(patches: Sequence[PatchDetections], georef: GeoRef) -> list[GeoDetectionSet]:
    return [
        GeoDetectionSet(georef, [px_to_geo(d, p.offset_x, p.offset_y, georef) for d in p.detections])
        for p in patches
    ]


def postprocess(
    patches: Sequence[PatchDetections], georef: GeoRef, params: PostprocParams, patch_w: int, patch_h: int
) -> GeoDetectionSet:
    """Full post-processing of one model's raw detections: boundary, score, geo conversion, merge."""
    filtered = filter_patches(patches, params.m, params.s, patch_w, patch_h)
    logger.debug(
        "m=%s s=%s: %d of %d detections kept",
        params.m,
        params.s,
        sum(len(p.detections) for p in filtered),
        sum(len(p.detections) for p in patches),
    )
    return merge_patches(patches_to_geo(filtered, georef), params.tau, georef)
