from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from dataclasses_json import dataclass_json
from scipy.spatial import cKDTree

from craterlens.detect.boxes import DetectionPx, PatchDetections
from craterlens.detect.georef import GeoRef, meters_per_degree
from craterlens.raster.image import PatchFootprint
from craterlens.utils import ArgumentError, FloatArray
from craterlens.utils.logging import get_logger
from .catalog import CatalogEntry

__all__ = ["ScoreLaw", "SynthNoise", "synth_catalog", "synth_detections"]

logger = get_logger(__name__)


@dataclass_json
@dataclass(frozen=True)
class ScoreLaw:
    """Uniform score ranges of true and false positives."""

    tp: tuple[float, float] = (0.9, 1.0)
    fp: tuple[float, float] = (0.3, 0.8)

    def __post_init__(self):
        for lo, hi in (self.tp, self.fp):
            if not 0.0 <= lo <= hi <= 1.0:
                raise ArgumentError(f"Invalid score range ({lo}, {hi})")


@dataclass_json
@dataclass(frozen=True)
class SynthNoise:
    """Imperfections of the simulated detector.

    Attributes
    ----------
    center_jitter_px: float
        Standard deviation of the box center error, pixels.
    diameter_jitter: float
        Standard deviation of the relative diameter error.
    dropout: float
        Probability of missing a crater.
    false_positives: int
        Number of boxes placed away from every crater.
    fp_diameter_px: tuple[float, float]
        Size range of false positive boxes.
    scores: ScoreLaw
        Score distributions.
    """

    center_jitter_px: float = 0.0
    diameter_jitter: float = 0.0
    dropout: float = 0.0
    false_positives: int = 0
    fp_diameter_px: tuple[float, float] = (10.0, 30.0)
    scores: ScoreLaw = field(default_factory=ScoreLaw)

    def __post_init__(self):
        if min(self.center_jitter_px, self.diameter_jitter, self.false_positives) < 0:
            raise ArgumentError("Noise parameters must be non-negative")
        if not 0.0 <= self.dropout <= 1.0:
            raise ArgumentError(f"Dropout must lie in [0, 1], got {self.dropout}")
        if not 0 < self.fp_diameter_px[0] <= self.fp_diameter_px[1]:
            raise ArgumentError(f"Invalid false positive size range {self.fp_diameter_px}")


def _deg_per_px(georef: GeoRef) -> float:
    return georef.meters_per_pixel / meters_per_degree(georef)


def synth_catalog(
    n: int,
    georef: GeoRef,
    width_px: int,
    height_px: int,
    rng: np.random.Generator,
    band: tuple[float, float] = (5.0, 10.0),
    border_px: float = 0.0,
    min_gap_px: float = 2.0,
    arc_img: bool = True,
    allow_overlap: bool = False,
    max_attempts: Optional[int] = None,
) -> list[CatalogEntry]:
    """Random craters inside a `width_px` x `height_px` mosaic.

    Diameters are uniform in `band` (km). Unless `allow_overlap` is set,
    the square boxes of any two craters stay at least `min_gap_px` apart.
    Fewer than `n` craters are returned when the mosaic fills up.
    """
    if n < 0 or band[0] <= 0 or band[0] > band[1]:
        raise ArgumentError(f"Invalid catalog request n={n}, band={band}")
    attempts = max_attempts if max_attempts is not None else 100 * max(n, 1)
    deg_per_px = _deg_per_px(georef)

    centers = np.empty((n, 2))
    halves = np.empty(n)
    diameters = np.empty(n)
    placed = 0
    for _ in range(attempts):
        if placed == n:
            break
        d_km = float(rng.uniform(*band))
        half = d_km * 1000.0 / georef.meters_per_pixel / 2.0
        lo_x, hi_x = border_px + half, width_px - border_px - half
        lo_y, hi_y = border_px + half, height_px - border_px - half
        if lo_x > hi_x or lo_y > hi_y:
            raise ArgumentError(f"A {d_km:.2f} km crater does not fit into the {width_px}x{height_px} mosaic")
        c = np.array([rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)])
        if not allow_overlap and placed:
            cheb = np.max(np.abs(centers[:placed] - c), axis=1)
            if np.any(cheb < halves[:placed] + half + min_gap_px):
                continue
        centers[placed], halves[placed], diameters[placed] = c, half, d_km
        placed += 1

    if placed < n:
        logger.warning("placed only %d of %d synthetic craters", placed, n)

    arcs = rng.uniform(0.3, 1.0, size=placed) if arc_img else [None] * placed
    return [
        CatalogEntry(
            id=f"SYN{i:06d}",
            lon=georef.lon_origin + centers[i, 0] * deg_per_px,
            lat=georef.lat_origin - centers[i, 1] * deg_per_px,
            diameter=float(diameters[i]),
            arc_img=None if arcs[i] is None else float(arcs[i]),
        )
        for i in range(placed)
    ]


def _emit(
    box: FloatArray, score: float, footprints: Sequence[PatchFootprint], out: dict[int, PatchDetections]
) -> bool:
    """Adds the global box to every patch containing it, or clipped to the patch holding its center."""
    x0, y0, x1, y1 = box
    emitted = False
    for fp in footprints:
        if fp.offset_x <= x0 and fp.offset_y <= y0 and x1 <= fp.offset_x + fp.width and y1 <= fp.offset_y + fp.height:
            out[fp.patch_id].detections.append(
                DetectionPx(x0 - fp.offset_x, y0 - fp.offset_y, x1 - fp.offset_x, y1 - fp.offset_y, score, fp.patch_id)
            )
            emitted = True
    if emitted:
        return True

    cx, cy = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    for fp in footprints:
        if fp.offset_x <= cx < fp.offset_x + fp.width and fp.offset_y <= cy < fp.offset_y + fp.height:
            out[fp.patch_id].detections.append(
                DetectionPx(
                    max(x0, fp.offset_x) - fp.offset_x,
                    max(y0, fp.offset_y) - fp.offset_y,
                    min(x1, fp.offset_x + fp.width) - fp.offset_x,
                    min(y1, fp.offset_y + fp.height) - fp.offset_y,
                    score,
                    fp.patch_id,
                )
            )
            return True
    return False


def synth_detections(
    catalog: Sequence[CatalogEntry],
    georef: GeoRef,
    footprints: Sequence[PatchFootprint],
    noise: SynthNoise,
    rng: np.random.Generator,
) -> list[PatchDetections]:
    """Simulates a detector run over the patches of a mosaic.

    Every crater that is not dropped becomes a jittered box; false positives
    are placed uniformly where they do not touch any crater box. Returns one
    entry per footprint, in footprint order.
    """
    if not footprints:
        raise ArgumentError("No patches to place detections in")
    out = {fp.patch_id: PatchDetections(fp.patch_id, fp.offset_x, fp.offset_y) for fp in footprints}
    px_per_deg = 1.0 / _deg_per_px(georef)

    gt_centers = np.array(
        [((e.lon - georef.lon_origin) * px_per_deg, (georef.lat_origin - e.lat) * px_per_deg) for e in catalog]
    ).reshape(-1, 2)
    gt_halves = np.array([e.diameter * 1000.0 / georef.meters_per_pixel / 2.0 for e in catalog])

    lost = 0
    for (cx, cy), half in zip(gt_centers, gt_halves):
        if rng.random() < noise.dropout:
            continue
        cx += rng.normal(0.0, noise.center_jitter_px) if noise.center_jitter_px else 0.0
        cy += rng.normal(0.0, noise.center_jitter_px) if noise.center_jitter_px else 0.0
        if noise.diameter_jitter:
            half *= max(0.1, 1.0 + rng.normal(0.0, noise.diameter_jitter))
        box = np.array([cx - half, cy - half, cx + half, cy + half])
        if not _emit(box, float(rng.uniform(*noise.scores.tp)), footprints, out):
            lost += 1

    width = max(fp.offset_x + fp.width for fp in footprints)
    height = max(fp.offset_y + fp.height for fp in footprints)
    tree = cKDTree(gt_centers) if len(catalog) else None
    max_half = float(gt_halves.max()) if len(catalog) else 0.0
    placed = 0
    for _ in range(100 * max(noise.false_positives, 1)):
        if placed == noise.false_positives:
            break
        half = float(rng.uniform(*noise.fp_diameter_px)) / 2.0
        c = np.array([rng.uniform(half, width - half), rng.uniform(half, height - half)])
        if tree is not None:
            near = tree.query_ball_point(c, half + max_half, p=np.inf)
            if any(np.max(np.abs(gt_centers[j] - c)) < half + gt_halves[j] for j in near):
                continue
        box = np.array([c[0] - half, c[1] - half, c[0] + half, c[1] + half])
        if _emit(box, float(rng.uniform(*noise.scores.fp)), footprints, out):
            placed += 1

    if lost:
        logger.warning("%d synthetic craters fall outside every patch", lost)
    if placed < noise.false_positives:
        logger.warning("placed only %d of %d false positives", placed, noise.false_positives)
    return [out[fp.patch_id] for fp in footprints]
