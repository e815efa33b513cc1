from typing import Sequence

import numpy as np

from craterlens.detect.boxes import DetectionPx
from craterlens.detect.georef import DetectionGeo, GeoRef, meters_per_degree
from craterlens.evaluation.catalog import CatalogEntry
from craterlens.liif.model import LiifModel, init_model
from craterlens.raster.image import ImageGrid

__all__ = ["random_image", "tiny_model", "square_det", "crater_at_px", "geo_det_at_px", "brute_force_iou"]


def random_image(rng: np.random.Generator, height: int, width: int) -> ImageGrid:
    return ImageGrid(rng.uniform(0.0, 1.0, size=(height, width)))


def tiny_model(rng: np.random.Generator, depth: int = 2, n_blocks: int = 1, hidden: int = 8) -> LiifModel:
    return init_model(depth, n_blocks, hidden, rng, n_hidden=2)


def square_det(cx: float, cy: float, side: float, score: float = 0.9, patch_id: int = 0) -> DetectionPx:
    half = side / 2.0
    return DetectionPx(cx - half, cy - half, cx + half, cy + half, score, patch_id)


def _px_to_lonlat(cx: float, cy: float, georef: GeoRef) -> tuple[float, float]:
    deg_per_px = georef.meters_per_pixel / meters_per_degree(georef)
    return georef.lon_origin + cx * deg_per_px, georef.lat_origin - cy * deg_per_px


def crater_at_px(id: str, cx: float, cy: float, d_px: float, georef: GeoRef, arc_img=None) -> CatalogEntry:
    """Catalog crater centered on global pixel (cx, cy) with a diameter of `d_px` pixels."""
    lon, lat = _px_to_lonlat(cx, cy, georef)
    return CatalogEntry(id, lon, lat, d_px * georef.meters_per_pixel / 1000.0, arc_img)


def geo_det_at_px(cx: float, cy: float, d_px: float, georef: GeoRef, score: float = 0.9) -> DetectionGeo:
    lon, lat = _px_to_lonlat(cx, cy, georef)
    return DetectionGeo(lon, lat, d_px * georef.meters_per_pixel / 1000.0, score)


def brute_force_iou(a: Sequence[float], b: Sequence[float]) -> float:
    iw = max(0.0, min(a[2], b[2]) - max(a[0], b[0]))
    ih = max(0.0, min(a[3], b[3]) - max(a[1], b[1]))
    inter = iw * ih
    union = (a[2] - a[0]) * (a[3] - a[1]) + (b[2] - b[0]) * (b[3] - b[1]) - inter
    return inter / union
