import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from dataclasses_json import dataclass_json

from craterlens.utils import ArgumentError, FloatArray, FormatError, RangeError, atomic_write_text
from .boxes import DetectionPx

__all__ = [
    "MOON_RADIUS_M",
    "GeoRef",
    "DetectionGeo",
    "meters_per_degree",
    "px_to_geo",
    "geo_to_px",
    "geo_boxes_px",
    "square_boxes_deg",
    "load_georef",
    "save_georef",
]

MOON_RADIUS_M = 1_737_400.0


@dataclass_json
@dataclass(frozen=True)
class GeoRef:
    """Placement of an equirectangular mosaic on the body.

    Attributes
    ----------
    lon_origin: float
        Longitude (degrees) of pixel x = 0.
    lat_origin: float
        Latitude (degrees) of pixel y = 0; latitude decreases with y.
    meters_per_pixel: float
        Ground sampling distance.
    body_radius_m: float
        Radius of the body, meters.
    """

    lon_origin: float = -180.0
    lat_origin: float = 60.0
    meters_per_pixel: float = 100.0
    body_radius_m: float = MOON_RADIUS_M

    def __post_init__(self):
        if not self.meters_per_pixel > 0 or not self.body_radius_m > 0:
            raise ArgumentError(
                "meters_per_pixel and body_radius_m must be positive, "
                f"got {self.meters_per_pixel} and {self.body_radius_m}"
            )


@dataclass(frozen=True)
class DetectionGeo:
    """A detected crater on the body.

    Attributes
    ----------
    lon: float
        Degrees, in [-180, 180).
    lat: float
        Degrees, in [-90, 90].
    diameter: float
        Kilometers.
    score: float
        Confidence in [0, 1].
    """

    lon: float
    lat: float
    diameter: float
    score: float

    def __post_init__(self):
        if not -180.0 <= self.lon < 180.0:
            raise RangeError(f"Longitude {self.lon} outside [-180, 180)")
        if not -90.0 <= self.lat <= 90.0:
            raise RangeError(f"Latitude {self.lat} outside [-90, 90]")
        if not self.diameter > 0:
            raise ArgumentError(f"Diameter must be positive, got {self.diameter}")
        if not 0.0 <= self.score <= 1.0:
            raise ArgumentError(f"Score {self.score} outside [0, 1]")


def meters_per_degree(georef: GeoRef) -> float:
    """Length of one degree of arc on the body: ``2 pi R / 360``."""
    return 2.0 * math.pi * georef.body_radius_m / 360.0


def px_to_geo(det: DetectionPx, offset_x: float, offset_y: float, georef: GeoRef) -> DetectionGeo:
    """Converts a patch-frame box to a geographic crater.

    The global pixel center is the patch offset plus the box center; the
    diameter is the mean of the box sides.
    """
    deg_per_px = georef.meters_per_pixel / meters_per_degree(georef)
    cx = offset_x + (det.x_min + det.x_max) / 2.0
    cy = offset_y + (det.y_min + det.y_max) / 2.0
    return DetectionGeo(
        lon=georef.lon_origin + cx * deg_per_px,
        lat=georef.lat_origin - cy * deg_per_px,
        diameter=(det.width + det.height) / 2.0 * georef.meters_per_pixel / 1000.0,
        score=det.score,
    )


def geo_to_px(det: DetectionGeo, georef: GeoRef) -> tuple[float, float, float]:
    """Global pixel center (cx, cy) and pixel diameter of a geographic crater."""
    px_per_deg = meters_per_degree(georef) / georef.meters_per_pixel
    cx = (det.lon - georef.lon_origin) * px_per_deg
    cy = (georef.lat_origin - det.lat) * px_per_deg
    return cx, cy, det.diameter * 1000.0 / georef.meters_per_pixel


def geo_boxes_px(dets: Sequence[DetectionGeo], georef: GeoRef) -> FloatArray:
    """Square boxes of side = diameter around each crater center, in global pixels."""
    centers = np.array([geo_to_px(d, georef) for d in dets], dtype=np.float64).reshape(-1, 3)
    half = centers[:, 2] / 2.0
    return np.stack([centers[:, 0] - half, centers[:, 1] - half, centers[:, 0] + half, centers[:, 1] + half], axis=1)


def square_boxes_deg(lon: FloatArray, lat: FloatArray, diameter_km: FloatArray, mpd: float) -> FloatArray:
    """Square (lon, lat) boxes with a side equal to the diameter converted to degrees."""
    half = np.asarray(diameter_km, dtype=np.float64) * 1000.0 / mpd / 2.0
    lon = np.asarray(lon, dtype=np.float64)
    lat = np.asarray(lat, dtype=np.float64)
    return np.stack([lon - half, lat - half, lon + half, lat + half], axis=1).reshape(-1, 4)


def load_georef(path: str | os.PathLike) -> GeoRef:
    try:
        data = json.loads(Path(path).read_text())
        data.pop("provenance", None)
        unknown = set(data) - {"lon_origin", "lat_origin", "meters_per_pixel", "body_radius_m"}
        if unknown:
            raise FormatError(f"unknown keys {sorted(unknown)}", path=str(path))
        return GeoRef.from_dict(data)  # type: ignore
    except (json.JSONDecodeError, AttributeError, TypeError) as e:
        raise FormatError(f"invalid georeference: {e}", path=str(path)) from e


def save_georef(georef: GeoRef, path: str | os.PathLike, provenance: dict | None = None):
    data = georef.to_dict()  # type: ignore
    if provenance is not None:
        data["provenance"] = provenance
    atomic_write_text(path, json.dumps(data, indent=4, sort_keys=True) + "\n")
