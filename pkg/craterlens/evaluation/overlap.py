from dataclasses import dataclass
from typing import Sequence

import numpy as np
from dataclasses_json import dataclass_json
from scipy.spatial import cKDTree

from craterlens.detect.georef import MOON_RADIUS_M, GeoRef, meters_per_degree
from craterlens.utils import ArgumentError
from .catalog import CatalogEntry
from .matching import MatchReport

__all__ = ["CraterCircle", "SubsetRecall", "circles_overlap", "catalog_circles", "overlapping_subset", "subset_recall"]


@dataclass(frozen=True)
class CraterCircle:
    x: float
    y: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ArgumentError(f"Radius must be positive, got {self.r}")


def circles_overlap(a: CraterCircle, b: CraterCircle) -> bool:
    """True iff the rims cross at two points: ``(ra - rb)^2 < d^2 < (ra + rb)^2``."""
    d2 = (a.x - b.x) ** 2 + (a.y - b.y) ** 2
    return (a.r - b.r) ** 2 < d2 < (a.r + b.r) ** 2


def catalog_circles(catalog: Sequence[CatalogEntry], body_radius_m: float = MOON_RADIUS_M) -> list[CraterCircle]:
    """Craters as circles in a planar frame, meters (degrees scaled by meters per degree)."""
    mpd = meters_per_degree(GeoRef(body_radius_m=body_radius_m))
    return [CraterCircle(e.lon * mpd, e.lat * mpd, e.diameter * 500.0) for e in catalog]


def overlapping_subset(catalog: Sequence[CatalogEntry], body_radius_m: float = MOON_RADIUS_M) -> list[CatalogEntry]:
    """Craters whose rim crosses the rim of at least one other crater of the catalog, in catalog order."""
    if len(catalog) < 2:
        return []
    circles = catalog_circles(catalog, body_radius_m)
    points = np.array([(c.x, c.y) for c in circles])
    r_max = max(c.r for c in circles)
    flagged = np.zeros(len(catalog), dtype=bool)
    for i, j in cKDTree(points).query_pairs(2.0 * r_max):
        if circles_overlap(circles[i], circles[j]):
            flagged[i] = flagged[j] = True
    return [e for e, f in zip(catalog, flagged) if f]


@dataclass_json
@dataclass(frozen=True)
class SubsetRecall:
    matched: int
    total: int
    recall: float


def subset_recall(report: MatchReport, subset: Sequence[CatalogEntry]) -> SubsetRecall:
    """Recall restricted to the craters in `subset`."""
    matched_ids = report.matched_ids
    matched = sum(1 for e in subset if e.id in matched_ids)
    total = len(subset)
    return SubsetRecall(matched, total, 100.0 * matched / total if total else 0.0)
