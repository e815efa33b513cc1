import csv
import io
import itertools
import os
from dataclasses import dataclass, field
from typing import Sequence

from dataclasses_json import dataclass_json

from craterlens.detect.boxes import PatchDetections
from craterlens.detect.georef import GeoRef
from craterlens.detect.merge import GeoDetectionSet, merge_patches
from craterlens.detect.pipeline import filter_patches, patches_to_geo
from craterlens.utils import ArgumentError, atomic_write_text
from craterlens.utils.logging import get_logger
from .catalog import CatalogEntry
from .matching import match

__all__ = [
    "DEFAULT_M_GRID",
    "DEFAULT_S_GRID",
    "DEFAULT_TAU_GRID",
    "GRID_CSV_HEADER",
    "GridSearchRow",
    "GridSearchResult",
    "grid_search",
    "write_grid_csv",
]

logger = get_logger(__name__)

DEFAULT_M_GRID = [0.0, 5.0, 10.0, 15.0]
DEFAULT_S_GRID = [0.0, 0.6, 0.7, 0.8, 0.9]
DEFAULT_TAU_GRID = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]

GRID_CSV_HEADER = ["m", "s", "tau", "precision", "recall", "f1"]


@dataclass_json
@dataclass(frozen=True)
class GridSearchRow:
    m: float
    s: float
    tau: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int

    def rank_key(self) -> tuple[float, float, float, float, float]:
        """Larger is better: F1, then precision, then smaller tau, s and m."""
        return (self.f1, self.precision, -self.tau, -self.s, -self.m)


@dataclass_json
@dataclass
class GridSearchResult:
    best: GridSearchRow
    rows: list[GridSearchRow] = field(default_factory=list)


def grid_search(
    patches: Sequence[PatchDetections],
    georef: GeoRef,
    catalog: Sequence[CatalogEntry],
    patch_w: int,
    patch_h: int,
    m_grid: Sequence[float] = DEFAULT_M_GRID,
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    tau_grid: Sequence[float] = DEFAULT_TAU_GRID,
    iou_min: float = 0.5,
) -> GridSearchResult:
    """Evaluates every (m, s, tau) combination of the post-processing pipeline.

    Rows are ordered m-major, then s, then tau. The boundary, score and
    geographic stages depend only on (m, s) and are computed once per pair.
    """
    if not (m_grid and s_grid and tau_grid):
        raise ArgumentError("Grid search needs nonempty m, s and tau grids")

    rows: list[GridSearchRow] = []
    for m, s in itertools.product(m_grid, s_grid):
        geo_sets: list[GeoDetectionSet] = patches_to_geo(filter_patches(patches, m, s, patch_w, patch_h), georef)
        for tau in tau_grid:
            merged = merge_patches(geo_sets, tau, georef)
            report = match(merged.detections, catalog, iou_min, georef)
            met = report.metrics()
            rows.append(
                GridSearchRow(
                    m, s, tau, met.precision, met.recall, met.f1, report.tp_count, len(report.fp), len(report.fn)
                )
            )

    best = max(rows, key=GridSearchRow.rank_key)
    logger.info("best m=%s s=%s tau=%s: F1 %.2f", best.m, best.s, best.tau, best.f1)
    return GridSearchResult(best=best, rows=rows)


def write_grid_csv(result: GridSearchResult, path: str | os.PathLike, provenance: str = ""):
    buf = io.StringIO()
    buf.write(provenance)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(GRID_CSV_HEADER)
    for r in result.rows:
        writer.writerow([r.m, r.s, r.tau, f"{r.precision:.4f}", f"{r.recall:.4f}", f"{r.f1:.4f}"])
    atomic_write_text(path, buf.getvalue())
