from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from craterlens.utils import ArgumentError, FloatArray, IntArray
from .coords import pixel_center_coords

__all__ = [
    "Corner",
    "FeatureMapLatent",
    "LatentSample",
    "latent_indices",
    "nearest_latent",
    "ensemble_weights",
]


class Corner(IntEnum):
    """Position of a latent relative to the query: first digit row (0 = above), second column (0 = left)."""

    C00 = 0
    C01 = 1
    C10 = 2
    C11 = 3

    @property
    def diagonal(self) -> "Corner":
        return Corner(3 - self.value)


@dataclass(frozen=True, eq=False)
class FeatureMapLatent:
    """Unfolded feature map together with its latent grid.

    Attributes
    ----------
    data: FloatArray
        Shape (9D, H, W).
    """

    data: FloatArray

    def __post_init__(self):
        if self.data.ndim != 3 or self.data.shape[0] % 9 != 0:
            raise ArgumentError(f"Unfolded feature map must have shape (9D, H, W), got {self.data.shape}")

    @property
    def base_depth(self) -> int:
        return self.data.shape[0] // 9

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def row_coords(self) -> FloatArray:
        return pixel_center_coords(self.height)

    @property
    def col_coords(self) -> FloatArray:
        return pixel_center_coords(self.width)


@dataclass(frozen=True, eq=False)
class LatentSample:
    """Latent codes selected for a batch of queries.

    Attributes
    ----------
    z: FloatArray
        Shape (Q, 9D).
    p: FloatArray
        Cell centers of the selected latents as (row, col), shape (Q, 2).
    rows, cols: IntArray
        Grid indices of the selected latents.
    """

    z: FloatArray
    p: FloatArray
    rows: IntArray
    cols: IntArray


def _axis_indices(coords: FloatArray, n: int, upper: bool) -> IntArray:
    # Continuous index u has grid centers at integers.
    u = ((coords + 1.0) * n - 1.0) / 2.0
    idx = np.floor(u).astype(np.int64) + (1 if upper else 0)
    return np.clip(idx, 0, n - 1)


def latent_indices(queries: FloatArray, height: int, width: int, corner: Corner) -> tuple[IntArray, IntArray]:
    """Grid indices of the latent on the requested side of each (row, col) query, clamped to the grid."""
    corner = Corner(corner)
    rows = _axis_indices(queries[:, 0], height, upper=corner in (Corner.C10, Corner.C11))
    cols = _axis_indices(queries[:, 1], width, upper=corner in (Corner.C01, Corner.C11))
    return rows, cols


def nearest_latent(fm: FeatureMapLatent, queries: FloatArray, corner: Corner) -> LatentSample:
    """Selects, for each query, the nearest latent on the side given by `corner`.

    `queries` is a (Q, 2) array of (row, col) coordinates in [-1, 1].
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    if queries.shape[1] != 2:
        raise ArgumentError(f"Queries must be (row, col) pairs, got shape {queries.shape}")
    rows, cols = latent_indices(queries, fm.height, fm.width, corner)
    p = np.stack([fm.row_coords[rows], fm.col_coords[cols]], axis=1)
    return LatentSample(z=fm.data[:, rows, cols].T, p=p, rows=rows, cols=cols)


def _axis_weights(q: FloatArray, lower: FloatArray, upper: FloatArray) -> tuple[FloatArray, FloatArray]:
    # Linear weights of the lower and upper latent along one axis. A query on
    # a center with both latents coinciding gives the lower one everything.
    d_lower = np.abs(q - lower)
    d_upper = np.abs(q - upper)
    total = d_lower + d_upper
    on_center = total == 0
    w_lower = np.where(on_center, 1.0, d_upper / np.where(on_center, 1.0, total))
    return w_lower, 1.0 - w_lower


def ensemble_weights(queries: FloatArray, centers: FloatArray) -> FloatArray:
    """Area weights of the four corner latents.

    Parameters
    ----------
    queries: FloatArray
        Shape (Q, 2).
    centers: FloatArray
        Latent centers indexed by `Corner`, shape (4, Q, 2). Corners sharing
        a row digit share the row center, likewise for columns.

    Returns
    -------
    FloatArray
        Shape (Q, 4). The weight of a corner is the area of the rectangle
        spanned by the query and the diagonally opposite latent, normalized
        over the four corners. This factors into per-axis linear weights,
        which are used directly so that a query on a latent center gets
        that latent alone, also where the grid edge clamps both neighbours
        onto it.
    """
    queries = np.atleast_2d(queries)
    row_lo, row_hi = _axis_weights(queries[:, 0], centers[Corner.C00, :, 0], centers[Corner.C10, :, 0])
    col_lo, col_hi = _axis_weights(queries[:, 1], centers[Corner.C00, :, 1], centers[Corner.C01, :, 1])
    return np.stack([row_lo * col_lo, row_lo * col_hi, row_hi * col_lo, row_hi * col_hi], axis=1)
