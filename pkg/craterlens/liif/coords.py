import numpy as np

from craterlens.utils import ArgumentError, FloatArray

__all__ = ["pixel_center_coords", "coord_grid", "cell_sizes"]


def pixel_center_coords(n: int) -> FloatArray:
    """Normalized centers of `n` cells covering [-1, 1]: ``-1 + (2i + 1) / n``."""
    if n < 1:
        raise ArgumentError(f"Number of cells must be positive, got {n}")
    return -1.0 + (2.0 * np.arange(n) + 1.0) / n


def coord_grid(height: int, width: int) -> FloatArray:
    """Pixel centers of a `height` x `width` grid as (row, col) pairs, row-major, shape (height * width, 2)."""
    rows = pixel_center_coords(height)
    cols = pixel_center_coords(width)
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    return np.stack([rr.reshape(-1), cc.reshape(-1)], axis=1)


def cell_sizes(count: int, height: int, width: int) -> FloatArray:
    """The cell ``(2 / height, 2 / width)`` repeated for `count` queries."""
    if height < 1 or width < 1:
        raise ArgumentError(f"Output size must be positive, got {height}x{width}")
    return np.tile(np.array([2.0 / height, 2.0 / width]), (count, 1))
