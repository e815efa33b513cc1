import numpy as np

from craterlens.utils import ArgumentError, FloatArray
from .image import ImageGrid

__all__ = ["KEYS_A", "cubic_weight", "resize_matrix", "bicubic_resize"]

KEYS_A = -0.5


def cubic_weight(x: FloatArray | float, a: float = KEYS_A) -> FloatArray:
    """Keys cubic convolution kernel.

    With a = -0.5 this is the Catmull-Rom spline: W(0) = 1, W(±1) = W(±2) = 0,
    and the weights of the four taps around any position sum to one.
    """
    x = np.abs(np.asarray(x, dtype=np.float64))
    x2 = x * x
    x3 = x2 * x
    near = (a + 2) * x3 - (a + 3) * x2 + 1
    far = a * x3 - 5 * a * x2 + 8 * a * x - 4 * a
    return np.where(x <= 1.0, near, np.where(x < 2.0, far, 0.0))


def resize_matrix(in_size: int, out_size: int, a: float = KEYS_A) -> FloatArray:
    """Builds the (out_size, in_size) matrix of 1-D bicubic resampling.

    Output sample `d` is taken at source position (d + 0.5) * in/out - 0.5.
    Taps falling outside the source are clamped to the nearest edge sample,
    so their weights accumulate there.
    """
    src = (np.arange(out_size, dtype=np.float64) + 0.5) * (in_size / out_size) - 0.5
    base = np.floor(src).astype(np.int64)
    frac = src - base

    matrix = np.zeros((out_size, in_size), dtype=np.float64)
    rows = np.arange(out_size)
    for k in range(-1, 3):
        idx = np.clip(base + k, 0, in_size - 1)
        np.add.at(matrix, (rows, idx), cubic_weight(frac - k, a))
    return matrix


def bicubic_resize(img: ImageGrid, out_h: int, out_w: int) -> ImageGrid:
    """Resamples an image with separable Keys cubic convolution (a = -0.5).

    Uses the half-pixel center convention and edge clamping; the result is
    clipped to [0, 1].
    """
    if out_h < 1 or out_w < 1:
        raise ArgumentError(f"Output size must be positive, got {out_h}x{out_w}")
    rows = resize_matrix(img.height, out_h)
    cols = resize_matrix(img.width, out_w)
    out = rows @ img.values @ cols.T
    return img.with_values(np.clip(out, 0.0, 1.0))
