import numpy as np

from craterlens.utils import ArgumentError
from .image import ImageGrid

__all__ = ["synth_texture"]


def synth_texture(
    height: int,
    width: int,
    rng: np.random.Generator,
    n_blobs: tuple[int, int] = (4, 12),
    sigma_range: tuple[float, float] = (0.04, 0.25),
) -> ImageGrid:
    """Random smooth texture built as a sum of anisotropic Gaussians.

    Blob widths are given relative to the image size. The sum is shifted
    and scaled to span [0, 1] exactly (a flat sum yields a constant 0.5).
    """
    if height < 1 or width < 1:
        raise ArgumentError(f"Texture size must be positive, got {height}x{width}")
    ys = (np.arange(height) + 0.5) / height
    xs = (np.arange(width) + 0.5) / width
    yy, xx = np.meshgrid(ys, xs, indexing="ij")

    out = np.zeros((height, width), dtype=np.float64)
    for _ in range(int(rng.integers(n_blobs[0], n_blobs[1] + 1))):
        cy, cx = rng.uniform(0.0, 1.0, size=2)
        sy, sx = rng.uniform(*sigma_range, size=2)
        amplitude = rng.uniform(-1.0, 1.0)
        out += amplitude * np.exp(-0.5 * (((yy - cy) / sy) ** 2 + ((xx - cx) / sx) ** 2))

    lo, hi = out.min(), out.max()
    if hi - lo < 1e-12:
        return ImageGrid(np.full((height, width), 0.5))
    return ImageGrid((out - lo) / (hi - lo))
