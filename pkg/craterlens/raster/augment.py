from dataclasses import dataclass

import numpy as np

from craterlens.utils import ArgumentError
from .image import ImageGrid

__all__ = ["AugmentSpec", "augment_sr", "random_augment_spec"]


@dataclass(frozen=True)
class AugmentSpec:
    """Augmentation applied to super-resolution training images.

    Attributes
    ----------
    hflip: bool
        Mirror columns.
    vflip: bool
        Mirror rows.
    rot90_steps: int
        Number of quarter turns, in {0, 1, 2, 3}.
    brightness_scale: float
        Multiplier applied to every intensity.
    contrast_scale: float
        Multiplier applied to deviations from the image mean.
    """

    hflip: bool = False
    vflip: bool = False
    rot90_steps: int = 0
    brightness_scale: float = 1.0
    contrast_scale: float = 1.0

    def __post_init__(self):
        if self.rot90_steps not in (0, 1, 2, 3):
            raise ArgumentError(f"rot90_steps must be in {{0, 1, 2, 3}}, got {self.rot90_steps}")
        if self.brightness_scale <= 0 or self.contrast_scale <= 0:
            raise ArgumentError("Brightness and contrast scales must be positive")


def augment_sr(img: ImageGrid, spec: AugmentSpec) -> ImageGrid:
    """Applies hflip, vflip, rotation, contrast and brightness, in this order.

    One rotation step maps [[a, b], [c, d]] to [[c, a], [d, b]].
    """
    v = img.values
    if spec.hflip:
        v = v[:, ::-1]
    if spec.vflip:
        v = v[::-1, :]
    v = np.rot90(v, -spec.rot90_steps)

    if spec.contrast_scale != 1.0:
        mean = v.mean()
        v = np.clip(spec.contrast_scale * (v - mean) + mean, 0.0, 1.0)
    if spec.brightness_scale != 1.0:
        v = np.clip(spec.brightness_scale * v, 0.0, 1.0)

    return img.with_values(np.ascontiguousarray(v))


def random_augment_spec(
    rng: np.random.Generator,
    brightness: tuple[float, float] = (0.9, 1.1),
    contrast: tuple[float, float] = (0.9, 1.1),
) -> AugmentSpec:
    return AugmentSpec(
        hflip=bool(rng.integers(2)),
        vflip=bool(rng.integers(2)),
        rot90_steps=int(rng.integers(4)),
        brightness_scale=float(rng.uniform(*brightness)),
        contrast_scale=float(rng.uniform(*contrast)),
    )
