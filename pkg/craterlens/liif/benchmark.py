from dataclasses import dataclass
from typing import Sequence

import numpy as np
from dataclasses_json import dataclass_json

from craterlens.raster.image import ImageGrid
from craterlens.raster.resample import bicubic_resize
from craterlens.utils import ArgumentError
from .model import LiifModel
from .predict import predict_sr

__all__ = ["SRComparison", "compare_with_bicubic"]


@dataclass_json
@dataclass(frozen=True)
class SRComparison:
    """Held-out reconstruction error of the model and of bicubic upsampling at one scale.

    Attributes
    ----------
    scale: float
        Downsampling factor applied to the high-resolution images.
    l1_sr: float
        Mean absolute error of the model's reconstruction.
    l1_bicubic: float
        Mean absolute error of bicubic upsampling.
    n_images: int
        Number of images averaged.
    """

    scale: float
    l1_sr: float
    l1_bicubic: float
    n_images: int

    @property
    def improvement(self) -> float:
        return self.l1_bicubic - self.l1_sr


def compare_with_bicubic(model: LiifModel, hr_images: Sequence[ImageGrid], scale: float) -> SRComparison:
    """Downsamples each image by `scale` and reconstructs it with the model and with bicubic interpolation."""
    if not hr_images:
        raise ArgumentError("No images to compare on")
    if scale < 1.0:
        raise ArgumentError(f"Scale must be at least 1, got {scale}")
    sr_errors, bicubic_errors = [], []
    for hr in hr_images:
        lr_h = max(1, int(round(hr.height / scale)))
        lr_w = max(1, int(round(hr.width / scale)))
        lr = bicubic_resize(hr, lr_h, lr_w)
        sr = predict_sr(model, lr, hr.height, hr.width)
        bicubic = bicubic_resize(lr, hr.height, hr.width)
        sr_errors.append(np.mean(np.abs(sr.values - hr.values)))
        bicubic_errors.append(np.mean(np.abs(bicubic.values - hr.values)))
    return SRComparison(
        scale=float(scale),
        l1_sr=float(np.mean(sr_errors)),
        l1_bicubic=float(np.mean(bicubic_errors)),
        n_images=len(hr_images),
    )
