from dataclasses import dataclass

import numpy as np

from craterlens.utils import ArgumentError, FloatArray

__all__ = ["ImageGrid", "Patch", "PatchFootprint", "crop"]


@dataclass(frozen=True, eq=False)
class ImageGrid:
    """Single-channel raster with intensities in the unit interval.

    Instances are treated as immutable values: operations return new grids
    and never write into `values`.

    Attributes
    ----------
    values: FloatArray
        Array of shape (height, width), row-major, every value in [0, 1].
    source_bit_depth: int
        Bit depth of the file the raster came from (8 or 16).
    """

    values: FloatArray
    source_bit_depth: int = 16

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ArgumentError(f"Image values must be two-dimensional, got shape {values.shape}")
        if values.size and (not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0):
            raise ArgumentError("Image values must lie in [0, 1]")
        if self.source_bit_depth not in (8, 16):
            raise ArgumentError(f"Unsupported bit depth {self.source_bit_depth}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @staticmethod
    def constant(height: int, width: int, value: float, source_bit_depth: int = 16) -> "ImageGrid":
        return ImageGrid(np.full((height, width), value, dtype=np.float64), source_bit_depth)

    def with_values(self, values: FloatArray) -> "ImageGrid":
        """Returns a grid with new values and the same bit-depth provenance."""
        return ImageGrid(values, self.source_bit_depth)


@dataclass(frozen=True)
class PatchFootprint:
    """Placement of a patch inside its parent raster (one row of the patch CSV)."""

    patch_id: int
    offset_x: int
    offset_y: int
    width: int
    height: int


@dataclass(frozen=True, eq=False)
class Patch:
    """A sub-image together with its placement in the parent raster.

    Attributes
    ----------
    image: ImageGrid
        Pixel content of the patch.
    offset_x, offset_y: int
        Position of the top-left patch pixel in the parent.
    parent_width, parent_height: int
        Size of the parent raster.
    patch_id: int
        Index of the patch in tiling order.
    """

    image: ImageGrid
    offset_x: int
    offset_y: int
    parent_width: int
    parent_height: int
    patch_id: int = 0

    def __post_init__(self):
        if self.offset_x < 0 or self.offset_y < 0:
            raise ArgumentError("Patch offsets must be non-negative")
        if self.offset_x + self.image.width > self.parent_width:
            raise ArgumentError("Patch exceeds the parent width")
        if self.offset_y + self.image.height > self.parent_height:
            raise ArgumentError("Patch exceeds the parent height")

    @property
    def footprint(self) -> PatchFootprint:
        return PatchFootprint(self.patch_id, self.offset_x, self.offset_y, self.image.width, self.image.height)


def crop(img: ImageGrid, x: int, y: int, width: int, height: int) -> ImageGrid:
    if x < 0 or y < 0 or width < 1 or height < 1 or x + width > img.width or y + height > img.height:
        raise ArgumentError(f"Crop window ({x}, {y}, {width}, {height}) outside a {img.width}x{img.height} image")
    return img.with_values(img.values[y : y + height, x : x + width].copy())
