import csv
import os
import io
import math

from craterlens.utils import ArgumentError, FormatError, atomic_write_text, read_data_lines
from .image import ImageGrid, Patch, PatchFootprint, crop

__all__ = [
    "tile_offsets",
    "tile_overlapping",
    "tile_footprints",
    "write_patch_csv",
    "read_patch_csv",
    "PATCH_CSV_HEADER",
]

PATCH_CSV_HEADER = ["patch_id", "offset_x", "offset_y", "width", "height"]


def tile_offsets(size: int, patch_size: int, overlap_fraction: float) -> list[int]:
    """Offsets of overlapping windows along one axis.

    The stride is round(patch_size * (1 - overlap_fraction)); when the
    regular offsets do not reach the far edge, a final window flush with
    the edge is appended.
    """
    if not 0 <= overlap_fraction < 1:
        raise ArgumentError(f"Overlap fraction must be in [0, 1), got {overlap_fraction}")
    if patch_size < 1:
        raise ArgumentError(f"Patch size must be positive, got {patch_size}")
    if patch_size > size:
        raise ArgumentError(f"Patch size {patch_size} exceeds image dimension {size}")

    stride = max(1, math.floor(patch_size * (1 - overlap_fraction) + 0.5))
    offsets = list(range(0, size - patch_size + 1, stride))
    if offsets[-1] + patch_size < size:
        offsets.append(size - patch_size)
    return offsets


def tile_overlapping(img: ImageGrid, patch_size: int, overlap_fraction: float) -> list[Patch]:
    """Splits an image into square overlapping patches.

    Patches are numbered row-major: all patches of the first row of
    offsets, then the second row, and so on. Every pixel is covered by at
    least one patch.
    """
    return [
        Patch(
            crop(img, fp.offset_x, fp.offset_y, fp.width, fp.height),
            offset_x=fp.offset_x,
            offset_y=fp.offset_y,
            parent_width=img.width,
            parent_height=img.height,
            patch_id=fp.patch_id,
        )
        for fp in tile_footprints(img.width, img.height, patch_size, overlap_fraction)
    ]


def tile_footprints(width: int, height: int, patch_size: int, overlap_fraction: float) -> list[PatchFootprint]:
    """Placement of the patches `tile_overlapping` would cut from a `width` x `height` raster."""
    xs = tile_offsets(width, patch_size, overlap_fraction)
    ys = tile_offsets(height, patch_size, overlap_fraction)
    return [
        PatchFootprint(i, x, y, patch_size, patch_size) for i, (y, x) in enumerate((y, x) for y in ys for x in xs)
    ]


def write_patch_csv(patches: list[Patch] | list[PatchFootprint], path: str | os.PathLike, header: str = "") -> None:
    buf = io.StringIO()
    if header:
        buf.write(header)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PATCH_CSV_HEADER)
    for patch in patches:
        fp = patch.footprint if isinstance(patch, Patch) else patch
        writer.writerow([fp.patch_id, fp.offset_x, fp.offset_y, fp.width, fp.height])
    atomic_write_text(path, buf.getvalue())


def read_patch_csv(path: str | os.PathLike) -> list[PatchFootprint]:
    with open(path, "r", newline="") as f:
        reader = csv.DictReader(read_data_lines(f))
        if reader.fieldnames is None or list(reader.fieldnames) != PATCH_CSV_HEADER:
            raise FormatError(f"expected header {','.join(PATCH_CSV_HEADER)}", path=str(path))
        footprints = []
        for row_index, row in enumerate(reader, start=1):
            try:
                footprints.append(PatchFootprint(*(int(row[name]) for name in PATCH_CSV_HEADER)))
            except (TypeError, ValueError):
                raise FormatError("non-integer field", row=row_index, path=str(path)) from None
    return footprints
