import csv
import io
import os
from typing import Sequence

from craterlens.utils import FormatError, atomic_write_text, read_data_lines
from .boxes import DetectionPx, PatchDetections
from .georef import DetectionGeo

__all__ = [
    "PX_CSV_HEADER",
    "GEO_CSV_HEADER",
    "write_detections_px",
    "read_detections_px",
    "write_detections_geo",
    "read_detections_geo",
]

PX_CSV_HEADER = ["patch_id", "offset_x", "offset_y", "x_min", "y_min", "x_max", "y_max", "score"]
GEO_CSV_HEADER = ["lon_deg", "lat_deg", "diameter_km", "score"]


def _write_rows(path: str | os.PathLike, header: list[str], rows, provenance: str):
    buf = io.StringIO()
    if provenance:
        buf.write(provenance)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


def _read_rows(path: str | os.PathLike, header: list[str]):
    with open(path, "r", newline="") as f:
        reader = csv.DictReader(read_data_lines(f))
        if reader.fieldnames is None or list(reader.fieldnames) != header:
            raise FormatError(f"expected header {','.join(header)}", path=str(path))
        yield from enumerate(reader, start=1)


def write_detections_px(patches: Sequence[PatchDetections], path: str | os.PathLike, provenance: str = ""):
    rows = [
        [p.patch_id, p.offset_x, p.offset_y, d.x_min, d.y_min, d.x_max, d.y_max, d.score]
        for p in patches
        for d in p.detections
    ]
    _write_rows(path, PX_CSV_HEADER, rows, provenance)


def read_detections_px(path: str | os.PathLike) -> list[PatchDetections]:
    """Reads pixel detections grouped by patch, patches in order of first appearance."""
    patches: dict[int, PatchDetections] = {}
    for row_index, row in _read_rows(path, PX_CSV_HEADER):
        try:
            patch_id, offset_x, offset_y = (int(row[k]) for k in PX_CSV_HEADER[:3])
            det = DetectionPx(*(float(row[k]) for k in PX_CSV_HEADER[3:]), patch_id=patch_id)
        except (TypeError, ValueError) as e:
            raise FormatError(str(e), row=row_index, path=str(path)) from None
        patch = patches.setdefault(patch_id, PatchDetections(patch_id, offset_x, offset_y))
        if (patch.offset_x, patch.offset_y) != (offset_x, offset_y):
            raise FormatError(f"inconsistent offsets for patch {patch_id}", row=row_index, path=str(path))
        patch.detections.append(det)
    return list(patches.values())


def write_detections_geo(dets: Sequence[DetectionGeo], path: str | os.PathLike, provenance: str = ""):
    _write_rows(path, GEO_CSV_HEADER, [[d.lon, d.lat, d.diameter, d.score] for d in dets], provenance)


def read_detections_geo(path: str | os.PathLike) -> list[DetectionGeo]:
    dets = []
    for row_index, row in _read_rows(path, GEO_CSV_HEADER):
        try:
            dets.append(DetectionGeo(*(float(row[k]) for k in GEO_CSV_HEADER)))
        except (TypeError, ValueError) as e:
            raise FormatError(str(e), row=row_index, path=str(path)) from None
    return dets
