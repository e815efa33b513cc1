import csv
import io
import math
import os
from dataclasses import dataclass
from typing import Optional, Sequence

from craterlens.utils import ArgumentError, FormatError, atomic_write_text, read_data_lines

__all__ = ["CATALOG_CSV_HEADER", "CatalogEntry", "load_catalog", "write_catalog", "filter_band"]

CATALOG_CSV_HEADER = ["id", "lat_deg", "lon_deg", "diameter_km", "arc_img"]


@dataclass(frozen=True)
class CatalogEntry:
    """Ground-truth crater.

    Attributes
    ----------
    id: str
        Catalog identifier, unique within a catalog.
    lon, lat: float
        Center, degrees.
    diameter: float
        Kilometers.
    arc_img: float, optional
        Fraction of the rim visible in the imagery.
    """

    id: str
    lon: float
    lat: float
    diameter: float
    arc_img: Optional[float] = None

    def __post_init__(self):
        if not self.diameter > 0:
            raise ArgumentError(f"Crater {self.id}: diameter must be positive, got {self.diameter}")
        if self.arc_img is not None and not 0.0 <= self.arc_img <= 1.0:
            raise ArgumentError(f"Crater {self.id}: arc_img {self.arc_img} outside [0, 1]")


def load_catalog(path: str | os.PathLike) -> list[CatalogEntry]:
    with open(path, "r", newline="") as f:
        reader = csv.DictReader(read_data_lines(f))
        missing = set(CATALOG_CSV_HEADER) - set(reader.fieldnames or [])
        if missing:
            raise FormatError(f"missing columns {sorted(missing)}", path=str(path))

        entries: list[CatalogEntry] = []
        seen: set[str] = set()
        for row_index, row in enumerate(reader, start=1):
            try:
                arc = (row["arc_img"] or "").strip()
                entry = CatalogEntry(
                    id=row["id"].strip(),
                    lat=float(row["lat_deg"]),
                    lon=float(row["lon_deg"]),
                    diameter=float(row["diameter_km"]),
                    arc_img=float(arc) if arc else None,
                )
            except (AttributeError, TypeError, ValueError) as e:
                raise FormatError(str(e), row=row_index, path=str(path)) from None
            if not all(math.isfinite(v) for v in (entry.lat, entry.lon, entry.diameter)):
                raise FormatError("non-finite value", row=row_index, path=str(path))
            if entry.id in seen:
                raise FormatError(f"duplicate id {entry.id!r}", row=row_index, path=str(path))
            seen.add(entry.id)
            entries.append(entry)
    return entries


def write_catalog(entries: Sequence[CatalogEntry], path: str | os.PathLike, provenance: str = ""):
    buf = io.StringIO()
    buf.write(provenance)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CATALOG_CSV_HEADER)
    for e in entries:
        writer.writerow([e.id, e.lat, e.lon, e.diameter, "" if e.arc_img is None else e.arc_img])
    atomic_write_text(path, buf.getvalue())


def filter_band(catalog: Sequence[CatalogEntry], d_min: float, d_max: float) -> list[CatalogEntry]:
    """Craters with ``d_min <= diameter <= d_max`` (kilometers)."""
    if not d_min < d_max:
        raise ArgumentError(f"Empty diameter band [{d_min}, {d_max}]")
    return [e for e in catalog if d_min <= e.diameter <= d_max]
