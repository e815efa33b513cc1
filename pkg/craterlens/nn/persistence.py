import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np
from dataclasses_json import dataclass_json

from craterlens.utils import FloatArray, FormatError, TruncatedFileError, atomic_write_bytes, atomic_write_text

__all__ = ["TensorEntry", "TensorManifest", "save_tensors", "load_tensors"]

BLOB_DTYPE = "<f4"


@dataclass_json
@dataclass
class TensorEntry:
    """Location of one tensor inside the blob.

    Attributes
    ----------
    name: str
        Dotted parameter name, e.g. ``mlp.layers.0.weight``.
    shape: list[int]
        Extents, row-major.
    offset: int
        Byte offset of the first element.
    """

    name: str
    shape: list[int]
    offset: int


@dataclass_json
@dataclass
class TensorManifest:
    dtype: str = BLOB_DTYPE
    tensors: list[TensorEntry] = field(default_factory=list)


def save_tensors(tensors: Mapping[str, FloatArray], manifest_path: str | os.PathLike, blob_path: str | os.PathLike):
    """Writes named tensors as a JSON manifest plus a little-endian float32 blob.

    Tensors are stored in the iteration order of `tensors`.
    """
    manifest = TensorManifest()
    chunks: list[bytes] = []
    offset = 0
    for name, value in tensors.items():
        data = np.ascontiguousarray(value, dtype=BLOB_DTYPE).tobytes()
        manifest.tensors.append(TensorEntry(name=name, shape=list(np.shape(value)), offset=offset))
        chunks.append(data)
        offset += len(data)

    atomic_write_bytes(blob_path, b"".join(chunks))
    atomic_write_text(manifest_path, json.dumps(manifest.to_dict(), indent=4) + "\n")  # type: ignore


def load_tensors(manifest_path: str | os.PathLike, blob_path: str | os.PathLike) -> dict[str, FloatArray]:
    """Reads tensors written by `save_tensors`, as float64 arrays holding the stored float32 values."""
    try:
        manifest: TensorManifest = TensorManifest.from_dict(  # type: ignore
            json.loads(Path(manifest_path).read_text())
        )
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise FormatError(f"Invalid tensor manifest: {e}", path=str(manifest_path)) from e
    if manifest.dtype != BLOB_DTYPE:
        raise FormatError(f"Unsupported tensor dtype {manifest.dtype!r}", path=str(manifest_path))

    blob = Path(blob_path).read_bytes()
    itemsize = np.dtype(BLOB_DTYPE).itemsize
    result: dict[str, FloatArray] = {}
    for entry in manifest.tensors:
        if any(d < 0 for d in entry.shape) or entry.offset < 0:
            raise FormatError(f"Invalid entry for tensor {entry.name}", path=str(manifest_path))
        count = int(np.prod(entry.shape, dtype=np.int64))
        end = entry.offset + count * itemsize
        if end > len(blob):
            raise TruncatedFileError(f"{blob_path}: tensor {entry.name} needs bytes up to {end}, blob has {len(blob)}")
        values = np.frombuffer(blob, dtype=BLOB_DTYPE, count=count, offset=entry.offset)
        result[entry.name] = values.astype(np.float64).reshape(entry.shape)
    return result
