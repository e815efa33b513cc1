import os
import re

import numpy as np

from craterlens.utils import FormatError, TruncatedFileError, atomic_write_bytes
from .image import ImageGrid

__all__ = ["load_pgm16", "save_pgm16", "decode_pgm", "encode_pgm16"]

_MAXVAL_DTYPES = {255: np.dtype("u1"), 65535: np.dtype(">u2")}
_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _read_header(data: bytes) -> tuple[list[bytes], int]:
    """Reads the magic number and three header fields of a binary PGM.

    Returns the tokens and the offset of the first payload byte, which
    follows exactly one whitespace character after the maxval.
    """
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        match = _TOKEN.match(data, pos)
        if match is None:
            raise FormatError("incomplete PGM header")
        tokens.append(match.group(1))
        pos = match.end()
        if len(tokens) == 1 and tokens[0] != b"P5":
            raise FormatError(f"unsupported PGM variant {tokens[0]!r}, expected b'P5'")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise FormatError("missing whitespace after PGM maxval")
    return tokens, pos + 1


def decode_pgm(data: bytes, path: str | None = None) -> ImageGrid:
    try:
        tokens, start = _read_header(data)
    except FormatError as e:
        raise FormatError(str(e), path=path) from None

    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError(f"non-numeric PGM header field in {tokens[1:]!r}", path=path) from None
    if width < 1 or height < 1:
        raise FormatError(f"invalid PGM size {width}x{height}", path=path)
    if maxval not in _MAXVAL_DTYPES:
        raise FormatError(f"unsupported PGM maxval {maxval}, expected 255 or 65535", path=path)

    dtype = _MAXVAL_DTYPES[maxval]
    expected = width * height * dtype.itemsize
    payload = data[start : start + expected]
    if len(payload) < expected:
        raise TruncatedFileError(f"{path or 'PGM data'}: payload has {len(payload)} bytes, expected {expected}")

    raw = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return ImageGrid(raw.astype(np.float64) / maxval, source_bit_depth=8 if maxval == 255 else 16)


def load_pgm16(path: str | os.PathLike) -> ImageGrid:
    """Loads a binary (P5) PGM file with maxval 255 or 65535.

    Samples are divided by maxval; 16-bit samples are big-endian.

    Raises
    ------
    FormatError
        The header is malformed or describes an unsupported variant.
    OSError
        The file cannot be read or its payload is truncated.
    """
    with open(path, "rb") as f:
        data = f.read()
    return decode_pgm(data, str(path))


def encode_pgm16(img: ImageGrid) -> bytes:
    raw = np.floor(img.values * 65535 + 0.5).astype(">u2")
    header = f"P5\n{img.width} {img.height}\n65535\n".encode("ascii")
    return header + raw.tobytes()


def save_pgm16(img: ImageGrid, path: str | os.PathLike) -> None:
    """Writes the image as a 16-bit binary PGM, quantizing with round(v * 65535)."""
    atomic_write_bytes(path, encode_pgm16(img))
