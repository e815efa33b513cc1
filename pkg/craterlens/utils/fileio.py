import os
import tempfile
from pathlib import Path
from typing import Iterator, TextIO

__all__ = ["atomic_write_bytes", "atomic_write_text", "read_data_lines"]


def atomic_write_bytes(path: str | os.PathLike, data: bytes) -> None:
    """Writes `data` to `path` through a temporary file and a rename.

    Readers never observe a partially written file. The temporary file is
    created in the destination directory so that the final `os.replace`
    does not cross file systems.
    """
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def read_data_lines(f: TextIO) -> Iterator[str]:
    """Yields lines of a text file, skipping provenance comments (lines starting with `#`)."""
    for line in f:
        if line.startswith("#"):
            continue
        yield line
