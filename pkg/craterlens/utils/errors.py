from typing import Optional

__all__ = [
    "CraterLensError",
    "ArgumentError",
    "FormatError",
    "RangeError",
    "NumericError",
    "TruncatedFileError",
    "exit_code_for",
]


class CraterLensError(Exception):
    """Base class of all errors raised on purpose by craterlens."""


class ArgumentError(CraterLensError, ValueError):
    """An argument violates the precondition of an operation."""


class FormatError(CraterLensError, ValueError):
    """Malformed input file or record.

    Attributes
    ----------
    row : int, optional
        1-based index of the offending data row (header excluded).
    path : str, optional
        The file being read.
    """

    def __init__(self, message: str, *, row: Optional[int] = None, path: Optional[str] = None):
        prefix = ""
        if path is not None:
            prefix += f"{path}: "
        if row is not None:
            prefix += f"row {row}: "
        super().__init__(prefix + message)
        self.row = row
        self.path = path


class RangeError(CraterLensError, ValueError):
    """A computed value falls outside its valid domain."""


class NumericError(CraterLensError, ArithmeticError):
    """Non-finite values appeared in a computation.

    Attributes
    ----------
    step : int, optional
        Training step at which the problem was detected.
    """

    def __init__(self, message: str, *, step: Optional[int] = None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class TruncatedFileError(CraterLensError, OSError):
    """A binary payload ended before the expected number of bytes."""


def exit_code_for(exc: BaseException) -> int:
    """Maps an exception to the command-line exit code.

    Returns 2 for argument and format errors, 3 for numeric errors and
    4 for I/O errors. Other exceptions are not mapped and yield 1.
    """
    if isinstance(exc, NumericError):
        return 3
    if isinstance(exc, OSError):
        return 4
    if isinstance(exc, ValueError):
        return 2
    return 1
