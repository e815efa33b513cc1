import os
import re
import sys
import logging

__all__ = [
    "ROOT_LOGGER_NAME",
    "get_logger",
    "parse_logging_level",
    "setup_logging",
    "setup_logging_from_env",
]

ROOT_LOGGER_NAME = "craterlens"

LOG_LEVEL_ENV = "__CRATERLENS_LOG_LEVEL"
LOG_FILTER_ENV = "__CRATERLENS_LOG_FILTER"


def get_logger(name: str) -> logging.Logger:
    """Returns the logger for a craterlens submodule.

    Names are organized into a namespace hierarchy where levels are
    separated by periods, e.g. "liif.training" or "detect.merge". All of
    them live under the common "craterlens" root. Module `__name__` values
    are accepted as they are.
    """
    if name == ROOT_LOGGER_NAME or name.startswith(ROOT_LOGGER_NAME + "."):
        return logging.getLogger(name)
    return logging.getLogger(ROOT_LOGGER_NAME).getChild(name)


def parse_logging_level(str: str) -> int:
    """Parse the log level from a string.

    The level can be either a non-negative integer or a string representation
    of one of the predefined levels.

    Raises an exception if the level cannot be parsed.
    """
    str = str.upper()
    if sys.version_info >= (3, 11):
        names_mapping = logging.getLevelNamesMapping()
    else:
        names_mapping = logging._nameToLevel.copy()
    if str in names_mapping:
        return names_mapping[str]

    # try convert to int
    try:
        level = int(str)
        if level >= 0:
            return level
    except ValueError:
        pass

    raise ValueError("Log level must be either {error, warn, info, debug} or a non-negative integer.")


class _LogFormatter(logging.Formatter):
    """
    Log formatter to provide colors. Adapted from https://stackoverflow.com/a/56944256/3638629
    """

    magenta = "\033[0;35m"
    grey = "\033[0;34m"
    yellow = "\033[0;33m"
    red = "\033[0;31m"
    reset = "\033[0m"

    loglevel2colour = {
        logging.DEBUG: grey + "{}" + reset,
        logging.INFO: magenta + "{}" + reset,
        logging.WARNING: yellow + "{}" + reset,
        logging.ERROR: red + "{}" + reset,
        logging.CRITICAL: red + "{}" + reset,
    }

    def __init__(self, colors: bool = True):
        super().__init__()
        self.colors = colors

    def format(self, record: logging.LogRecord):
        level_name = record.levelname
        if self.colors and record.levelno in self.loglevel2colour:
            level_name = self.loglevel2colour[record.levelno].format(level_name)
        return f"{level_name} {record.name} {record.getMessage()}"


class _NamespaceFilter(logging.Filter):
    def __init__(self, namespace_regexp: str):
        super().__init__()
        self.regexp = re.compile(namespace_regexp)

    def filter(self, record: logging.LogRecord) -> bool:
        return self.regexp.search(record.name) is not None


_handler: logging.Handler | None = None


def setup_logging(level: int | str = logging.WARNING, namespace_regexp: str = ".*", colors: bool = True) -> None:
    """Installs the craterlens stream handler.

    Calling it again replaces the previously installed handler, so the
    function can be used to reconfigure logging between runs.

    Parameters
    ----------
    level: int | str
        Minimum severity level, as accepted by `parse_logging_level`.
    namespace_regexp: str, optional
        Only records whose logger name matches this regexp are printed.
    colors: bool, optional
        Use ANSI colors for level names.
    """
    global _handler

    if isinstance(level, str):
        level = parse_logging_level(level)

    root = logging.getLogger(ROOT_LOGGER_NAME)
    if _handler is not None:
        root.removeHandler(_handler)

    _handler = logging.StreamHandler()
    _handler.setFormatter(_LogFormatter(colors))
    _handler.addFilter(_NamespaceFilter(namespace_regexp))
    root.addHandler(_handler)
    root.setLevel(level)


def setup_logging_from_env() -> None:
    """Configures logging from the `__CRATERLENS_LOG_LEVEL` and `__CRATERLENS_LOG_FILTER` variables."""
    setup_logging(os.environ.get(LOG_LEVEL_ENV, "WARNING"), os.environ.get(LOG_FILTER_ENV, ".*"))
