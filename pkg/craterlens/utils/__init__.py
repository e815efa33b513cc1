from ._typing import *  # noqa: F401
from .errors import *  # noqa: F401
from .fileio import *  # noqa: F401
from .logging import *  # noqa: F401
from .provenance import *  # noqa: F401
