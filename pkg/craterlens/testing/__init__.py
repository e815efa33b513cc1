from .functions import *  # noqa: F401
from .infrastructure import *  # noqa: F401
