from .commands import *  # noqa: F401
from .main import main  # noqa: F401
