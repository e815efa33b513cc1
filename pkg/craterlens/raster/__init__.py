from .image import *  # noqa: F401
from .pgm import *  # noqa: F401
from .resample import *  # noqa: F401
from .tiling import *  # noqa: F401
from .augment import *  # noqa: F401
from .synth import *  # noqa: F401
