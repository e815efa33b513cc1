from .coords import *  # noqa: F401
from .unfold import *  # noqa: F401
from .ensemble import *  # noqa: F401
from .mlp import *  # noqa: F401
from .model import *  # noqa: F401
from .predict import *  # noqa: F401
from .training import *  # noqa: F401
from .bundle import *  # noqa: F401
from .benchmark import *  # noqa: F401
