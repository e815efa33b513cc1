from .catalog import *  # noqa: F401
from .metrics import *  # noqa: F401
from .matching import *  # noqa: F401
from .localization import *  # noqa: F401
from .overlap import *  # noqa: F401
from .arcimg import *  # noqa: F401
from .gridsearch import *  # noqa: F401
from .bands import *  # noqa: F401
from .synth import *  # noqa: F401
from .combination import *  # noqa: F401
from .report import *  # noqa: F401
