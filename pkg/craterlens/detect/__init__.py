from .boxes import *  # noqa: F401
from .nms import *  # noqa: F401
from .georef import *  # noqa: F401
from .filters import *  # noqa: F401
from .merge import *  # noqa: F401
from .pipeline import *  # noqa: F401
from .csvio import *  # noqa: F401
