from .layers import *  # noqa: F401
from .loss import *  # noqa: F401
from .optim import *  # noqa: F401
from .encoder import *  # noqa: F401
from .gradcheck import *  # noqa: F401
from .persistence import *  # noqa: F401
