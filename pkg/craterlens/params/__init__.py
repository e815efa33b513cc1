from .configurations import *  # noqa: F401
