from ._nfisac import *  # noqa: F401,F403
from ._nfisac import __doc__  # noqa: F401
