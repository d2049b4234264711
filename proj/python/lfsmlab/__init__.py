"""Linear fractional stable motion laboratory."""

from ._lfsmlab import *  # noqa: F401,F403
from ._lfsmlab import __version__

__all__ = [name for name in dir() if not name.startswith("_")]
