"""Match-three level generation with local and global MRFs."""

from ._m3gen import *  # noqa: F401,F403
from ._m3gen import __version__, Error, FormatError, SpecError, ValidationError  # noqa: F401
