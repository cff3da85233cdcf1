"""Non-uniform random supports and sparse approximation toolkit."""

from ._nusl import *  # noqa: F401,F403
from ._nusl import __version__  # noqa: F401
