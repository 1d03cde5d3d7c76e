"""Motor current signature analysis toolkit (Python bindings)."""

from ._mcsa import *  # noqa: F401,F403
from ._mcsa import __version__  # noqa: F401
