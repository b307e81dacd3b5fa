"""Rain-rule target revision from ball-by-ball scoring curves."""

from ._core import *  # noqa: F401,F403
from ._core import RainruleError, ParseError, MatchFormat

__all__ = [name for name in dir() if not name.startswith("_")]
