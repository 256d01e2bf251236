"""Python bindings for the dsnls C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import DsError, ConfigError, ArgumentError, NumericalError, IoError  # noqa: F401

__version__ = "0.1.0"
