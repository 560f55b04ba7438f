"""Clamped-free string with a window actuator and an output-injection observer."""

from ._vso import *  # noqa: F401,F403
from ._vso import __doc__  # noqa: F401

__version__ = "0.1.0"
