"""Continuum limits of matrix product states."""

from ._contlim import *  # noqa: F401,F403
from ._contlim import ContlimError, __doc__  # noqa: F401

__version__ = "0.1.0"
