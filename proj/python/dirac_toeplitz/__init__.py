"""Discrete Dirac systems, block Toeplitz moments and Weyl functions."""

from ._core import *  # noqa: F401,F403
from ._core import DtsError

__all__ = [name for name in dir() if not name.startswith("_")] + ["DtsError"]
