"""Lyapunov exponents, Holder norms and parameter regions for SL(2) cocycles over the Bernoulli shift."""

from ._core import *  # noqa: F401,F403
from ._core import CocycleLabError, __doc__  # noqa: F401

__version__ = "0.1.0"
