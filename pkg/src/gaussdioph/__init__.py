"""Gaussian primes, Hurwitz continued fractions and Diophantine approximation experiments."""

from .gint import *  # noqa: F401,F403
from .gsieve import *  # noqa: F401,F403
from .dioph import *  # noqa: F401,F403
from .expsum import *  # noqa: F401,F403
from .metrical import *  # noqa: F401,F403

__version__ = "0.1.0"
