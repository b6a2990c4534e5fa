"""Tripartite Bell inequalities, conditional-entropy bounds, and
device-independent key/randomness rates."""

from . import bell, bounds, centropy, optimize, qmath, rates, states, verification
from .errors import NumericError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "bell",
    "bounds",
    "centropy",
    "optimize",
    "qmath",
    "rates",
    "states",
    "verification",
    "NumericError",
    "ValidationError",
    "__version__",
]
