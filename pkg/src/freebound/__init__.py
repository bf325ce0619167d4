"""Numerical laboratory for the one-phase parabolic Bernoulli free-boundary problem."""

from .sources import SourceTerm

__version__ = "0.1.0"

__all__ = ["SourceTerm", "__version__"]
