"""Thermodynamics of q-particles (quons), -1 <= q <= 1."""
from .errors import AccuracyError, DomainError, QuonError, SpectrumParseError

__version__ = "0.1.0"

__all__ = ["AccuracyError", "DomainError", "QuonError", "SpectrumParseError", "__version__"]
