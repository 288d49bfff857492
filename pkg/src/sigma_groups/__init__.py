"""Exact computations with difference algebraic groups over Q."""

from .polynomial import Polynomial, VarId
from .textio import parse_poly, format_poly

__version__ = "0.1.0"

__all__ = ["Polynomial", "VarId", "parse_poly", "format_poly", "__version__"]
