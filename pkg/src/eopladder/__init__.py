"""Exact construction and verification of X1/Xm exceptional Jacobi and Laguerre polynomials."""

from .families import FamilySpec, Kind
from .ratcore import Poly, RatFunc

__all__ = ["FamilySpec", "Kind", "Poly", "RatFunc"]
__version__ = "0.1.0"
