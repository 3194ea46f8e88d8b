"""Classical Jacobi and Laguerre polynomials for arbitrary rational parameters.

Both are built from sums whose coefficients are polynomial in the parameters
(generalized binomials via falling factorials), so negative parameters such
as ``-alpha-1`` never hit Gamma-function poles.  Index -1 gives the zero
polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .ratcore import Poly, Q, ZERO


def gbinom(top, k: int) -> Fraction:
    """Generalized binomial coefficient ``top choose k`` for rational ``top``."""
    if k < 0:
        return Fraction(0)
    top = Q(top)
    acc = Fraction(1)
    for i in range(k):
        acc *= top - i
    return acc / factorial(k)


@lru_cache(maxsize=4096)
def jacobi(n: int, a, b) -> Poly:
    """P_n^{(a,b)}(x); the degree may drop for special negative parameters."""
    if n < -1:
        raise ValueError(f"Jacobi index must be >= -1, got {n}")
    if n == -1:
        return ZERO
    a, b = Q(a), Q(b)
    xm = Poly((Fraction(-1, 2), Fraction(1, 2)))  # (x-1)/2
    xp = Poly((Fraction(1, 2), Fraction(1, 2)))  # (x+1)/2
    out = ZERO
    for s in range(n + 1):
        c = gbinom(n + a, n - s) * gbinom(n + b, s)
        if c:
            out = out + (xm ** s) * (xp ** (n - s)) * c
    return out


@lru_cache(maxsize=4096)
def laguerre(n: int, a) -> Poly:
    """L_n^{(a)}(x)."""
    if n < -1:
        raise ValueError(f"Laguerre index must be >= -1, got {n}")
    if n == -1:
        return ZERO
    a = Q(a)
    return Poly(
        (-1) ** i * gbinom(n + a, n - i) / factorial(i) for i in range(n + 1)
    )


def laguerre_neg(n: int, a) -> Poly:
    """L_n^{(a)}(-x).  For a > -1 every coefficient is strictly positive."""
    p = laguerre(n, a).compose_linear(-1, 0)
    if Q(a) > -1:
        assert all(c > 0 for c in p.coeffs), f"L_{n}^({a})(-x) has a non-positive coefficient"
    return p


def jacobi_operator_residual(n: int, a, b) -> Poly:
    """(1-x^2) y'' + (b - a - (a+b+2) x) y' + n(n+a+b+1) y for y = P_n^{(a,b)}."""
    a, b = Q(a), Q(b)
    y = jacobi(n, a, b)
    return (
        Poly((1, 0, -1)) * y.derivative(2)
        + Poly((b - a, -(a + b + 2))) * y.derivative()
        + y.scale(n * (n + a + b + 1))
    )


def laguerre_operator_residual(n: int, a) -> Poly:
    """x y'' + (a + 1 - x) y' + n y for y = L_n^{(a)}."""
    a = Q(a)
    y = laguerre(n, a)
    return Poly((0, 1)) * y.derivative(2) + Poly((a + 1, -1)) * y.derivative() + y.scale(n)


def jacobi_derivative_check(n: int, a, b) -> bool:
    """d/dx P_n^{(a,b)} == (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}, exactly."""
    if n < 1:
        raise ValueError("jacobi_derivative_check needs n >= 1")
    a, b = Q(a), Q(b)
    lhs = jacobi(n, a, b).derivative()
    rhs = jacobi(n - 1, a + 1, b + 1).scale((n + a + b + 1) / 2)
    return lhs == rhs


__all__ = [
    "gbinom",
    "jacobi",
    "laguerre",
    "laguerre_neg",
    "jacobi_derivative_check",
    "jacobi_operator_residual",
    "laguerre_operator_residual",
]
