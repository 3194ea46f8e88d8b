from fractions import Fraction

from hypothesis import given, strategies as st

from eopladder.classical import (
    gbinom, jacobi, jacobi_derivative_check, jacobi_operator_residual, laguerre, laguerre_neg,
    laguerre_operator_residual,
)
from eopladder.ratcore import ONE, X, ZERO, Poly

params = st.fractions(min_value=-4, max_value=4, max_denominator=6)
degrees = st.integers(min_value=0, max_value=6)


def test_jacobi_examples():
    a, b = Fraction(2, 3), Fraction(-5, 7)
    assert jacobi(0, a, b) == ONE
    assert jacobi(1, a, b) == Poly([(a - b) / 2, (a + b + 2) / 2])
    assert jacobi(2, 0, 0) == Poly([Fraction(-1, 2), 0, Fraction(3, 2)])
    assert jacobi(-1, a, b) == ZERO


def test_laguerre_examples():
    a = Fraction(3, 4)
    assert laguerre(0, a) == ONE
    assert laguerre(1, a) == Poly([a + 1, -1])
    assert laguerre(2, 0) == Poly([1, -2, Fraction(1, 2)])
    assert laguerre(-1, a) == ZERO


def test_laguerre_neg_examples():
    assert laguerre_neg(1, 0) == 1 + X
    assert laguerre_neg(0, Fraction(5, 2)) == ONE
    assert laguerre_neg(2, 1)(0) == 3


def test_denominator_degree_drop_is_allowed():
    # a + b + n + 1 = 0 kills the leading coefficient
    assert jacobi(2, -2, -1).degree < 2


def test_derivative_check_examples():
    assert jacobi_derivative_check(1, 0, 0)
    assert jacobi_derivative_check(2, 0, 0)
    assert jacobi_derivative_check(3, Fraction(1, 2), Fraction(-1, 3))


def test_gbinom():
    assert gbinom(5, 2) == 10
    assert gbinom(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gbinom(3, -1) == 0


@given(st.integers(min_value=1, max_value=7), params, params)
def test_derivative_identity(n, a, b):
    assert jacobi_derivative_check(n, a, b)


@given(degrees, params, params)
def test_jacobi_endpoint_value(n, a, b):
    assert jacobi(n, a, b)(1) == gbinom(n + a, n)


@given(degrees, params)
def test_laguerre_origin_value(n, a):
    assert laguerre(n, a)(0) == gbinom(n + a, n)


@given(degrees, params, params)
def test_jacobi_ode(n, a, b):
    assert jacobi_operator_residual(n, a, b).is_zero()


@given(degrees, params)
def test_laguerre_ode(n, a):
    assert laguerre_operator_residual(n, a).is_zero()


@given(degrees, st.fractions(min_value=Fraction(-9, 10), max_value=5, max_denominator=10))
def test_laguerre_neg_positive_coefficients(n, a):
    assert all(c > 0 for c in laguerre_neg(n, a).coeffs)
