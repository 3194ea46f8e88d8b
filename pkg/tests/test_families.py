from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import JACOBI_POINTS, LAGUERRE_POINTS, structural_specs
from eopladder import families as fam
from eopladder.diffop import LinDiffOp, apply, compose
from eopladder.families import FamilySpec, Kind
from eopladder.ratcore import ONE, X, Poly, Q, RatFunc

half = Fraction(1, 2)


def test_ranges_rejected():
    with pytest.raises(fam.InvalidParams):
        fam.validate(FamilySpec.x1_jacobi(1, 1))
    with pytest.raises(fam.InvalidParams):
        fam.validate(FamilySpec.x1_jacobi(-1, 2))
    with pytest.raises(fam.InvalidParams):
        fam.validate(FamilySpec.x1_laguerre(0))
    with pytest.raises(fam.InvalidParams):
        fam.hamiltonian(FamilySpec.x1_laguerre(-1))


def test_validate_examples():
    spec = FamilySpec.xm_laguerre(2, 3)
    assert fam.denominator(spec) == Poly([6, 4, half])
    fam.validate(spec)
    # denominator of XmJacobi m=1 at (1, 2) is (x - 3)/2; its root 3 equals b and lies outside [-1, 1]
    spec = FamilySpec.xm_jacobi(1, 1, 2)
    assert fam.denominator(spec) == (X - 3).scale(half)
    fam.validate(spec)


def test_inadmissible_points():
    with pytest.raises(fam.DenominatorRoots):
        fam.validate(FamilySpec.xm_jacobi(2, half, Fraction(3, 2)))
    with pytest.raises(fam.DegenerateDenominator):
        fam.validate(FamilySpec.xm_jacobi(2, Fraction(3, 2), half))
    assert fam.validation_error(FamilySpec.xm_jacobi(2, Fraction(5, 2), 2)) is None


def test_jacobi_abc():
    abc = fam.jacobi_abc(FamilySpec.x1_jacobi(1, 2))
    assert (abc.a, abc.b, abc.c) == (half, 3, 5)
    literal = fam.jacobi_abc(FamilySpec.x1_jacobi(1, 2, literal_c=True))
    assert literal.c == literal.b


def test_spec_json():
    spec = FamilySpec.xm_jacobi(2, half, "3/2")
    d = spec.to_json()
    assert d == {"kind": "XmJacobi", "m": 2, "alpha": "1/2", "beta": "3/2", "k": None}
    assert FamilySpec.from_json(d) == spec
    assert FamilySpec.from_json({"kind": "X1Laguerre", "k": "5/2"}) == FamilySpec.x1_laguerre(Q("5/2"))
    assert spec.shifted(2) == FamilySpec.xm_jacobi(2, Fraction(5, 2), Fraction(7, 2))


def test_xm_laguerre_m0_is_classical():
    k = Fraction(5, 2)
    H = fam.hamiltonian(FamilySpec.xm_laguerre(0, k))
    assert H == LinDiffOp([0, X - k - 1, -X])


def test_x1_laguerre_first_order_coefficient():
    k = Fraction(5, 2)
    H = fam.hamiltonian(FamilySpec.x1_laguerre(k))
    assert H.coeff(1) == RatFunc((X - k) * (X + k + 1), X + k)
    assert H.coeff(0) == RatFunc(-(X - k), X + k)


@pytest.mark.parametrize("k", LAGUERRE_POINTS + ["7/3", "9"])
def test_xm_laguerre_m1_equals_x1(k):
    assert fam.hamiltonian(FamilySpec.xm_laguerre(1, k)) == fam.hamiltonian(FamilySpec.x1_laguerre(k))


@pytest.mark.parametrize("ab", JACOBI_POINTS + [("2", "5"), ("1/3", "-1/2")])
def test_xm_jacobi_m1_equals_x1(ab):
    a, b = ab
    assert fam.hamiltonian(FamilySpec.xm_jacobi(1, a, b)) == fam.hamiltonian(FamilySpec.x1_jacobi(a, b))
    assert fam.lowering(FamilySpec.xm_jacobi(1, a, b)) == fam.lowering(FamilySpec.x1_jacobi(a, b))


def test_lowering_examples():
    k = Fraction(7, 4)
    lag = FamilySpec.x1_laguerre(k)
    assert apply(fam.lowering(lag), X + k + 1).is_zero()
    assert apply(fam.lowering(lag), -X ** 2 + k * k + 2 * k) == RatFunc(X + k + 2)
    jac = FamilySpec.x1_jacobi(half, Fraction(5, 2))
    assert apply(fam.lowering(jac), X - fam.jacobi_abc(jac).c).is_zero()


def test_raising_examples():
    k = Fraction(7, 4)
    assert apply(fam.raising(FamilySpec.x1_laguerre(k)), X + k + 2) == RatFunc(-X ** 2 + k * k + 2 * k)
    assert apply(fam.raising(FamilySpec.x1_laguerre(1)), X + 3) == RatFunc(-X ** 2 + 3)


@pytest.mark.parametrize("k", LAGUERRE_POINTS)
@pytest.mark.parametrize("n", range(0, 5))
def test_xm_laguerre_m0_raising_classical(k, n):
    from eopladder.classical import laguerre

    k = Q(k)
    B = fam.raising(FamilySpec.xm_laguerre(0, k))
    assert apply(B, laguerre(n, k + 1)) == RatFunc(laguerre(n + 1, k).scale(n + 1))


def test_eigenvalue_examples():
    assert fam.eigenvalue(FamilySpec.x1_jacobi(1, 2), 1) == 0
    assert fam.eigenvalue(FamilySpec.xm_jacobi(2, 1, Fraction(3, 2)), 5) == Fraction(39, 2)
    assert fam.eigenvalue(FamilySpec.xm_laguerre(3, 1), 3) == 0
    with pytest.raises(fam.IndexBelowFamily):
        fam.eigenvalue(FamilySpec.xm_laguerre(3, 1), 2)


def test_shift_constants():
    assert fam.si_shift_constant(FamilySpec.x1_jacobi(1, 2), 1) == 5
    assert all(fam.si_shift_constant(FamilySpec.x1_laguerre(3), j) == 1 for j in range(6))
    spec = FamilySpec.xm_jacobi(2, half, Fraction(3, 2))
    assert fam.si_shift_constant(spec, 0) == 2


@pytest.mark.parametrize("spec", structural_specs(), ids=lambda s: s.label())
def test_telescoped_spectrum(spec):
    for n in range(spec.m, spec.m + 7):
        total = sum((fam.si_shift_constant(spec, j) for j in range(1, n - spec.m + 1)), Fraction(0))
        assert total == fam.eigenvalue(spec, n)


@pytest.mark.parametrize("spec", structural_specs(), ids=lambda s: s.label())
def test_lowering_annihilates_closed_form_base(spec):
    assert apply(fam.lowering(spec), fam.base_closed_form(spec)).is_zero()
    assert apply(fam.hamiltonian(spec), fam.base_closed_form(spec)).is_zero()


@given(st.fractions(min_value=Fraction(-9, 10), max_value=6, max_denominator=10),
       st.fractions(min_value=Fraction(-9, 10), max_value=6, max_denominator=10))
def test_x1_jacobi_c_relation_generic(alpha, beta):
    if alpha == beta:
        return
    spec = FamilySpec.x1_jacobi(alpha, beta)
    H = fam.hamiltonian(spec)
    c = fam.jacobi_abc(spec).c
    assert apply(H, X - c).is_zero()
    assert H == compose(fam.raising(spec), fam.lowering(spec))


def test_x1_jacobi_literal_c_breaks_factorization():
    spec = FamilySpec.x1_jacobi(1, 2, literal_c=True)
    assert fam.hamiltonian(spec) != compose(fam.raising(spec), fam.lowering(spec))


def test_sort_key_orders_kinds():
    specs = [FamilySpec.xm_laguerre(0, 1), FamilySpec.x1_jacobi(1, 2), FamilySpec.x1_laguerre(1)]
    assert [s.kind for s in sorted(specs, key=fam.sort_key)] == [Kind.X1_JACOBI, Kind.X1_LAGUERRE,
                                                                  Kind.XM_LAGUERRE]
