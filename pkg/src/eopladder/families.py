"""Hamiltonians, lowering/raising operators and spectra of the four EOP families.

Each operator is built from the closed forms for the X1/Xm Jacobi and
Laguerre families with exact rational parameters.  Eigen-equations use the
convention ``H P = E P`` with ``E >= 0``.

Two conventions are fixed here and pinned by tests:

* X1 Jacobi uses ``c = b + 1/a``; ``c = b`` is available through
  ``FamilySpec(literal_c=True)`` to show that the identities then break.
* The Xm Jacobi raising operator carries the prefactor ``(x^2 - 1)``; with
  ``(1 - x^2)`` one gets ``B A = -H``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .classical import jacobi, laguerre_neg
from .diffop import D, LinDiffOp, apply, from_chain
from .ratcore import ONE, X, Poly, Q, RatFunc, count_real_roots, rational_to_str


class Kind(str, Enum):
    X1_JACOBI = "X1Jacobi"
    XM_JACOBI = "XmJacobi"
    X1_LAGUERRE = "X1Laguerre"
    XM_LAGUERRE = "XmLaguerre"


class FamilyError(ValueError):
    pass


class InvalidParams(FamilyError):
    pass


class DenominatorRoots(FamilyError):
    pass


class DegenerateDenominator(FamilyError):
    pass


class IndexBelowFamily(FamilyError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    kind: Kind
    m: int
    alpha: Fraction | None = None
    beta: Fraction | None = None
    k: Fraction | None = None
    literal_c: bool = False  # debug: X1 Jacobi with c = b

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        for name in ("alpha", "beta", "k"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, Q(v))
        if self.kind in (Kind.X1_JACOBI, Kind.X1_LAGUERRE) and self.m != 1:
            raise InvalidParams(f"{self.kind.value} has m = 1, got m = {self.m}")
        if self.is_jacobi and (self.alpha is None or self.beta is None):
            raise InvalidParams("Jacobi families need alpha and beta")
        if not self.is_jacobi and self.k is None:
            raise InvalidParams("Laguerre families need k")

    @classmethod
    def x1_jacobi(cls, alpha, beta, **kw) -> "FamilySpec":
        return cls(Kind.X1_JACOBI, 1, alpha=alpha, beta=beta, **kw)

    @classmethod
    def xm_jacobi(cls, m: int, alpha, beta) -> "FamilySpec":
        return cls(Kind.XM_JACOBI, m, alpha=alpha, beta=beta)

    @classmethod
    def x1_laguerre(cls, k) -> "FamilySpec":
        return cls(Kind.X1_LAGUERRE, 1, k=k)

    @classmethod
    def xm_laguerre(cls, m: int, k) -> "FamilySpec":
        return cls(Kind.XM_LAGUERRE, m, k=k)

    @property
    def is_jacobi(self) -> bool:
        return self.kind in (Kind.X1_JACOBI, Kind.XM_JACOBI)

    def shifted(self, j: int = 1) -> "FamilySpec":
        """(alpha, beta) -> (alpha + j, beta + j) or k -> k + j; m unchanged."""
        if self.is_jacobi:
            return replace(self, alpha=self.alpha + j, beta=self.beta + j)
        return replace(self, k=self.k + j)

    def label(self) -> str:
        if self.is_jacobi:
            p = f"alpha={rational_to_str(self.alpha)},beta={rational_to_str(self.beta)}"
        else:
            p = f"k={rational_to_str(self.k)}"
        return f"{self.kind.value}[m={self.m},{p}]"

    def to_json(self) -> dict:
        d = {
            "kind": self.kind.value,
            "m": self.m,
            "alpha": None if self.alpha is None else rational_to_str(self.alpha),
            "beta": None if self.beta is None else rational_to_str(self.beta),
            "k": None if self.k is None else rational_to_str(self.k),
        }
        if self.literal_c:
            d["literal_c"] = True
        return d

    @classmethod
    def from_json(cls, d: dict) -> "FamilySpec":
        kind = Kind(d["kind"])
        m = d.get("m", 1 if kind in (Kind.X1_JACOBI, Kind.X1_LAGUERRE) else None)
        if m is None:
            raise InvalidParams("Xm families need m")
        get = lambda key: None if d.get(key) is None else Q(str(d[key]))  # noqa: E731
        return cls(kind, int(m), alpha=get("alpha"), beta=get("beta"), k=get("k"),
                   literal_c=bool(d.get("literal_c", False)))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def sort_key(spec: FamilySpec) -> tuple:
    order = [Kind.X1_JACOBI, Kind.XM_JACOBI, Kind.X1_LAGUERRE, Kind.XM_LAGUERRE]
    params = (spec.alpha, spec.beta) if spec.is_jacobi else (spec.k,)
    return (order.index(spec.kind), spec.m, params, spec.literal_c)


# -- parameters and validation -------------------------------------------

@dataclass(frozen=True)
class JacobiABC:
    a: Fraction
    b: Fraction
    c: Fraction


def jacobi_abc(spec: FamilySpec) -> JacobiABC:
    alpha, beta = spec.alpha, spec.beta
    if alpha == beta:
        raise InvalidParams("X1 Jacobi needs alpha != beta (b is undefined)")
    a = (beta - alpha) / 2
    b = (beta + alpha) / (beta - alpha)
    c = b if spec.literal_c else b + 1 / a
    return JacobiABC(a, b, c)


def denominator(spec: FamilySpec) -> Poly:
    """P_m^{(-alpha-1, beta-1)} (Jacobi) or L_m^{(k-1)}(-x) (Laguerre)."""
    if spec.is_jacobi:
        return jacobi(spec.m, -spec.alpha - 1, spec.beta - 1)
    return laguerre_neg(spec.m, spec.k - 1)


def check_ranges(spec: FamilySpec) -> None:
    if spec.m < 0:
        raise InvalidParams(f"m must be >= 0, got {spec.m}")
    if spec.is_jacobi:
        if spec.alpha <= -1 or spec.beta <= -1:
            raise InvalidParams(f"need alpha > -1 and beta > -1 ({spec.label()})")
        if spec.kind is Kind.X1_JACOBI and spec.alpha == spec.beta:
            raise InvalidParams("X1 Jacobi needs alpha != beta (b is undefined)")
    elif spec.k <= 0:
        raise InvalidParams(f"need k > 0 ({spec.label()})")


def check_structure(spec: FamilySpec) -> None:
    """Ranges plus non-degenerate denominators: enough for the operators to exist."""
    check_ranges(spec)
    eta = denominator(spec)
    if eta.degree != spec.m:
        raise DegenerateDenominator(
            f"denominator of {spec.label()} has degree {eta.degree} < m = {spec.m}"
        )


def validate(spec: FamilySpec) -> None:
    """Full admissibility: ranges, degree, and a root-free weight denominator."""
    check_structure(spec)
    eta = denominator(spec)
    if spec.is_jacobi:
        if eta(-1) == 0 or eta(1) == 0 or count_real_roots(eta, -1, 1):
            raise DenominatorRoots(f"P_m^(-alpha-1,beta-1) vanishes on [-1, 1] for {spec.label()}")
    else:
        if all(c > 0 for c in eta.coeffs):
            return
        if eta(0) == 0 or count_real_roots(eta, 0, None):
            raise DenominatorRoots(f"L_m^(k-1)(-x) vanishes on [0, inf) for {spec.label()}")


def validation_error(spec: FamilySpec) -> FamilyError | None:
    try:
        validate(spec)
    except FamilyError as exc:
        return exc
    return None


# -- operators ------------------------------------------------------------

def _rf(num, den=ONE) -> RatFunc:
    return RatFunc(num if isinstance(num, Poly) else Poly.const(num),
                   den if isinstance(den, Poly) else Poly.const(den))


_X2M1 = Poly((-1, 0, 1))  # x^2 - 1


def _xm_jacobi_parts(spec: FamilySpec):
    al, be, m = spec.alpha, spec.beta, spec.m
    eta = jacobi(m, -al - 1, be - 1)
    phi = jacobi(m, -al - 2, be)
    return al, be, m, eta, phi


@lru_cache(maxsize=None)
def hamiltonian(spec: FamilySpec) -> LinDiffOp:
    check_structure(spec)
    if spec.kind is Kind.X1_JACOBI:
        al, be = spec.alpha, spec.beta
        den = Poly((be + al, -(be - al)))
        p1 = _rf(Poly((-(be - al), be + al + 2))) + _rf(_X2M1.scale(2 * (be - al)), den)
        p0 = _rf(Poly((0, be - al))) + _rf(_X2M1.scale((be - al) ** 2), den)
        return LinDiffOp((p0, p1, _X2M1))
    if spec.kind is Kind.X1_LAGUERRE:
        k = spec.k
        xk = Poly((k, 1))
        p1 = _rf(Poly((-k, 1)) * Poly((k + 1, 1)), xk)
        p0 = -_rf(Poly((-k, 1)), xk)
        return LinDiffOp((p0, p1, -X))
    if spec.kind is Kind.XM_JACOBI:
        al, be, m, eta, _ = _xm_jacobi_parts(spec)
        s = al - be - m + 1
        r = _rf(jacobi(m - 1, -al, be), eta)
        bracket = r * s - _rf(al + 1, Poly((1, -1))) + _rf(be + 1, Poly((1, 1)))
        p1 = bracket * _X2M1
        p0 = r * _rf(Poly((-1, 1))) * (be * s) - _rf(m * s)
        return LinDiffOp((p0, p1, _X2M1))
    k, m = spec.k, spec.m
    eta = laguerre_neg(m, k - 1)
    r = _rf(laguerre_neg(m - 1, k), eta)
    p1 = _rf(Poly((-k - 1, 1))) + r * _rf(Poly((0, 2)))
    p0 = r * (2 * k) - _rf(m)
    return LinDiffOp((p0, p1, -X))


@lru_cache(maxsize=None)
def lowering(spec: FamilySpec) -> LinDiffOp:
    check_structure(spec)
    if spec.kind is Kind.X1_JACOBI:
        abc = jacobi_abc(spec)
        xc, xb = Poly((-abc.c, 1)), Poly((-abc.b, 1))
        return from_chain([_rf(xc * xc, xb), D, _rf(1, xc)])
    if spec.kind is Kind.X1_LAGUERRE:
        k = spec.k
        xk1, xk = Poly((k + 1, 1)), Poly((k, 1))
        return from_chain([_rf(-(xk1 * xk1), xk), D, _rf(1, xk1)])
    if spec.kind is Kind.XM_JACOBI:
        al, be, m, eta, phi = _xm_jacobi_parts(spec)
        pre = _rf(phi, eta)
        w = _rf(jacobi(m - 1, -al - 1, be + 1), phi) * ((be - al + m - 1) / 2)
        return from_chain([pre, D]) + LinDiffOp.mul(-(pre * w))
    k, m = spec.k, spec.m
    eta, phi = laguerre_neg(m, k - 1), laguerre_neg(m, k)
    pre = -_rf(phi, eta)
    w = _rf(laguerre_neg(m - 1, k + 1), phi)
    return from_chain([pre, D]) + LinDiffOp.mul(-(pre * w))


@lru_cache(maxsize=None)
def raising(spec: FamilySpec) -> LinDiffOp:
    check_structure(spec)
    if spec.kind is Kind.X1_JACOBI:
        abc = jacobi_abc(spec)
        a, b = abc.a, abc.b
        pre = _rf(_X2M1 * Poly((-b, 1)), Poly((-abc.c, 1)))
        zeroth = pre * a - _rf(Poly((1, -2 * b, 1)).scale(a))
        return from_chain([pre, D]) + LinDiffOp.mul(zeroth)
    if spec.kind is Kind.X1_LAGUERRE:
        k = spec.k
        pre = _rf(Poly((0, k, 1)), Poly((k + 1, 1)))  # x(x+k)/(x+k+1)
        return from_chain([pre, D]) + LinDiffOp.mul(-pre + _rf(k))
    if spec.kind is Kind.XM_JACOBI:
        al, be, m, eta, phi = _xm_jacobi_parts(spec)
        pre = _rf(_X2M1 * eta, phi)
        inner = (
            _rf(jacobi(m - 1, -al, be), eta) * ((be - al + m - 1) / 2)
            + _rf(al + 1, Poly((1, -1)))
            - _rf(be + 1, Poly((1, 1)))
        )
        return from_chain([pre, D]) + LinDiffOp.mul(-(pre * inner))
    k, m = spec.k, spec.m
    ratio = _rf(laguerre_neg(m, k - 1), laguerre_neg(m, k))
    return from_chain([ratio * _rf(X), D]) + LinDiffOp.mul(ratio * (1 + k) - _rf(X))


def classical_operator(spec: FamilySpec) -> LinDiffOp:
    """The m = 0 operator: (x^2-1)D^2 + ((a+b+2)x + a-b)D or -xD^2 + (x-k-1)D."""
    if spec.is_jacobi:
        al, be = spec.alpha, spec.beta
        return LinDiffOp((0, Poly((al - be, al + be + 2)), _X2M1))
    return LinDiffOp((0, Poly((-spec.k - 1, 1)), -X))


def base_closed_form(spec: FamilySpec) -> Poly:
    """Monic ground state predicted by the lowering operator's kernel."""
    if spec.kind is Kind.X1_JACOBI:
        return Poly((-jacobi_abc(spec).c, 1))
    if spec.kind is Kind.X1_LAGUERRE:
        return Poly((spec.k + 1, 1))
    if spec.kind is Kind.XM_JACOBI:
        return jacobi(spec.m, -spec.alpha - 2, spec.beta).monic()
    return laguerre_neg(spec.m, spec.k).monic()


# -- spectra --------------------------------------------------------------

def eigenvalue(spec: FamilySpec, n: int, *, extend: bool = False) -> Fraction:
    """E(n) = (n-m)(alpha+beta+n-m+1) (Jacobi) or n-m (Laguerre).

    ``extend=True`` evaluates the formula below the family's first degree.
    """
    if n < spec.m and not extend:
        raise IndexBelowFamily(f"n = {n} < m = {spec.m} for {spec.label()}")
    u = n - spec.m
    if spec.is_jacobi:
        return Fraction(u) * (spec.alpha + spec.beta + u + 1)
    return Fraction(u)


def si_shift_constant(spec: FamilySpec, k_step: int) -> Fraction:
    """R_j = alpha + beta + 2j for Jacobi kinds; 1 for Laguerre kinds."""
    if spec.is_jacobi:
        return spec.alpha + spec.beta + 2 * k_step
    return Fraction(1)


def chain_offset(spec: FamilySpec, j: int) -> Fraction:
    """Constant added to B_{j-1} A_{j-1} to form H^j: (j-1)(j+alpha+beta) or j-1."""
    if spec.is_jacobi:
        return Fraction(j - 1) * (j + spec.alpha + spec.beta)
    return Fraction(j - 1)


def generation_prefactor(spec: FamilySpec, n: int) -> int:
    """2^(n-m) (n-m)! for Jacobi kinds, (n-m)! for Laguerre kinds."""
    u = n - spec.m
    return (2 ** u if spec.is_jacobi else 1) * factorial(u)


def _startup_c_check() -> None:
    # H (x - c) = 0 with c = b + 1/a on a small grid

    for al, be in ((Fraction(1), Fraction(2)), (Fraction(1, 2), Fraction(5, 2)), (Fraction(3, 2), Fraction(1, 2))):
        spec = FamilySpec.x1_jacobi(al, be)
        c = jacobi_abc(spec).c
        assert apply(hamiltonian(spec), Poly((-c, 1))).is_zero(), "c = b + 1/a consistency failed"


_startup_c_check()
