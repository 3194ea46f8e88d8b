"""Linear differential operators ``sum_j c_j(x) D^j`` with rational-function coefficients.

Operators are stored expanded, one canonical :class:`RatFunc` per derivative
order, so equality and linear combination are structural.  Composition uses
the Leibniz rule.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Sequence, Union

from .ratcore import Poly, Q, RatFunc, poly_gcd

Coeff = Union[RatFunc, Poly, int, Fraction]


class _Deriv:
    __repr__ = lambda self: "D"  # noqa: E731


#: Marker for ``d/dx`` inside :func:`from_chain`.
D = _Deriv()


class LinDiffOp:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Coeff] = ()):
        cs = [RatFunc.lift(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[RatFunc, ...] = tuple(cs)

    @classmethod
    def mul(cls, f: Coeff) -> "LinDiffOp":
        """Multiplication by ``f``."""
        return cls((f,))

    @classmethod
    def identity(cls) -> "LinDiffOp":
        return cls((1,))

    @classmethod
    def deriv(cls, order: int = 1) -> "LinDiffOp":
        return cls([0] * order + [1])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> RatFunc:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return RatFunc.lift(0)

    def __eq__(self, other):
        if not isinstance(other, LinDiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        parts = [f"[{c}]*D^{j}" for j, c in enumerate(self.coeffs) if not c.is_zero()]
        return "LinDiffOp(" + (" + ".join(parts) or "0") + ")"

    def __call__(self, f) -> RatFunc:
        return apply(self, f)

    def __matmul__(self, other: "LinDiffOp") -> "LinDiffOp":
        return compose(self, other)

    def __add__(self, other):
        other = _as_op(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return LinDiffOp(self.coeff(j) + other.coeff(j) for j in range(n))

    __radd__ = __add__

    def __neg__(self):
        return LinDiffOp(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _as_op(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_op(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, c):
        """Scalar (or rational-function) left multiplication ``c * op``."""
        if isinstance(c, (int, Fraction, Poly, RatFunc)) and not isinstance(c, bool):
            c = RatFunc.lift(c)
            return LinDiffOp(c * a for a in self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def to_json(self) -> list[dict]:
        return [
            {"order": j, "num": c.num.to_json(), "den": c.den.to_json()}
            for j, c in enumerate(self.coeffs)
        ]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "LinDiffOp":
        order = max((d["order"] for d in data), default=-1)
        cs: list[Coeff] = [0] * (order + 1)
        for d in data:
            cs[d["order"]] = RatFunc(Poly.from_json(d["num"]), Poly.from_json(d["den"]))
        return cls(cs)


def _as_op(v):
    if isinstance(v, LinDiffOp):
        return v
    if isinstance(v, (int, Fraction, Poly, RatFunc)) and not isinstance(v, bool):
        return LinDiffOp.mul(v)
    return None


def apply(op: LinDiffOp, f) -> RatFunc:
    f = RatFunc.lift(f)
    acc = RatFunc.lift(0)
    for c in op.coeffs:
        if not c.is_zero():
            acc = acc + c * f
        f = f.derivative()
    return acc


def compose(outer: LinDiffOp, inner: LinDiffOp) -> LinDiffOp:
    """``outer o inner`` via D^i (b D^j) = sum_l C(i,l) b^{(l)} D^{i-l+j}."""
    if outer.is_zero() or inner.is_zero():
        return LinDiffOp()
    out = [RatFunc.lift(0)] * (outer.order + inner.order + 1)
    for j, b in enumerate(inner.coeffs):
        if b.is_zero():
            continue
        derivs = [b]
        for _ in range(outer.order):
            derivs.append(derivs[-1].derivative())
        for i, a in enumerate(outer.coeffs):
            if a.is_zero():
                continue
            for l in range(i + 1):
                bl = derivs[l]
                if bl.is_zero():
                    continue
                out[i - l + j] = out[i - l + j] + a * bl * comb(i, l)
    return LinDiffOp(out)


def lincomb(terms: Iterable[tuple[object, LinDiffOp]]) -> LinDiffOp:
    acc = LinDiffOp()
    for c, op in terms:
        acc = acc + op * Q(c)
    return acc


def op_equals(p: LinDiffOp, q: LinDiffOp) -> bool:
    return p.coeffs == q.coeffs


def from_chain(chain: Sequence[object]) -> LinDiffOp:
    """Compose a product written left to right, e.g. ``[g, D, h]`` is ``g * d/dx * h``.

    Items are :data:`D` or anything liftable to a multiplication operator.
    """
    if not chain:
        raise ValueError("empty operator chain")
    op = None
    for item in chain:
        nxt = LinDiffOp.deriv(1) if item is D else LinDiffOp.mul(item)
        op = nxt if op is None else compose(op, nxt)
    return op


def common_denominator(op: LinDiffOp) -> Poly:
    """Monic least common multiple of the coefficient denominators."""
    lcm = Poly.const(1)
    for c in op.coeffs:
        g = poly_gcd(lcm, c.den)
        lcm = (lcm * c.den).exact_div(g).monic()
    return lcm


def difference_witness(p: LinDiffOp, q: LinDiffOp) -> list[dict]:
    """Serialized ``p - q`` for reports."""
    return (p - q).to_json()
