"""Exact rationals, dense univariate polynomials and reduced rational functions.

Scalars are :class:`fractions.Fraction`.  Polynomials are stored as tuples of
coefficients in ascending degree with no trailing zeros, so the zero
polynomial is the empty tuple.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]


def Q(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction (never floats)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rational_to_str(q: Fraction) -> str:
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "Poly":
        return cls([0] * degree + [c])

    @classmethod
    def linear(cls, a: Scalar, b: Scalar) -> "Poly":
        """The polynomial ``a*x + b``."""
        return cls((b, a))

    # -- structure -------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(1 / self.lc)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[rational_to_str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{rational_to_str(abs(c))}*{mono}"
            else:
                body = rational_to_str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c: Scalar) -> "Poly":
        c = Q(c)
        return Poly(c * a for a in self.coeffs)

    def derivative(self, order: int = 1) -> "Poly":
        cs = list(self.coeffs)
        for _ in range(order):
            cs = [i * cs[i] for i in range(1, len(cs))]
        return Poly(cs)

    def __call__(self, x):
        """Horner evaluation; exact for rationals, works for floats too."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def divrem(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by the zero polynomial")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) <= dd:
            return Poly(), self
        inv_lc = 1 / divisor.lc
        dcs = divisor.coeffs
        quot = [Fraction(0)] * (len(rem) - dd)
        for i in range(len(rem) - dd - 1, -1, -1):
            q = rem[i + dd] * inv_lc
            quot[i] = q
            if q:
                for j in range(dd + 1):
                    rem[i + j] -= q * dcs[j]
        return Poly(quot), Poly(rem[:dd])

    def __divmod__(self, other):
        return self.divrem(other)

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divrem(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def compose_linear(self, a: Scalar, b: Scalar) -> "Poly":
        """``p(a*x + b)``."""
        lin = Poly.linear(a, b)
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * lin + Poly.const(c)
        return out

    # -- serialization ---------------------------------------------------
    def to_json(self) -> list[str]:
        return [rational_to_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(Q(s) for s in data)


def _as_poly(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return Poly.const(v)
    return None


X = Poly((0, 1))
ONE = Poly((1,))
ZERO = Poly()


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    while not q.is_zero():
        p, q = q, p.divrem(q)[1]
    return p.monic()


def square_free(p: Poly) -> Poly:
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic() if g.degree > 0 else p.monic()


class RatFunc:
    """Reduced rational function ``num/den`` with a monic denominator.

    Canonical form makes equality structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _canonical: bool = False):
        num = _as_poly(num) if not isinstance(num, Poly) else num
        if num is None:
            raise TypeError("numerator must be a polynomial or rational")
        if den is None:
            den = ONE
            _canonical = True
        elif not isinstance(den, Poly):
            den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _canonical:
            if num.is_zero():
                den = ONE
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lc = den.lc
                if lc != 1:
                    num = num.scale(1 / lc)
                    den = den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, Poly):
            return cls(v, ONE, _canonical=True)
        return cls(Poly.const(Q(v)), ONE, _canonical=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, (Poly, int, Fraction)):
                other = RatFunc.lift(other)
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.is_poly():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __add__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        if other.is_poly():
            return RatFunc(self.num + other.num * self.den, self.den, _canonical=True)
        if self.is_poly():
            return RatFunc(self.num * other.den + other.num, other.den, _canonical=True)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return RatFunc.lift(0)
            return RatFunc(self.num.scale(other), self.den, _canonical=True)
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if self.is_poly() and other.is_poly():
            return RatFunc(self.num * other.num, ONE, _canonical=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def derivative(self) -> "RatFunc":
        if self.is_poly():
            return RatFunc(self.num.derivative(), ONE, _canonical=True)
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RatFunc":
        return cls(Poly.from_json(data["num"]), Poly.from_json(data["den"]))


def _as_ratfunc(v):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, Poly) or (isinstance(v, (int, Fraction)) and not isinstance(v, bool)):
        return RatFunc.lift(v)
    return None


def as_polynomial(f: RatFunc) -> Poly | None:
    """The polynomial equal to ``f`` if its denominator divides out, else None."""
    q, r = f.num.divrem(f.den)
    if not r.is_zero():
        return None
    return q


# -- Sturm sequences ------------------------------------------------------

def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2].divrem(seq[-1])[1]
        if r.is_zero():
            break
        # keep only the sign information of the remainder; normalise magnitude
        seq.append(-r.scale(1 / abs(r.lc)))
    return seq


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _sign_changes(signs: Iterable[int]) -> int:
    changes, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            changes += 1
        last = s
    return changes


def _signs_at(seq: list[Poly], x) -> list[int]:
    if x == math.inf:
        return [_sign(q.lc) for q in seq]
    if x == -math.inf:
        return [_sign(q.lc) * (-1 if q.degree % 2 else 1) for q in seq]
    return [_sign(q(x)) for q in seq]


def count_real_roots(p: Poly, lo=-math.inf, hi=math.inf) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi).

    Bounds are rationals or +-inf (``None`` is accepted for an infinite bound).
    """
    if p.is_zero():
        raise ValueError("count_real_roots of the zero polynomial")
    lo = -math.inf if lo is None else lo
    hi = math.inf if hi is None else hi
    if not isinstance(lo, float):
        lo = Q(lo)
    if not isinstance(hi, float):
        hi = Q(hi)
    if lo >= hi:
        return 0
    q = square_free(p)
    if q.degree <= 0:
        return 0
    # strip roots sitting exactly on finite endpoints so the interval is open
    for end in (lo, hi):
        if not isinstance(end, float) and q(end) == 0:
            q = q.exact_div(Poly.linear(1, -end))
    if q.degree <= 0:
        return 0
    seq = sturm_sequence(q)
    return _sign_changes(_signs_at(seq, lo)) - _sign_changes(_signs_at(seq, hi))


def isolate_real_roots(p: Poly, lo, hi, width) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational brackets (a, b) of width <= ``width``, one root each, in (lo, hi)."""
    lo, hi, width = Q(lo), Q(hi), Q(width)
    q = square_free(p)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_real_roots(q, a, b)
        if n == 0:
            continue
        if n == 1 and b - a <= width:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if q(mid) == 0:
            # nudge the split point off the root
            mid = (a + 3 * b) / 4 if q((a + 3 * b) / 4) != 0 else (3 * a + b) / 4
        stack.append((mid, b))
        stack.append((a, mid))
    out.sort()
    return out
