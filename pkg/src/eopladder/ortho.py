"""Orthogonality weights from the Pearson relation and numerical Gram matrices.

The weight of every family is ``exp(rate*x) * prod q_i(x)**e_i``; its
log-derivative is compared exactly with ``(p1 - p2') / p2`` of the
Hamiltonian.  Orthogonality is then checked in double precision with
Gauss-Legendre rules, optionally composed with an endpoint-clustering map so
that algebraic endpoint factors such as ``(1-x)**(1/2)`` become smooth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import families as fam
from . import ladderlab
from .classical import gbinom, jacobi
from .diffop import LinDiffOp
from .families import FamilySpec
from .ratcore import ONE, Poly, Q, RatFunc, count_real_roots, isolate_real_roots, rational_to_str

JACOBI_DOMAIN = (-1, 1)
HALF_LINE = (0, math.inf)


class PearsonMismatch(ArithmeticError):
    pass


class NonFiniteIntegrand(ArithmeticError):
    pass


@dataclass(frozen=True)
class WeightSpec:
    exp_rate: Fraction
    factors: tuple[tuple[Poly, Fraction], ...]
    domain: tuple

    def log_derivative(self) -> RatFunc:
        acc = RatFunc.lift(self.exp_rate)
        for base, e in self.factors:
            acc = acc + RatFunc(base.derivative(), base) * e
        return acc

    def check_root_free(self) -> bool:
        lo, hi = self.domain
        hi = None if hi == math.inf else hi
        return all(count_real_roots(base, lo, hi) == 0 for base, _ in self.factors)

    def to_json(self) -> dict:
        return {
            "exp_rate": rational_to_str(self.exp_rate),
            "factors": [{"base": b.to_json(), "exponent": rational_to_str(e)} for b, e in self.factors],
            "domain": [str(self.domain[0]), "inf" if self.domain[1] == math.inf else str(self.domain[1])],
        }


def pearson_check(H: LinDiffOp, W: WeightSpec) -> bool:
    """d/dx log W == (p1 - p2') / p2, exactly."""
    if H.order != 2:
        raise ValueError("pearson_check needs a second-order operator")
    p2, p1 = H.coeff(2), H.coeff(1)
    return W.log_derivative() == (p1 - p2.derivative()) / p2


def builtin_weight(spec: FamilySpec, *, require_admissible: bool = True) -> WeightSpec:
    """Closed-form weight, checked against H by the Pearson relation.

    With ``require_admissible=False`` only structural validity is required; the
    Pearson identity still holds but the weight may have poles in the domain.
    """
    if require_admissible:
        fam.validate(spec)
    else:
        fam.check_structure(spec)
    eta = fam.denominator(spec)
    if spec.is_jacobi:
        factors = [(Poly((1, -1)), spec.alpha), (Poly((1, 1)), spec.beta)]
        rate, domain = Fraction(0), JACOBI_DOMAIN
    else:
        factors = [(Poly((0, 1)), spec.k)]
        rate, domain = Fraction(-1), HALF_LINE
    if eta.degree > 0:
        factors.append((eta, Fraction(-2)))
    W = WeightSpec(rate, tuple((b, Q(e)) for b, e in factors if e != 0), domain)
    if not pearson_check(fam.hamiltonian(spec), W):
        raise PearsonMismatch(f"weight inconsistent with H for {spec.label()}")
    return W


# -- quadrature -----------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple
    mapping: str
    lower_gap: np.ndarray  # x - lo, computed without cancellation
    upper_gap: np.ndarray  # hi - x (inf on the half-line)

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("a rule needs at least 2 nodes")
        if not (np.all(self.lower_gap > 0) and np.all(self.upper_gap > 0)):
            raise ValueError("nodes must lie strictly inside the domain")
        if not np.all(self.weights > 0):
            raise ValueError("quadrature weights must be positive")

    def integrate(self, values: np.ndarray) -> float:
        return math.fsum(self.weights * values)


def _legendre_sign_changes(x: np.ndarray, n: int) -> np.ndarray:
    """Sign changes of P_0..P_n at each x = number of roots of P_n above x."""
    p_prev, p = np.ones_like(x), x.copy()
    last = np.ones_like(x)
    count = np.zeros(x.shape, dtype=int)
    for v in (p,):
        nz = v != 0
        count += (nz & (np.sign(v) != last)).astype(int)
        last = np.where(nz, np.sign(v), last)
    for j in range(1, n):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
        nz = p != 0
        count += (nz & (np.sign(p) != last)).astype(int)
        last = np.where(nz, np.sign(p), last)
    return count


def _legendre_and_derivative(x: np.ndarray, n: int):
    p_prev, p = np.ones_like(x), x.copy()
    for j in range(1, n):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    dp = n * (x * p - p_prev) / (x * x - 1)
    return p, dp


@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on (-1, 1).

    Each root is bracketed by bisection on the Sturm count of the three-term
    recurrence sequence, then polished by Newton steps kept inside the bracket.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    target = n - np.arange(n)  # root i (ascending) has n - i roots >= it
    lo, hi = np.full(n, -1.0), np.full(n, 1.0)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        above = _legendre_sign_changes(mid, n) >= target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(3):
        p, dp = _legendre_and_derivative(x, n)
        step = np.where(dp != 0, p / dp, 0.0)
        cand = x - step
        x = np.where((cand > lo - 1e-15) & (cand < hi + 1e-15), cand, x)
    _, dp = _legendre_and_derivative(x, n)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return x, w


def _cluster_gap_coeffs(p: int) -> list[Fraction]:
    # G(v) = int_0^v w^p (2-w)^p dw as ascending coefficients in v
    cs = [Fraction(0)] * (2 * p + 2)
    for j in range(p + 1):
        cs[p + j + 1] = gbinom(p, j) * 2 ** (p - j) * (-1) ** j / (p + j + 1)
    return cs


def quad_rule(domain, node_count: int, cluster: int = 0, scale=1.0) -> QuadratureRule:
    """Gauss-Legendre rule on (-1, 1) or the half-line (0, inf).

    ``cluster = p > 0`` composes with a map whose Jacobian vanishes like
    ``(1 -+ s)**p`` at the ends of (-1, 1) (and like ``t**p`` at 0 on the
    half-line), so integrable endpoint singularities become smooth.  The
    half-line always uses ``x = scale * t / (1 - t)`` on t in (0, 1).
    """
    s, ws = gauss_legendre(node_count)
    lo, hi = domain
    if (lo, hi) == JACOBI_DOMAIN:
        if cluster == 0:
            return QuadratureRule(s, ws, JACOBI_DOMAIN, "identity", 1.0 + s, 1.0 - s)
        coeffs = [float(c) for c in _cluster_gap_coeffs(cluster)]
        G = lambda v: np.polyval(coeffs[::-1], v)  # noqa: E731
        total = float(sum(Fraction(c) * 2 ** i for i, c in enumerate(_cluster_gap_coeffs(cluster))))
        upper = 2.0 * G(1.0 - s) / total
        lower = 2.0 * G(1.0 + s) / total
        x = np.where(s < 0, -1.0 + lower, 1.0 - upper)
        jac = 2.0 * (1.0 - s * s) ** cluster / total
        return QuadratureRule(x, ws * jac, JACOBI_DOMAIN, f"cluster{cluster}", lower, upper)
    if lo == 0 and hi == math.inf:
        q = cluster + 1
        u = 0.5 * (1.0 + s)
        one_minus_u = 0.5 * (1.0 - s)
        t = u ** q
        # 1 - u^q = (1-u)(1 + u + ... + u^{q-1}), cancellation-free
        one_minus_t = one_minus_u * sum(u ** i for i in range(q))
        x = scale * t / one_minus_t
        w = ws * 0.5 * q * scale * u ** (q - 1) / one_minus_t ** 2
        return QuadratureRule(x, w, HALF_LINE, f"rational{scale:g}_pow{q}", x, np.full_like(x, math.inf))
    raise ValueError(f"unsupported domain {domain}")


def default_rule(spec: FamilySpec, node_count: int = 400) -> QuadratureRule:
    """The rule used by the orthogonality checks: cluster order 3, half-line scale 10."""
    if spec.is_jacobi:
        return quad_rule(JACOBI_DOMAIN, node_count, cluster=3)
    return quad_rule(HALF_LINE, node_count, cluster=3, scale=10.0)


# -- Gram matrices --------------------------------------------------------

def _exact_eval(p: Poly, xs: np.ndarray) -> np.ndarray:
    # exact rational Horner at the (binary-exact) float nodes, rounded once
    out = np.empty(len(xs))
    cs = p.coeffs
    for i, xv in enumerate(xs):
        xf = Fraction(float(xv))
        acc = Fraction(0)
        for c in reversed(cs):
            acc = acc * xf + c
        out[i] = float(acc)
    return out


def log_weight(W: WeightSpec, rule: QuadratureRule) -> np.ndarray:
    """log W at the nodes; linear factors vanishing at an endpoint use the exact gaps."""
    lo, hi = W.domain
    acc = float(W.exp_rate) * rule.nodes
    for base, e in W.factors:
        if base.degree == 1:
            root = -base.coeff(0) / base.coeff(1)
            if root == lo:
                vals = abs(float(base.coeff(1))) * rule.lower_gap
            elif hi != math.inf and root == hi:
                vals = abs(float(base.coeff(1))) * rule.upper_gap
            else:
                vals = np.abs(_exact_eval(base, rule.nodes))
        else:
            vals = np.abs(_exact_eval(base, rule.nodes))
        acc = acc + float(e) * np.log(vals)
    return acc


@dataclass
class GramReport:
    spec: FamilySpec
    degrees: list[int]
    matrix: list[list[float]]
    normalized_offdiag: list[list[float]]
    max_offdiag: float
    node_count: int
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_offdiag < self.tol and all(self.matrix[i][i] > 0 for i in range(len(self.degrees)))

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "label": self.spec.label(),
            "degrees": self.degrees,
            "max_offdiag": self.max_offdiag,
            "node_count": self.node_count,
            "tol": self.tol,
            "pass": self.ok,
        }

    def to_csv_rows(self) -> list[list[str]]:
        rows = [["i", "j", "G", "normalized"]]
        for a, i in enumerate(self.degrees):
            for b, j in enumerate(self.degrees):
                rows.append([str(i), str(j), repr(self.matrix[a][b]), repr(self.normalized_offdiag[a][b])])
        return rows


def gram_matrix(spec: FamilySpec, n_max: int, rule: QuadratureRule, tol: float = 1e-8) -> GramReport:
    W = builtin_weight(spec)
    logw = log_weight(W, rule)
    weights = rule.weights * np.exp(logw)
    if not np.all(np.isfinite(weights)):
        raise NonFiniteIntegrand(f"non-finite weight values for {spec.label()}")
    degrees = list(range(spec.m, n_max + 1))
    vals = [_exact_eval(ladderlab.eop(spec, n), rule.nodes) for n in degrees]
    if not all(np.all(np.isfinite(v)) for v in vals):
        raise NonFiniteIntegrand(f"non-finite polynomial values for {spec.label()}")
    size = len(degrees)
    G = [[0.0] * size for _ in range(size)]
    for a in range(size):
        for b in range(a, size):
            g = math.fsum(weights * vals[a] * vals[b])
            G[a][b] = G[b][a] = g
    norm = [[0.0] * size for _ in range(size)]
    worst = 0.0
    for a in range(size):
        for b in range(size):
            if a != b:
                v = abs(G[a][b]) / math.sqrt(G[a][a] * G[b][b])
                norm[a][b] = v
                worst = max(worst, v)
    return GramReport(spec, degrees, G, norm, worst, len(rule.nodes), tol)


def convergence_delta(r1: GramReport, r2: GramReport) -> float:
    """Largest change in normalized off-diagonal entries between two rules."""
    size = len(r1.degrees)
    return max(
        (abs(r1.normalized_offdiag[a][b] - r2.normalized_offdiag[a][b])
         for a in range(size) for b in range(size) if a != b),
        default=0.0,
    )


def legendre_brackets_exact(n: int, width=Fraction(1, 10 ** 6)) -> list[tuple[Fraction, Fraction]]:
    """Exact Sturm-isolated brackets for the roots of P_n^{(0,0)}."""
    return isolate_real_roots(jacobi(n, 0, 0), -1, 1, width)
