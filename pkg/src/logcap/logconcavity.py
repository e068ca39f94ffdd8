"""Log-concavity checkers: sequences, coefficient inequalities, and sampling.

Three trust levels coexist here.

* Exact sequence tests (`lc_member`, `sequence_log_concave`, `n_newton_check`,
  `slc_exact_univariate`) are rational arithmetic and decide their question.
* `real_rooted_check` is an exact Sturm count on the square-free part.
* `slc_sampled` is a falsifier: it evaluates the Hessian of log of every
  nonzero mixed derivative at log-uniform sample points.  A refutation comes
  with a concrete witness; a pass is only a certificate in the univariate
  and bivariate-homogeneous cases, where exact routes settle the question.

A sequence with an internal zero between two positive entries is declared
not log-concave even when the literal inequalities hold (they compare
products that are both zero); leading and trailing zeros are allowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polynomials import (
    MultiIndex,
    SparsePoly,
    as_fraction,
    cartesian_exponents,
    dehomogenize,
)

CERTIFIED = "certified"
SAMPLED_PASS = "sampled-pass"
REFUTED = "refuted"

EIGENVALUE_TOLERANCE = 1e-8


# ----------------------------------------------------------------------
# sequence tests


def lc_member(entries: Sequence, *, float_slack: float = 1e-12) -> bool:
    """Membership in the log-concave cone: d_i >= 0 and d_i^2 >= d_{i-1} d_{i+1}.

    Exact when every entry is rational; float entries are compared with a
    relative slack.
    """
    values = list(entries)
    exact = all(not isinstance(v, float) for v in values)
    if exact:
        d = [as_fraction(v) for v in values]
        if any(v < 0 for v in d):
            return False
        return all(d[i] * d[i] >= d[i - 1] * d[i + 1] for i in range(1, len(d) - 1))
    d = [float(v) for v in values]
    if any(v < -float_slack for v in d):
        return False
    for i in range(1, len(d) - 1):
        lhs, rhs = d[i] * d[i], d[i - 1] * d[i + 1]
        if lhs < rhs - float_slack * max(1.0, abs(lhs), abs(rhs)):
            return False
    return True


def _support_contiguous(d: Sequence[Fraction]) -> bool:
    positive = [i for i, v in enumerate(d) if v > 0]
    if not positive:
        return True
    lo, hi = positive[0], positive[-1]
    return all(d[i] > 0 for i in range(lo, hi + 1))


def sequence_log_concave(entries: Sequence) -> bool:
    """Exact log-concavity of a nonnegative sequence, internal zeros rejected."""
    d = [as_fraction(v) for v in entries]
    if any(v < 0 for v in d):
        return False
    if not _support_contiguous(d):
        return False
    return all(d[i] * d[i] >= d[i - 1] * d[i + 1] for i in range(1, len(d) - 1))


def binomial_normalized_sequence(r: SparsePoly, n: int) -> list[Fraction]:
    """Coefficients a_i / C(n, i) for i = 0..n, exactly."""
    if r.num_vars != 1:
        raise ValueError("expected a univariate polynomial")
    if n < r.total_degree():
        raise ValueError(f"normalization order {n} is below degree {r.total_degree()}")
    return [r.coefficient((i,)) / math.comb(n, i) for i in range(n + 1)]


def n_newton_check(r: SparsePoly, n: int) -> bool:
    """Log-concavity of the binomial-normalized coefficient sequence."""
    return sequence_log_concave(binomial_normalized_sequence(r, n))


def derivative_sequence(coefficients: Sequence) -> list[Fraction]:
    """G(i) = a_i * i!, the derivatives at zero of sum a_i t^i."""
    return [as_fraction(a) * math.factorial(i) for i, a in enumerate(coefficients)]


def slc_exact_univariate(coefficients: Sequence) -> bool:
    """Exact strong log-concavity of a univariate polynomial via its derivative sequence."""
    return sequence_log_concave(derivative_sequence(coefficients))


# ----------------------------------------------------------------------
# Sturm sequences


def dense_coefficients(r: SparsePoly) -> list[Fraction]:
    if r.num_vars != 1:
        raise ValueError("expected a univariate polynomial")
    if r.is_zero():
        return []
    coeffs = [Fraction(0)] * (r.total_degree() + 1)
    for e, c in r.terms.items():
        coeffs[e[0]] = c
    return coeffs


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    rem = list(a)
    while len(rem) >= len(b) and rem:
        factor = rem[-1] / b[-1]
        shift = len(rem) - len(b)
        for i, coef in enumerate(b):
            rem[shift + i] -= factor * coef
        rem.pop()
        _trim(rem)
    return rem


def _poly_derivative(p: list[Fraction]) -> list[Fraction]:
    return [c * i for i, c in enumerate(p)][1:]


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_rem(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_div_exact(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    rem = list(a)
    while len(rem) >= len(b) and rem:
        factor = rem[-1] / b[-1]
        shift = len(rem) - len(b)
        quot[shift] = factor
        for i, coef in enumerate(b):
            rem[shift + i] -= factor * coef
        rem.pop()
        _trim(rem)
    return quot


def _sign_variations(signs: list[int]) -> int:
    filtered = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(filtered, filtered[1:]) if a * b < 0)


def count_real_roots(r: SparsePoly) -> int:
    """Number of distinct real roots, by a Sturm chain over the whole line."""
    coeffs = _trim(dense_coefficients(r))
    if not coeffs:
        raise ValueError("the zero polynomial has no root count")
    if len(coeffs) == 1:
        return 0
    chain = [coeffs, _trim(_poly_derivative(coeffs))]
    while chain[-1] and len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    if not chain[-1]:
        chain.pop()
    at_plus = [1 if p[-1] > 0 else -1 for p in chain]
    at_minus = [(1 if p[-1] > 0 else -1) * (-1) ** (len(p) - 1) for p in chain]
    return _sign_variations(at_minus) - _sign_variations(at_plus)


def real_rooted_check(r: SparsePoly) -> bool:
    """All roots real, decided exactly on the square-free part.

    Nonnegative coefficients already exclude positive roots, so for the
    polynomials in this package this certifies nonpositive real roots.
    """
    coeffs = _trim(dense_coefficients(r))
    if not coeffs:
        raise ValueError("the zero polynomial is excluded")
    if len(coeffs) <= 2:
        return True
    square_free = _poly_div_exact(coeffs, _poly_gcd(coeffs, _trim(_poly_derivative(coeffs))))
    poly = SparsePoly(1, {(i,): c for i, c in enumerate(square_free) if c != 0})
    return count_real_roots(poly) == len(_trim(square_free)) - 1


# ----------------------------------------------------------------------
# sampled strong log-concavity


@dataclass(frozen=True)
class SLCWitness:
    order: MultiIndex
    point: tuple[float, ...]
    eigenvalue: float

    def to_dict(self) -> dict:
        return {"order": list(self.order), "point": list(self.point),
                "eigenvalue": self.eigenvalue}


@dataclass(frozen=True)
class SLCVerdict:
    """Outcome of a strong log-concavity check.

    `certified` and `refuted` are decisions; `sampled-pass` only says the
    falsifier found nothing at the given sample budget.
    """

    status: str
    witness: SLCWitness | None
    samples: int
    seed: int
    method: str
    orders_checked: int

    def to_dict(self) -> dict:
        return {"status": self.status,
                "witness": self.witness.to_dict() if self.witness else None,
                "samples": self.samples, "seed": self.seed,
                "method": self.method, "orders_checked": self.orders_checked}


def _term_arrays(q: SparsePoly) -> tuple[np.ndarray, np.ndarray]:
    items = q.terms_sorted()
    exponents = np.array([[float(v) for v in e] for e, _ in items])
    log_coeffs = np.array([math.log(c.numerator) - math.log(c.denominator) for _, c in items])
    return exponents, log_coeffs


def _log_hessian_batch(q: SparsePoly, points: np.ndarray) -> np.ndarray:
    """Hessians of log q at each positive point, shape (samples, m, m)."""
    exponents, log_coeffs = _term_arrays(q)
    m = q.num_vars
    with np.errstate(over="ignore"):
        t = np.exp(np.log(points) @ exponents.T + log_coeffs)  # (s, k) term values
    qv = t.sum(axis=1)
    first = t @ exponents  # (s, m): sum_k R_ki T_k
    second = np.einsum("sk,ki,kj->sij", t, exponents, exponents)
    idx = np.arange(m)
    second[:, idx, idx] -= first  # d_ii needs R_i (R_i - 1)
    numer = second * qv[:, None, None] - first[:, :, None] * first[:, None, :]
    scale = qv[:, None, None] ** 2 * points[:, :, None] * points[:, None, :]
    return numer / scale


def _sampled_refutation(p: SparsePoly, points: np.ndarray,
                        tolerance: float) -> tuple[SLCWitness | None, int]:
    orders_checked = 0
    for order in cartesian_exponents(p.max_degrees()):
        q = p.partial_derivative(order)
        if q.is_zero():
            continue
        orders_checked += 1
        hessians = _log_hessian_batch(q, points)
        eigenvalues = np.linalg.eigvalsh(hessians)[:, -1]
        scale = 1.0 + np.abs(hessians).max(axis=(1, 2))
        bad = np.nonzero(eigenvalues > tolerance * scale)[0]
        if bad.size:
            k = int(bad[0])
            witness = SLCWitness(order, tuple(float(v) for v in points[k]),
                                 float(eigenvalues[k]))
            return witness, orders_checked
    return None, orders_checked


def _exact_witness_univariate(p: SparsePoly) -> SLCWitness:
    """Deterministic witness for a univariate polynomial that fails the exact test."""
    degree = p.total_degree()
    grid = [Fraction(0)] + [Fraction(1, 2 ** k) for k in range(40, -1, -1)] \
        + [Fraction(j, 4) for j in range(5, 33)]
    for order in range(degree + 1):
        q = p.partial_derivative((order,))
        if q.is_zero():
            break
        d1 = q.partial_derivative((1,))
        d2 = d1.partial_derivative((1,))
        for t in grid:
            qv = q.evaluate_exact([t])
            if qv <= 0:
                continue
            numer = d2.evaluate_exact([t]) * qv - d1.evaluate_exact([t]) ** 2
            if numer > 0:
                return SLCWitness((order,), (float(t),), float(numer / qv ** 2))
    raise RuntimeError("exact refutation without a locatable witness")


def _nsd_violation_exact(q: SparsePoly, point: Sequence[Fraction]) -> Fraction | None:
    """For bivariate q: positive-definite part of the log-Hessian at an exact point.

    Returns a positive rational proxy when the Hessian has a positive
    eigenvalue there (exact 2x2 test), else None.
    """
    qv = q.evaluate_exact(point)
    if qv <= 0:
        return None
    qx = q.partial_derivative((1, 0)).evaluate_exact(point)
    qy = q.partial_derivative((0, 1)).evaluate_exact(point)
    qxx = q.partial_derivative((2, 0)).evaluate_exact(point)
    qyy = q.partial_derivative((0, 2)).evaluate_exact(point)
    qxy = q.partial_derivative((1, 1)).evaluate_exact(point)
    n00 = qxx * qv - qx * qx
    n11 = qyy * qv - qy * qy
    n01 = qxy * qv - qx * qy
    if n00 > 0:
        return n00 / qv ** 2
    if n11 > 0:
        return n11 / qv ** 2
    det = n00 * n11 - n01 * n01
    if det < 0:
        return -det / qv ** 4
    return None


def _exact_witness_bivariate(p: SparsePoly) -> SLCWitness:
    grid = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(4), Fraction(1, 4),
            Fraction(3, 2), Fraction(2, 3), Fraction(1, 8), Fraction(8)]
    for order in cartesian_exponents(p.max_degrees()):
        q = p.partial_derivative(order)
        if q.is_zero():
            continue
        for x in grid:
            for y in grid:
                proxy = _nsd_violation_exact(q, (x, y))
                if proxy is not None and proxy > 0:
                    hess = _log_hessian_batch(q, np.array([[float(x), float(y)]]))
                    eig = float(np.linalg.eigvalsh(hess)[0, -1])
                    return SLCWitness(order, (float(x), float(y)), eig)
    raise RuntimeError("exact refutation without a locatable witness")


def slc_sampled(p: SparsePoly, samples: int = 200, seed: int = 0,
                tolerance: float = EIGENVALUE_TOLERANCE) -> SLCVerdict:
    """Falsify strong log-concavity by sampling; certify it where exact routes exist.

    Every nonzero mixed derivative is tested at `samples` points drawn
    log-uniformly from e^{[-3,3]^m} with a counter-based generator, so the
    verdict is deterministic for a given seed.
    """
    if p.is_zero():
        raise ValueError("strong log-concavity of the zero polynomial is undefined")
    m = p.num_vars
    rng = np.random.Generator(np.random.Philox(seed))
    points = np.exp(rng.uniform(-3.0, 3.0, size=(samples, m)))

    witness, orders_checked = _sampled_refutation(p, points, tolerance)

    exact_known: bool | None = None
    method = "sampled"
    if m == 1:
        exact_known = slc_exact_univariate(dense_coefficients(p))
        method = "exact-univariate"
    elif m == 2 and p.is_homogeneous():
        exact_known = n_newton_check(dehomogenize(p), p.total_degree())
        method = "exact-bivariate-homogeneous"

    if witness is not None:
        return SLCVerdict(REFUTED, witness, samples, seed, method, orders_checked)
    if exact_known is True:
        return SLCVerdict(CERTIFIED, None, samples, seed, method, orders_checked)
    if exact_known is False:
        finder = _exact_witness_univariate if m == 1 else _exact_witness_bivariate
        return SLCVerdict(REFUTED, finder(p), samples, seed, method, orders_checked)
    return SLCVerdict(SAMPLED_PASS, None, samples, seed, method, orders_checked)


def hstable_fixtures():
    """The catalog of polynomials that are H-stable by construction."""
    from .fixtures import stable_catalog

    return stable_catalog()
