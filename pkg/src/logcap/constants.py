"""The named constants of the inequality suite, exact where possible.

vdw(n) = n!/n^n and g(k) = ((k-1)/k)^(k-1) are exact rationals.  The
truncated-exponential constant L(n) = 1 / inf_{t>0} exp_n(t)/t is irrational;
it is produced with a certified rational bracket obtained by bisecting the
exact stationarity polynomial and closing the gap with convexity tangents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def vdw(n: int) -> Fraction:
    """n!/n^n, with vdw(0) = 1."""
    if n < 0:
        raise ValueError("vdw is defined for nonnegative integers")
    if n == 0:
        return Fraction(1)
    return Fraction(math.factorial(n), n ** n)


def vdw_product(exponents: Sequence[int]) -> Fraction:
    value = Fraction(1)
    for r in exponents:
        value *= vdw(int(r))
    return value


def g_constant(k: int) -> Fraction:
    """((k-1)/k)^(k-1); decreases from 1 toward 1/e."""
    if k < 1:
        raise ValueError("g is defined for k >= 1")
    if k == 1:
        return Fraction(1)
    return Fraction(k - 1, k) ** (k - 1)


def truncated_exp(n: int, t: Fraction) -> Fraction:
    """exp_n(t) = sum of t^j / j! for j <= n, exactly (Horner form)."""
    value = Fraction(1, math.factorial(n))
    for j in range(n - 1, -1, -1):
        value = value * t + Fraction(1, math.factorial(j))
    return value


def _stationarity(n: int, t: Fraction) -> Fraction:
    """t * exp_n'(t) - exp_n(t); its unique positive root locates the infimum."""
    value = Fraction(0)
    for j in range(n, 1, -1):
        value = (value + Fraction(j - 1, math.factorial(j))) * t
    return value * t - 1


def e_lower(terms: int = 30) -> Fraction:
    """Partial sum of 1/j!, a strict lower bound on e."""
    return truncated_exp(terms, Fraction(1))


def e_upper(terms: int = 30) -> Fraction:
    """Partial sum plus the tail bound 1/(K! K), a strict upper bound on e."""
    return truncated_exp(terms, Fraction(1)) + Fraction(1, math.factorial(terms) * terms)


def inv_e_bounds(terms: int = 30) -> tuple[Fraction, Fraction]:
    """Rational bracket around 1/e from the alternating series."""
    k = terms if terms % 2 == 1 else terms + 1
    low = sum(Fraction((-1) ** j, math.factorial(j)) for j in range(k + 1))
    high = low + Fraction(1, math.factorial(k + 1))
    return low, high


@dataclass(frozen=True)
class TruncExpConstant:
    """L(n) with a certified rational bracket: lower <= L(n) <= upper."""

    n: int
    value: float
    lower: Fraction
    upper: Fraction

    def width(self) -> float:
        return float(self.upper - self.lower)


def compute_L(n: int, bisections: int = 30) -> TruncExpConstant:
    """The reciprocal of inf_{t>0} exp_n(t)/t, bracketed exactly.

    For n = 1 the infimum is the limit 1 at t -> infinity, so L(1) = 1.
    Otherwise the stationarity polynomial is negative at 0 and positive at 2,
    and strictly increasing in between, so bisection brackets the minimizer;
    convexity of exp_n(t)/t turns that into a bracket on the infimum.
    """
    if n < 1:
        raise ValueError("L is defined for n >= 1")
    if n == 1:
        one = Fraction(1)
        return TruncExpConstant(1, 1.0, one, one)
    lo, hi = Fraction(0), Fraction(2)
    for _ in range(bisections):
        mid = (lo + hi) / 2
        if _stationarity(n, mid) < 0:
            lo = mid
        else:
            hi = mid
    f_lo = truncated_exp(n, lo) / lo if lo > 0 else None
    f_hi = truncated_exp(n, hi) / hi
    if f_lo is None:  # pragma: no cover - bisection always moves lo off zero
        raise RuntimeError("bisection failed to leave the origin")
    # f is convex; tangents at the bracket ends bound the infimum from below.
    def derivative(t: Fraction) -> Fraction:
        return _stationarity(n, t) / (t * t)

    value_ub = min(f_lo, f_hi)
    value_lb = max(f_lo + derivative(lo) * (hi - lo), f_hi + derivative(hi) * (lo - hi))
    lower = Fraction(1) / value_ub
    upper = Fraction(1) / value_lb
    return TruncExpConstant(n, float((lower + upper) / 2), lower, upper)


def l_exceeds_inv_e(n: int) -> bool:
    """Certified check that L(n) > 1/e, entirely in rational arithmetic.

    L(n) > 1/e is equivalent to inf exp_n(t)/t < e.  The infimum is at most
    the value at t = 1, which is a strict partial sum of the series for e;
    comparing it against a deeper partial sum decides the strict inequality.
    """
    value_at_one = truncated_exp(n, Fraction(1))
    return value_at_one < e_lower(terms=n + 4)


def l_product(n: int) -> float:
    """Product of L(1) ... L(n), the lower-bound constant for inhomogeneous inputs."""
    result = 1.0
    for i in range(1, n + 1):
        result *= compute_L(i).value
    return result
