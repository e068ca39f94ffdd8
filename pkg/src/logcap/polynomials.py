"""Exact sparse multivariate polynomials with nonnegative rational coefficients.

A polynomial in m variables is stored as a dict mapping exponent tuples
(one nonnegative int per variable) to positive Fractions.  Zero coefficients
are never stored, so the zero polynomial is the empty dict.  Everything in
this package lives in the cone of nonnegative coefficients: constructors
reject negative coefficients outright.

Exact arithmetic (add, multiply, derivatives, mixed derivatives at zero)
stays in Fractions; float evaluation is only used by the optimization code,
which works in the log domain to avoid overflow.

Iteration order everywhere is graded lexicographic (total degree first,
then lexicographic), so reports and serialized forms are deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

MultiIndex = tuple[int, ...]

RationalLike = int | str | Fraction


def as_fraction(value: RationalLike) -> Fraction:
    """Convert an int, Fraction, or string like "3/4" / "0.25" to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def grlex_key(exponent: MultiIndex) -> tuple[int, MultiIndex]:
    return (sum(exponent), exponent)


def _log_fraction(q: Fraction) -> float:
    # math.log accepts arbitrarily large ints, so this never overflows.
    return math.log(q.numerator) - math.log(q.denominator)


def _neumaier_sum(values: Iterable[float]) -> float:
    """Compensated summation; keeps relative error near machine epsilon."""
    total = 0.0
    compensation = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            compensation += (total - t) + v
        else:
            compensation += (v - t) + total
        total = t
    return total + compensation


class SparsePoly:
    """Immutable sparse polynomial with positive rational coefficients.

    Instances are treated as frozen after construction; all operations
    return new polynomials, so sharing across threads is safe.
    """

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], RationalLike] | None = None):
        if num_vars < 1:
            raise ValueError("a polynomial needs at least one variable")
        cleaned: dict[MultiIndex, Fraction] = {}
        for exponent, coef in (terms or {}).items():
            key = tuple(int(e) for e in exponent)
            if len(key) != num_vars:
                raise ValueError(f"exponent {key} has length {len(key)}, expected {num_vars}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            value = as_fraction(coef)
            if value < 0:
                raise ValueError(f"negative coefficient {value} at {key}")
            if value == 0:
                continue
            cleaned[key] = cleaned.get(key, Fraction(0)) + value
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("SparsePoly is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, num_vars: int) -> SparsePoly:
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value: RationalLike) -> SparsePoly:
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> SparsePoly:
        if not 0 <= index < num_vars:
            raise ValueError(f"variable index {index} out of range")
        exponent = tuple(1 if i == index else 0 for i in range(num_vars))
        return cls(num_vars, {exponent: 1})

    @classmethod
    def monomial(cls, num_vars: int, exponent: Sequence[int], coef: RationalLike = 1) -> SparsePoly:
        return cls(num_vars, {tuple(exponent): coef})

    @classmethod
    def linear_form(cls, coefficients: Sequence[RationalLike]) -> SparsePoly:
        """Sum of c_i * x_i over the given coefficients (zeros dropped)."""
        m = len(coefficients)
        terms: dict[MultiIndex, RationalLike] = {}
        for i, c in enumerate(coefficients):
            exponent = tuple(1 if j == i else 0 for j in range(m))
            terms[exponent] = c
        return cls(m, terms)

    # ------------------------------------------------------------------
    # structure

    def is_zero(self) -> bool:
        return not self.terms

    def num_terms(self) -> int:
        return len(self.terms)

    def support(self) -> frozenset[MultiIndex]:
        return frozenset(self.terms)

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def terms_sorted(self) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: grlex_key(item[0]))

    def total_degree(self) -> int:
        """Maximum total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def max_degrees(self) -> tuple[int, ...]:
        """Per-variable maximum exponent (all zeros for the zero polynomial)."""
        degs = [0] * self.num_vars
        for exponent in self.terms:
            for i, e in enumerate(exponent):
                if e > degs[i]:
                    degs[i] = e
        return tuple(degs)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def is_multilinear(self) -> bool:
        return all(e <= 1 for exponent in self.terms for e in exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.num_vars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return f"SparsePoly({self.num_vars}, 0)"
        parts = []
        for exponent, coef in self.terms_sorted()[:6]:
            mono = "*".join(f"x{i}^{e}" for i, e in enumerate(exponent) if e) or "1"
            parts.append(f"{coef}*{mono}")
        suffix = " + ..." if len(self.terms) > 6 else ""
        return f"SparsePoly({self.num_vars}, {' + '.join(parts)}{suffix})"

    # ------------------------------------------------------------------
    # arithmetic (stays inside the nonnegative cone)

    def __add__(self, other: SparsePoly) -> SparsePoly:
        if self.num_vars != other.num_vars:
            raise ValueError("cannot add polynomials in different variable counts")
        merged = dict(self.terms)
        for exponent, coef in other.terms.items():
            merged[exponent] = merged.get(exponent, Fraction(0)) + coef
        return SparsePoly(self.num_vars, merged)

    def __mul__(self, other) -> SparsePoly:
        if isinstance(other, SparsePoly):
            return multiply(self, other)
        scalar = as_fraction(other)
        if scalar < 0:
            raise ValueError("scalar must be nonnegative")
        return SparsePoly(self.num_vars, {e: c * scalar for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> SparsePoly:
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = SparsePoly.constant(self.num_vars, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def scale_coefficients(self, scalar: RationalLike) -> SparsePoly:
        return self * scalar

    # ------------------------------------------------------------------
    # evaluation

    def evaluate(self, x: Sequence[float]) -> float:
        """Value at a strictly positive float point, via compensated summation."""
        if len(x) != self.num_vars:
            raise ValueError(f"point has length {len(x)}, expected {self.num_vars}")
        if any(not (xi > 0) for xi in x):
            raise ValueError("evaluation point must be strictly positive")
        xs = [float(xi) for xi in x]
        values = []
        for exponent, coef in self.terms_sorted():
            v = float(coef)
            for xi, e in zip(xs, exponent):
                if e:
                    v *= xi ** e
            values.append(v)
        return _neumaier_sum(values)

    def evaluate_exact(self, x: Sequence[RationalLike]) -> Fraction:
        """Exact value at a rational point (any sign allowed)."""
        if len(x) != self.num_vars:
            raise ValueError(f"point has length {len(x)}, expected {self.num_vars}")
        point = [as_fraction(xi) for xi in x]
        total = Fraction(0)
        for exponent, coef in self.terms.items():
            v = coef
            for xi, e in zip(point, exponent):
                if e:
                    v *= xi ** e
            total += v
        return total

    def log_evaluate(self, y: Sequence[float]) -> float:
        """log p(e^{y_1}, ..., e^{y_m}) by max-shifted log-sum-exp.

        Safe against overflow for any y where the individual dot products
        <R, y> stay finite in float.
        """
        if len(y) != self.num_vars:
            raise ValueError(f"point has length {len(y)}, expected {self.num_vars}")
        if not self.terms:
            raise ValueError("log of the zero polynomial")
        ys = [float(v) for v in y]
        exponents = [sum(e * yi for e, yi in zip(exponent, ys)) + _log_fraction(coef)
                     for exponent, coef in self.terms_sorted()]
        shift = max(exponents)
        return shift + math.log(_neumaier_sum(math.exp(v - shift) for v in exponents))

    # ------------------------------------------------------------------
    # derivatives

    def partial_derivative(self, order: Sequence[int]) -> SparsePoly:
        """Apply (d/dx_1)^{c_1} ... (d/dx_m)^{c_m}; may return the zero polynomial."""
        c = tuple(int(v) for v in order)
        if len(c) != self.num_vars:
            raise ValueError(f"order has length {len(c)}, expected {self.num_vars}")
        if any(v < 0 for v in c):
            raise ValueError("derivative orders must be nonnegative")
        result: dict[MultiIndex, Fraction] = {}
        for exponent, coef in self.terms.items():
            if any(e < ci for e, ci in zip(exponent, c)):
                continue
            factor = 1
            for e, ci in zip(exponent, c):
                for k in range(e, e - ci, -1):
                    factor *= k
            new_exponent = tuple(e - ci for e, ci in zip(exponent, c))
            result[new_exponent] = result.get(new_exponent, Fraction(0)) + coef * factor
        return SparsePoly(self.num_vars, result)

    def der_at_zero(self, target: Sequence[int]) -> Fraction:
        """Mixed derivative at the origin: coefficient times the factorial product.

        Returns 0 exactly when the exponent is outside the support.
        """
        r = tuple(int(v) for v in target)
        if len(r) != self.num_vars:
            raise ValueError(f"target has length {len(r)}, expected {self.num_vars}")
        coef = self.terms.get(r)
        if coef is None:
            return Fraction(0)
        factor = 1
        for e in r:
            factor *= math.factorial(e)
        return coef * factor

    def restrict_to_exponents(self, keep: Iterable[MultiIndex]) -> SparsePoly:
        keep_set = set(keep)
        return SparsePoly(self.num_vars, {e: c for e, c in self.terms.items() if e in keep_set})

    def substitute_zero(self, variables: Iterable[int]) -> SparsePoly:
        """Set the listed variables to zero (drops terms where they appear)."""
        zeroed = set(variables)
        return SparsePoly(
            self.num_vars,
            {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in zeroed)},
        )

    def drop_variables(self, variables: Iterable[int]) -> SparsePoly:
        """Remove variables that appear in no term, reindexing the rest."""
        dropped = set(variables)
        keep = [i for i in range(self.num_vars) if i not in dropped]
        if not keep:
            raise ValueError("cannot drop every variable")
        for exponent in self.terms:
            if any(exponent[i] != 0 for i in dropped):
                raise ValueError("cannot drop a variable that still appears")
        return SparsePoly(len(keep), {tuple(e[i] for i in keep): c for e, c in self.terms.items()})


# ----------------------------------------------------------------------
# free functions on polynomials


def multiply(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """Exact convolution of coefficient maps."""
    if p.num_vars != q.num_vars:
        raise ValueError("cannot multiply polynomials in different variable counts")
    result: dict[MultiIndex, Fraction] = {}
    for ep, cp in p.terms.items():
        for eq, cq in q.terms.items():
            key = tuple(a + b for a, b in zip(ep, eq))
            result[key] = result.get(key, Fraction(0)) + cp * cq
    return SparsePoly(p.num_vars, result)


def product(polys: Iterable[SparsePoly]) -> SparsePoly:
    it = iter(polys)
    try:
        result = next(it)
    except StopIteration:
        raise ValueError("empty product needs an explicit variable count")
    for p in it:
        result = multiply(result, p)
    return result


def homogenize(r: SparsePoly, n: int) -> SparsePoly:
    """Lift a univariate polynomial of degree <= n to two homogeneous variables.

    The coefficient of t^i becomes the coefficient of x^i y^{n-i}.
    """
    if r.num_vars != 1:
        raise ValueError("homogenize expects a univariate polynomial")
    if n < r.total_degree():
        raise ValueError(f"target degree {n} is below the degree {r.total_degree()}")
    return SparsePoly(2, {(e[0], n - e[0]): c for e, c in r.terms.items()})


def dehomogenize(p: SparsePoly) -> SparsePoly:
    """Inverse of homogenize: set the second of two variables to one."""
    if p.num_vars != 2 or not p.is_homogeneous():
        raise ValueError("dehomogenize expects a homogeneous bivariate polynomial")
    return SparsePoly(1, {(e[0],): c for e, c in p.terms.items()})


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """All tuples of `parts` nonnegative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(total: int, parts: Sequence[int]) -> int:
    value = math.factorial(total)
    for p in parts:
        value //= math.factorial(p)
    return value


def split_variables(p: SparsePoly, target: Sequence[int]) -> SparsePoly:
    """Split each variable into a block of fresh variables, one per derivative order.

    Variable i with target entry r_i > 0 is replaced by the sum of r_i fresh
    variables; variables with target entry 0 are set to zero.  The result has
    sum(target) variables, and its mixed derivative at the all-ones exponent
    equals the original mixed derivative at `target` exactly.
    """
    r = tuple(int(v) for v in target)
    if len(r) != p.num_vars:
        raise ValueError(f"target has length {len(r)}, expected {p.num_vars}")
    if any(v < 0 for v in r):
        raise ValueError("target must be nonnegative")
    total = sum(r)
    if total == 0:
        raise ValueError("target must not be the zero vector")

    offsets = []
    offset = 0
    for v in r:
        offsets.append(offset)
        offset += v

    active = [i for i in range(p.num_vars) if r[i] > 0]
    result: dict[MultiIndex, Fraction] = {}
    for exponent, coef in p.terms.items():
        if any(exponent[i] > 0 and r[i] == 0 for i in range(p.num_vars)):
            continue  # that variable was substituted by zero
        partial: dict[tuple[int, ...], Fraction] = {(0,) * total: coef}
        for i in active:
            e = exponent[i]
            block = range(offsets[i], offsets[i] + r[i])
            expanded: dict[tuple[int, ...], Fraction] = {}
            for key, value in partial.items():
                for comp in _compositions(e, r[i]):
                    weight = _multinomial(e, comp)
                    new_key = list(key)
                    for j, add in zip(block, comp):
                        new_key[j] += add
                    tk = tuple(new_key)
                    expanded[tk] = expanded.get(tk, Fraction(0)) + value * weight
            partial = expanded
        for key, value in partial.items():
            result[key] = result.get(key, Fraction(0)) + value
    return SparsePoly(total, result)


def inner_product(p: SparsePoly, q: SparsePoly) -> Fraction:
    """Coefficient-wise inner product of two homogeneous polynomials of equal degree."""
    if p.num_vars != q.num_vars:
        raise ValueError("inner product needs matching variable counts")
    if not p.is_homogeneous() or not q.is_homogeneous():
        raise ValueError("inner product is defined for homogeneous polynomials")
    if p.terms and q.terms and p.total_degree() != q.total_degree():
        raise ValueError("inner product needs equal degrees")
    total = Fraction(0)
    for exponent, coef in p.terms.items():
        other = q.terms.get(exponent)
        if other is not None:
            total += coef * other
    return total


def correlator(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """The cleared-denominator product of p(x) with q at reciprocal arguments.

    For p, q homogeneous of degree n in m variables this is the homogeneous
    degree-(n*m) polynomial whose coefficient at the all-n exponent is the
    coefficient inner product of p and q; its mixed derivative there equals
    (n!)^m times that inner product.
    """
    if p.num_vars != q.num_vars:
        raise ValueError("correlator needs matching variable counts")
    if not p.is_homogeneous() or not q.is_homogeneous():
        raise ValueError("correlator is defined for homogeneous polynomials")
    if p.is_zero() or q.is_zero():
        return SparsePoly.zero(p.num_vars)
    if p.total_degree() != q.total_degree():
        raise ValueError("correlator needs equal degrees")
    n = p.total_degree()
    result: dict[MultiIndex, Fraction] = {}
    for ep, cp in p.terms.items():
        for eq, cq in q.terms.items():
            key = tuple(n + a - b for a, b in zip(ep, eq))
            result[key] = result.get(key, Fraction(0)) + cp * cq
    return SparsePoly(p.num_vars, result)


def reciprocal_product(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    """Multilinear variant of the correlator: clear only one power of each variable.

    Defined for multilinear homogeneous p, q; the mixed derivative of the
    result at the all-ones exponent equals the coefficient inner product.
    """
    if not p.is_multilinear() or not q.is_multilinear():
        raise ValueError("reciprocal_product expects multilinear polynomials")
    if p.num_vars != q.num_vars:
        raise ValueError("reciprocal_product needs matching variable counts")
    if p.is_zero() or q.is_zero():
        return SparsePoly.zero(p.num_vars)
    if not p.is_homogeneous() or not q.is_homogeneous() or p.total_degree() != q.total_degree():
        raise ValueError("reciprocal_product needs equal homogeneous degrees")
    result: dict[MultiIndex, Fraction] = {}
    for ep, cp in p.terms.items():
        for eq, cq in q.terms.items():
            key = tuple(1 + a - b for a, b in zip(ep, eq))
            result[key] = result.get(key, Fraction(0)) + cp * cq
    return SparsePoly(p.num_vars, result)


def change_of_variables(p: SparsePoly, matrix: Sequence[Sequence[RationalLike]]) -> SparsePoly:
    """Substitute x_i <- sum_j A[i][j] y_j for a nonnegative matrix A without zero rows."""
    rows = [[as_fraction(v) for v in row] for row in matrix]
    if len(rows) != p.num_vars:
        raise ValueError(f"matrix has {len(rows)} rows, expected {p.num_vars}")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("matrix rows must have equal length")
    if any(v < 0 for row in rows for v in row):
        raise ValueError("matrix must be entrywise nonnegative")
    if any(all(v == 0 for v in row) for row in rows):
        raise ValueError("matrix must have no zero rows")
    forms = [SparsePoly.linear_form(row) for row in rows]
    result = SparsePoly.zero(width)
    for exponent, coef in p.terms.items():
        term = SparsePoly.constant(width, coef)
        for form, e in zip(forms, exponent):
            for _ in range(e):
                term = multiply(term, form)
        result = result + term
    return result


# ----------------------------------------------------------------------
# the one non-polynomial family: exponentials of positive linear forms


@dataclass(frozen=True)
class ExpLinearFixture:
    """The entire function exp(a_1 x_1 + ... + a_m x_m) with positive rational a_i.

    Its capacity and mixed derivatives have closed forms, which makes it the
    reference family for equality cases of the exponential lower bound.
    """

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(as_fraction(a) for a in self.coefficients)
        if not coeffs:
            raise ValueError("need at least one variable")
        if any(a <= 0 for a in coeffs):
            raise ValueError("linear form coefficients must be positive")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def num_vars(self) -> int:
        return len(self.coefficients)

    def der_at_zero(self, target: Sequence[int]) -> Fraction:
        """Exact mixed derivative at zero: the product of a_i^{r_i}."""
        r = tuple(int(v) for v in target)
        if len(r) != self.num_vars:
            raise ValueError("target length mismatch")
        if any(v < 0 for v in r):
            raise ValueError("target must be nonnegative")
        value = Fraction(1)
        for a, e in zip(self.coefficients, r):
            value *= a ** e
        return value

    def capacity_at(self, target: Sequence[int]) -> float:
        """Closed-form scaled capacity: exp(|R|) times the mixed derivative."""
        r = tuple(int(v) for v in target)
        return math.exp(sum(r)) * float(self.der_at_zero(r))

    def capacity(self) -> float:
        return self.capacity_at((1,) * self.num_vars)

    def evaluate(self, x: Sequence[float]) -> float:
        if len(x) != self.num_vars:
            raise ValueError("point length mismatch")
        return math.exp(sum(float(a) * float(xi) for a, xi in zip(self.coefficients, x)))

    def taylor_truncation(self, degree: int) -> SparsePoly:
        """Polynomial truncation with all terms of total degree <= degree."""
        terms: dict[MultiIndex, Fraction] = {}
        for exponent in _compositions_up_to(degree, self.num_vars):
            coef = Fraction(1)
            for a, e in zip(self.coefficients, exponent):
                coef *= a ** e / math.factorial(e)
            terms[exponent] = coef
        return SparsePoly(self.num_vars, terms)


def _compositions_up_to(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    for t in range(total + 1):
        yield from _compositions(t, parts)


def falling_factorial_ratio(upper: MultiIndex, lower: MultiIndex) -> int:
    """Product over i of upper_i! / lower_i!, for upper >= lower entrywise."""
    value = 1
    for u, l in zip(upper, lower):
        for k in range(l + 1, u + 1):
            value *= k
    return value


def factorial_product(exponent: Sequence[int]) -> int:
    value = 1
    for e in exponent:
        value *= math.factorial(int(e))
    return value


def cartesian_exponents(max_degrees: Sequence[int]) -> Iterable[MultiIndex]:
    """All exponents in the box [0, d_1] x ... x [0, d_m], graded-lex order."""
    box = sorted(itertools.product(*(range(d + 1) for d in max_degrees)), key=grlex_key)
    return box
