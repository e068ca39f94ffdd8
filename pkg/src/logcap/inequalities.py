"""Verifiers for the capacity / mixed-derivative inequality family.

Each verifier computes both sides of a bound on a concrete instance and
emits a BoundReport with the slack.  Verdicts are always computed; the
`guaranteed` flag tracks provenance, because the lower bounds are theorems
only under strong log-concavity (or H-stability), which cannot be certified
for arbitrary user input.  A violation on a non-guaranteed input is a
finding about the input, not a failure of the suite.

Whenever every constant in a bound is rational and the exponents have a
small common denominator, the comparison is done exactly in Fractions and
the floats in the report are for display only.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .capacity import ZERO, capacity, capacity_at, relative_infimum
from .constants import l_product, vdw, vdw_product
from .polynomials import (
    ExpLinearFixture,
    RationalLike,
    SparsePoly,
    as_fraction,
    factorial_product,
    inner_product,
    reciprocal_product,
)
from .reporting import BoundReport, HOLDS, NOT_APPLICABLE, VIOLATED, digest, make_report

GUARANTEED_PROVENANCES = frozenset({"constructive-hstable", "slc-certified"})

KIND_ENTIRE = "entire"
KIND_HOMOGENEOUS = "homogeneous"
KIND_POLYNOMIAL = "polynomial"


def _guaranteed(provenance: str) -> bool:
    return provenance in GUARANTEED_PROVENANCES


def _poly_inputs(f: SparsePoly | ExpLinearFixture, extra: dict | None = None) -> dict:
    if isinstance(f, ExpLinearFixture):
        payload: dict = {"exp_linear": [str(a) for a in f.coefficients]}
    else:
        payload = {"vars": f.num_vars,
                   "terms": [[list(e), str(c)] for e, c in f.terms_sorted()]}
    if extra:
        payload.update(extra)
    return payload


def _not_applicable(inequality: str, inputs: dict, reason: str) -> BoundReport:
    return BoundReport(inequality=inequality, left=0.0, right=0.0,
                       verdict=NOT_APPLICABLE, guaranteed=False,
                       inputs_digest=digest(inputs), constants={},
                       details={"reason": reason})


def verify_main_thm(f: SparsePoly | ExpLinearFixture, kind: str, *,
                    provenance: str = "user", tol: float = 1e-8) -> list[BoundReport]:
    """Capacity vs the full mixed derivative at the all-ones exponent.

    Upper side, any nonnegative coefficients:   Cap(f) >= Der_f(1,...,1).
    Lower side, needs strong log-concavity:     Der >= const(kind) * Cap,
    with const exp(-n) for entire functions, vdw(n) for homogeneous degree-n
    polynomials in n variables, and the truncated-exponential product for
    inhomogeneous ones.
    """
    n = f.num_vars
    ones = (1,) * n
    inputs = _poly_inputs(f, {"kind": kind})
    if isinstance(f, SparsePoly):
        if kind == KIND_HOMOGENEOUS and (not f.is_homogeneous() or f.total_degree() != n):
            return [_not_applicable("main-lower", inputs, "needs a homogeneous degree-n "
                                                          "polynomial in n variables")]
        if kind == KIND_POLYNOMIAL and f.total_degree() > n:
            return [_not_applicable("main-lower", inputs, "degree exceeds variable count")]
    elif kind != KIND_ENTIRE:
        return [_not_applicable("main-lower", inputs, "closed-form family is entire-only")]

    cap = capacity(f, tol=tol)
    der = float(f.der_at_zero(ones))
    upper = make_report("main-capacity-upper", cap.value, der,
                        guaranteed=True, inputs=inputs,
                        details={"capacity": cap.value, "derivative": der,
                                 "status": cap.status})
    if kind == KIND_ENTIRE:
        const = math.exp(-n)
        const_repr: dict = {"exp_factor": const}
        ineq = "main-lower-exp"
    elif kind == KIND_HOMOGENEOUS:
        const = float(vdw(n))
        const_repr = {"vdw": str(vdw(n))}
        ineq = "main-lower-vdw"
    else:
        const = l_product(n)
        const_repr = {"trunc_exp_product": const}
        ineq = "main-lower-truncexp"
    lower = make_report(ineq, der, const * cap.value,
                        guaranteed=_guaranteed(provenance), inputs=inputs,
                        constants=const_repr,
                        details={"capacity": cap.value, "derivative": der,
                                 "provenance": provenance, "status": cap.status})
    return [upper, lower]


def verify_monomial_bounds(f: SparsePoly | ExpLinearFixture, target: Sequence[int],
                           kind: str = KIND_ENTIRE, *, provenance: str = "user",
                           tol: float = 1e-8) -> list[BoundReport]:
    """Sandwich at a general exponent: vdw-product upper, kind lower.

    prod vdw(r_i) * C_f(R) >= Der_f(R) >= const * C_f(R) with const
    exp(-|R|) for entire inputs and vdw(n) for homogeneous degree matches.
    """
    r = tuple(int(v) for v in target)
    inputs = _poly_inputs(f, {"target": list(r), "kind": kind})
    cap = capacity_at(f, r, tol=tol)
    der = float(f.der_at_zero(r))
    vdw_factor = vdw_product(r)
    reports = [make_report("monomial-vdw-upper", float(vdw_factor) * cap.value, der,
                           guaranteed=True, inputs=inputs,
                           constants={"vdw_product": str(vdw_factor)},
                           details={"capacity": cap.value, "status": cap.status})]
    if kind == KIND_HOMOGENEOUS:
        if isinstance(f, ExpLinearFixture) or not f.is_homogeneous() \
                or sum(r) != f.total_degree():
            reports.append(_not_applicable("monomial-lower-vdw", inputs,
                                           "homogeneous bound needs matching total degree"))
            return reports
        const = float(vdw(f.total_degree()))
        ineq = "monomial-lower-vdw"
        const_repr: dict = {"vdw": str(vdw(f.total_degree()))}
    else:
        const = math.exp(-sum(r))
        ineq = "monomial-lower-exp"
        const_repr = {"exp_factor": const}
    reports.append(make_report(ineq, der, const * cap.value,
                               guaranteed=_guaranteed(provenance), inputs=inputs,
                               constants=const_repr,
                               details={"capacity": cap.value, "provenance": provenance}))
    return reports


def sparse_lower_constant(k: int, n: int) -> Fraction:
    """((k-1)/k)^{(k-1)(n-k)} * vdw(k), the degree-bounded stable constant."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    base = Fraction(k - 1, k) if k > 1 else Fraction(1)
    return base ** ((k - 1) * (n - k)) * vdw(k)


def verify_schrijver(p: SparsePoly, k: int, *, provenance: str = "user",
                     tol: float = 1e-8) -> list[BoundReport]:
    """Sharper lower bound for stable polynomials with variable degrees <= k."""
    n = p.num_vars
    inputs = _poly_inputs(p, {"k": k})
    if not p.is_homogeneous() or p.total_degree() != n:
        return [_not_applicable("sparse-lower", inputs,
                                "needs a homogeneous degree-n polynomial in n variables")]
    if max(p.max_degrees()) > k or k > n:
        return [_not_applicable("sparse-lower", inputs,
                                f"variable degree exceeds k={k}")]
    cap = capacity(p, tol=tol)
    der = float(p.der_at_zero((1,) * n))
    const = sparse_lower_constant(k, n)
    upper = make_report("main-capacity-upper", cap.value, der, guaranteed=True,
                        inputs=inputs, details={"status": cap.status})
    lower = make_report("sparse-lower", der, float(const) * cap.value,
                        guaranteed=_guaranteed(provenance), inputs=inputs,
                        constants={"sparse_constant": str(const), "k": k},
                        details={"capacity": cap.value, "provenance": provenance})
    return [upper, lower]


def verify_inner_product(p: SparsePoly, q: SparsePoly, weights: Sequence[RationalLike], *,
                         provenance: str = "user", tol: float = 1e-8,
                         include_conjecture: bool = True) -> list[BoundReport]:
    """Lower bounds on the coefficient inner product of two stable polynomials.

    With A = inf p / x^l and B = inf q / x^l over the positive orthant:

        <p, q> >= A B vdw(n m) / vdw(n)^m          (general)
        <p, q> >= A B 2^{-m+1}                     (both multilinear)

    plus an experimental sharper weighted form, reported as a conjecture.
    """
    if p.num_vars != q.num_vars:
        raise ValueError("inner product verifiers need matching variable counts")
    if not p.is_homogeneous() or not q.is_homogeneous() \
            or p.total_degree() != q.total_degree():
        raise ValueError("both polynomials must be homogeneous of equal degree")
    m = p.num_vars
    n = p.total_degree()
    l = [as_fraction(w) for w in weights]
    if len(l) != m or any(w < 0 for w in l):
        raise ValueError("weights must be nonnegative, one per variable")
    if sum(l) != n:
        raise ValueError("weights must sum to the degree")
    inputs = {"p": _poly_inputs(p), "q": _poly_inputs(q), "weights": [str(w) for w in l]}

    a = relative_infimum(p, l, tol=tol)
    b = relative_infimum(q, l, tol=tol)
    if a.status == ZERO or b.status == ZERO:
        return [_not_applicable("inner-product-lower", inputs,
                                "weight vector outside a Newton polytope")]
    ip = inner_product(p, q)
    const = vdw(n * m) / vdw(n) ** m
    ab = a.value * b.value
    reports = [make_report("inner-product-lower", float(ip), ab * float(const),
                           guaranteed=_guaranteed(provenance), inputs=inputs,
                           constants={"vdw_ratio": str(const)},
                           details={"A": a.value, "B": b.value,
                                    "inner_product": str(ip), "provenance": provenance})]
    if p.is_multilinear() and q.is_multilinear():
        cleared = reciprocal_product(p, q)
        identity_ok = cleared.der_at_zero((1,) * m) == ip
        reports.append(make_report(
            "inner-product-multilinear-lower", float(ip), ab * 2.0 ** (-m + 1),
            guaranteed=_guaranteed(provenance), inputs=inputs,
            constants={"halving": f"2^{-m + 1}"},
            details={"cleared_product_identity": identity_ok}))
    if include_conjecture:
        weighted = sum((p.terms[e] * q.terms[e] * factorial_product(e)
                        for e in p.support() & q.support()), Fraction(0))
        conjectured = ab * math.factorial(n) / float(m) ** n
        reports.append(make_report(
            "inner-product-weighted-conjecture", float(weighted), conjectured,
            guaranteed=False, inputs=inputs,
            details={"note": "conjectured sharp form; slack recorded only"}))
    return reports


def verify_newton_multivariate(f: SparsePoly | ExpLinearFixture, base: Sequence[int],
                               decomposition: Sequence[tuple[RationalLike, Sequence[int]]],
                               kind: str = KIND_HOMOGENEOUS, *,
                               degree_bound: int | None = None,
                               provenance: str = "user",
                               threshold: float = 1e-7) -> BoundReport:
    """Concavity-type bound on mixed derivatives along a convex decomposition.

    For Y_0 = sum a_i Y_i with a_i >= 0 summing to one:

        Der(Y_0) >= const * prod Der(Y_i)^{a_i},

    where const folds the capacity constants of the chosen kind with the
    vdw products of the pieces.  When const is rational and the a_i have a
    small common denominator the comparison is exact.
    """
    y0 = tuple(int(v) for v in base)
    parts = [(as_fraction(a), tuple(int(v) for v in y)) for a, y in decomposition]
    if not parts:
        raise ValueError("empty decomposition")
    if any(a < 0 for a, _ in parts):
        raise ValueError("coefficients must be nonnegative")
    if sum(a for a, _ in parts) != 1:
        raise ValueError("coefficients must sum to one")
    m = len(y0)
    for a, y in parts:
        if len(y) != m:
            raise ValueError("decomposition vectors must match the base length")
    for i in range(m):
        if sum(a * y[i] for a, y in parts) != y0[i]:
            raise ValueError("decomposition does not average to the base vector")

    inputs = _poly_inputs(f, {"base": list(y0),
                              "parts": [[str(a), list(y)] for a, y in parts],
                              "kind": kind})
    der0 = f.der_at_zero(y0)
    ders = [f.der_at_zero(y) for _, y in parts]
    vdws = [vdw_product(y) for _, y in parts]

    include_vdw = kind != "geometric-mean"
    if kind == "geometric-mean":
        # bare midpoint form: Der(Y0) >= prod Der(Y_i)^{a_i}, no constants
        const_rational = Fraction(1)
        const_float = 1.0
        const_repr: dict = {}
    elif kind == KIND_ENTIRE:
        const_rational = None
        const_float = math.exp(-sum(y0))
        const_repr = {"exp_factor": const_float}
    elif kind == KIND_HOMOGENEOUS:
        if isinstance(f, ExpLinearFixture) or not f.is_homogeneous():
            return _not_applicable("newton-mixed-lower", inputs, "needs a homogeneous polynomial")
        const_rational = vdw(f.total_degree())
        const_float = float(const_rational)
        const_repr = {"vdw": str(const_rational)}
    elif kind == "hstable-sparse":
        if isinstance(f, ExpLinearFixture) or not f.is_homogeneous() or degree_bound is None:
            return _not_applicable("newton-mixed-lower", inputs,
                                   "sparse constant needs a homogeneous polynomial and a degree bound")
        if max(f.max_degrees()) > degree_bound:
            return _not_applicable("newton-mixed-lower", inputs,
                                   f"variable degree exceeds {degree_bound}")
        const_rational = sparse_lower_constant(degree_bound, f.total_degree())
        const_float = float(const_rational)
        const_repr = {"sparse_constant": str(const_rational), "k": degree_bound}
    else:
        raise ValueError(f"unknown kind {kind!r}")

    if any(d == 0 for d in ders):
        right_float = 0.0
    else:
        log_right = math.log(const_float) if const_rational is None else \
            (math.log(const_rational.numerator) - math.log(const_rational.denominator))
        for (a, _), d, v in zip(parts, ders, vdws):
            log_right += float(a) * (math.log(d.numerator) - math.log(d.denominator))
            if include_vdw:
                log_right -= float(a) * (math.log(v.numerator) - math.log(v.denominator))
        right_float = math.exp(log_right)

    details: dict = {"derivatives": [str(d) for d in [der0] + ders],
                     "provenance": provenance}
    exact_verdict = None
    if const_rational is not None:
        denom = 1
        for a, _ in parts:
            denom = denom * a.denominator // math.gcd(denom, a.denominator)
        if denom <= 64:
            lhs = der0 ** denom
            rhs = const_rational ** denom
            for (a, _), d, v in zip(parts, ders, vdws):
                power = int(a * denom)
                rhs *= d ** power
                if include_vdw:
                    rhs /= v ** power
            exact_verdict = HOLDS if lhs >= rhs else VIOLATED
            details["exact"] = True
            details["equality"] = lhs == rhs

    report = make_report("newton-mixed-lower", float(der0), right_float,
                         guaranteed=_guaranteed(provenance), inputs=inputs,
                         constants=const_repr, details=details, threshold=threshold)
    if exact_verdict is not None and exact_verdict != report.verdict:
        report = BoundReport(report.inequality, report.left, report.right,
                             exact_verdict, report.guaranteed, report.inputs_digest,
                             report.constants, report.details)
    return report


def capacity_midpoint_check(f: SparsePoly, y1: Sequence[int], y2: Sequence[int], *,
                            provenance: str = "user", tol: float = 1e-6,
                            solver_tol: float = 1e-8, label: str = "") -> BoundReport:
    """C(mid)^2 >= C(y1) C(y2) for one lattice triple with integer midpoint."""
    a = tuple(int(v) for v in y1)
    b = tuple(int(v) for v in y2)
    if any((u + v) % 2 for u, v in zip(a, b)):
        raise ValueError("midpoint is not a lattice point")
    mid = tuple((u + v) // 2 for u, v in zip(a, b))
    log_mid = capacity_at(f, mid, tol=solver_tol).log_value
    log_1 = capacity_at(f, a, tol=solver_tol).log_value
    log_2 = capacity_at(f, b, tol=solver_tol).log_value
    inputs = _poly_inputs(f, {"y1": list(a), "y2": list(b)})
    return make_report(
        f"capacity-logconcavity-midpoint{label}",
        math.exp(2 * log_mid), math.exp(log_1 + log_2),
        guaranteed=_guaranteed(provenance), inputs=inputs,
        details={"mid": list(mid), "y1": list(a), "y2": list(b),
                 "provenance": provenance},
        threshold=tol)


def verify_cf_logconcavity(f: SparsePoly, triples: int, seed: int, *,
                           provenance: str = "user", tol: float = 1e-6,
                           solver_tol: float = 1e-8) -> list[BoundReport]:
    """Midpoint log-concavity of the capacity map over sampled lattice triples.

    Samples support pairs with a common parity vector so the midpoint is a
    lattice point, then checks C(mid)^2 >= C(y1) C(y2) within tol.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    points = sorted(f.support())
    rng = np.random.Generator(np.random.Philox(seed))
    by_parity: dict[tuple[int, ...], list] = {}
    for pt in points:
        by_parity.setdefault(tuple(v % 2 for v in pt), []).append(pt)
    classes = sorted(by_parity.values())
    reports = []
    attempts = 0
    while len(reports) < triples and attempts < triples * 20:
        attempts += 1
        group = classes[int(rng.integers(len(classes)))]
        y1 = group[int(rng.integers(len(group)))]
        y2 = group[int(rng.integers(len(group)))]
        reports.append(capacity_midpoint_check(
            f, y1, y2, provenance=provenance, tol=tol, solver_tol=solver_tol,
            label=f"-{len(reports)}"))
    return reports


def log_derivative_midpoint_deficit(f: SparsePoly, y1: Sequence[int],
                                    y2: Sequence[int]) -> float:
    """log Der(mid) - (log Der(y1) + log Der(y2)) / 2, exact derivatives."""
    mid = tuple((a + b) // 2 for a, b in zip(y1, y2))
    if any((a + b) % 2 for a, b in zip(y1, y2)):
        raise ValueError("midpoint is not a lattice point")
    d_mid = f.der_at_zero(mid)
    d1 = f.der_at_zero(tuple(y1))
    d2 = f.der_at_zero(tuple(y2))
    if d_mid <= 0 or d1 <= 0 or d2 <= 0:
        raise ValueError("deficit needs positive derivatives")

    def flog(x: Fraction) -> float:
        return math.log(x.numerator) - math.log(x.denominator)

    return flog(d_mid) - (flog(d1) + flog(d2)) / 2
