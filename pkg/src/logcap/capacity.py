"""Capacity of nonnegative polynomials by convex minimization in the log domain.

With x = e^y the ratio f(x) / prod x_i^{l_i} becomes exp(psi(y)) for

    psi(y) = log f(e^y) - <l, y>,

a convex function (log-sum-exp of affine forms).  Its infimum is positive
exactly when l lies in the Newton polytope of f, attained exactly when l is
in the relative interior.  The pipeline is:

  1. variables with l_i = 0 are substituted by zero (coefficients are
     nonnegative, so the infimum over x_i > 0 is the value at 0);
  2. exact polytope membership decides zero capacity outright;
  3. a boundary target is replaced by the terms on the minimal face of the
     polytope containing it, which has the same infimum but attains it;
  4. damped Newton with an Armijo backtracking line search minimizes psi.

The scaled capacity with denominator prod (x_i/r_i)^{r_i} multiplies the
plain infimum by prod r_i^{r_i} (0^0 = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .constants import vdw_product
from .polynomials import ExpLinearFixture, SparsePoly, as_fraction
from .reporting import BoundReport, make_report
from .supports import HullOracle

ATTAINED = "attained"
FACE_RESTRICTED = "face-restricted"
ZERO = "zero"

MAX_ITERATIONS = 500
GRADIENT_TOLERANCE = 1e-10
ARMIJO_SLOPE = 1e-4


class CapacityError(RuntimeError):
    """Raised when the Newton iteration fails to converge."""

    def __init__(self, message: str, iterations: int, gradient_norm: float):
        super().__init__(f"{message} (iterations={iterations}, gradient_norm={gradient_norm:.3e})")
        self.iterations = iterations
        self.gradient_norm = gradient_norm


@dataclass(frozen=True)
class CapacityResult:
    """Outcome of a capacity computation.

    value:     the infimum estimate (scaled form when requested);
    log_value: its natural log, safe against overflow;
    minimizer: a minimizing point in x coordinates (eliminated variables at 0),
               None when the capacity is zero;
    status:    attained / face-restricted / zero;
    gradient_norm: final sup-norm of the gradient relative to max(1, |psi|).
    """

    value: float
    log_value: float
    minimizer: tuple[float, ...] | None
    status: str
    iterations: int
    gradient_norm: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "log_value": self.log_value,
            "minimizer": list(self.minimizer) if self.minimizer is not None else None,
            "status": self.status,
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
        }


def _zero_result(num_vars: int) -> CapacityResult:
    return CapacityResult(0.0, -math.inf, None, ZERO, 0, 0.0)


def _minimize(exponents: np.ndarray, log_coeffs: np.ndarray, target: np.ndarray,
              tol: float, center: bool, shift: Sequence[float] | None) -> tuple[np.ndarray, float, int, float]:
    """Damped Newton on psi(y) = lse(w + E y) - <target, y>."""

    def components(y: np.ndarray):
        z = log_coeffs + exponents @ y
        zmax = z.max()
        weights = np.exp(z - zmax)
        total = weights.sum()
        psi = zmax + math.log(total) - target @ y
        softmax = weights / total
        grad = exponents.T @ softmax - target
        return psi, grad, softmax

    dim = exponents.shape[1]
    y = np.zeros(dim) if shift is None else np.asarray(shift, dtype=float).copy()
    if center:
        y -= y.mean()
    psi, grad, softmax = components(y)
    tol_target = min(GRADIENT_TOLERANCE, tol)
    for iteration in range(MAX_ITERATIONS):
        scale = max(1.0, abs(psi))
        gnorm = float(np.abs(grad).max())
        if gnorm <= tol_target * scale:
            return y, psi, iteration, gnorm / scale
        mean = exponents.T @ softmax
        hess = exponents.T @ (softmax[:, None] * exponents) - np.outer(mean, mean)
        ridge = 1e-12 * max(1.0, float(np.trace(hess)) / dim)
        try:
            direction = np.linalg.solve(hess + ridge * np.eye(dim), -grad)
        except np.linalg.LinAlgError:
            direction = -grad
        slope = float(grad @ direction)
        if slope >= 0:
            direction = -grad
            slope = float(grad @ direction)
        step = 1.0
        for _ in range(80):
            candidate = y + step * direction
            if center:
                candidate = candidate - candidate.mean()
            new_psi, new_grad, new_softmax = components(candidate)
            if new_psi <= psi + ARMIJO_SLOPE * step * slope:
                break
            step *= 0.5
        else:
            # no descent at machine precision: accept only within the query tolerance
            if gnorm <= tol * scale:
                return y, psi, iteration, gnorm / scale
            raise CapacityError("line search stalled", iteration, gnorm / scale)
        y, psi, grad, softmax = candidate, new_psi, new_grad, new_softmax
    gnorm = float(np.abs(grad).max())
    scale = max(1.0, abs(psi))
    raise CapacityError("iteration cap reached", MAX_ITERATIONS, gnorm / scale)


def _solve(p: SparsePoly, weights: Sequence[Fraction], tol: float,
           scaled: bool, initial: Sequence[float] | None) -> CapacityResult:
    m = p.num_vars
    if p.is_zero():
        raise ValueError("capacity of the zero polynomial is undefined")
    if len(weights) != m:
        raise ValueError(f"target has length {len(weights)}, expected {m}")
    if any(w < 0 for w in weights):
        raise ValueError("target must be nonnegative")

    log_scale = 0.0
    if scaled:
        # prod (x_i / r_i)^{r_i} denominators contribute prod r_i^{r_i}
        log_scale = sum(float(w) * math.log(float(w)) for w in weights if w > 0)

    zeroed = [i for i in range(m) if weights[i] == 0]
    reduced = p.substitute_zero(zeroed)
    truncated = reduced.num_terms() < p.num_terms()
    if all(w == 0 for w in weights):
        constant = reduced.coefficient((0,) * m)
        if constant == 0:
            return _zero_result(m)
        value = float(constant)
        status = FACE_RESTRICTED if truncated else ATTAINED
        return CapacityResult(value, math.log(value), (0.0,) * m, status, 0, 0.0)
    if reduced.is_zero():
        return _zero_result(m)
    active = [i for i in range(m) if weights[i] > 0]
    q = reduced.drop_variables(zeroed) if zeroed else reduced
    l = [weights[i] for i in active]

    oracle = HullOracle(q.support())
    if not oracle.contains(l):
        return _zero_result(m)
    if oracle.relint_contains(l):
        status = FACE_RESTRICTED if truncated else ATTAINED
        terms = q.terms_sorted()
    else:
        status = FACE_RESTRICTED
        face = oracle.minimal_face(l)
        terms = [(e, q.terms[e]) for e in face]

    exponents = np.array([[float(v) for v in e] for e, _ in terms])
    log_coeffs = np.array([math.log(c.numerator) - math.log(c.denominator) for _, c in terms])
    target = np.array([float(v) for v in l])
    # scale invariance: homogeneous terms with matching target degree
    degrees = {sum(e) for e, _ in terms}
    center = len(degrees) == 1 and sum(l) == next(iter(degrees))

    shift = None
    if initial is not None:
        if len(initial) != m:
            raise ValueError("initial point length mismatch")
        shift = [float(initial[i]) for i in active]

    y, psi, iterations, gradient_norm = _minimize(
        exponents, log_coeffs, target, tol, center, shift)

    log_value = psi + log_scale
    try:
        value = math.exp(log_value)
    except OverflowError:
        value = math.inf
    minimizer = [0.0] * m
    for idx, i in enumerate(active):
        minimizer[i] = math.exp(float(y[idx]))
    return CapacityResult(value, log_value, tuple(minimizer), status, iterations, gradient_norm)


def capacity_at(f: SparsePoly | ExpLinearFixture, target: Sequence, *, tol: float = 1e-8,
                initial: Sequence[float] | None = None) -> CapacityResult:
    """Scaled capacity at an integer or rational target.

    Minimizes f(x) / prod (x_i/r_i)^{r_i} over the positive orthant; zero
    entries of the target follow the monotone substitution x_i = 0.
    """
    weights = [as_fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator(10 ** 9)
               for v in target]
    if isinstance(f, ExpLinearFixture):
        return _exp_linear_capacity(f, weights)
    return _solve(f, weights, tol, scaled=True, initial=initial)


def capacity(f: SparsePoly | ExpLinearFixture, *, tol: float = 1e-8,
             initial: Sequence[float] | None = None) -> CapacityResult:
    """Capacity with the all-ones target: inf f(x) / prod x_i."""
    m = f.num_vars
    return capacity_at(f, (1,) * m, tol=tol, initial=initial)


def relative_infimum(f: SparsePoly | ExpLinearFixture, weights: Sequence, *,
                     tol: float = 1e-8) -> CapacityResult:
    """Unscaled infimum of f(x) / prod x_i^{l_i}; the target may be rational."""
    ws = [as_fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator(10 ** 9)
          for v in weights]
    if isinstance(f, ExpLinearFixture):
        scaled = _exp_linear_capacity(f, ws)
        log_scale = sum(float(w) * math.log(float(w)) for w in ws if w > 0)
        log_value = scaled.log_value - log_scale
        return CapacityResult(math.exp(log_value), log_value, scaled.minimizer,
                              scaled.status, 0, 0.0)
    return _solve(f, ws, tol, scaled=False, initial=None)


def _exp_linear_capacity(f: ExpLinearFixture, weights: Sequence[Fraction]) -> CapacityResult:
    """Closed form: the scaled capacity of exp(sum a_i x_i) is e^{|R|} prod a_i^{r_i}."""
    if len(weights) != f.num_vars:
        raise ValueError("target length mismatch")
    if any(w < 0 for w in weights):
        raise ValueError("target must be nonnegative")
    total = sum(float(w) for w in weights)
    log_value = total + sum(
        float(w) * (math.log(a.numerator) - math.log(a.denominator))
        for w, a in zip(weights, f.coefficients) if w > 0)
    minimizer = tuple(float(w / a) for w, a in zip(weights, f.coefficients))
    return CapacityResult(math.exp(log_value), log_value, minimizer, ATTAINED, 0, 0.0)


def verify_capacity_derivative_bounds(
        f: SparsePoly | ExpLinearFixture, target: Sequence[int], *,
        slc_certified: bool = False, tol: float = 1e-8) -> list[BoundReport]:
    """The two-sided comparison between capacity and the mixed derivative.

    Upper side (any nonnegative coefficients): prod vdw(r_i) * C >= Der.
    Lower side (guaranteed only under strong log-concavity): Der >= e^{-|R|} C.
    """
    r = tuple(int(v) for v in target)
    der = float(f.der_at_zero(r))
    cap = capacity_at(f, r, tol=tol)
    vdw_factor = vdw_product(r)
    inputs = {"target": list(r), "poly_digest": _input_digest(f)}
    upper = make_report(
        "mixed-derivative-upper",
        float(vdw_factor) * cap.value, der,
        guaranteed=True, inputs=inputs,
        constants={"vdw_product": str(vdw_factor)},
        details={"capacity": cap.value, "derivative": der, "status": cap.status},
    )
    exp_factor = math.exp(-sum(r))
    lower = make_report(
        "mixed-derivative-lower-exp",
        der, exp_factor * cap.value,
        guaranteed=slc_certified, inputs=inputs,
        constants={"exp_factor": exp_factor},
        details={"capacity": cap.value, "derivative": der, "status": cap.status},
    )
    return [upper, lower]


def _input_digest(f: SparsePoly | ExpLinearFixture) -> str:
    from .reporting import digest

    if isinstance(f, ExpLinearFixture):
        return digest({"exp_linear": [str(a) for a in f.coefficients]})
    return digest({"vars": f.num_vars,
                   "terms": [[list(e), str(c)] for e, c in f.terms_sorted()]})
