"""Propagation of log-concavity along the weighted shift flow.

A positive weight vector (b_0, ..., b_k) acts on a polynomial p through its
moment vector (b_0 p(t), b_1 p'(t), ..., b_k p^{(k)}(t)), which solves the
linear system x' = Shift_c x for the weighted shift with c_i = b_i / b_{i+1}.
The weights preserve the log-concave cone along t >= 0 exactly when the
finite sequence c is concave in the one-sided sense checked below.

All arithmetic in this module is rational: the shift is nilpotent, so its
exponential is a finite sum, and trajectory checks evaluate derivatives at
rational grid points exactly.  Log-concavity at a boundary equality must not
flicker with rounding, hence no floats anywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .logconcavity import lc_member
from .polynomials import RationalLike, SparsePoly, as_fraction


@dataclass(frozen=True)
class WeightSequence:
    """Positive weights b_0..b_k with derived shift weights c_i = b_i / b_{i+1}."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(as_fraction(b) for b in self.weights)
        if not ws:
            raise ValueError("empty weight sequence")
        if any(b <= 0 for b in ws):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def factorial_weights(cls, n: int) -> WeightSequence:
        """b_i = (n - i)!, the weights behind the classical coefficient inequalities."""
        import math

        return cls(tuple(Fraction(math.factorial(n - i)) for i in range(n + 1)))

    def shift_weights(self) -> tuple[Fraction, ...]:
        b = self.weights
        return tuple(b[i] / b[i + 1] for i in range(len(b) - 1))

    def shift_operator(self) -> ShiftOperator:
        return ShiftOperator(self.shift_weights())


@dataclass(frozen=True)
class ShiftOperator:
    """x -> (c_0 x_1, ..., c_{n-1} x_n, 0) on vectors of length n + 1."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(as_fraction(c) for c in self.weights)
        if any(c < 0 for c in ws):
            raise ValueError("shift weights must be nonnegative")
        object.__setattr__(self, "weights", ws)

    @property
    def dimension(self) -> int:
        return len(self.weights) + 1

    def apply(self, x: Sequence[RationalLike]) -> list[Fraction]:
        v = [as_fraction(value) for value in x]
        if len(v) != self.dimension:
            raise ValueError(f"vector has length {len(v)}, expected {self.dimension}")
        return [c * v[i + 1] for i, c in enumerate(self.weights)] + [Fraction(0)]

    def exp_apply(self, t: RationalLike, x: Sequence[RationalLike]) -> list[Fraction]:
        """exp(t * Shift) x as the finite nilpotent sum, exactly."""
        scale = as_fraction(t)
        current = [as_fraction(value) for value in x]
        if len(current) != self.dimension:
            raise ValueError(f"vector has length {len(current)}, expected {self.dimension}")
        total = list(current)
        factor = Fraction(1)
        for j in range(1, self.dimension):
            current = self.apply(current)
            factor = factor * scale / j
            if all(v == 0 for v in current):
                break
            total = [a + factor * b for a, b in zip(total, current)]
        return total


def propagatable_check(b: WeightSequence) -> bool:
    """One-sided concavity of the shift weights: 2c_i >= c_{i-1} + c_{i+1}
    for interior indices, plus 2c_{k-1} >= c_{k-2} at the zero-extended end.
    """
    c = b.shift_weights()
    k = len(c)
    if k <= 1:
        return True
    for i in range(1, k - 1):
        if 2 * c[i] < c[i - 1] + c[i + 1]:
            return False
    return 2 * c[k - 1] >= c[k - 2]


def moment_vector(b: WeightSequence, p: SparsePoly, t: RationalLike) -> list[Fraction]:
    """(b_0 p(t), b_1 p'(t), ..., b_n p^{(n)}(t)) exactly at a rational point."""
    if p.num_vars != 1:
        raise ValueError("moment vectors are defined for univariate polynomials")
    n = len(b.weights) - 1
    if p.total_degree() > n:
        raise ValueError("polynomial degree exceeds the weight sequence length")
    point = [as_fraction(t)]
    values = []
    q = p
    for i in range(n + 1):
        values.append(b.weights[i] * q.evaluate_exact(point))
        q = q.partial_derivative((1,))
    return values


@dataclass(frozen=True)
class TrajectoryReport:
    precondition_ok: bool
    grid: tuple[Fraction, ...]
    in_cone: tuple[bool, ...]
    first_exit: Fraction | None

    @property
    def all_in_cone(self) -> bool:
        return self.precondition_ok and all(self.in_cone)

    def to_dict(self) -> dict:
        return {
            "precondition_ok": self.precondition_ok,
            "grid": [str(t) for t in self.grid],
            "in_cone": list(self.in_cone),
            "first_exit": str(self.first_exit) if self.first_exit is not None else None,
        }


def lc_trajectory_check(b: WeightSequence, p: SparsePoly,
                        t_grid: Sequence[RationalLike]) -> TrajectoryReport:
    """Exact log-concavity of the moment vector at each grid point.

    The starting vector at t = 0 must already be in the cone; otherwise
    the report flags the precondition and skips the grid.
    """
    grid = tuple(sorted(as_fraction(t) for t in t_grid))
    if any(t < 0 for t in grid):
        raise ValueError("the flow is defined for t >= 0")
    start = moment_vector(b, p, 0)
    if not lc_member(start):
        return TrajectoryReport(False, grid, (), None)
    verdicts = []
    first_exit = None
    for t in grid:
        ok = lc_member(moment_vector(b, p, t))
        verdicts.append(ok)
        if not ok and first_exit is None:
            first_exit = t
    return TrajectoryReport(True, grid, tuple(verdicts), first_exit)


@dataclass(frozen=True)
class DiscreteStepReport:
    trials: int
    violations: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"trials": self.trials, "ok": self.ok,
                "violations": [dict(v) for v in self.violations]}


def random_lc_vector(rng: random.Random, length: int) -> list[Fraction]:
    """A random member of the cone: positive start, nonincreasing ratios."""
    ratios = sorted((Fraction(rng.randint(1, 24), rng.randint(1, 24)) for _ in range(length - 1)),
                    reverse=True)
    values = [Fraction(rng.randint(1, 12), rng.randint(1, 4))]
    for r in ratios:
        values.append(values[-1] * r)
    return values


def discrete_step_check(s: ShiftOperator, t: RationalLike, trials: int,
                        seed: int) -> DiscreteStepReport:
    """Apply I + t * Shift to random cone members and test membership exactly."""
    step = as_fraction(t)
    if step < 0:
        raise ValueError("the discrete step is defined for t >= 0")
    rng = random.Random(seed)
    violations = []
    for _ in range(trials):
        d = random_lc_vector(rng, s.dimension)
        shifted = s.apply(d)
        image = [a + step * b for a, b in zip(d, shifted)]
        if not lc_member(image):
            index = next(i for i in range(1, len(image) - 1)
                         if image[i] * image[i] < image[i - 1] * image[i + 1])
            violations.append({"input": [str(v) for v in d],
                               "image": [str(v) for v in image],
                               "index": index})
            if len(violations) >= 5:
                break
    return DiscreteStepReport(trials, tuple(violations))
