"""Permanents, row-form products, and doubly stochastic scaling.

The bridge between matrices and capacities: for a nonnegative matrix A
without zero rows, the product of its row linear forms has the permanent of
A as its mixed derivative at the all-ones exponent, and a doubly stochastic
A has capacity exactly one.  Ryser's inclusion-exclusion with Gray-code
updates supplies the exact permanent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .capacity import capacity
from .polynomials import SparsePoly, as_fraction, product
from .reporting import BoundReport, make_report
from .constants import vdw

EXACT_RYSER_LIMIT = 14
FLOAT_RYSER_LIMIT = 20
SINKHORN_ITERATION_CAP = 100_000


@dataclass(frozen=True)
class NonnegMatrix:
    """Square entrywise-nonnegative matrix with exact rational entries."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) if isinstance(v, float) else as_fraction(v) for v in row)
                     for row in self.rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("matrix must be square and nonempty")
        if any(v < 0 for row in rows for v in row):
            raise ValueError("matrix must be entrywise nonnegative")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> NonnegMatrix:
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def uniform(cls, n: int) -> NonnegMatrix:
        value = Fraction(1, n)
        return cls(tuple((value,) * n for _ in range(n)))

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.rows]

    def col_sums(self) -> list[Fraction]:
        return [sum((row[j] for row in self.rows), Fraction(0)) for j in range(self.n)]

    def has_zero_row(self) -> bool:
        return any(all(v == 0 for v in row) for row in self.rows)

    def stochastic_deviation(self) -> float:
        sums = self.row_sums() + self.col_sums()
        return max(abs(float(s) - 1.0) for s in sums)

    def is_doubly_stochastic(self, tol: float = 1e-9) -> bool:
        return self.stochastic_deviation() <= tol

    def to_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.rows])

    def to_dict(self) -> dict:
        return {"n": self.n, "rows": [[str(v) for v in row] for row in self.rows]}


def ryser_permanent(a: NonnegMatrix, *, exact: bool | None = None) -> Fraction | float:
    """Permanent by Ryser's inclusion-exclusion over column subsets.

    Gray-code ordering updates the row sums by one column per step.  Exact
    rational arithmetic up to 14x14; float with compensated summation up to
    20x20.
    """
    n = a.n
    if exact is None:
        exact = n <= EXACT_RYSER_LIMIT
    if exact and n > EXACT_RYSER_LIMIT:
        raise ValueError(f"exact permanent limited to n <= {EXACT_RYSER_LIMIT}")
    if n > FLOAT_RYSER_LIMIT:
        raise ValueError(f"permanent limited to n <= {FLOAT_RYSER_LIMIT}")
    if exact:
        rows = a.rows
        zero: Fraction | float = Fraction(0)
    else:
        rows = tuple(tuple(float(v) for v in row) for row in a.rows)
        zero = 0.0
    sums = [zero for _ in range(n)]
    total = zero
    compensation = 0.0
    members = [False] * n
    for step in range(1, 1 << n):
        j = (step & -step).bit_length() - 1  # Gray code: flip the lowest bit of step
        if members[j]:
            for i in range(n):
                sums[i] -= rows[i][j]
        else:
            for i in range(n):
                sums[i] += rows[i][j]
        members[j] = not members[j]
        count = sum(members)
        term = sums[0]
        for i in range(1, n):
            term = term * sums[i]
        signed = term if (n - count) % 2 == 0 else -term
        if exact:
            total += signed
        else:
            t = total + signed
            if abs(total) >= abs(signed):
                compensation += (total - t) + signed
            else:
                compensation += (signed - t) + total
            total = t
    return total if exact else total + compensation


def prod_poly(a: NonnegMatrix) -> SparsePoly:
    """Product of the row linear forms sum_j A[i][j] x_j, exactly.

    Its mixed derivative at the all-ones exponent equals the permanent.
    """
    if a.has_zero_row():
        raise ValueError("matrix has a zero row; the row product vanishes")
    return product(SparsePoly.linear_form(row) for row in a.rows)


# ----------------------------------------------------------------------
# bipartite support structure


def _augment(pattern: Sequence[Sequence[bool]], row: int, match_col: list[int],
             visited: list[bool], banned_col: int = -1) -> bool:
    n = len(pattern)
    for col in range(n):
        if col == banned_col or not pattern[row][col] or visited[col]:
            continue
        visited[col] = True
        if match_col[col] < 0 or _augment(pattern, match_col[col], match_col, visited, banned_col):
            match_col[col] = row
            return True
    return False


def _max_matching(pattern: Sequence[Sequence[bool]], skip_row: int = -1,
                  banned_col: int = -1) -> int:
    n = len(pattern)
    match_col = [-1] * n
    size = 0
    for row in range(n):
        if row == skip_row:
            continue
        visited = [False] * n
        if _augment(pattern, row, match_col, visited, banned_col):
            size += 1
    return size


def has_support(a: NonnegMatrix) -> bool:
    """A positive diagonal exists (the permanent of the pattern is nonzero)."""
    pattern = [[v > 0 for v in row] for row in a.rows]
    return _max_matching(pattern) == a.n


def total_support_violation(a: NonnegMatrix) -> tuple[int, int] | None:
    """The first positive entry lying on no positive diagonal, if any."""
    pattern = [[v > 0 for v in row] for row in a.rows]
    if _max_matching(pattern) < a.n:
        return next((i, j) for i in range(a.n) for j in range(a.n) if pattern[i][j])
    for i in range(a.n):
        for j in range(a.n):
            if pattern[i][j] and _max_matching(pattern, skip_row=i, banned_col=j) < a.n - 1:
                return (i, j)
    return None


@dataclass(frozen=True)
class SinkhornResult:
    matrix: NonnegMatrix
    row_scaling: tuple[float, ...]
    col_scaling: tuple[float, ...]
    iterations: int
    deviation: float


def sinkhorn(a: NonnegMatrix, tol: float = 1e-12,
             max_iterations: int = SINKHORN_ITERATION_CAP) -> SinkhornResult:
    """Alternate row/column normalization to a doubly stochastic matrix.

    Requires total support: every positive entry must lie on a positive
    diagonal, otherwise the limit zeroes entries and the scalings diverge.
    The returned matrix holds the exact rational values of the final float
    iterate, so downstream permanents are exact for that matrix.
    """
    if not has_support(a):
        raise ValueError("pattern admits no positive diagonal (permanent is zero)")
    violation = total_support_violation(a)
    if violation is not None:
        raise ValueError(f"matrix lacks total support: entry {violation} "
                         "lies on no positive diagonal")
    work = a.to_float()
    n = a.n
    row_scale = np.ones(n)
    col_scale = np.ones(n)
    iterations = 0
    deviation = math.inf
    while iterations < max_iterations:
        rs = work.sum(axis=1)
        row_scale /= rs
        work /= rs[:, None]
        cs = work.sum(axis=0)
        col_scale /= cs
        work /= cs[None, :]
        iterations += 1
        deviation = max(float(np.abs(work.sum(axis=1) - 1).max()),
                        float(np.abs(work.sum(axis=0) - 1).max()))
        if deviation <= tol:
            break
    else:
        raise RuntimeError(f"sinkhorn did not reach tolerance {tol} in {max_iterations} iterations")
    matrix = NonnegMatrix(tuple(tuple(Fraction(float(v)) for v in row) for row in work))
    return SinkhornResult(matrix, tuple(row_scale), tuple(col_scale), iterations, deviation)


def vdw_bounds_check(a: NonnegMatrix, *, ds_tol: float = 1e-9,
                     cap_tol: float = 1e-6) -> list[BoundReport]:
    """For a doubly stochastic matrix: vdw(n) <= per(A) <= 1 and Cap = 1.

    The permanent comparisons are exact; the capacity equality is checked by
    the convex solver within cap_tol.
    """
    n = a.n
    inputs = a.to_dict()
    applicable = a.is_doubly_stochastic(ds_tol)
    per = ryser_permanent(a) if n <= EXACT_RYSER_LIMIT else ryser_permanent(a, exact=False)
    lower = make_report(
        "permanent-vdw-lower", float(per), float(vdw(n)),
        guaranteed=True, inputs=inputs, constants={"vdw": str(vdw(n))},
        details={"n": n, "permanent": str(per), "deviation": a.stochastic_deviation()},
        applicable=applicable)
    upper = make_report(
        "permanent-upper-one", 1.0, float(per),
        guaranteed=True, inputs=inputs,
        details={"n": n, "permanent": str(per)}, applicable=applicable)
    reports = [lower, upper]
    if applicable:
        cap = capacity(prod_poly(a), tol=min(cap_tol, 1e-8))
        reports.append(make_report(
            "row-product-capacity-one", cap_tol, abs(cap.value - 1.0),
            guaranteed=True, inputs=inputs,
            details={"capacity": cap.value, "status": cap.status,
                     "iterations": cap.iterations}))
    return reports
