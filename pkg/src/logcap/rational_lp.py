"""Exact linear programming over the rationals.

A small dense two-phase simplex with Bland's rule, operating entirely on
Fractions.  Problems are given in standard equality form

    maximize c.x   subject to  A x = b,  x >= 0.

Bland's rule guarantees termination without perturbation, which matters
here: these LPs decide lattice-geometry questions (convex hull membership,
relative interior, minimal faces) where boundary cases are exact ties that
floating point would misclassify.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None
    value: Fraction | None


def _pivot(tableau: Matrix, basis: list[int], row: int, col: int) -> None:
    pivot_row = tableau[row]
    inv = Fraction(1) / pivot_row[col]
    tableau[row] = [v * inv for v in pivot_row]
    pivot_row = tableau[row]
    for i, other in enumerate(tableau):
        if i == row:
            continue
        factor = other[col]
        if factor:
            tableau[i] = [a - factor * b for a, b in zip(other, pivot_row)]
    basis[row] = col


def _bland_iterate(tableau: Matrix, basis: list[int], num_cols: int) -> str:
    """Run simplex iterations on a tableau whose last row is the objective.

    The objective row stores reduced costs for maximization: entering columns
    are those with positive entries.  Returns OPTIMAL or UNBOUNDED.
    """
    num_rows = len(tableau) - 1
    while True:
        obj = tableau[-1]
        col = next((j for j in range(num_cols) if obj[j] > 0), None)
        if col is None:
            return OPTIMAL
        best_row = None
        best_ratio = None
        for i in range(num_rows):
            a = tableau[i][col]
            if a > 0:
                ratio = tableau[i][-1] / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] > basis[best_row])):
                    best_ratio = ratio
                    best_row = i
        if best_row is None:
            return UNBOUNDED
        _pivot(tableau, basis, best_row, col)


def solve_lp(objective: Sequence[Fraction], constraints: Sequence[Sequence[Fraction]],
             rhs: Sequence[Fraction]) -> LPResult:
    """Maximize objective.x subject to constraints x = rhs, x >= 0, exactly."""
    m = len(constraints)
    n = len(objective)
    a = [[Fraction(v) for v in row] for row in constraints]
    b = [Fraction(v) for v in rhs]
    for i in range(m):
        if len(a[i]) != n:
            raise ValueError("constraint row length mismatch")
        if b[i] < 0:
            a[i] = [-v for v in a[i]]
            b[i] = -b[i]

    # Phase 1: minimize the sum of artificial variables.
    tableau: Matrix = []
    for i in range(m):
        row = list(a[i])
        row.extend(Fraction(1) if j == i else Fraction(0) for j in range(m))
        row.append(b[i])
        tableau.append(row)
    basis = [n + i for i in range(m)]
    obj = [Fraction(0)] * (n + m + 1)
    for j in range(n, n + m):
        obj[j] = Fraction(-1)
    # Express the objective in terms of nonbasic variables.
    for i in range(m):
        obj = [o + t for o, t in zip(obj, tableau[i])]
        obj[basis[i]] = Fraction(0)
    tableau.append(obj)
    _bland_iterate(tableau, basis, n + m)
    if tableau[-1][-1] != 0:
        return LPResult(INFEASIBLE, None, None)

    # Drive any artificial variables out of the basis; drop redundant rows.
    keep_rows = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tableau[i][j] != 0), None)
            if col is None:
                continue  # redundant constraint
            _pivot(tableau, basis, i, col)
        keep_rows.append(i)
    tableau = [tableau[i] for i in keep_rows] + [tableau[-1]]
    basis = [basis[i] for i in keep_rows]

    # Phase 2 on the original columns.
    phase2 = [row[:n] + [row[-1]] for row in tableau[:-1]]
    obj2 = [Fraction(v) for v in objective] + [Fraction(0)]
    for i, bi in enumerate(basis):
        coef = obj2[bi]
        if coef:
            obj2 = [o - coef * t for o, t in zip(obj2, phase2[i])]
    phase2.append(obj2)
    status = _bland_iterate(phase2, basis, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None)
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = phase2[i][-1]
    value = sum((c * v for c, v in zip(objective, x)), Fraction(0))
    return LPResult(OPTIMAL, x, value)


def feasible_point(constraints: Sequence[Sequence[Fraction]],
                   rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """A feasible x >= 0 with constraints x = rhs, or None if there is none."""
    n = len(constraints[0]) if constraints else 0
    result = solve_lp([Fraction(0)] * n, constraints, rhs)
    return result.x if result.status == OPTIMAL else None
