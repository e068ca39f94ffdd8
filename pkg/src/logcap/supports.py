"""Exact lattice geometry of polynomial supports.

Everything here decides questions about Newt(p), the convex hull of the
support: membership of lattice (or rational) points, relative interior,
minimal faces, and discrete convexity of the support itself.  Verdicts are
always backed by exact rational certificates: either an explicit convex
combination or a separating hyperplane, both verified in Fractions.
Floating-point LPs are used only to *search* for those certificates; the
pure exact simplex is the fallback and doubles as the naive oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as iter_product
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .polynomials import MultiIndex, SparsePoly, grlex_key
from .rational_lp import OPTIMAL, feasible_point, solve_lp

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class SupportSet:
    """A finite set of integer exponent vectors in a fixed dimension."""

    dim: int
    points: frozenset[MultiIndex]

    def __post_init__(self):
        if any(len(p) != self.dim for p in self.points):
            raise ValueError("all points must match the declared dimension")

    @classmethod
    def of(cls, p: SparsePoly) -> SupportSet:
        return cls(p.num_vars, frozenset(p.terms))

    def sorted_points(self) -> list[MultiIndex]:
        return sorted(self.points, key=grlex_key)


def support_of(p: SparsePoly) -> SupportSet:
    return SupportSet.of(p)


def _as_point(z: Sequence) -> Point:
    return tuple(Fraction(v) for v in z)


class _AffineHull:
    """Reduced row echelon basis of the direction space of a point set."""

    def __init__(self, points: Sequence[MultiIndex]):
        self.origin = _as_point(points[0])
        self.rows: list[Point] = []
        self.pivots: list[int] = []
        for p in points[1:]:
            self._absorb(tuple(Fraction(a) - b for a, b in zip(p, self.origin)))

    def _reduce(self, v: Point) -> Point:
        v = list(v)
        for row, piv in zip(self.rows, self.pivots):
            factor = v[piv]
            if factor:
                v = [a - factor * b for a, b in zip(v, row)]
        return tuple(v)

    def _absorb(self, direction: Point) -> None:
        residue = self._reduce(direction)
        piv = next((i for i, v in enumerate(residue) if v != 0), None)
        if piv is None:
            return
        inv = Fraction(1) / residue[piv]
        new_row = tuple(v * inv for v in residue)
        self.rows = [tuple(a - r[piv] * b for a, b in zip(r, new_row)) for r in self.rows]
        self.rows.append(new_row)
        self.pivots.append(piv)
        order = sorted(range(len(self.pivots)), key=lambda i: self.pivots[i])
        self.rows = [self.rows[i] for i in order]
        self.pivots = [self.pivots[i] for i in order]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, z: Point) -> bool:
        shifted = tuple(a - b for a, b in zip(z, self.origin))
        return all(v == 0 for v in self._reduce(shifted))

    def coordinates(self, z: Point) -> tuple[Fraction, ...]:
        """Exact coordinates of an in-hull point in the reduced basis."""
        shifted = tuple(a - b for a, b in zip(z, self.origin))
        coords = []
        residue = list(shifted)
        for row, piv in zip(self.rows, self.pivots):
            c = residue[piv]
            coords.append(c)
            if c:
                residue = [a - c * b for a, b in zip(residue, row)]
        if any(v != 0 for v in residue):
            raise ValueError("point is outside the affine hull")
        return tuple(coords)


class HullOracle:
    """Membership oracle for the convex hull of a fixed point set.

    Float LPs propose certificates; every accept carries an exact convex
    combination and every reject an exact separating functional (or a full
    exact simplex run).  Separating hyperplanes are cached across queries,
    which makes bounding-box sweeps cheap.
    """

    def __init__(self, points: Iterable[MultiIndex]):
        pts = sorted({tuple(int(v) for v in p) for p in points}, key=grlex_key)
        if not pts:
            raise ValueError("empty point set")
        self.points = pts
        self.point_set = set(pts)
        self.dim = len(pts[0])
        self._hull: _AffineHull | None = None
        self._eq: list[list[Fraction]] | None = None
        self._floats: np.ndarray | None = None
        self._cut_cache: list[tuple[Point, Fraction]] = []
        # Full standard simplex is a common special case with O(1) geometry.
        self._full_simplex_degree = self._detect_full_simplex()

    @property
    def hull(self) -> _AffineHull:
        if self._hull is None:
            self._hull = _AffineHull(self.points)
        return self._hull

    @property
    def _eq_matrix(self) -> list[list[Fraction]]:
        if self._eq is None:
            self._eq = [[Fraction(p[i]) for p in self.points] for i in range(self.dim)]
            self._eq.append([Fraction(1)] * len(self.points))
        return self._eq

    @property
    def _float_matrix(self) -> np.ndarray:
        if self._floats is None:
            self._floats = np.array(
                [[float(p[i]) for p in self.points] for i in range(self.dim)]
                + [[1.0] * len(self.points)])
        return self._floats

    def _detect_full_simplex(self) -> int | None:
        degrees = {sum(p) for p in self.points}
        if len(degrees) != 1:
            return None
        n = degrees.pop()
        expected = math.comb(n + self.dim - 1, self.dim - 1)
        return n if len(self.points) == expected else None

    # -- exact verification helpers ------------------------------------

    def _rhs(self, z: Point) -> list[Fraction]:
        return list(z) + [Fraction(1)]

    def _verify_combination(self, z: Point, columns: Sequence[int]) -> bool:
        rows = [[self._eq_matrix[i][j] for j in columns] for i in range(self.dim + 1)]
        return feasible_point(rows, self._rhs(z)) is not None

    def _check_cached_cuts(self, z: Point) -> bool:
        for normal, offset in self._cut_cache:
            if sum(a * b for a, b in zip(normal, z)) > offset:
                return True
        return False

    def _try_separation(self, z: Point) -> bool:
        """Float search for a separating functional, verified exactly."""
        m = self.dim
        n_pts = len(self.points)
        # variables: y (m, free in [-1, 1]), c (free); maximize <z,y> - c
        a_ub = np.zeros((n_pts, m + 1))
        for k, p in enumerate(self.points):
            a_ub[k, :m] = [float(v) for v in p]
            a_ub[k, m] = -1.0
        c_vec = np.concatenate([-np.array([float(v) for v in z]), [1.0]])
        bounds = [(-1, 1)] * m + [(None, None)]
        res = linprog(c=c_vec, A_ub=a_ub, b_ub=np.zeros(n_pts), bounds=bounds, method="highs")
        if not res.success or -res.fun <= 1e-9:
            return False
        normal = tuple(Fraction(float(v)).limit_denominator(10 ** 9) for v in res.x[:m])
        offset = max(sum(a * Fraction(b) for a, b in zip(normal, p)) for p in self.points)
        if sum(a * b for a, b in zip(normal, z)) > offset:
            self._cut_cache.append((normal, offset))
            return True
        return False

    # -- public queries -------------------------------------------------

    def contains(self, point: Sequence) -> bool:
        z = _as_point(point)
        if len(z) != self.dim:
            raise ValueError("dimension mismatch")
        if self._full_simplex_degree is not None:
            return all(v >= 0 for v in z) and sum(z) == self._full_simplex_degree
        if all(v.denominator == 1 for v in z):
            key = tuple(int(v) for v in z)
            if key in self.point_set:
                return True
            doubled = tuple(2 * v for v in key)
            for s in self.points:
                partner = tuple(a - b for a, b in zip(doubled, s))
                if partner in self.point_set:
                    return True
        if not self.hull.contains(z):
            return False
        if self._check_cached_cuts(z):
            return False
        # float feasibility proposes a convex combination
        res = linprog(c=np.zeros(len(self.points)), A_eq=self._float_matrix,
                      b_eq=np.array([float(v) for v in z] + [1.0]),
                      bounds=[(0, None)] * len(self.points), method="highs")
        if res.success:
            order = np.argsort(res.x)[::-1]
            columns = [int(j) for j in order[: self.dim + 3] if res.x[j] > 1e-12]
            if columns and self._verify_combination(z, columns):
                return True
        if self._try_separation(z):
            return False
        return self.contains_exact(point)

    def contains_exact(self, point: Sequence) -> bool:
        """Membership by pure exact simplex; the trusted slow path."""
        z = _as_point(point)
        return feasible_point(self._eq_matrix, self._rhs(z)) is not None

    def relint_contains(self, point: Sequence) -> bool:
        """Is the point in the relative interior of the hull?"""
        z = _as_point(point)
        if self._full_simplex_degree is not None:
            return all(v > 0 for v in z) and sum(z) == self._full_simplex_degree
        n_pts = len(self.points)
        # lambda_k = t + mu_k with t maximized
        col_t = [sum(Fraction(p[i]) for p in self.points) for i in range(self.dim)]
        col_t.append(Fraction(n_pts))
        rows = [[col_t[i]] + list(self._eq_matrix[i]) for i in range(self.dim + 1)]
        objective = [Fraction(1)] + [Fraction(0)] * n_pts
        result = solve_lp(objective, rows, self._rhs(z))
        return result.status == OPTIMAL and result.value > 0

    def minimal_face(self, point: Sequence) -> list[MultiIndex]:
        """Points of the set lying on the minimal face containing the point.

        Requires hull membership; raises otherwise.  A point of the set lies
        on that face exactly when some convex representation of the target
        assigns it positive weight.
        """
        z = _as_point(point)
        if self._full_simplex_degree is not None:
            if not self.contains(z):
                raise ValueError("point is outside the hull")
            support = [i for i, v in enumerate(z) if v > 0]
            return [p for p in self.points
                    if all(p[i] == 0 for i in range(self.dim) if i not in support)]
        n_pts = len(self.points)
        undecided = set(range(n_pts))
        face: set[int] = set()
        while undecided:
            objective = [Fraction(1) if k in undecided else Fraction(0) for k in range(n_pts)]
            result = solve_lp(objective, self._eq_matrix, self._rhs(z))
            if result.status != OPTIMAL:
                raise ValueError("point is outside the hull")
            positive = {k for k in range(n_pts) if result.x[k] > 0}
            if not positive & undecided:
                break  # no representation puts mass on the rest
            face |= positive
            undecided -= positive
        return sorted((self.points[k] for k in face), key=grlex_key)


def newton_polytope_membership(support: SupportSet | SparsePoly, point: Sequence) -> bool:
    """Exact test: does the point lie in the convex hull of the support?"""
    s = support if isinstance(support, SupportSet) else SupportSet.of(support)
    if not s.points:
        return False
    if len(tuple(point)) != s.dim:
        raise ValueError("dimension mismatch")
    return HullOracle(s.points).contains(point)


@dataclass(frozen=True)
class DConvexResult:
    d_convex: bool
    counterexample: MultiIndex | None
    candidates_checked: int

    def to_dict(self) -> dict:
        return {
            "d_convex": self.d_convex,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "candidates_checked": self.candidates_checked,
        }


def d_convex_check(support: SupportSet | SparsePoly, max_candidates: int = 2_000_000) -> DConvexResult:
    """Search the bounding box for a lattice point of the hull missing from the set.

    Returns the graded-lex first counterexample, or a clean verdict when the
    set equals the lattice points of its own convex hull.
    """
    s = support if isinstance(support, SupportSet) else SupportSet.of(support)
    if not s.points:
        raise ValueError("empty support")
    if len(s.points) > 10_000:
        raise ValueError("support too large for the bounding-box sweep")
    pts = s.sorted_points()
    lo = [min(p[i] for p in pts) for i in range(s.dim)]
    hi = [max(p[i] for p in pts) for i in range(s.dim)]
    if any(h > 1000 for h in hi):
        raise ValueError("coordinates too large for the bounding-box sweep")
    count = 1
    for a, b in zip(lo, hi):
        count *= b - a + 1
        if count > max_candidates:
            raise ValueError(f"bounding box has more than {max_candidates} lattice points")
    oracle = HullOracle(pts)
    box = sorted(iter_product(*(range(a, b + 1) for a, b in zip(lo, hi))), key=grlex_key)
    checked = 0
    for z in box:
        if z in oracle.point_set:
            continue
        if not oracle.hull.contains(_as_point(z)):
            continue
        checked += 1
        if oracle.contains(z):
            return DConvexResult(False, z, checked)
    return DConvexResult(True, None, checked)


def membership_by_facets(support: SupportSet | SparsePoly, point: Sequence) -> bool:
    """Independent hull-membership oracle via exact facet enumeration.

    Enumerates candidate supporting hyperplanes spanned by affinely
    independent subsets after reducing to exact affine-hull coordinates.
    Intended for small sets in ambient dimension <= 3.
    """
    s = support if isinstance(support, SupportSet) else SupportSet.of(support)
    if s.dim > 3:
        raise ValueError("facet enumeration oracle is limited to dimension <= 3")
    pts = s.sorted_points()
    if len(pts) > 40:
        raise ValueError("facet enumeration oracle is limited to small sets")
    z = _as_point(point)
    hull = _AffineHull(pts)
    if not hull.contains(z):
        return False
    d = hull.dim
    if d == 0:
        return True  # single point, and z is in its affine hull
    reduced = [hull.coordinates(_as_point(p)) for p in pts]
    zr = hull.coordinates(z)
    if d == 1:
        values = [p[0] for p in reduced]
        return min(values) <= zr[0] <= max(values)
    for subset in combinations(range(len(reduced)), d):
        base = reduced[subset[0]]
        rows = [tuple(a - b for a, b in zip(reduced[j], base)) for j in subset[1:]]
        normal = _nullspace_vector(rows, d)
        if normal is None:
            continue
        offset = sum(a * b for a, b in zip(normal, base))
        sides = [sum(a * b for a, b in zip(normal, p)) - offset for p in reduced]
        if all(v <= 0 for v in sides):
            if sum(a * b for a, b in zip(normal, zr)) - offset > 0:
                return False
        elif all(v >= 0 for v in sides):
            if sum(a * b for a, b in zip(normal, zr)) - offset < 0:
                return False
    return True


def _nullspace_vector(rows: Sequence[Point], dim: int) -> Point | None:
    """A nonzero vector orthogonal to the given rows, if the nullity is one."""
    hull = _AffineHull([(0,) * dim] + [tuple(r) for r in rows])
    if hull.dim != dim - 1:
        return None
    pivots = set(hull.pivots)
    free = next(i for i in range(dim) if i not in pivots)
    v = [Fraction(0)] * dim
    v[free] = Fraction(1)
    for row, piv in zip(hull.rows, hull.pivots):
        v[piv] = -row[free]
    return tuple(v)


# ----------------------------------------------------------------------
# degree functions on variable subsets


@dataclass(frozen=True)
class DegFunction:
    """Max total degree attained on each subset of variables, as a bitmask table."""

    num_vars: int
    table: tuple[int, ...]

    @classmethod
    def of(cls, p: SparsePoly) -> DegFunction:
        if p.num_vars > 20:
            raise ValueError("degree table needs 2^m entries; m too large")
        size = 1 << p.num_vars
        table = [0] * size
        for exponent in p.terms:
            subset_sum = [0] * size
            for mask in range(1, size):
                low = mask & -mask
                i = low.bit_length() - 1
                subset_sum[mask] = subset_sum[mask ^ low] + exponent[i]
                if subset_sum[mask] > table[mask]:
                    table[mask] = subset_sum[mask]
        return cls(p.num_vars, tuple(table))

    def value(self, subset: Iterable[int]) -> int:
        mask = 0
        for i in subset:
            if not 0 <= i < self.num_vars:
                raise ValueError(f"variable index {i} out of range")
            mask |= 1 << i
        return self.table[mask]


def deg_subset(p: SparsePoly, subset: Iterable[int]) -> int:
    """Maximum of sum(r_j for j in subset) over the support of p."""
    indices = sorted(set(subset))
    if any(not 0 <= i < p.num_vars for i in indices):
        raise ValueError("subset contains an out-of-range variable index")
    best = 0
    for exponent in p.terms:
        total = sum(exponent[i] for i in indices)
        if total > best:
            best = total
    return best


@dataclass(frozen=True)
class SubmodularityResult:
    submodular: bool
    violations: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def to_dict(self) -> dict:
        return {"submodular": self.submodular,
                "violations": [[list(s), list(t)] for s, t in self.violations]}


def submodularity_check(deg: DegFunction, max_violations: int = 10) -> SubmodularityResult:
    """Check Deg(S u T) + Deg(S n T) <= Deg(S) + Deg(T) over all subset pairs."""
    if deg.num_vars > 12:
        raise ValueError("pairwise submodularity check is limited to 12 variables")
    size = 1 << deg.num_vars
    table = deg.table
    violations = []
    for s in range(size):
        for t in range(s, size):
            if table[s | t] + table[s & t] > table[s] + table[t]:
                violations.append((_mask_to_tuple(s, deg.num_vars), _mask_to_tuple(t, deg.num_vars)))
                if len(violations) >= max_violations:
                    return SubmodularityResult(False, tuple(violations))
    return SubmodularityResult(not violations, tuple(violations))


def _mask_to_tuple(mask: int, m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m) if mask >> i & 1)


@dataclass(frozen=True)
class RadoResult:
    """Outcome of the degree-constraint support characterization.

    `holds` reports the biconditional on the tested polynomial; it is only a
    theorem for H-stable inputs, so callers should treat a failure on other
    inputs as a finding, not an error.
    """

    holds: bool
    degree: int
    vectors_checked: int
    violations: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"holds": self.holds, "degree": self.degree,
                "vectors_checked": self.vectors_checked,
                "violations": list(self.violations)}


def rado_check(p: SparsePoly, max_vectors: int = 2_000_000) -> RadoResult:
    """Exhaustively test: coefficient positive iff all subset degree bounds hold.

    Enumerates every nonnegative integer vector of total degree n against all
    2^m variable subsets.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no degree")
    if not p.is_homogeneous():
        raise ValueError("the support characterization is stated for homogeneous polynomials")
    m = p.num_vars
    if m > 12:
        raise ValueError("subset enumeration is limited to 12 variables")
    n = p.total_degree()
    deg = DegFunction.of(p)
    size = 1 << m
    violations = []
    checked = 0
    for vec in _compositions_of(n, m):
        checked += 1
        if checked > max_vectors:
            raise ValueError("too many degree-n vectors to enumerate")
        in_support = vec in p.terms
        bad_subset = None
        for mask in range(size):
            total = sum(vec[i] for i in range(m) if mask >> i & 1)
            if total > deg.table[mask]:
                bad_subset = _mask_to_tuple(mask, m)
                break
        constraints_hold = bad_subset is None
        if in_support and not constraints_hold:
            violations.append({"vector": list(vec), "direction": "support-exceeds-degree",
                               "subset": list(bad_subset)})
        elif constraints_hold and not in_support:
            violations.append({"vector": list(vec), "direction": "feasible-but-missing"})
    return RadoResult(not violations, n, checked, tuple(violations[:20]))


def _compositions_of(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions_of(total - first, parts - 1):
            yield (first,) + rest
