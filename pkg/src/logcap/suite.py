"""The batch verification suite behind `verify --suite ...`.

Runs every applicable inequality verifier over the fixture catalog and
returns a flat list of report dicts.  All sampling seeds are derived from
the one master seed through a splittable counter-based generator, so a
fixed (suite, seed) pair produces byte-identical reports.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .fixtures import (
    exp_fixture,
    regular_bipartite_matrix,
    stable_catalog,
    two_block_quartic,
)
from .inequalities import (
    capacity_midpoint_check,
    verify_cf_logconcavity,
    verify_inner_product,
    verify_main_thm,
    verify_monomial_bounds,
    verify_newton_multivariate,
    verify_schrijver,
)
from .permanent import NonnegMatrix, sinkhorn, vdw_bounds_check
from .polynomials import SparsePoly
from .reporting import BoundReport, VIOLATED

SUITES = ("all", "core", "permanent", "inner", "newton")


def derive_seed(master: int, salt: int) -> int:
    """Child seed from the master via a splittable seed sequence."""
    return int(np.random.SeedSequence([master, salt]).generate_state(1)[0])


def _entry(fixture: str, report: BoundReport) -> dict:
    record = {"fixture": fixture, "type": "bound"}
    record.update(report.to_dict())
    return record


def _core_checks(seed: int, tol: float) -> list[dict]:
    out: list[dict] = []
    for fixture in stable_catalog():
        p = fixture.poly
        n = p.num_vars
        kind = "homogeneous" if (p.is_homogeneous() and p.total_degree() == n) else "entire"
        for report in verify_main_thm(p, kind, provenance=fixture.provenance, tol=tol):
            out.append(_entry(fixture.name, report))
        ones = (1,) * n
        for report in verify_monomial_bounds(
                p, ones, "homogeneous" if kind == "homogeneous" else "entire",
                provenance=fixture.provenance, tol=tol):
            out.append(_entry(fixture.name, report))
        if kind == "homogeneous":
            k = max(p.max_degrees())
            for report in verify_schrijver(p, k, provenance=fixture.provenance, tol=tol):
                out.append(_entry(fixture.name, report))

    # equality families for the exponential bound
    for name, coeffs in (("exp-linear-unit-2", (1, 1)), ("exp-linear-rational-3", (2, 1, 3))):
        f = exp_fixture(coeffs)
        for report in verify_main_thm(f, "entire", provenance="slc-certified", tol=tol):
            out.append(_entry(name, report))

    # inhomogeneous lower bound on an affine product
    affine = SparsePoly(2, {(0, 0): 1, (1, 0): 1}) * SparsePoly(2, {(0, 0): 1, (0, 1): 1})
    for report in verify_main_thm(affine, "polynomial", provenance="slc-certified", tol=tol):
        out.append(_entry("affine-product", report))

    # regression: the suite must flag the two-block quartic as a violation
    q = two_block_quartic()
    for report in verify_main_thm(q, "homogeneous", provenance="user", tol=tol):
        out.append(_entry("two-block-quartic", report))
    return out


def _newton_checks(seed: int, tol: float) -> list[dict]:
    out: list[dict] = []
    from .fixtures import cycle_product, sum_power

    for n in (2, 3, 4):
        p = sum_power(n, n)
        parts = [(Fraction(1, n), tuple(n if j == i else 0 for j in range(n)))
                 for i in range(n)]
        report = verify_newton_multivariate(p, (1,) * n, parts, "homogeneous",
                                            provenance="constructive-hstable")
        out.append(_entry(f"sum-power-{n}", report))
    for n in (2, 3):
        p = cycle_product(n)
        m = 2 * n
        y1 = tuple(2 if i % 2 == 0 else 0 for i in range(m))
        y2 = tuple(0 if i % 2 == 0 else 2 for i in range(m))
        report = verify_newton_multivariate(
            p, (1,) * m, [(Fraction(1, 2), y1), (Fraction(1, 2), y2)],
            "hstable-sparse", degree_bound=2, provenance="constructive-hstable")
        out.append(_entry(f"cycle-{n}", report))
        out.append(_entry(f"cycle-{n}", capacity_midpoint_check(
            p, y1, y2, provenance="constructive-hstable", solver_tol=tol)))
    cube = sum_power(2, 3)
    report = verify_newton_multivariate(
        cube, (2, 1), [(Fraction(1, 2), (3, 0)), (Fraction(1, 2), (1, 2))],
        "geometric-mean", provenance="slc-certified")
    out.append(_entry("linear-cube", report))
    for report in verify_cf_logconcavity(sum_power(2, 4), 4, derive_seed(seed, 11),
                                         provenance="slc-certified", solver_tol=tol):
        out.append(_entry("sum-power-quartic", report))
    return out


def _inner_checks(seed: int, tol: float) -> list[dict]:
    out: list[dict] = []
    sq = SparsePoly.linear_form([1, 1]) ** 2
    for report in verify_inner_product(sq, sq, (1, 1),
                                       provenance="constructive-hstable", tol=tol):
        out.append(_entry("linear-square", report))
    pair = SparsePoly.linear_form([1, 1, 0, 0]) * SparsePoly.linear_form([0, 0, 1, 1])
    for report in verify_inner_product(pair, pair, (Fraction(1, 2),) * 4,
                                       provenance="constructive-hstable", tol=tol):
        out.append(_entry("pair-split-product", report))
    mono = SparsePoly.monomial(2, (1, 1))
    for report in verify_inner_product(mono, mono, (1, 1),
                                       provenance="constructive-hstable", tol=tol):
        out.append(_entry("unit-monomial", report))
    return out


def _permanent_checks(seed: int, tol: float) -> list[dict]:
    out: list[dict] = []
    for n in (3, 4):
        for report in vdw_bounds_check(NonnegMatrix.uniform(n)):
            out.append(_entry(f"uniform-{n}", report))
    for report in vdw_bounds_check(NonnegMatrix.identity(4)):
        out.append(_entry("identity-4", report))
    for report in vdw_bounds_check(regular_bipartite_matrix()):
        out.append(_entry("regular-6", report))
    rng = np.random.Generator(np.random.Philox(derive_seed(seed, 23)))
    raw = NonnegMatrix(tuple(tuple(Fraction(int(v)) for v in row)
                             for row in rng.integers(1, 9, size=(5, 5))))
    scaled = sinkhorn(raw, tol=1e-12).matrix
    for report in vdw_bounds_check(scaled):
        out.append(_entry("sinkhorn-5", report))
    return out


def run_suite(suite: str = "all", seed: int = 0, tol: float = 1e-8) -> list[dict]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    sections = {
        "core": _core_checks,
        "newton": _newton_checks,
        "inner": _inner_checks,
        "permanent": _permanent_checks,
    }
    if suite == "all":
        chosen = ["core", "newton", "inner", "permanent"]
    else:
        chosen = [suite] if suite != "core" else ["core"]
    reports: list[dict] = []
    for name in chosen:
        reports.extend(sections[name](seed, tol))
    return reports


def exit_code_for(records: list[dict]) -> int:
    """0 when no guaranteed-class check is violated, else 2."""
    for record in records:
        if record.get("verdict") == VIOLATED and record.get("guaranteed"):
            return 2
    return 0
