"""The fixture catalog: named polynomials with known structure.

Each fixture records how it was built, because the lower bounds in the
verifier suite are theorems only for particular constructions (products of
nonnegative linear forms, row products of nonnegative matrices, powers of
linear forms).  The catalog also carries reference instances that are known
NOT to be strongly log-concave; the suite uses them to confirm it can
detect violations.

The catalog is also shipped as JSON files (package data under fixtures/)
so the CLI and service can address fixtures as "fixture:NAME".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .permanent import NonnegMatrix, prod_poly
from .polynomials import ExpLinearFixture, SparsePoly, product

CONSTRUCTIVE = "constructive-hstable"
CERTIFIED = "slc-certified"
REFERENCE = "user"


@dataclass(frozen=True)
class Fixture:
    name: str
    poly: SparsePoly
    provenance: str
    construction: str
    hstable: bool

    def to_dict(self) -> dict:
        from .jsonio import poly_to_dict

        return {"name": self.name, "provenance": self.provenance,
                "construction": self.construction, "hstable": self.hstable,
                "poly": poly_to_dict(self.poly)}


def cycle_product(n: int) -> SparsePoly:
    """(x_1+x_2)(x_2+x_3)...(x_{2n}+x_1): the even-cycle product of pair forms."""
    m = 2 * n
    factors = []
    for i in range(m):
        j = (i + 1) % m
        factors.append(SparsePoly.linear_form([1 if k in (i, j) else 0 for k in range(m)]))
    return product(factors)


def sum_power(m: int, n: int) -> SparsePoly:
    return SparsePoly.linear_form([1] * m) ** n


def triangle_product() -> SparsePoly:
    return product([SparsePoly.linear_form([1, 1, 0]),
                    SparsePoly.linear_form([0, 1, 1]),
                    SparsePoly.linear_form([1, 0, 1])])


def two_block_quartic() -> SparsePoly:
    """(x+y)^3 (v+w) + (v+w)^3 (x+y): log-concave, capacity 32, but the
    all-ones mixed derivative vanishes (the support has a lattice gap)."""
    xy = SparsePoly.linear_form([1, 1, 0, 0])
    vw = SparsePoly.linear_form([0, 0, 1, 1])
    return xy ** 3 * vw + vw ** 3 * xy


def matching_plus_squares() -> SparsePoly:
    """x1 x2 x3 x4 + ((x1 x2)^2 + (x3 x4)^2)/4: not log-concave on the
    positive orthant even though its derivative lattice map behaves."""
    return SparsePoly(4, {(1, 1, 1, 1): 1, (2, 2, 0, 0): Fraction(1, 4),
                          (0, 0, 2, 2): Fraction(1, 4)})


def gap_cubic() -> SparsePoly:
    return SparsePoly(1, {(1,): 1, (3,): 1})  # t + t^3


def gap_square() -> SparsePoly:
    return SparsePoly(1, {(0,): 1, (2,): 1})  # 1 + t^2


def regular_bipartite_matrix() -> NonnegMatrix:
    """6x6 circulant with three 1/3 entries per row: 3-regular, doubly stochastic."""
    n = 6
    rows = tuple(tuple(Fraction(1, 3) if (j - i) % n in (0, 1, 2) else Fraction(0)
                       for j in range(n)) for i in range(n))
    return NonnegMatrix(rows)


def stable_catalog() -> list[Fixture]:
    """Fixtures that are H-stable (hence strongly log-concave) by construction."""
    fixtures = [
        Fixture("linear-square", sum_power(2, 2), CONSTRUCTIVE,
                "(x1 + x2)^2: square of a positive linear form", True),
        Fixture("linear-cube-weighted", SparsePoly.linear_form([1, 2]) ** 3, CONSTRUCTIVE,
                "(x1 + 2 x2)^3: power of a positive linear form", True),
        Fixture("sum-power-3", sum_power(3, 3), CONSTRUCTIVE,
                "(x1 + x2 + x3)^3", True),
        Fixture("sum-power-4", sum_power(4, 4), CONSTRUCTIVE,
                "(x1 + x2 + x3 + x4)^4", True),
        Fixture("cycle-2", cycle_product(2), CONSTRUCTIVE,
                "product of adjacent-pair forms around a 4-cycle", True),
        Fixture("cycle-3", cycle_product(3), CONSTRUCTIVE,
                "product of adjacent-pair forms around a 6-cycle", True),
        Fixture("triangle-product", triangle_product(), CONSTRUCTIVE,
                "(x1+x2)(x2+x3)(x1+x3)", True),
        Fixture("pair-split-product",
                SparsePoly.linear_form([1, 1, 0, 0]) * SparsePoly.linear_form([0, 0, 1, 1]),
                CONSTRUCTIVE, "(x1+x2)(x3+x4): multilinear product of disjoint forms", True),
        Fixture("row-product-identity-3", prod_poly(NonnegMatrix.identity(3)), CONSTRUCTIVE,
                "row product of the 3x3 identity: x1 x2 x3", True),
        Fixture("row-product-uniform-3", prod_poly(NonnegMatrix.uniform(3)), CONSTRUCTIVE,
                "row product of the uniform doubly stochastic 3x3 matrix", True),
        Fixture("row-product-uniform-4", prod_poly(NonnegMatrix.uniform(4)), CONSTRUCTIVE,
                "row product of the uniform doubly stochastic 4x4 matrix", True),
        Fixture("row-product-regular-6", prod_poly(regular_bipartite_matrix()), CONSTRUCTIVE,
                "row product of a 3-regular bipartite adjacency matrix over 3", True),
        Fixture("mixed-product-3var",
                product([SparsePoly.linear_form([1, 2, 1]),
                         SparsePoly.linear_form([2, 1, 1]),
                         SparsePoly.linear_form([1, 1, 2])]),
                CONSTRUCTIVE, "product of three positive linear forms in three variables", True),
    ]
    return fixtures


def reference_catalog() -> list[Fixture]:
    """Instances without a stability certificate, including known violations."""
    return [
        Fixture("two-block-quartic", two_block_quartic(), REFERENCE,
                "(x+y)^3(v+w) + (v+w)^3(x+y): log-concave with a support gap", False),
        Fixture("matching-plus-squares", matching_plus_squares(), REFERENCE,
                "x1x2x3x4 + ((x1x2)^2 + (x3x4)^2)/4: not log-concave", False),
        Fixture("gap-cubic", gap_cubic(), REFERENCE,
                "t + t^3: fourth root concave, support not discretely convex", False),
        Fixture("gap-square", gap_square(), REFERENCE,
                "1 + t^2: the smallest support gap example", False),
        Fixture("affine-product", SparsePoly(2, {(0, 0): 1, (1, 0): 1})
                * SparsePoly(2, {(0, 0): 1, (0, 1): 1}), CERTIFIED,
                "(1 + x1)(1 + x2): product of affine forms, strongly log-concave", False),
    ]


def full_catalog() -> list[Fixture]:
    return stable_catalog() + reference_catalog()


def exp_fixture(coefficients) -> ExpLinearFixture:
    return ExpLinearFixture(tuple(Fraction(v) for v in coefficients))


def catalog_by_name() -> dict[str, Fixture]:
    return {f.name: f for f in full_catalog()}


def load_fixture(name: str) -> Fixture:
    try:
        return catalog_by_name()[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(catalog_by_name())}")


def fixture_names() -> list[str]:
    return [f.name for f in full_catalog()]


def write_fixture_files(directory: str | Path) -> list[Path]:
    """Regenerate the shipped JSON catalog (used at build time and in tests)."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fixture in full_catalog():
        path = out / f"{fixture.name}.json"
        path.write_text(json.dumps(fixture.to_dict(), indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def packaged_fixture(name: str) -> dict:
    """Load one fixture JSON from package data."""
    ref = resources.files("logcap") / "fixtures" / f"{name}.json"
    return json.loads(ref.read_text())
