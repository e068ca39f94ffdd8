import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import cycle_polynomial, random_real_rooted, two_block_quartic
from logcap.logconcavity import (
    CERTIFIED,
    REFUTED,
    SAMPLED_PASS,
    count_real_roots,
    dense_coefficients,
    lc_member,
    n_newton_check,
    real_rooted_check,
    sequence_log_concave,
    slc_exact_univariate,
    slc_sampled,
)
from logcap.polynomials import SparsePoly, homogenize


def poly1(*coeffs):
    return SparsePoly(1, {(i,): c for i, c in enumerate(coeffs) if c})


def test_lc_member_examples():
    assert lc_member([1, 1, 1])
    assert lc_member([1, 2, 1])
    assert not lc_member([1, 1, 2])
    assert lc_member([0, 1, 0])          # literal cone test
    assert not lc_member([1, -1, 1])
    assert lc_member([1.0, 2.0, 1.0])    # float path
    assert not lc_member([1.0, 1.0, 2.0])


def test_sequence_log_concave_rejects_internal_zeros():
    assert sequence_log_concave([0, 1, 2, 1, 0])   # leading/trailing zeros fine
    assert not sequence_log_concave([1, 0, 0, 1])  # literal holds, support gapped
    assert not sequence_log_concave([1, 0, 1])


def test_n_newton_examples():
    real_rooted = poly1(2, 3, 1)           # (t+1)(t+2)
    assert n_newton_check(real_rooted, 2)  # d = (2, 3/2, 1)
    assert not n_newton_check(poly1(1, 1, 1), 2)  # d = (1, 1/2, 1)
    gap = poly1(0, 1, 0, 1)                # t + t^3
    assert not n_newton_check(gap, 4)       # d = (0, 1/4, 0, 1/4, 0)
    with pytest.raises(ValueError):
        n_newton_check(gap, 2)


def test_slc_exact_univariate_examples():
    # truncation of e^t: G is constant one
    coeffs = [Fraction(1, __import__("math").factorial(i)) for i in range(6)]
    assert slc_exact_univariate(coeffs)
    assert not slc_exact_univariate([1, 1, 1])     # G = (1, 1, 2)
    assert not slc_exact_univariate([0, 1, 0, 1])  # G = (0, 1, 0, 6)


def test_real_rooted_examples():
    assert real_rooted_check(poly1(2, 3, 1))        # (t+1)(t+2)
    assert not real_rooted_check(poly1(1, 1, 1))    # complex pair
    assert real_rooted_check(poly1(1, 2, 1))        # (t+1)^2, square-free reduction
    assert real_rooted_check(poly1(0, 1))           # t
    assert real_rooted_check(poly1(5))              # constants are vacuously fine
    assert count_real_roots(poly1(-0 + 2, 3, 1)) == 2


def test_real_rooted_random_products():
    rng = random.Random(99)
    for _ in range(10):
        p = random_real_rooted(rng, rng.randint(2, 5))
        assert real_rooted_check(p)


def test_real_rooted_implies_n_newton():
    rng = random.Random(17)
    for _ in range(12):
        p = random_real_rooted(rng, rng.randint(2, 5))
        assert n_newton_check(p, p.total_degree())


def test_slc_sampled_certifies_square():
    sq = SparsePoly.linear_form([1, 1]) ** 2
    verdict = slc_sampled(sq, samples=100, seed=3)
    assert verdict.status == CERTIFIED
    assert verdict.method == "exact-bivariate-homogeneous"


def test_slc_sampled_refutes_paper_quartic():
    # x1 x2 x3 x4 + (1/4)((x1 x2)^2 + (x3 x4)^2): log Der is fine, the
    # polynomial itself is not log-concave on the positive orthant
    p = SparsePoly(4, {(1, 1, 1, 1): 1, (2, 2, 0, 0): Fraction(1, 4),
                       (0, 0, 2, 2): Fraction(1, 4)})
    verdict = slc_sampled(p, samples=200, seed=7)
    assert verdict.status == REFUTED
    assert verdict.witness is not None
    assert verdict.witness.eigenvalue > 0


def test_slc_sampled_refutes_two_block_quartic():
    verdict = slc_sampled(two_block_quartic(), samples=200, seed=7)
    assert verdict.status == REFUTED
    # frozen witness location from the seeded run: first-order derivative in x4
    assert verdict.witness.order == (0, 0, 0, 1)


def test_slc_sampled_passes_stable_products():
    verdict = slc_sampled(cycle_polynomial(2), samples=120, seed=11)
    assert verdict.status == SAMPLED_PASS
    assert verdict.orders_checked == 46


def test_slc_sampled_univariate_routes():
    ok = poly1(2, 3, 1)
    verdict = slc_sampled(ok, samples=50, seed=5)
    assert verdict.status == CERTIFIED and verdict.method == "exact-univariate"

    gap = poly1(0, 1, 0, 1)  # t + t^3: fails strong log-concavity
    verdict = slc_sampled(gap, samples=50, seed=5)
    assert verdict.status == REFUTED
    assert verdict.witness is not None and verdict.witness.eigenvalue > 0


def test_slc_sampled_deterministic():
    p = two_block_quartic()
    a = slc_sampled(p, samples=150, seed=21)
    b = slc_sampled(p, samples=150, seed=21)
    assert a == b


def test_equivalence_n_newton_vs_sampler():
    """Coefficient test and sampler must agree through the homogenization."""
    rng = random.Random(151)
    fixtures = []
    for _ in range(14):
        fixtures.append(random_real_rooted(rng, rng.randint(2, 4)))
    fixtures.append(poly1(1, 1, 1))
    fixtures.append(poly1(1, 3, 1))
    fixtures.append(poly1(0, 1, 0, 1))
    fixtures.append(poly1(2, 3, 1))
    fixtures.append(poly1(1, 4, 6, 4, 1))
    fixtures.append(poly1(1, 2, 2))
    for r in fixtures:
        n = r.total_degree() + rng.randint(0, 1)
        lifted = homogenize(r, n)
        verdict = slc_sampled(lifted, samples=200, seed=31)
        newton = n_newton_check(r, n)
        if newton:
            assert verdict.status == CERTIFIED  # and in particular: no refutation
        else:
            assert verdict.status == REFUTED


@settings(max_examples=30, deadline=None, derandomize=True)
@given(st.lists(st.integers(1, 9), min_size=2, max_size=4))
def test_products_of_linear_factors_are_n_newton(roots):
    p = poly1(Fraction(roots[0]), 1)
    for root in roots[1:]:
        p = p * poly1(Fraction(root), 1)
    assert real_rooted_check(p)
    assert n_newton_check(p, p.total_degree())
    assert slc_exact_univariate(dense_coefficients(p))


def test_derivative_closure_orders_cover_box():
    p = cycle_polynomial(2)
    verdict = slc_sampled(p, samples=20, seed=1)
    expected = sum(1 for c in __import__("itertools").product(range(3), repeat=4)
                   if not p.partial_derivative(c).is_zero())
    assert verdict.orders_checked == expected
