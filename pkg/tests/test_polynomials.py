import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import cycle_polynomial, random_poly, two_block_quartic
from logcap.polynomials import (
    ExpLinearFixture,
    SparsePoly,
    change_of_variables,
    correlator,
    dehomogenize,
    homogenize,
    inner_product,
    multiply,
    reciprocal_product,
    split_variables,
)


def test_constructor_rejects_bad_terms():
    with pytest.raises(ValueError):
        SparsePoly(2, {(1, 0): -1})
    with pytest.raises(ValueError):
        SparsePoly(2, {(1, -1): 1})
    with pytest.raises(ValueError):
        SparsePoly(2, {(1,): 1})
    assert SparsePoly(2, {(1, 0): 0}).is_zero()


def test_evaluate_simple():
    p = SparsePoly.linear_form([1, 1])
    assert p.evaluate([1.0, 1.0]) == 2.0
    assert (p * p).evaluate([1.0, 2.0]) == 9.0


def test_evaluate_cycle_at_ones():
    # oracle: the product of the four factor values, each 2 at the all-ones point
    p = cycle_polynomial(2)
    assert p.evaluate([1.0] * 4) == pytest.approx(16.0, rel=1e-12)
    assert p.evaluate_exact([1] * 4) == 16


def test_evaluate_validates_input():
    p = SparsePoly.linear_form([1, 1])
    with pytest.raises(ValueError):
        p.evaluate([1.0])
    with pytest.raises(ValueError):
        p.evaluate([1.0, 0.0])
    with pytest.raises(ValueError):
        p.evaluate([1.0, -2.0])


def test_log_evaluate_basic():
    assert SparsePoly.monomial(2, (1, 1)).log_evaluate([0.0, 0.0]) == 0.0
    assert SparsePoly.linear_form([1, 1]).log_evaluate([0.0, 0.0]) == pytest.approx(math.log(2))


def test_log_evaluate_overflow_safe():
    sq = SparsePoly.linear_form([1, 1]) ** 2
    t = 300.0
    assert sq.log_evaluate([t, t]) == pytest.approx(2 * t + math.log(4), rel=1e-13)


def test_log_evaluate_zero_polynomial():
    with pytest.raises(ValueError):
        SparsePoly.zero(2).log_evaluate([0.0, 0.0])


def test_partial_derivative():
    p = SparsePoly.monomial(2, (2, 1))  # x1^2 x2
    d = p.partial_derivative((1, 0))
    assert d == SparsePoly(2, {(1, 1): 2})
    assert p.partial_derivative((0, 2)).is_zero()
    sq = SparsePoly.linear_form([1, 1]) ** 2
    assert sq.partial_derivative((1, 1)) == SparsePoly.constant(2, 2)


def test_der_at_zero_cycle_values():
    for n in (2, 3):
        p = cycle_polynomial(n)
        m = 2 * n
        assert p.der_at_zero((1,) * m) == 2
        odd = tuple(2 if i % 2 == 0 else 0 for i in range(m))
        even = tuple(0 if i % 2 == 0 else 2 for i in range(m))
        assert p.der_at_zero(odd) == 2 ** n
        assert p.der_at_zero(even) == 2 ** n


def test_der_at_zero_gap_example():
    q = two_block_quartic()
    assert q.der_at_zero((1, 1, 1, 1)) == 0


def test_der_at_zero_dimension_check():
    with pytest.raises(ValueError):
        SparsePoly.linear_form([1, 1]).der_at_zero((1,))


def test_der_matches_coefficient_times_factorials():
    rng = random.Random(7)
    for _ in range(8):
        p = random_poly(rng, 3, 4, 10)
        for exponent, coef in p.terms.items():
            expected = coef
            for e in exponent:
                expected *= math.factorial(e)
            assert p.der_at_zero(exponent) == expected
        for _ in range(10):
            off = tuple(rng.randint(0, 6) for _ in range(3))
            if off not in p.terms:
                assert p.der_at_zero(off) == 0


def test_derivative_commutes_with_der_at_zero():
    rng = random.Random(11)
    for _ in range(10):
        p = random_poly(rng, 3, 4, 8)
        c = tuple(rng.randint(0, 2) for _ in range(3))
        r = tuple(rng.randint(0, 2) for _ in range(3))
        shifted = tuple(a + b for a, b in zip(c, r))
        assert p.partial_derivative(c).der_at_zero(r) == p.der_at_zero(shifted)


def test_split_variables_examples():
    p = SparsePoly.monomial(1, (2,))
    assert split_variables(p, (2,)) == SparsePoly.linear_form([1, 1]) ** 2

    p = SparsePoly.monomial(2, (1, 1))
    assert split_variables(p, (1, 1)) == SparsePoly.monomial(2, (1, 1))

    sq = SparsePoly.linear_form([1, 1]) ** 2
    split = split_variables(sq, (2, 0))
    assert split == SparsePoly.linear_form([1, 1]) ** 2
    assert sq.der_at_zero((2, 0)) == split.der_at_zero((1, 1)) == 2


def test_split_variables_identity_on_support():
    rng = random.Random(3)
    for _ in range(6):
        p = random_poly(rng, 3, 3, 6)
        for exponent in p.terms:
            if sum(exponent) == 0:
                continue
            split = split_variables(p, exponent)
            assert p.der_at_zero(exponent) == split.der_at_zero((1,) * sum(exponent))


def test_split_variables_rejects_zero_target():
    with pytest.raises(ValueError):
        split_variables(SparsePoly.linear_form([1, 1]), (0, 0))


def test_homogenize():
    r = SparsePoly(1, {(0,): 1, (1,): 1})
    assert homogenize(r, 1) == SparsePoly.linear_form([1, 1])
    r2 = SparsePoly(1, {(0,): 1, (1,): 2, (2,): 1})
    assert homogenize(r2, 2) == SparsePoly.linear_form([1, 1]) ** 2
    gap = SparsePoly(1, {(1,): 1, (3,): 1})
    assert homogenize(gap, 4) == SparsePoly(2, {(1, 3): 1, (3, 1): 1})
    with pytest.raises(ValueError):
        homogenize(gap, 2)
    assert dehomogenize(homogenize(gap, 4)) == gap


def test_multiply_examples():
    p = SparsePoly.linear_form([1, 1])
    assert multiply(p, p) == SparsePoly(2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})
    one = SparsePoly.constant(2, 1)
    assert multiply(p, one) == p
    assert cycle_polynomial(2).coefficient((1, 1, 1, 1)) == 2


def test_multiply_matches_pointwise_product():
    # oracle: exact evaluation at random rational points
    rng = random.Random(19)
    for _ in range(6):
        p = random_poly(rng, 2, 3, 5)
        q = random_poly(rng, 2, 3, 5)
        prod = multiply(p, q)
        for _ in range(4):
            x = [Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(2)]
            assert prod.evaluate_exact(x) == p.evaluate_exact(x) * q.evaluate_exact(x)


def test_inner_product_examples():
    p = SparsePoly.linear_form([1, 1])
    assert inner_product(p, SparsePoly.variable(2, 0)) == 1
    sq = p * p
    assert inner_product(sq, sq) == 6  # coefficients (1, 2, 1): 1 + 4 + 1
    assert inner_product(SparsePoly.monomial(2, (2, 0)), SparsePoly.monomial(2, (0, 2))) == 0
    with pytest.raises(ValueError):
        inner_product(sq, p)


def test_inner_product_bilinear_symmetric():
    rng = random.Random(23)
    a = SparsePoly.linear_form([1, 2]) ** 2
    b = SparsePoly.linear_form([3, 1]) ** 2
    c = SparsePoly.linear_form([1, 1]) ** 2
    assert inner_product(a, b) == inner_product(b, a)
    assert inner_product(a + c, b) == inner_product(a, b) + inner_product(c, b)
    scale = Fraction(rng.randint(1, 5))
    assert inner_product(a * scale, b) == scale * inner_product(a, b)


def test_correlator():
    mono = SparsePoly.monomial(2, (1, 1))
    assert correlator(mono, mono) == SparsePoly.monomial(2, (2, 2))

    sq = SparsePoly.linear_form([1, 1]) ** 2
    f = correlator(sq, sq)
    assert f.coefficient((2, 2)) == 6
    assert f.is_homogeneous() and f.total_degree() == 4

    disjoint = correlator(SparsePoly.monomial(2, (2, 0)), SparsePoly.monomial(2, (0, 2)))
    assert disjoint.coefficient((2, 2)) == 0

    with pytest.raises(ValueError):
        correlator(sq, SparsePoly.linear_form([1, 1]))


def test_correlator_mixed_derivative_identity():
    rng = random.Random(5)
    for _ in range(5):
        p = (SparsePoly.linear_form([rng.randint(1, 4), rng.randint(1, 4)])
             * SparsePoly.linear_form([rng.randint(1, 4), rng.randint(1, 4)]))
        q = (SparsePoly.linear_form([rng.randint(1, 4), rng.randint(1, 4)])
             * SparsePoly.linear_form([rng.randint(1, 4), rng.randint(1, 4)]))
        n, m = 2, 2
        f = correlator(p, q)
        assert f.der_at_zero((n,) * m) == math.factorial(n) ** m * inner_product(p, q)


def test_reciprocal_product_multilinear():
    p = SparsePoly.linear_form([1, 1, 0, 0]) * SparsePoly.linear_form([0, 0, 1, 1])
    g = reciprocal_product(p, p)
    assert g.der_at_zero((1, 1, 1, 1)) == inner_product(p, p)
    with pytest.raises(ValueError):
        reciprocal_product(SparsePoly.linear_form([1, 1]) ** 2, SparsePoly.linear_form([1, 1]) ** 2)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.lists(st.integers(0, 4), min_size=2, max_size=2),
       st.integers(1, 30), st.integers(1, 30))
def test_log_evaluate_matches_direct(exponent, num, den):
    p = SparsePoly(2, {tuple(exponent): Fraction(num, den), (1, 0): 1})
    y = [0.35, -1.25]
    direct = math.log(p.evaluate([math.exp(v) for v in y]))
    assert p.log_evaluate(y) == pytest.approx(direct, abs=1e-10)


def test_log_evaluate_matches_direct_random():
    rng = random.Random(31)
    for _ in range(10):
        p = random_poly(rng, 3, 4, 8)
        y = [rng.uniform(-2, 2) for _ in range(3)]
        direct = math.log(p.evaluate([math.exp(v) for v in y]))
        assert p.log_evaluate(y) == pytest.approx(direct, abs=1e-10)


def test_change_of_variables_substitutes_linear_forms():
    p = SparsePoly.linear_form([1, 1]) ** 2
    q = change_of_variables(p, [[1, 0], [0, 2]])  # x1 <- y1, x2 <- 2 y2
    assert q == SparsePoly.linear_form([1, 2]) ** 2
    with pytest.raises(ValueError):
        change_of_variables(p, [[1, 0], [0, 0]])


def test_exp_linear_fixture():
    f = ExpLinearFixture((Fraction(2), Fraction(3)))
    assert f.der_at_zero((2, 1)) == 12
    assert f.capacity_at((1, 1)) == pytest.approx(math.exp(2) * 6, rel=1e-12)
    assert f.evaluate([1.0, 1.0]) == pytest.approx(math.exp(5), rel=1e-12)
    trunc = f.taylor_truncation(3)
    assert trunc.der_at_zero((2, 1)) == 12
    with pytest.raises(ValueError):
        ExpLinearFixture((Fraction(0),))


def test_graded_lex_iteration_is_deterministic():
    p = SparsePoly(2, {(0, 2): 1, (2, 0): 1, (1, 1): 2, (0, 0): 5})
    order = [e for e, _ in p.terms_sorted()]
    assert order == [(0, 0), (0, 2), (1, 1), (2, 0)]
