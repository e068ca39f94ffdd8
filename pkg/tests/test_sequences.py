import random
from fractions import Fraction

from helpers import random_real_rooted
from logcap.polynomials import SparsePoly
from logcap.sequences import (
    ShiftOperator,
    WeightSequence,
    discrete_step_check,
    lc_trajectory_check,
    moment_vector,
    propagatable_check,
    random_lc_vector,
)


def poly1(*coeffs):
    return SparsePoly(1, {(i,): c for i, c in enumerate(coeffs) if c})


def test_factorial_weights_are_propagatable():
    b = WeightSequence.factorial_weights(4)
    assert b.shift_weights() == (4, 3, 2, 1)
    assert propagatable_check(b)


def test_flat_weights_are_propagatable():
    assert propagatable_check(WeightSequence((1, 1, 1)))


def test_convex_shift_weights_rejected():
    b = WeightSequence((1, 1, 3, 3))
    assert b.shift_weights() == (1, Fraction(1, 3), 1)
    assert not propagatable_check(b)


def test_shift_operator_nilpotent():
    s = ShiftOperator((Fraction(2), Fraction(3), Fraction(5)))
    x = [Fraction(1)] * 4
    for _ in range(4):
        x = s.apply(x)
    assert x == [0, 0, 0, 0]


def test_exp_apply_identity_at_zero():
    s = ShiftOperator((1, 1))
    assert s.exp_apply(0, [1, 2, 3]) == [1, 2, 3]


def test_exp_apply_unweighted_closed_form():
    # all-ones weights acting on the last basis vector: entry j is t^{n-j}/(n-j)!
    n = 4
    s = ShiftOperator((1,) * n)
    t = Fraction(3, 2)
    result = s.exp_apply(t, [0] * n + [1])
    import math

    expected = [t ** (n - j) / math.factorial(n - j) for j in range(n + 1)]
    assert result == expected


def test_exp_apply_flow_property():
    rng = random.Random(5)
    s = ShiftOperator(tuple(Fraction(rng.randint(1, 5)) for _ in range(4)))
    x = [Fraction(rng.randint(1, 9)) for _ in range(5)]
    t1, t2 = Fraction(2, 3), Fraction(5, 7)
    assert s.exp_apply(t1 + t2, x) == s.exp_apply(t1, s.exp_apply(t2, x))


def test_moment_vector_solves_the_shift_flow():
    # the moment vector at time t equals exp(t Shift_c) applied to the start
    rng = random.Random(8)
    for _ in range(5):
        p = random_real_rooted(rng, 3)
        b = WeightSequence.factorial_weights(3)
        s = b.shift_operator()
        t = Fraction(rng.randint(0, 8), rng.randint(1, 4))
        assert moment_vector(b, p, t) == s.exp_apply(t, moment_vector(b, p, 0))


def test_trajectory_real_rooted_stays_in_cone():
    rng = random.Random(13)
    grid = [0, Fraction(1, 2), 1, 2, 5]
    for _ in range(8):
        p = random_real_rooted(rng, rng.randint(2, 4))
        b = WeightSequence.factorial_weights(p.total_degree())
        report = lc_trajectory_check(b, p, grid)
        assert report.precondition_ok
        assert report.all_in_cone


def test_trajectory_constant_polynomial():
    report = lc_trajectory_check(WeightSequence((1, 1, 1)), poly1(7), [0, 1, 5])
    assert report.all_in_cone  # derivatives vanish, trailing zeros allowed


def test_trajectory_counterexample_for_convex_weights():
    # frozen fixture: b = (4, 1, 1) is not propagatable (c = (4, 1)), and
    # p = 1 + 3t + t^2 starts inside the cone but exits by t = 1/2
    b = WeightSequence((4, 1, 1))
    assert not propagatable_check(b)
    p = poly1(1, 3, 1)
    report = lc_trajectory_check(b, p, [0, Fraction(1, 2), 1])
    assert report.precondition_ok
    assert report.in_cone[0]
    assert not report.in_cone[1]
    assert report.first_exit == Fraction(1, 2)


def test_trajectory_precondition_reported():
    b = WeightSequence((1, 1, 10))
    report = lc_trajectory_check(b, poly1(1, 1, 1), [0, 1])
    assert not report.precondition_ok


def test_discrete_step_trivial_example():
    s = ShiftOperator((1, 1, 1))
    image = [a + b for a, b in zip([1, 1, 1, 1], s.apply([1, 1, 1, 1]))]
    assert image == [2, 2, 2, 1]
    from logcap.logconcavity import lc_member

    assert lc_member(image)


def test_discrete_step_concave_weights_never_violate():
    s = ShiftOperator((4, 3, 2, 1))
    report = discrete_step_check(s, Fraction(1, 3), trials=300, seed=42)
    assert report.ok


def test_discrete_step_nonconcave_weights_violate():
    # frozen fixture: c = (4, 1) with the all-ones vector and t = 1
    s = ShiftOperator((4, 1))
    image = [a + b for a, b in zip([1, 1, 1], s.apply([1, 1, 1]))]
    assert image == [5, 2, 1]  # 2^2 < 5: outside the cone
    report = discrete_step_check(s, 1, trials=200, seed=7)
    assert not report.ok
    assert report.violations


def test_random_lc_vectors_are_in_cone():
    from logcap.logconcavity import lc_member

    rng = random.Random(3)
    for _ in range(50):
        assert lc_member(random_lc_vector(rng, 6))
