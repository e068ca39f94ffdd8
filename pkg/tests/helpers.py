"""Shared builders for the test suite.

Fixture polynomials are rebuilt here from their defining products rather
than imported from the package catalog, so tests cross-check two code paths.
"""

from __future__ import annotations

import random
from fractions import Fraction

from logcap.polynomials import SparsePoly, product


def cycle_polynomial(n: int) -> SparsePoly:
    """Product of the 2n adjacent-pair linear forms around an even cycle."""
    m = 2 * n
    factors = []
    for i in range(m):
        j = (i + 1) % m
        factors.append(SparsePoly.linear_form([1 if k in (i, j) else 0 for k in range(m)]))
    return product(factors)


def sum_power(m: int, n: int) -> SparsePoly:
    """(x_1 + ... + x_m)^n."""
    return SparsePoly.linear_form([1] * m) ** n


def two_block_quartic() -> SparsePoly:
    """(x+y)^3 (v+w) + (v+w)^3 (x+y): log-concave but with a support gap."""
    xy = SparsePoly.linear_form([1, 1, 0, 0])
    vw = SparsePoly.linear_form([0, 0, 1, 1])
    return xy ** 3 * vw + vw ** 3 * xy


def random_poly(rng: random.Random, num_vars: int, degree: int, max_terms: int) -> SparsePoly:
    """Random nonzero polynomial with small positive rational coefficients."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        budget = rng.randint(0, degree)
        exponent = [0] * num_vars
        for _ in range(budget):
            exponent[rng.randrange(num_vars)] += 1
        coef = Fraction(rng.randint(1, 12), rng.randint(1, 12))
        terms[tuple(exponent)] = terms.get(tuple(exponent), Fraction(0)) + coef
    return SparsePoly(num_vars, terms)


def random_product_of_linear_forms(rng: random.Random, num_vars: int, degree: int) -> SparsePoly:
    """Random product of positive linear forms (H-stable by construction)."""
    factors = []
    for _ in range(degree):
        coeffs = [Fraction(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(num_vars)]
        factors.append(SparsePoly.linear_form(coeffs))
    return product(factors)


def random_real_rooted(rng: random.Random, degree: int) -> SparsePoly:
    """Univariate product of (t + root) factors with positive rational roots."""
    factors = []
    for _ in range(degree):
        root = Fraction(rng.randint(1, 8), rng.randint(1, 4))
        factors.append(SparsePoly(1, {(0,): root, (1,): 1}))
    return product(factors)
