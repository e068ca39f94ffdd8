"""Independent brute-force oracles used to freeze expected values.

These deliberately share no code with the production solver: the capacity
oracle is a staged dense grid search over log coordinates, refined around
the running argmin.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from logcap.polynomials import SparsePoly


def grid_capacity(p: SparsePoly, target, *, scaled: bool = True,
                  lo: float = -15.0, hi: float = 15.0) -> float:
    """Dense log-grid minimization of f(e^y) / e^{<l, y>}, refined twice.

    Good to roughly 1e-5 relative for well-scaled desk problems; zero target
    entries are handled by the grid pushing those coordinates to the lower
    edge, which approximates the monotone limit x_i -> 0.
    """
    weights = [float(Fraction(v)) for v in target]
    m = p.num_vars
    exponents = np.array([[float(v) for v in e] for e in p.terms])
    log_coeffs = np.array([math.log(c.numerator) - math.log(c.denominator)
                           for c in p.terms.values()])
    l_vec = np.array(weights)

    def psi_min(axes):
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack([g.ravel() for g in mesh], axis=1)
        z = points @ exponents.T + log_coeffs
        zmax = z.max(axis=1)
        psi = zmax + np.log(np.exp(z - zmax[:, None]).sum(axis=1)) - points @ l_vec
        k = int(psi.argmin())
        return points[k], float(psi[k])

    axes = [np.arange(lo, hi + 1e-9, 0.5) for _ in range(m)]
    center, best = psi_min(axes)
    for step in (0.05, 0.005, 0.0005):
        axes = [np.clip(np.arange(c - 10.5 * step, c + 10.5 * step, step), lo, hi)
                for c in center]
        center, best = psi_min(axes)
    if scaled:
        best += sum(w * math.log(w) for w in weights if w > 0)
    return math.exp(best)
