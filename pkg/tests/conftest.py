import os
import random
from bisect import bisect_right
from fractions import Fraction

import numpy as np
import pytest

from viproplab import PiecewiseLinearFn, derivative

SEED = int(os.environ.get("VIPROPLAB_SEED", "20240817"))


@pytest.fixture
def rng():
    return random.Random(SEED)


def random_fraction(r, lo=-8, hi=8, max_den=24):
    den = r.randint(1, max_den)
    num = r.randint(lo * den, hi * den)
    return Fraction(num, den)


def random_pw_linear(r, max_interior=5, lo=-8, hi=8, max_den=24):
    """Random piecewise-linear function with zero boundary values."""
    n = r.randint(0, max_interior)
    interior = set()
    while len(interior) < n:
        t = Fraction(r.randint(1, 63), 64)
        interior.add(t)
    bps = [Fraction(0)] + sorted(interior) + [Fraction(1)]
    vals = [Fraction(0)] + [random_fraction(r, lo, hi, max_den) for _ in range(n)] + [Fraction(0)]
    return PiecewiseLinearFn(tuple(bps), tuple(vals))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def gauss_pairing_oracle(u, w, rel_tol=1e-13, max_rounds=12):
    """Independent quadrature oracle for the duality pairing.

    Evaluates |u'(t)| u'(t) w'(t) pointwise in floating point and applies
    composite Gauss-Legendre quadrature, doubling the panel count until
    two successive estimates agree, instead of reusing the exact
    piecewise-constant summation.
    """
    du, dw = derivative(u), derivative(w)
    du_bps = [float(t) for t in du.breakpoints]
    dw_bps = [float(t) for t in dw.breakpoints]
    du_vals = [float(c) for c in du.interval_values]
    dw_vals = [float(c) for c in dw.interval_values]

    def integrand(t):
        i = min(bisect_right(du_bps, t) - 1, len(du_vals) - 1)
        j = min(bisect_right(dw_bps, t) - 1, len(dw_vals) - 1)
        c, d = du_vals[max(i, 0)], dw_vals[max(j, 0)]
        return abs(c) * c * d

    panel_edges = sorted(set(du_bps) | set(dw_bps))

    def estimate(splits):
        total = 0.0
        for a, b in zip(panel_edges, panel_edges[1:]):
            width = (b - a) / splits
            for s in range(splits):
                lo = a + s * width
                mid = lo + width / 2.0
                half = width / 2.0
                total += half * sum(
                    wgt * integrand(mid + half * node)
                    for node, wgt in zip(_GL_NODES, _GL_WEIGHTS)
                )
        return total

    prev = estimate(1)
    splits = 2
    for _ in range(max_rounds):
        cur = estimate(splits)
        if abs(cur - prev) <= rel_tol * max(1.0, abs(cur)):
            return cur
        prev, splits = cur, splits * 2
    return prev
