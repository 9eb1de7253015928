"""Shared generators and brute-force references for the test suite."""

import math

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from elfarol.ce import verify_ce
from elfarol.game import ConfigDistribution, GameParams, config_social_cost, delta


@st.composite
def game_params(draw, c_min=0.05, c_max=5.0):
    c = draw(st.floats(c_min, c_max))
    ratio = draw(st.floats(1.01, 10.0))
    s2 = draw(st.floats(0.2, 40.0))
    return GameParams(c, c * ratio, s2)


def random_params(rng, c_low=0.05, c_high=5.0):
    c = rng.uniform(c_low, c_high)
    return GameParams(c, c * rng.uniform(1.01, 6.0), rng.uniform(0.3, 30.0))


def brute_opt(params, m=200_001):
    """Minimum of the configuration cost over a fine grid, plus the grid argmin."""
    x = np.linspace(0.0, 1.0, m)
    f = np.where(x < params.trough, params.c - params.s1 * x, params.s2 * (x - params.trough))
    cost = x * f + 1.0 - x
    i = int(np.argmin(cost))
    return float(cost[i]), float(x[i])


def brute_two_config(params, m=200_001):
    """Best {(0, p), (x, 1-p)} equilibrium found by scanning x; p is the least
    all-stay weight meeting the stay-side constraint."""
    x = np.linspace(0.0, 1.0, m)[1:-1]
    f = np.where(x < params.trough, params.c - params.s1 * x, params.s2 * (x - params.trough))
    adv = 1.0 - f
    b = (1.0 - x) * adv
    ok = adv > 0
    p = b[ok] / (b[ok] + params.c - 1.0)
    cost = p + (1.0 - p) * (1.0 - x[ok] * adv[ok])
    return float(cost.min())


def random_ce(params, rng, k_choices=(2, 3, 4, 5), grid=60, accept=None, max_tries=200_000):
    """Rejection-sample a correlated equilibrium over a grid of fractions.

    Grid points where delta is (numerically) zero are excluded. ``accept``
    is an extra predicate on the candidate distribution.
    """
    pts = np.arange(grid + 1) / grid
    pts = np.array([x for x in pts if abs(delta(params, float(x))) > 1e-9])
    for _ in range(max_tries):
        k = int(rng.choice(k_choices))
        xs = rng.choice(pts, size=k, replace=False)
        ps = rng.dirichlet(np.ones(k))
        if ps.min() <= 1e-6:
            continue
        ps = ps / ps.sum()
        ps[-1] = 1.0 - ps[:-1].sum()
        try:
            dist = ConfigDistribution(zip(xs.tolist(), ps.tolist()))
        except ValueError:
            continue
        if not verify_ce(params, dist, tol=0.0).is_ce:
            continue
        if accept is not None and not accept(dist):
            continue
        return dist
    raise RuntimeError("could not sample a correlated equilibrium")


def random_distribution(rng, k_max=6):
    while True:
        k = int(rng.integers(2, k_max + 1))
        xs = rng.choice(np.arange(1001) / 1000, size=k, replace=False)
        ps = rng.dirichlet(np.ones(k))
        ps[-1] = 1.0 - ps[:-1].sum()
        try:
            return ConfigDistribution(zip(xs.tolist(), ps.tolist()))
        except ValueError:
            continue
