import math

import numpy as np
import pytest
from hypothesis import given

from elfarol.analytic import (
    Family,
    NashRegime,
    analyze,
    best_mediator,
    best_nash,
    enforcement_value,
    lambda_bar,
    lambda_candidate,
    make_family,
    mediation_value,
    optimal_fraction,
    optimal_social_cost,
    raw_metrics,
)
from elfarol.ce import verify_ce
from elfarol.game import DomainError, GameParams, RawGameParams, cost_to_go, delta, normalize
from helpers import brute_opt, brute_two_config, game_params, random_params

G = GameParams(2, 4, 10)
MV_01 = make_family(Family.UNBOUNDED_MV, 0.1)
EV_01 = make_family(Family.UNBOUNDED_EV, 0.1)


@pytest.mark.parametrize("args, y", [((2, 4, 10), 0.5), ((1, 2, 2), 0.5), ((0.9, 1, 0.8), 1.0)])
def test_optimal_fraction(args, y):
    assert optimal_fraction(GameParams(*args)) == pytest.approx(y, abs=1e-12)


@pytest.mark.parametrize("args, opt", [((2, 4, 10), 0.5), ((1, 2, 2), 0.5), ((0.9, 1, 0.8), 0.08)])
def test_optimal_social_cost(args, opt):
    params = GameParams(*args)
    assert optimal_social_cost(params) == pytest.approx(opt, abs=1e-12)
    assert optimal_social_cost(params) == pytest.approx(brute_opt(params)[0], abs=1e-8)


def test_optimal_cost_matches_grid_minimum_on_random_games():
    rng = np.random.default_rng(3)
    for _ in range(200):
        params = random_params(rng)
        grid_min, _ = brute_opt(params, m=100_001)
        assert optimal_social_cost(params) <= grid_min + 1e-12
        assert optimal_social_cost(params) == pytest.approx(grid_min, abs=(1 + 2 * max(params.s1, params.s2)) * 1e-5)


def test_best_nash_examples():
    n = best_nash(G)
    assert n.regime is NashRegime.MIXED_INDIFFERENCE and n.per_capita_cost == 1.0
    assert cost_to_go(G, n.y) == pytest.approx(1.0)
    n = best_nash(GameParams(0.5, 1, 1))
    assert (n.regime, n.y, n.per_capita_cost) == (NashRegime.ALL_GO, 1.0, 0.5)
    n = best_nash(MV_01)
    assert n.per_capita_cost == pytest.approx(1.0, abs=1e-12)


def test_best_nash_boundary_f1_equals_one_is_mixed():
    params = GameParams(1.0, 2.0, 2.0)  # f(1) = 2 * 0.5 = 1 exactly
    assert params.f1 == 1.0
    assert best_nash(params).regime is NashRegime.MIXED_INDIFFERENCE


@given(game_params())
def test_nash_invariants(params):
    n = best_nash(params)
    assert n.per_capita_cost == min(1.0, params.f1)
    if n.regime is NashRegime.ALL_GO:
        assert n.y == 1.0 and params.f1 < 1
    else:
        assert params.f1 >= 1 and cost_to_go(params, n.y) == pytest.approx(1.0, abs=1e-9)


def test_lambda_examples():
    assert lambda_candidate(G) == pytest.approx(0.7 - math.sqrt(0.07), abs=1e-12)
    assert lambda_candidate(G) == pytest.approx(0.4354249, abs=1e-7)
    assert lambda_candidate(MV_01) == pytest.approx(1.11 - math.sqrt(0.1221), abs=1e-12)
    assert lambda_candidate(MV_01) == pytest.approx(0.7606, abs=1e-4)
    near = GameParams(1 + 1e-12, 3.0, 5.0)
    assert lambda_candidate(near) == pytest.approx(near.c * (1 / 3 + 1 / 5), abs=1e-5)


@pytest.mark.parametrize("c", [1.0, 0.5])
def test_lambda_domain(c):
    with pytest.raises(DomainError):
        lambda_candidate(GameParams(c, 2.0, 3.0))


@given(game_params(c_min=1.001))
def test_lambda_roots_bracket_positive_range(params):
    top = params.trough + 1 / params.s2
    assert lambda_candidate(params) < top
    assert lambda_bar(params) > top


def test_best_mediator_worked_instance():
    m = best_mediator(G)
    assert not m.degenerate
    assert m.x_star == pytest.approx(0.5, abs=1e-12)
    assert m.p == pytest.approx(1 / 3, abs=1e-12)
    assert m.per_capita_cost == pytest.approx(2 / 3, abs=1e-12)
    assert m.dist.entries == [(0.0, m.p), (m.x_star, 1 - m.p)]


def test_best_mediator_unbounded_mv_family():
    m = best_mediator(MV_01)
    assert m.x_star == pytest.approx(0.9, abs=1e-12)
    assert m.p == pytest.approx(1 / 12, abs=1e-12)
    assert m.per_capita_cost == pytest.approx(0.175, abs=1e-12)


@pytest.mark.parametrize("eps", [0.01, 0.05, 0.1, 0.2, 0.3, 0.35])
def test_unbounded_mv_family_closed_forms(eps):
    # x* = 1 - eps, f(x*) = 0, p = eps / (1 + 2 eps) for eps <= (sqrt(3) - 1) / 2
    params = make_family(Family.UNBOUNDED_MV, eps)
    m = best_mediator(params)
    assert params.f1 == pytest.approx(1.0, abs=1e-12)
    assert m.x_star == pytest.approx(1 - eps, abs=1e-12)
    assert cost_to_go(params, m.x_star) == pytest.approx(0.0, abs=1e-12)
    assert m.p == pytest.approx(eps / (1 + 2 * eps), abs=1e-12)


def test_best_mediator_degenerate_small_c():
    m = best_mediator(GameParams(0.5, 1, 1))
    assert m.degenerate and m.dist is None
    assert m.per_capita_cost == 0.5


def test_best_mediator_all_go_when_lambda_at_least_one():
    params = GameParams(1.5, 1.6, 0.5)
    assert lambda_candidate(params) >= 1
    m = best_mediator(params)
    assert m.degenerate and m.x_star == 1.0 and m.p == 0.0
    assert m.per_capita_cost == pytest.approx(params.f1)


def test_mediation_value_examples():
    assert mediation_value(G) == pytest.approx(1.5, abs=1e-12)
    assert mediation_value(MV_01) == pytest.approx(1 / 0.175, abs=1e-9)
    assert mediation_value(MV_01) == pytest.approx(5.714285, abs=1e-6)
    assert mediation_value(GameParams(0.5, 1, 1)) == 1.0


def test_enforcement_value_examples():
    assert enforcement_value(G) == pytest.approx(4 / 3, abs=1e-12)
    # cost of going evaluated directly at x*: f(x*) = 0.0950124, not 0.1050126
    m = best_mediator(EV_01)
    assert m.x_star == pytest.approx(0.9095012, abs=1e-7)
    assert cost_to_go(EV_01, m.x_star) == pytest.approx(0.0950124, abs=1e-7)
    assert m.p == pytest.approx(0.450248, abs=1e-6)
    assert m.per_capita_cost == pytest.approx(0.5475062, abs=1e-7)
    assert optimal_social_cost(EV_01) == pytest.approx(0.1, abs=1e-12)
    assert enforcement_value(EV_01) == pytest.approx(5.4751, abs=1e-4)
    small = GameParams(0.5, 1, 1)
    assert enforcement_value(small) == pytest.approx(0.5 / brute_opt(small)[0], abs=1e-8)
    assert enforcement_value(small) == pytest.approx(0.5 / 0.4375, abs=1e-12)


def test_unbounded_ev_family_closed_forms():
    for eps in (0.3, 0.1, 0.01):
        m = best_mediator(make_family(Family.UNBOUNDED_EV, eps))
        assert m.x_star == pytest.approx(1 + eps**2 - eps * math.sqrt(1 + eps**2), abs=1e-12)
        f = cost_to_go(make_family(Family.UNBOUNDED_EV, eps), m.x_star)
        assert f == pytest.approx(1 + eps - math.sqrt(1 + eps**2), abs=1e-12)


@pytest.mark.parametrize(
    "kind, eps, expected",
    [
        (Family.UNBOUNDED_MV, 0.1, (2.1, 2.1 / 0.9, 10)),
        (Family.UNBOUNDED_EV, 0.1, (1.1, 1.1 / 0.9, 10)),
        (Family.UNBOUNDED_MV, 0.5, (2.5, 5, 2)),
    ],
)
def test_make_family(kind, eps, expected):
    p = make_family(kind, eps)
    assert (p.c, p.s1, p.s2) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("eps", [0, 1, -0.2, 1.5])
def test_make_family_domain(eps):
    with pytest.raises(DomainError):
        make_family(Family.UNBOUNDED_MV, eps)


def test_analyze_worked_instance():
    r = analyze(G)
    got = (r.y_star, r.opt_cost, r.nash.per_capita_cost, r.mediator.x_star, r.mediator.p, r.mediator.per_capita_cost, r.mv, r.ev)
    assert got == pytest.approx((0.5, 0.5, 1.0, 0.5, 1 / 3, 2 / 3, 1.5, 4 / 3), abs=1e-12)
    d = r.to_dict()
    for k in ("y_star", "opt", "nash_cost", "lambda", "x_star", "p", "med", "mv", "ev", "degenerate"):
        assert k in d


def test_analyze_small_c():
    r = analyze(GameParams(0.5, 1, 1))
    assert r.mv == 1.0 and r.mediator.degenerate


def test_analyze_all_go_optimal():
    params = GameParams(0.9, 1, 0.8)
    r = analyze(params)
    assert r.nash.regime is NashRegime.ALL_GO
    assert (r.y_star, r.opt_cost, r.nash.per_capita_cost, r.mv, r.ev) == pytest.approx((1, 0.08, 0.08, 1, 1), abs=1e-12)
    assert r.opt_cost == pytest.approx(brute_opt(params)[0], abs=1e-9)


def test_cost_ordering_on_random_games():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        params = random_params(rng)
        r = analyze(params)
        assert r.opt_cost <= r.mediator.per_capita_cost + 1e-9
        assert r.mediator.per_capita_cost <= r.nash.per_capita_cost + 1e-9
        assert r.mv >= 1 - 1e-9 and r.ev >= 1 - 1e-9
        assert r.mv * r.mediator.per_capita_cost == pytest.approx(r.nash.per_capita_cost, rel=1e-9)
        assert r.ev * r.opt_cost == pytest.approx(r.mediator.per_capita_cost, rel=1e-9)


def test_closed_form_matches_two_config_scan():
    rng = np.random.default_rng(8)
    for _ in range(100):
        params = random_params(rng, c_low=1.05)
        m = best_mediator(params)
        scan = brute_two_config(params)
        if m.degenerate:
            # the all-go endpoint is excluded from the scan; it can only do worse there
            assert scan >= m.per_capita_cost - 1e-9
        else:
            assert scan >= m.per_capita_cost - 1e-12
            assert scan == pytest.approx(m.per_capita_cost, abs=1e-6 * max(params.s1, params.s2))


def test_normalization_invariance():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        t = rng.uniform(0.05, 20)
        c = rng.uniform(0.05, 5) * t
        raw = RawGameParams(c, c * rng.uniform(1.01, 6), rng.uniform(0.3, 30) * t, t)
        mv, ev = raw_metrics(raw)
        r = analyze(normalize(raw))
        assert r.mv == pytest.approx(mv, rel=1e-9)
        assert r.ev == pytest.approx(ev, rel=1e-9)


def test_stay_side_constraint_is_tight():
    rng = np.random.default_rng(99)
    n = 0
    while n < 500:
        params = random_params(rng, c_low=1.01)
        m = best_mediator(params)
        if m.degenerate:
            continue
        n += 1
        v = verify_ce(params, m.dist, tol=1e-9)
        assert v.is_ce
        assert abs(v.stay_side_slack) <= 1e-9


def _g(params, x):
    c = params.c
    d = delta(params, x)
    return (c - 1) * x * d / ((c - 1) + (1 - x) * d)


def test_stationarity_at_interior_optimum():
    rng = np.random.default_rng(4)
    n = 0
    while n < 200:
        params = random_params(rng, c_low=1.01)
        m = best_mediator(params)
        if m.degenerate or not params.trough + 1e-5 < m.x_star < 1 - 1e-5:
            continue
        n += 1
        h = 1e-6
        slope = (_g(params, m.x_star + h) - _g(params, m.x_star - h)) / (2 * h)
        assert abs(slope) < 1e-6


@pytest.mark.parametrize("kind, metric", [(Family.UNBOUNDED_MV, "mv"), (Family.UNBOUNDED_EV, "ev")])
def test_monotone_divergence(kind, metric):
    vals = [getattr(analyze(make_family(kind, e)), metric) for e in (0.2, 0.1, 0.05, 0.02, 0.01)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_no_mediation_gain_when_lambda_at_least_one():
    rng = np.random.default_rng(21)
    n = 0
    while n < 300:
        c = rng.uniform(1.01, 3)
        params = GameParams(c, c * rng.uniform(1.01, 1.5), rng.uniform(0.05, 2))
        if lambda_candidate(params) < 1:
            continue
        n += 1
        assert params.f1 < 1
        assert mediation_value(params) == 1.0


def test_case_boundaries():
    params = GameParams(2, 4, 10)
    assert lambda_candidate(params) < params.trough
    assert best_mediator(params).x_star == params.trough
    assert best_mediator(GameParams(1.5, 1.6, 0.5)).x_star == 1.0
