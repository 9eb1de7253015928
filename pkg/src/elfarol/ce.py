"""Correlated-equilibrium checks and cost-reducing transformations of mediators.

The reductions take a correlated equilibrium and return another one with
strictly lower expected social cost. Applied until none fits, they collapse
any mediator onto the two-configuration shape: all-stay plus a single
configuration at or beyond the cost trough c/s1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .game import (
    ConfigDistribution,
    GameParams,
    cost_to_go,
    delta,
    slack_sums,
)

ZERO_DELTA_TOL = 1e-12


class ReductionError(ValueError):
    """A reduction was asked to act outside its preconditions."""


@dataclass(frozen=True)
class CeVerdict:
    go_side_slack: float
    stay_side_slack: float
    is_ce: bool


@dataclass(frozen=True)
class ConditionalCosts:
    """Expected cost of going given the advice; None when the advice never occurs."""

    go_given_go: Optional[float]
    go_given_stay: Optional[float]


def verify_ce(params: GameParams, dist: ConfigDistribution, tol: float = 1e-9) -> CeVerdict:
    if not isinstance(dist, ConfigDistribution):
        dist = ConfigDistribution(dist)
    go, stay = slack_sums(params, dist.xs, dist.ps)
    return CeVerdict(go, stay, go >= -tol and stay <= tol)


def conditional_costs(params: GameParams, dist: ConfigDistribution) -> ConditionalCosts:
    if not isinstance(dist, ConfigDistribution):
        dist = ConfigDistribution(dist)
    fs = [cost_to_go(params, x) for x in dist.xs]
    go_mass = math.fsum(p * x for x, p in dist.entries)
    stay_mass = math.fsum(p * (1.0 - x) for x, p in dist.entries)
    go_go = stay_go = None
    if go_mass > 0:
        go_go = math.fsum(p * f * x for (x, p), f in zip(dist.entries, fs)) / go_mass
    if stay_mass > 0:
        stay_go = math.fsum(p * f * (1.0 - x) for (x, p), f in zip(dist.entries, fs)) / stay_mass
    return ConditionalCosts(go_go, stay_go)


def ce_from_conditionals(cc: ConditionalCosts, tol: float = 1e-9) -> bool:
    """Incentive compatibility read off the conditional costs (staying costs 1)."""
    go_ok = cc.go_given_go is None or cc.go_given_go <= 1.0 + tol
    stay_ok = cc.go_given_stay is None or cc.go_given_stay >= 1.0 - tol
    return go_ok and stay_ok


def optimality_gaps(params: GameParams, dist: ConfigDistribution) -> list[float]:
    """sum_{i != j} p_i delta(x_i) (x_i - x_j) for every j; all >= 0 at an optimum."""
    d = [delta(params, x) for x in dist.xs]
    return [
        math.fsum(p * di * (x - xj) for i, (x, p, di) in enumerate(zip(dist.xs, dist.ps, d)) if i != j)
        for j, xj in enumerate(dist.xs)
    ]


def _coalesce(pairs) -> ConfigDistribution:
    """Sum the probabilities of configurations that landed on the same fraction."""
    merged: dict[float, float] = {}
    for x, p in pairs:
        merged[x] = merged.get(x, 0.0) + p
    return ConfigDistribution(sorted(merged.items()))


def _require_ce(params, dist, tol):
    v = verify_ce(params, dist, tol)
    if not v.is_ce:
        raise ReductionError(
            f"input is not a correlated equilibrium (go={v.go_side_slack:.3g}, stay={v.stay_side_slack:.3g})"
        )


def _index(dist, j):
    if not 0 <= j < len(dist):
        raise ReductionError(f"index {j} out of range for k={len(dist)}")


def reduce_drop_zero_delta(params: GameParams, dist: ConfigDistribution, j: int) -> ConfigDistribution:
    """Remove a configuration whose members are indifferent and renormalize."""
    _index(dist, j)
    if len(dist) < 3:
        raise ReductionError("dropping a configuration needs k >= 3")
    if abs(delta(params, dist.xs[j])) > ZERO_DELTA_TOL:
        raise ReductionError(f"delta(x_{j}) is not zero")
    scale = 1.0 / (1.0 - dist.ps[j])
    return ConfigDistribution((x, p * scale) for i, (x, p) in enumerate(dist.entries) if i != j)


def reduce_move_to_zero(
    params: GameParams, dist: ConfigDistribution, j: int, tol: float = 1e-9
) -> ConfigDistribution:
    """Send a configuration with too few goers (negative advantage) to all-stay."""
    _index(dist, j)
    if params.c <= 1.0:
        raise ReductionError("needs c > 1")
    x = dist.xs[j]
    if not 0.0 < x < (params.c - 1.0) / params.s1:
        raise ReductionError(f"x_{j}={x} not in (0, (c-1)/s1)")
    _require_ce(params, dist, tol)
    return _coalesce((0.0 if i == j else xi, p) for i, (xi, p) in enumerate(dist.entries))


def reflect_target(params: GameParams, x: float) -> float:
    """Where a positive-advantage point left of the trough is sent."""
    fx = cost_to_go(params, x)
    f1 = params.f1
    if f1 >= 1.0 or fx <= f1:
        # same cost to go, on the ascending branch
        return min(1.0, params.trough + fx / params.s2)
    return 1.0


def reduce_reflect(
    params: GameParams, dist: ConfigDistribution, j: int, tol: float = 1e-9
) -> ConfigDistribution:
    _index(dist, j)
    if params.c <= 1.0:
        raise ReductionError("needs c > 1")
    x = dist.xs[j]
    if not (params.c - 1.0) / params.s1 < x < params.trough:
        raise ReductionError(f"x_{j}={x} not in ((c-1)/s1, c/s1)")
    _require_ce(params, dist, tol)
    xr = reflect_target(params, x)
    return _coalesce((xr if i == j else xi, p) for i, (xi, p) in enumerate(dist.entries))


def reduce_merge(params: GameParams, dist: ConfigDistribution, i: int, j: int) -> ConfigDistribution:
    """Replace two configurations past the trough by their probability-weighted mean."""
    _index(dist, i)
    _index(dist, j)
    xi, xj = dist.xs[i], dist.xs[j]
    if not xj > xi >= params.trough:
        raise ReductionError(f"merge needs x_j > x_i >= c/s1 (got x_i={xi}, x_j={xj})")
    pi, pj = dist.ps[i], dist.ps[j]
    xm = (pi * xi + pj * xj) / (pi + pj)
    rest = [(x, p) for r, (x, p) in enumerate(dist.entries) if r not in (i, j)]
    return _coalesce(rest + [(xm, pi + pj)])


def _next_reduction(params: GameParams, dist: ConfigDistribution, tol: float):
    low = (params.c - 1.0) / params.s1
    if len(dist) >= 3:
        for j, x in enumerate(dist.xs):
            if abs(delta(params, x)) <= ZERO_DELTA_TOL:
                return reduce_drop_zero_delta(params, dist, j)
    for j, x in enumerate(dist.xs):
        if 0.0 < x < low:
            return reduce_move_to_zero(params, dist, j, tol)
    for j, x in enumerate(dist.xs):
        if low < x < params.trough:
            return reduce_reflect(params, dist, j, tol)
    past = sorted((x, j) for j, x in enumerate(dist.xs) if x >= params.trough)
    if len(past) >= 2:
        return reduce_merge(params, dist, past[0][1], past[1][1])
    return None


def reduce_to_fixpoint(
    params: GameParams, dist: ConfigDistribution, tol: float = 1e-9, max_steps: int = 10_000
) -> tuple[ConfigDistribution, int]:
    """Apply reductions in the fixed order until none applies.

    Returns the final distribution and the number of reductions applied.
    Every applicable step removes a configuration or moves one out of
    (0, c/s1) for good, so the loop terminates within 2k steps.
    """
    if params.c <= 1.0:
        raise ReductionError("reductions are defined for c > 1")
    _require_ce(params, dist, tol)
    for step in range(max_steps):
        nxt = _next_reduction(params, dist, tol)
        if nxt is None:
            return dist, step
        dist = nxt
    raise RuntimeError("reduction did not reach a fixpoint")  # pragma: no cover


def is_two_config_shape(params: GameParams, dist: ConfigDistribution) -> bool:
    """Exactly one all-stay configuration and exactly one at or past c/s1."""
    zeros = sum(1 for x in dist.xs if x == 0.0)
    past = sum(1 for x in dist.xs if x >= params.trough)
    return zeros == 1 and past == 1 and len(dist) == 2
