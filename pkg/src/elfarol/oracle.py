"""Brute-force optimal mediator over a uniform grid of configurations.

The optimal mediator restricted to grid fractions g/(m-1) is a linear
program in the probability vector: minimize expected social cost subject to
the two incentive constraints and the simplex. Its optimum sits at a basic
feasible solution with at most three positive entries, so we enumerate every
support of size 1, 2 and 3, solve the square system that makes the chosen
rows tight, and keep the cheapest feasible point. No LP solver is involved, and
:func:`solve_grid` never consults the closed-form analysis.

A size-3 basic solution has both incentive rows tight; the go-side row *is*
the objective, so every such point costs exactly 1. Triples are therefore
only enumerated when nothing cheaper than 1 was found among smaller supports
(they can then only matter for feasibility and tie-breaking).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analytic import best_mediator
from .game import GameParams

FEAS_TOL = 1e-10
PROB_SNAP = 1e-12
TIE_TOL = 1e-12


class GridError(ValueError):
    pass


class GridInfeasibleError(RuntimeError):
    """No distribution over the grid satisfies both incentive constraints."""


@dataclass(frozen=True)
class OracleSolution:
    support: list[tuple[float, float]]
    per_capita_cost: float
    grid_size: int
    indices: tuple[int, ...]


@dataclass(frozen=True)
class OracleComparison:
    oracle: OracleSolution
    analytic_cost: float
    difference: float
    bound: float
    within_bound: bool
    x_star: Optional[float]
    support_matches: Optional[bool]

    def to_dict(self) -> dict:
        return {
            "grid_size": self.oracle.grid_size,
            "oracle_cost": self.oracle.per_capita_cost,
            "oracle_support": [{"x": x, "p": p} for x, p in self.oracle.support],
            "analytic_cost": self.analytic_cost,
            "x_star": self.x_star,
            "difference": self.difference,
            "bound": self.bound,
            "within_bound": self.within_bound,
            "support_matches": self.support_matches,
        }


def grid_coefficients(params: GameParams, m: int):
    """Grid points and per-point go-side / stay-side coefficients."""
    x = np.arange(m, dtype=float) / (m - 1)
    trough = params.c / params.s1
    f = np.where(x < trough, params.c - params.s1 * x, params.s2 * (x - trough))
    adv = 1.0 - f
    return x, x * adv, (1.0 - x) * adv


class _Best:
    def __init__(self):
        self.cost = np.inf
        self.key: tuple = ()
        self.probs: tuple = ()

    def offer(self, cost, idx, probs):
        key = tuple(int(i) for i in idx)
        if cost < self.cost - TIE_TOL:
            self.cost = float(cost)
        elif not (cost <= self.cost + TIE_TOL and key < self.key):
            return
        else:
            self.cost = min(self.cost, float(cost))
        self.key = key
        self.probs = tuple(float(p) for p in probs)


def _offer_best(best: _Best, costs, idx_cols, prob_cols):
    """Push the cheapest candidates (with lexicographic tie-break) from a batch."""
    if costs.size == 0:
        return
    lo = costs.min()
    if lo > best.cost + TIE_TOL:
        return
    near = np.flatnonzero(costs <= min(lo, best.cost) + TIE_TOL)
    for r in near:
        best.offer(costs[r], [c[r] for c in idx_cols], [c[r] for c in prob_cols])


def _singletons(best, a, b):
    ok = (a >= -FEAS_TOL) & (b <= FEAS_TOL)
    idx = np.flatnonzero(ok)
    _offer_best(best, 1.0 - a[idx], [idx], [np.ones(idx.size)])


def _pairs(best, a, b):
    m = a.size
    iu, iv = np.triu_indices(m, k=1)
    for tight, other, other_ok in ((a, b, lambda s: s <= FEAS_TOL), (b, a, lambda s: s >= -FEAS_TOL)):
        tu, tv = tight[iu], tight[iv]
        den = tv - tu
        with np.errstate(divide="ignore", invalid="ignore"):
            pu = tv / den
            pv = 1.0 - pu
            slack = pu * other[iu] + pv * other[iv]
        ok = (den != 0) & (pu > PROB_SNAP) & (pv > PROB_SNAP)
        ok &= other_ok(slack)
        sel = np.flatnonzero(ok)
        cost = 1.0 - (pu[sel] * a[iu[sel]] + pv[sel] * a[iv[sel]])
        _offer_best(best, cost, [iu[sel], iv[sel]], [pu[sel], pv[sel]])


def _triples(best, a, b):
    m = a.size
    iv_all, iw_all = np.triu_indices(m, k=1)
    for u in range(m - 2):
        keep = iv_all > u
        iv, iw = iv_all[keep], iw_all[keep]
        au, bu = a[u], b[u]
        av, aw, bv, bw = a[iv], a[iw], b[iv], b[iw]
        # Cramer's rule on [[1,1,1],[au,av,aw],[bu,bv,bw]] p = [1,0,0]
        det = (av * bw - aw * bv) - (au * bw - aw * bu) + (au * bv - av * bu)
        with np.errstate(divide="ignore", invalid="ignore"):
            pu = (av * bw - aw * bv) / det
            pv = (aw * bu - au * bw) / det
            pw = (au * bv - av * bu) / det
        ok = (det != 0) & (pu > PROB_SNAP) & (pv > PROB_SNAP) & (pw > PROB_SNAP)
        sel = np.flatnonzero(ok)
        if sel.size == 0:
            continue
        cost = 1.0 - (pu[sel] * au + pv[sel] * av[sel] + pw[sel] * aw[sel])
        _offer_best(best, cost, [np.full(sel.size, u), iv[sel], iw[sel]], [pu[sel], pv[sel], pw[sel]])


def solve_grid(params: GameParams, grid_size: int) -> OracleSolution:
    """Cheapest correlated equilibrium supported on the uniform grid.

    Single-configuration solutions are allowed, so the result also covers
    the cases where the best mediator degenerates to a Nash equilibrium.
    Raises GridInfeasibleError when the grid admits no equilibrium at all
    (c < 1 with f(1) > 1 and the indifference point off the grid).
    """
    if not isinstance(grid_size, (int, np.integer)) or grid_size < 2:
        raise GridError(f"grid size must be an integer >= 2, got {grid_size!r}")
    m = int(grid_size)
    x, a, b = grid_coefficients(params, m)
    best = _Best()
    _singletons(best, a, b)
    _pairs(best, a, b)
    if best.cost >= 1.0 - TIE_TOL:
        _triples(best, a, b)
    if not best.key:
        raise GridInfeasibleError(f"no correlated equilibrium on a grid of {m} points")
    support = [(float(x[i]), p) for i, p in zip(best.key, best.probs)]
    order = sorted(range(len(support)), key=lambda r: best.key[r])
    support = [support[r] for r in order]
    idx = tuple(best.key[r] for r in order)
    cost = 1.0 - float(sum(p * a[i] for i, (_, p) in zip(idx, support)))
    return OracleSolution(support, cost, m, idx)


def lipschitz_bound(params: GameParams, grid_size: int) -> float:
    return (1.0 + 2.0 * max(params.s1, params.s2)) / (grid_size - 1)


def compare_with_closed_form(params: GameParams, grid_size: int, tol: float = 1e-9) -> OracleComparison:
    sol = solve_grid(params, grid_size)
    med = best_mediator(params)
    diff = abs(sol.per_capita_cost - med.per_capita_cost)
    bound = lipschitz_bound(params, grid_size)
    matches = None
    if not med.degenerate:
        h = 1.0 / (grid_size - 1)
        xs = [x for x, _ in sol.support]
        others = [x for x in xs if x != 0.0]
        matches = 0.0 in xs and len(others) == 1 and abs(others[0] - med.x_star) <= h + 1e-12
    return OracleComparison(sol, med.per_capita_cost, diff, bound, diff <= bound + tol, med.x_star, matches)


def support_structure_ok(params: GameParams, sol: OracleSolution) -> bool:
    """One all-stay point, at most one point at/past c/s1, nothing strictly inside.

    Boundaries are relaxed by one grid step: when c/s1 is off the grid the
    best grid point next to it may sit just left of it.
    """
    h = 1.0 / (sol.grid_size - 1)
    xs = [x for x, _ in sol.support]
    trough = params.trough
    zeros = sum(1 for x in xs if x == 0.0)
    past = [x for x in xs if x >= trough - h and x != 0.0]
    inside = [x for x in xs if 0.0 < x < trough - h]
    return zeros == 1 and len(past) <= 1 and not inside
