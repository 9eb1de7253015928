"""Finite-population Monte Carlo of mediated play.

Each round the mediator draws a configuration, advises exactly round(x*n)
uniformly chosen players to go and the rest to stay, and everybody conforms.
Player 0 is tagged: its conditional costs given its own advice estimate the
quantities behind the incentive constraints.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import Optional, TextIO

import numpy as np

from .game import ConfigDistribution, GameParams

RNG_ALGORITHM = "numpy.random.PCG64"
TRACE_HEADER = ("round", "x", "g", "cost", "tagged_advice")


class MismatchedInputsError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    n: int
    rounds: int
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"need n >= 2 players, got {self.n!r}")
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise ValueError(f"need rounds >= 1, got {self.rounds!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed!r}")


@dataclass(frozen=True)
class SimulationStats:
    mean_per_capita_cost: float
    se_per_capita_cost: float
    tagged_go_cost_mean: Optional[float]
    tagged_go_cost_se: Optional[float]
    tagged_stay_hypothetical_go_mean: Optional[float]
    tagged_stay_hypothetical_go_se: Optional[float]
    rounds_go: int
    rounds_stay: int
    params: GameParams
    dist: ConfigDistribution
    config: SimConfig

    def to_dict(self) -> dict:
        d = {
            k: v
            for k, v in asdict(self).items()
            if k not in ("params", "dist", "config")
        }
        d["params"] = self.params.to_dict()
        d["dist"] = self.dist.to_dict()
        d["config"] = {"n": self.config.n, "rounds": self.config.rounds, "seed": self.config.seed}
        d["rng"] = RNG_ALGORITHM
        return d


@dataclass(frozen=True)
class IncentiveVerdict:
    go_side_ok: bool
    stay_side_ok: bool
    passed: bool
    z: float


def _cost_to_go(params: GameParams, frac: np.ndarray) -> np.ndarray:
    trough = params.trough
    return np.where(frac < trough, params.c - params.s1 * frac, params.s2 * (frac - trough))


def _mean_se(values: np.ndarray):
    if values.size == 0:
        return None, None
    mean = float(values.mean())
    if values.size < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(values.size))


def run(
    params: GameParams,
    dist: ConfigDistribution,
    cfg: SimConfig,
    trace: Optional[TextIO] = None,
) -> SimulationStats:
    """Simulate ``cfg.rounds`` rounds with ``cfg.n`` players.

    The tagged player's advice is drawn as its rank in a uniform random
    ordering of the players: it is told to go iff that rank is below g, which
    is exactly its membership in a uniform random g-subset. The stay-side
    hypothetical is the cost of going at the realized attendance g/n (the
    non-atomic approximation: one deviator does not move the fraction).
    """
    if not isinstance(dist, ConfigDistribution):
        dist = ConfigDistribution(dist)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    xs = np.asarray(dist.xs)
    ps = np.asarray(dist.ps)
    which = rng.choice(xs.size, size=cfg.rounds, p=ps / ps.sum())
    rank = rng.integers(0, cfg.n, size=cfg.rounds)

    x = xs[which]
    g = np.floor(x * cfg.n + 0.5).astype(np.int64)
    frac = g / cfg.n
    f = _cost_to_go(params, np.clip(frac, 0.0, 1.0))
    cost = frac * f + (1.0 - frac)
    goes = rank < g

    mean, se = _mean_se(cost)
    go_mean, go_se = _mean_se(f[goes])
    stay_mean, stay_se = _mean_se(f[~goes])

    if trace is not None:
        w = csv.writer(trace, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for r in range(cfg.rounds):
            w.writerow([r, repr(float(x[r])), int(g[r]), repr(float(cost[r])), "go" if goes[r] else "stay"])

    return SimulationStats(
        mean_per_capita_cost=mean,
        se_per_capita_cost=se,
        tagged_go_cost_mean=go_mean,
        tagged_go_cost_se=go_se,
        tagged_stay_hypothetical_go_mean=stay_mean,
        tagged_stay_hypothetical_go_se=stay_se,
        rounds_go=int(goes.sum()),
        rounds_stay=int((~goes).sum()),
        params=params,
        dist=dist,
        config=cfg,
    )


def check_incentives(
    params: GameParams,
    dist: ConfigDistribution,
    stats: SimulationStats,
    z: float = 3.0,
    tol: float = 1e-9,
) -> IncentiveVerdict:
    """Compare the tagged player's conditional go-costs with the stay cost 1.

    A side with no observed rounds is vacuously satisfied. ``tol`` absorbs
    rounding when every observed cost equals 1 and the SE collapses to zero.
    """
    if not isinstance(dist, ConfigDistribution):
        dist = ConfigDistribution(dist)
    if stats.params != params or stats.dist != dist:
        raise MismatchedInputsError("stats were produced for a different game or distribution")
    go_ok = stats.tagged_go_cost_mean is None or (
        stats.tagged_go_cost_mean <= 1.0 + z * stats.tagged_go_cost_se + tol
    )
    stay_ok = stats.tagged_stay_hypothetical_go_mean is None or (
        stats.tagged_stay_hypothetical_go_mean >= 1.0 - z * stats.tagged_stay_hypothetical_go_se - tol
    )
    return IncentiveVerdict(go_ok, stay_ok, go_ok and stay_ok, z)
