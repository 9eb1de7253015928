"""Closed-form equilibrium analysis of the extended El Farol game.

Optimal (first-best) attendance, the cheapest Nash equilibrium, the optimal
mediator over two configurations, and the Mediation / Enforcement Values
that compare them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .game import (
    ConfigDistribution,
    DomainError,
    GameParams,
    RawGameParams,
    config_social_cost,
    cost_to_go,
)


class NashRegime(enum.Enum):
    MIXED_INDIFFERENCE = "mixed_indifference"
    ALL_GO = "all_go"


class Family(enum.Enum):
    UNBOUNDED_MV = "unbounded_mv"
    UNBOUNDED_EV = "unbounded_ev"


@dataclass(frozen=True)
class NashReport:
    regime: NashRegime
    y: float
    per_capita_cost: float


@dataclass(frozen=True)
class MediatorReport:
    """Best correlated equilibrium.

    ``dist`` is None whenever the mediator is degenerate (c <= 1, or the
    go-configuration is everybody so the stay configuration gets probability
    zero); the best CE then coincides with the best Nash equilibrium.
    """

    lam: Optional[float]
    x_star: Optional[float]
    p: Optional[float]
    dist: Optional[ConfigDistribution]
    per_capita_cost: float
    degenerate: bool


@dataclass(frozen=True)
class EquilibriumReport:
    params: GameParams
    y_star: float
    opt_cost: float
    nash: NashReport
    mediator: MediatorReport
    mv: float
    ev: float

    def to_dict(self) -> dict:
        m = self.mediator
        return {
            "params": self.params.to_dict(),
            "y_star": self.y_star,
            "opt": self.opt_cost,
            "nash_cost": self.nash.per_capita_cost,
            "nash_regime": self.nash.regime.value,
            "nash_y": self.nash.y,
            "lambda": m.lam,
            "x_star": m.x_star,
            "p": m.p,
            "med": m.per_capita_cost,
            "mv": _json_float(self.mv),
            "ev": _json_float(self.ev),
            "degenerate": m.degenerate,
            "dist": m.dist.to_dict() if m.dist is not None else None,
        }


def _json_float(v: float):
    return "inf" if math.isinf(v) else v


def optimal_fraction(params: GameParams) -> float:
    a = params.trough
    b = 1.0 / params.s2
    mid = 0.5 * (a + b)
    if a <= mid <= 1.0:
        return mid
    if b < a:
        return a
    return 1.0


def optimal_social_cost(params: GameParams) -> float:
    return config_social_cost(params, optimal_fraction(params))


def best_nash(params: GameParams) -> NashReport:
    f1 = params.f1
    if f1 >= 1.0:
        # indifference point on the ascending branch; f(1) >= 1 keeps it in [0, 1]
        y = min(1.0, params.trough + 1.0 / params.s2)
        return NashReport(NashRegime.MIXED_INDIFFERENCE, y, 1.0)
    return NashReport(NashRegime.ALL_GO, 1.0, f1)


def lambda_candidate(params: GameParams) -> float:
    """Stationary point of the two-configuration mediator cost (smaller root)."""
    c = params.c
    if c <= 1.0:
        raise DomainError(f"lambda is defined only for c > 1 (got c={c})")
    k = c * (1.0 / params.s1 + 1.0 / params.s2)
    return k - math.sqrt(k * (c - 1.0) / params.s2)


def lambda_bar(params: GameParams) -> float:
    """The larger root, always beyond the positive-advantage range."""
    c = params.c
    k = c * (1.0 / params.s1 + 1.0 / params.s2)
    return k + math.sqrt(k * (c - 1.0) / params.s2)


def stay_probability(params: GameParams, x: float) -> float:
    """Smallest all-stay probability that keeps stay advice incentive compatible."""
    num = (1.0 - x) * (1.0 - cost_to_go(params, x))
    return num / (num + params.c - 1.0)


def two_config_cost(params: GameParams, x: float, p: float) -> float:
    return p + (1.0 - p) * config_social_cost(params, x)


def best_mediator(params: GameParams) -> MediatorReport:
    if params.c <= 1.0:
        return MediatorReport(None, None, None, None, min(1.0, params.f1), True)
    lam = lambda_candidate(params)
    if params.trough <= lam < 1.0:
        x = lam
    elif lam < params.trough:
        x = params.trough
    else:
        x = 1.0
    if x == 1.0:
        return MediatorReport(lam, 1.0, 0.0, None, params.f1, True)
    p = stay_probability(params, x)
    dist = ConfigDistribution([(0.0, p), (x, 1.0 - p)])
    return MediatorReport(lam, x, p, dist, two_config_cost(params, x, p), False)


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return math.inf
    return num / den


def mediation_value(params: GameParams) -> float:
    med = best_mediator(params)
    if med.degenerate:
        return 1.0
    return _ratio(best_nash(params).per_capita_cost, med.per_capita_cost)


def enforcement_value(params: GameParams) -> float:
    return _ratio(best_mediator(params).per_capita_cost, optimal_social_cost(params))


def make_family(kind: Family | str, epsilon: float) -> GameParams:
    """Parameter families along which MV (resp. EV) diverges as epsilon -> 0."""
    kind = Family(kind)
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    c = (2.0 if kind is Family.UNBOUNDED_MV else 1.0) + epsilon
    return GameParams(c, c / (1.0 - epsilon), 1.0 / epsilon)


def analyze(params: GameParams) -> EquilibriumReport:
    y = optimal_fraction(params)
    opt = config_social_cost(params, y)
    nash = best_nash(params)
    med = best_mediator(params)
    mv = 1.0 if med.degenerate else _ratio(nash.per_capita_cost, med.per_capita_cost)
    ev = _ratio(med.per_capita_cost, opt)
    return EquilibriumReport(params, y, opt, nash, med, mv, ev)


def raw_metrics(raw: RawGameParams) -> tuple[float, float]:
    """(MV, EV) of a game with stay cost ``t`` computed without rescaling."""
    c, s1, s2, t = raw.c, raw.s1, raw.s2, raw.t
    trough = c / s1

    def f(x):
        return c - s1 * x if x < trough else s2 * (x - trough)

    mid = 0.5 * (trough + t / s2)
    if trough <= mid <= 1.0:
        y = mid
    elif t / s2 < trough:
        y = trough
    else:
        y = 1.0
    opt = y * f(y) + (1.0 - y) * t
    nash = min(f(1.0), t)
    if c <= t:
        return 1.0, _ratio(nash, opt)
    k = c * (1.0 / s1 + 1.0 / s2)
    lam = k - math.sqrt(k * (c - t) / s2)
    if trough <= lam < 1.0:
        x = lam
    elif lam < trough:
        x = trough
    else:
        x = 1.0
    num = (1.0 - x) * (t - f(x))
    p = num / (num + c - t)
    med = p * t + (1.0 - p) * (x * f(x) + (1.0 - x) * t)
    mv = 1.0 if x == 1.0 else nash / med
    return mv, _ratio(med, opt)
