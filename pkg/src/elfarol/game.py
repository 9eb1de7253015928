"""Extended El Farol game: parameters, cost to go, configurations and social cost.

All social costs are per capita. The cost to stay is normalized to 1; raw games
with an arbitrary stay cost are brought to that form with :func:`normalize`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

DIST_SUM_TOL = 1e-12
BOUNDARY_TOL = 1e-12


class ParameterError(ValueError):
    """Game parameters violate 0 < c < s1, s2 > 0 (or t > 0 for raw games)."""


class DomainError(ValueError):
    """A fraction of players outside [0, 1]."""


class InvalidDistributionError(ValueError):
    pass


@dataclass(frozen=True)
class GameParams:
    c: float
    s1: float
    s2: float

    def __post_init__(self):
        for name in ("c", "s1", "s2"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParameterError(f"{name} must be a finite number, got {v!r}")
        if not 0 < self.c < self.s1:
            raise ParameterError(
                f"parameters must satisfy 0 < c < s1 (got c={self.c}, s1={self.s1})"
            )
        if not self.s2 > 0:
            raise ParameterError(f"parameters must satisfy s2 > 0 (got s2={self.s2})")

    @property
    def trough(self) -> float:
        """Attendance c/s1 at which going is free."""
        return self.c / self.s1

    @property
    def f1(self) -> float:
        """Cost to go when everybody goes."""
        return cost_to_go(self, 1.0)

    def to_dict(self) -> dict:
        return {"c": self.c, "s1": self.s1, "s2": self.s2}

    @classmethod
    def from_dict(cls, d: dict) -> "GameParams":
        return cls(float(d["c"]), float(d["s1"]), float(d["s2"]))


@dataclass(frozen=True)
class RawGameParams:
    """A game whose stay cost ``t`` is not yet scaled to 1."""

    c: float
    s1: float
    s2: float
    t: float

    def __post_init__(self):
        if not 0 < self.c < self.s1:
            raise ParameterError(
                f"parameters must satisfy 0 < c < s1 (got c={self.c}, s1={self.s1})"
            )
        if not self.s2 > 0:
            raise ParameterError(f"parameters must satisfy s2 > 0 (got s2={self.s2})")
        if not self.t > 0:
            raise ParameterError(f"stay cost must be positive (got t={self.t})")

    def to_dict(self) -> dict:
        return {"c": self.c, "s1": self.s1, "s2": self.s2, "t": self.t}


@dataclass(frozen=True)
class Configuration:
    x: float

    def __post_init__(self):
        _check_fraction(self.x)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def validate_distribution(entries) -> list[Violation]:
    """Check the configuration-distribution invariants.

    ``entries`` is a :class:`ConfigDistribution` or any iterable of ``(x, p)``
    pairs. Returns the violations found, in the order the invariants are
    checked; an empty list means the distribution is valid.
    """
    if isinstance(entries, ConfigDistribution):
        pairs = list(zip(entries.xs, entries.ps))
    else:
        pairs = [(float(x), float(p)) for x, p in entries]
    out = []
    if len(pairs) < 2:
        out.append(Violation("too_few_configurations", f"k={len(pairs)} < 2"))
    for i, (x, p) in enumerate(pairs):
        if not (math.isfinite(x) and 0.0 <= x <= 1.0):
            out.append(Violation("fraction_out_of_range", f"entry {i}: x={x} not in [0, 1]"))
        if not (math.isfinite(p) and 0.0 < p < 1.0):
            out.append(Violation("probability_out_of_range", f"entry {i}: p={p} not in (0, 1)"))
    total = math.fsum(p for _, p in pairs)
    if pairs and abs(total - 1.0) > DIST_SUM_TOL:
        out.append(Violation("probabilities_do_not_sum_to_one", f"sum={total!r}"))
    seen = {}
    for i, (x, _) in enumerate(pairs):
        if x in seen:
            out.append(Violation("duplicate_configuration", f"entries {seen[x]} and {i} share x={x}"))
        else:
            seen[x] = i
    return out


@dataclass(frozen=True)
class ConfigDistribution:
    """Probability distribution over k >= 2 distinct configurations."""

    xs: tuple[float, ...]
    ps: tuple[float, ...]

    def __init__(self, entries: Iterable[tuple[float, float]]):
        pairs = [(float(x), float(p)) for x, p in entries]
        violations = validate_distribution(pairs)
        if violations:
            raise InvalidDistributionError(str(violations[0]))
        object.__setattr__(self, "xs", tuple(x for x, _ in pairs))
        object.__setattr__(self, "ps", tuple(p for _, p in pairs))

    @property
    def entries(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.ps))

    def __len__(self):
        return len(self.xs)

    def to_dict(self) -> dict:
        return {"entries": [{"x": x, "p": p} for x, p in self.entries]}

    @classmethod
    def from_dict(cls, d: dict) -> "ConfigDistribution":
        return cls((e["x"], e["p"]) for e in d["entries"])


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"


def _check_fraction(x: float) -> None:
    if not (isinstance(x, (int, float)) and 0.0 <= x <= 1.0):
        raise DomainError(f"fraction must lie in [0, 1], got {x!r}")


def cost_to_go(params: GameParams, x: float) -> float:
    """Individual cost of going when a fraction ``x`` of the players goes."""
    _check_fraction(x)
    if x < params.trough:
        return params.c - params.s1 * x
    return params.s2 * (x - params.trough)


def delta(params: GameParams, x: float) -> float:
    """Stay-minus-go advantage 1 - f(x); positive where going is cheaper."""
    return 1.0 - cost_to_go(params, x)


def sign_classify(params: GameParams, x: float) -> Sign:
    """Sign of delta(x) read off the interval characterization.

    Points within ``BOUNDARY_TOL`` of the two indifference points
    (c-1)/s1 and c/s1 + 1/s2 are reported as ZERO.
    """
    _check_fraction(x)
    low = (params.c - 1.0) / params.s1
    high = 1.0 / params.s2 + params.trough
    if abs(x - low) <= BOUNDARY_TOL or abs(x - high) <= BOUNDARY_TOL:
        return Sign.ZERO
    f1 = params.f1
    if x < low:
        return Sign.NEGATIVE
    if f1 >= 1.0:
        return Sign.POSITIVE if x < high else Sign.NEGATIVE
    return Sign.POSITIVE


def config_social_cost(params: GameParams, x: float) -> float:
    return x * cost_to_go(params, x) + (1.0 - x)


def _require_valid(dist) -> ConfigDistribution:
    if not isinstance(dist, ConfigDistribution):
        dist = ConfigDistribution(dist)
    return dist


def expected_social_cost(params: GameParams, dist: ConfigDistribution) -> float:
    dist = _require_valid(dist)
    return 1.0 - math.fsum(p * x * delta(params, x) for x, p in dist.entries)


def normalize(raw: RawGameParams) -> GameParams:
    """Rescale costs so that staying costs 1."""
    return GameParams(raw.c / raw.t, raw.s1 / raw.t, raw.s2 / raw.t)


def two_point(x0: float, p0: float, x1: float) -> ConfigDistribution:
    return ConfigDistribution([(x0, p0), (x1, 1.0 - p0)])


def slack_sums(params: GameParams, xs: Sequence[float], ps: Sequence[float]) -> tuple[float, float]:
    """(go-side, stay-side) incentive sums for possibly unnormalized support."""
    d = [delta(params, x) for x in xs]
    go = math.fsum(p * x * dx for x, p, dx in zip(xs, ps, d))
    stay = math.fsum(p * (1.0 - x) * dx for x, p, dx in zip(xs, ps, d))
    return go, stay
