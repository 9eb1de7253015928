"""Command-line front end.

Exit codes: 0 success, 1 verification gate failed, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import analytic, ce, oracle, simulate
from .game import (
    ConfigDistribution,
    GameParams,
    InvalidDistributionError,
    ParameterError,
    RawGameParams,
    normalize,
)

SWEEP_HEADER = ("param_value", "ne", "med", "opt", "mv", "ev", "x_star", "p", "y_star", "degenerate")

# default ranges; the epsilon sweep runs from coarse to fine
SWEEP_DEFAULTS = {
    "s1": {"start": 2.1, "stop": 8.0, "fixed": {"c": 2.0, "s2": 10.0}},
    "s2": {"start": 1.0, "stop": 30.0, "fixed": {"c": 2.0, "s1": 2.25}},
    "c": {"start": 0.2, "stop": 3.9, "fixed": {"s1": 4.0, "s2": 10.0}},
    "c_over_s1_epsilon": {"start": 0.2, "stop": 0.001, "fixed": {"c": 2.0, "s2": 10.0}},
}


class UsageError(Exception):
    pass


@dataclass
class SweepSpec:
    varying: str
    start: float
    stop: float
    steps: int
    fixed: dict = field(default_factory=dict)
    family: Optional[analytic.Family] = None

    def values(self) -> np.ndarray:
        if self.steps < 2:
            raise UsageError("a sweep needs at least 2 steps")
        if self.varying == "c_over_s1_epsilon":
            if not (0 < self.start < 1 and 0 < self.stop < 1) or self.start == self.stop:
                raise UsageError("epsilon sweeps need distinct endpoints in (0, 1)")
            return np.geomspace(self.start, self.stop, self.steps)
        if not self.start < self.stop:
            raise UsageError("sweep needs --from < --to")
        return np.linspace(self.start, self.stop, self.steps)

    def params_at(self, v: float) -> GameParams:
        if self.family is not None:
            return analytic.make_family(self.family, float(v))
        fixed = dict(self.fixed)
        if self.varying == "c_over_s1_epsilon":
            return GameParams(fixed["c"], fixed["c"] / (1.0 - v), fixed["s2"])
        fixed[self.varying] = float(v)
        return GameParams(fixed["c"], fixed["s1"], fixed["s2"])


def sweep_rows(spec: SweepSpec) -> list[dict]:
    rows = []
    for v in spec.values():
        rep = analytic.analyze(spec.params_at(v))
        m = rep.mediator
        rows.append(
            {
                "param_value": float(v),
                "ne": rep.nash.per_capita_cost,
                "med": m.per_capita_cost,
                "opt": rep.opt_cost,
                "mv": rep.mv,
                "ev": rep.ev,
                "x_star": m.x_star,
                "p": m.p,
                "y_star": rep.y_star,
                "degenerate": m.degenerate,
            }
        )
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(float(v))


def write_sweep_csv(rows: list[dict], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([_fmt(r[k]) for k in SWEEP_HEADER])


def read_sweep_csv(text: str) -> list[dict]:
    """Parse a sweep CSV back into typed rows."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k in SWEEP_HEADER:
            s = rec[k]
            if k == "degenerate":
                row[k] = s == "true"
            else:
                row[k] = None if s == "" else float(s)
        out.append(row)
    return out


def _params_from_args(args) -> tuple[GameParams, Optional[RawGameParams]]:
    if args.stay_cost is not None:
        raw = RawGameParams(args.c, args.s1, args.s2, args.stay_cost)
        return normalize(raw), raw
    return GameParams(args.c, args.s1, args.s2), None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)


def cmd_analyze(args, out) -> int:
    params, raw = _params_from_args(args)
    doc = analytic.analyze(params).to_dict()
    if raw is not None:
        doc["raw_params"] = raw.to_dict()
    out.write(_dump(doc) + "\n")
    return 0


def cmd_sweep(args, out) -> int:
    family = analytic.Family(args.family) if args.family else None
    varying = "c_over_s1_epsilon" if family is not None else args.vary
    if varying is None:
        raise UsageError("sweep needs --vary or --family")
    defaults = SWEEP_DEFAULTS[varying]
    fixed = dict(defaults["fixed"])
    for k in ("c", "s1", "s2"):
        if getattr(args, k) is not None:
            fixed[k] = getattr(args, k)
    spec = SweepSpec(
        varying,
        defaults["start"] if args.start is None else args.start,
        defaults["stop"] if args.stop is None else args.stop,
        args.steps,
        fixed,
        family,
    )
    rows = sweep_rows(spec)
    if args.format == "json":
        text = _dump([{k: (v if not (isinstance(v, float) and math.isinf(v)) else "inf") for k, v in r.items()} for r in rows]) + "\n"
    else:
        buf = io.StringIO()
        write_sweep_csv(rows, buf)
        text = buf.getvalue()
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as e:
            print(f"error: cannot write {args.out}: {e.strerror}", file=sys.stderr)
            return 2
    else:
        out.write(text)
    return 0


def cmd_oracle(args, out) -> int:
    params, _ = _params_from_args(args)
    try:
        cmp = oracle.compare_with_closed_form(params, args.grid, tol=args.tol)
    except oracle.GridInfeasibleError as e:
        out.write(_dump({"grid_size": args.grid, "feasible": False, "error": str(e)}) + "\n")
        return 1
    doc = cmp.to_dict()
    doc["feasible"] = True
    doc["tol"] = args.tol
    out.write(_dump(doc) + "\n")
    return 0 if cmp.within_bound else 1


def _load_dist(path: str) -> ConfigDistribution:
    try:
        with open(path) as fh:
            return ConfigDistribution.from_dict(json.load(fh))
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")
    except (KeyError, TypeError, json.JSONDecodeError) as e:
        raise UsageError(f"{path}: expected {{\"entries\": [{{\"x\": .., \"p\": ..}}, ..]}} ({e})")


def cmd_simulate(args, out) -> int:
    params, _ = _params_from_args(args)
    if args.optimal:
        med = analytic.best_mediator(params)
        if med.degenerate:
            raise UsageError(
                "the optimal mediator is degenerate for these parameters (best CE = best Nash); "
                "use `analyze` instead"
            )
        dist = med.dist
    else:
        dist = _load_dist(args.dist)
    cfg = simulate.SimConfig(args.n, args.rounds, args.seed)
    if args.trace:
        try:
            with open(args.trace, "w", newline="") as fh:
                stats = simulate.run(params, dist, cfg, trace=fh)
        except OSError as e:
            raise UsageError(f"cannot write {args.trace}: {e.strerror}")
    else:
        stats = simulate.run(params, dist, cfg)
    verdict = simulate.check_incentives(params, dist, stats, z=args.z)
    exact = ce.verify_ce(params, dist, tol=args.tol)
    doc = stats.to_dict()
    doc["incentives"] = {
        "z": verdict.z,
        "go_side_ok": verdict.go_side_ok,
        "stay_side_ok": verdict.stay_side_ok,
        "passed": verdict.passed,
    }
    doc["exact_ce"] = {
        "go_side_slack": exact.go_side_slack,
        "stay_side_slack": exact.stay_side_slack,
        "is_ce": exact.is_ce,
    }
    out.write(_dump(doc) + "\n")
    return 0 if verdict.passed else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _add_game_args(p, required=True):
    p.add_argument("--c", type=float, required=required, help="cost to go when nobody goes")
    p.add_argument("--s1", type=float, required=required, help="slope of the crowd-too-small branch")
    p.add_argument("--s2", type=float, required=required, help="slope of the crowded branch")
    p.add_argument(
        "--stay-cost", "--raw-stay-cost", dest="stay_cost", type=float, default=None,
        help="cost to stay of a raw game; parameters are divided by it first",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elfarol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="closed-form equilibrium report as JSON")
    _add_game_args(p)

    p = sub.add_parser("sweep", help="NE/MED/OPT/MV/EV over a parameter range as CSV")
    p.add_argument("--vary", choices=["s1", "s2", "c", "c_over_s1_epsilon"])
    p.add_argument("--family", choices=[f.value for f in analytic.Family])
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--steps", type=int, default=60)
    p.add_argument("--c", type=float)
    p.add_argument("--s1", type=float)
    p.add_argument("--s2", type=float)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="write to this path instead of stdout")

    p = sub.add_parser("oracle", help="compare the closed form with the grid LP optimum")
    _add_game_args(p, required=False)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("simulate", help="Monte Carlo of mediated play")
    _add_game_args(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--optimal", action="store_true", help="use the closed-form optimal mediator")
    src.add_argument("--dist", help="JSON file with {\"entries\": [{\"x\":..,\"p\":..}]}")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--rounds", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--trace", help="write the per-round trace CSV here")
    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "simulate": cmd_simulate,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "oracle":
        if args.grid < 2:
            print("error: --grid must be at least 2", file=sys.stderr)
            return 2
        if None in (args.c, args.s1, args.s2):
            print("error: oracle needs --c, --s1 and --s2", file=sys.stderr)
            return 2
    try:
        return COMMANDS[args.command](args, out)
    except (ParameterError, InvalidDistributionError, UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
