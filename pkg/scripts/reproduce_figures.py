"""Write the sweep CSVs behind the s1/s2 and c/s1 plots.

    python scripts/reproduce_figures.py --out results/

Plot any of them with e.g.
    python -c "import pandas as pd; pd.read_csv('results/s1.csv').plot(x='param_value', y=['ne','med','opt']).figure.savefig('s1.png')"
"""

import argparse
from pathlib import Path

from elfarol.analytic import Family
from elfarol.cli import SWEEP_DEFAULTS, SweepSpec, sweep_rows, write_sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--steps", type=int, default=60)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    specs = {
        "s1": SweepSpec("s1", **{k: SWEEP_DEFAULTS["s1"][k] for k in ("start", "stop", "fixed")}, steps=args.steps),
        "s2": SweepSpec("s2", **{k: SWEEP_DEFAULTS["s2"][k] for k in ("start", "stop", "fixed")}, steps=args.steps),
    }
    for fam in Family:
        specs[fam.value] = SweepSpec("c_over_s1_epsilon", 0.2, 0.001, args.steps, family=fam)

    for name, spec in specs.items():
        rows = sweep_rows(spec)
        path = out / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            write_sweep_csv(rows, fh)
        last = rows[-1]
        print(f"{path}: {len(rows)} rows, last mv={last['mv']:.4g} ev={last['ev']:.4g}")


if __name__ == "__main__":
    main()
