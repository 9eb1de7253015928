"""Compare the closed-form mediator with the grid LP on random games.

    python scripts/oracle_check.py --games 200 --grid 201 --seed 0
"""

import argparse
import time

import numpy as np

from elfarol.game import GameParams
from elfarol.oracle import GridInfeasibleError, compare_with_closed_form


def random_game(rng, c_low):
    c = rng.uniform(c_low, 5.0)
    return GameParams(c, c * rng.uniform(1.01, 6.0), rng.uniform(0.3, 30.0))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--games", type=int, default=200)
    ap.add_argument("--grid", type=int, default=201)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--c-low", type=float, default=0.05)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    worst, fails, infeasible, mism = 0.0, 0, 0, 0
    t0 = time.perf_counter()
    for _ in range(args.games):
        params = random_game(rng, args.c_low)
        try:
            cmp = compare_with_closed_form(params, args.grid)
        except GridInfeasibleError:
            infeasible += 1
            continue
        worst = max(worst, cmp.difference / cmp.bound)
        fails += not cmp.within_bound
        mism += cmp.support_matches is False
    dt = time.perf_counter() - t0
    print(f"games={args.games} grid={args.grid} time={dt:.1f}s")
    print(f"gate failures={fails} support mismatches={mism} infeasible grids={infeasible}")
    print(f"worst difference / bound = {worst:.3g}")


if __name__ == "__main__":
    main()
