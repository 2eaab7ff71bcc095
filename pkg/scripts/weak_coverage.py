"""Coverage of the weak confident learner for a range of sample budgets.

    python3 scripts/weak_coverage.py --N 64 --d 2 --ks 1 2 4 8 --trials 100
"""
import argparse
from fractions import Fraction

import numpy as np

from cqlearn import SimulatedOracle
from cqlearn.inference import coverage
from cqlearn.instances import grid_points, random_grid_concept
from cqlearn.learners import count_violations, weak_confident_learn


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--ks", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--trials", type=int, default=100)
    args = ap.parse_args()

    pool = grid_points(args.N, args.d)
    print(f"grid {{0..{args.N}}}^{args.d}: {len(pool)} points")
    print(f"{'k':>4} {'draws':>6} {'mean':>7} {'min':>7} {'P[>=1/2]':>9}")
    for k in args.ks:
        covs = []
        for s in range(args.trials):
            rng = np.random.default_rng(s)
            oracle = SimulatedOracle(random_grid_concept(rng, args.N, args.d, pool), pool)
            h, _ = weak_confident_learn(rng.choice(len(pool), size=4 * k).tolist(), pool, oracle)
            assert count_violations(h.labeled(), oracle) == 0
            covs.append(coverage(h, range(len(pool))))
        half = sum(c >= Fraction(1, 2) for c in covs) / len(covs)
        print(f"{k:>4} {4 * k:>6} {float(sum(covs)) / len(covs):>7.3f} {float(min(covs)):>7.3f} {half:>9.2f}")


if __name__ == "__main__":
    main()
