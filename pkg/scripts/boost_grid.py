"""Boosting on grid instances: iterations, |DIS| trajectory and query totals.

    python3 scripts/boost_grid.py --N 16 --d 3 --n 10000 --trials 10
    python3 scripts/boost_grid.py --N 32 --d 3 --n 10000 --k 6     # force several rounds
"""
import argparse
import math
import statistics
import warnings

from cqlearn.instances import gen_grid
from cqlearn.learners import BoostConfig, boost, count_violations, q_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=16)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--k", type=int, default=None, help="defaults to the grid's suggested k")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    iters, totals = [], []
    for t in range(args.trials):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            inst = gen_grid(args.N, args.d, args.n, args.seed * 1_000_003 + t)
        k = args.k or inst.meta.suggested_k
        oracle = inst.oracle()
        rep = boost(inst.pool, oracle, BoostConfig(k=k, rng_seed=t))
        bad = count_violations(rep.labels, oracle)
        halves = all(2 * rep.dis_sizes[i + 1] <= rep.dis_sizes[i] for i in range(rep.iterations))
        iters.append(rep.iterations)
        totals.append(rep.stats.total)
        print(f"trial {t}: k={k} n={len(inst.pool)} iters={rep.iterations} resamples={rep.resamples} "
              f"queries={rep.stats.label_count}+{rep.stats.compare_count} dis={rep.dis_sizes} "
              f"halving={'ok' if halves else 'BROKEN'} wrong={bad}")
    n = len(inst.pool)
    print(f"mean iterations {statistics.fmean(iters):.2f} (2 log2 n = {2 * math.log2(n):.1f}), "
          f"mean queries {statistics.fmean(totals):.0f} (q(4k) log2 n = {q_bound(4 * k) * math.log2(n):.0f})")


if __name__ == "__main__":
    main()
