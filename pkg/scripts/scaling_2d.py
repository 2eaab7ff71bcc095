"""Query counts of learn_2d as the pool grows.

    python3 scripts/scaling_2d.py --sizes 1000 10000 100000 --trials 20
"""
import argparse
import statistics
import time

from cqlearn.instances import gen_plane, planar
from cqlearn.learners import count_violations, learn_2d


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 10_000, 100_000])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    base = None
    print(f"{'n':>8} {'mean_q':>8} {'sd':>7} {'max_iter_q':>10} {'iters':>6} {'ratio':>6} {'sec':>6}")
    for n in args.sizes:
        totals, per_iter, iters, bad = [], 0, [], 0
        t0 = time.perf_counter()
        for t in range(args.trials):
            inst = gen_plane(n, args.seed * 1_000_003 + t)
            oracle = inst.oracle()
            rep = learn_2d(planar(inst.pool), oracle, seed=t)
            bad += count_violations(rep.labels, oracle)
            totals.append(rep.stats.total)
            iters.append(rep.iterations)
            per_iter = max(per_iter, max(rep.per_iteration_queries, default=0))
        mean = statistics.fmean(totals)
        base = base or mean
        sd = statistics.stdev(totals) if len(totals) > 1 else 0.0
        print(f"{n:>8} {mean:>8.1f} {sd:>7.1f} {per_iter:>10} {statistics.fmean(iters):>6.1f} "
              f"{mean / base:>6.2f} {time.perf_counter() - t0:>6.1f}")
        if bad:
            print(f"  !! {bad} wrong labels")


if __name__ == "__main__":
    main()
