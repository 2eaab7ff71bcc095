"""``cqlearn`` command line: seeded experiments, witness verification and export.

Examples::

    cqlearn run boost --grid N=16 d=3 n=10000 trials=100 seed=7
    cqlearn run learn2d --n 100000 --trials 50 --seed 1 --out runs.csv
    cqlearn run witness --kind r3 --n 50
    cqlearn export margin-witness --n 10 --out lb.txt && cqlearn verify lb.txt

Trial ``t`` of a run with seed ``s`` draws its randomness from
``numpy.random.SeedSequence([s, t])`` feeding ``PCG64`` generators, so a CSV is
reproducible byte for byte apart from the ``wall_ms`` column.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import CQLearnError, Inconsistent, ParseError
from .geometry import integer_row, margin_report
from .instances import (Instance, WitnessInstance, gen_grid, gen_lb_margin, gen_lb_r3, gen_margin,
                        gen_plane, grid_k, grid_points, infdim_trial, planar, random_grid_concept,
                        verify_witness)
from .learners import BoostConfig, boost, count_violations, fit_consistent, learn_2d, learn_statistical
from .queries import SimulatedOracle
from .textio import format_instance, format_witness, parse_instance_file

MODES = ("learn2d", "boost", "statistical", "witness", "infdim-check")
COLUMNS = ("trial", "mode", "d", "N_or_eta", "n", "k", "label_queries", "comparison_queries",
           "total_queries", "iterations", "resamples", "soundness_violations", "wall_ms")
RNG_NAME = "numpy.random.PCG64"
HELDOUT = 10_000

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated parameters of one ``cqlearn run`` invocation.

    ``soundness_violations`` counts wrong labels for the learner modes and failed
    checks for ``witness`` (report violations) and ``infdim-check`` (trials
    without an inferable point).
    """

    mode: str
    kind: str | None = None
    N: int | None = None
    d: int | None = None
    n: int | None = None
    eta: Fraction | None = None
    trials: int = 1
    seed: int = 0
    k_override: int | None = None
    eps: float = 0.1
    delta: float = 0.1
    out: str | None = None

    def validated(self) -> "ExperimentConfig":
        cfg = self
        if cfg.mode not in MODES:
            raise ValueError(f"unknown mode {cfg.mode!r}")
        if cfg.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= cfg.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if cfg.k_override is not None and cfg.k_override < 1:
            raise ValueError("k must be positive")
        if cfg.mode == "learn2d":
            cfg = replace(cfg, n=cfg.n or 1000, d=2)
        elif cfg.mode == "boost":
            kind = cfg.kind or "grid"
            if kind == "grid":
                cfg = replace(cfg, kind=kind, N=cfg.N or 16, d=cfg.d or 3, n=cfg.n or 10_000)
            elif kind == "margin":
                cfg = replace(cfg, kind=kind, d=cfg.d or 3, n=cfg.n or 1000,
                              eta=cfg.eta if cfg.eta is not None else Fraction(1, 8))
                if not 0 < cfg.eta <= 1:
                    raise ValueError("eta must lie in (0, 1]")
            else:
                raise ValueError("boost runs on --grid or --margin instances")
        elif cfg.mode == "statistical":
            cfg = replace(cfg, kind="grid", N=cfg.N or 16, d=cfg.d or 3)
            if not (0 < cfg.eps < 1 and 0 < cfg.delta < 1):
                raise ValueError("eps and delta must lie in (0, 1)")
        elif cfg.mode == "witness":
            cfg = replace(cfg, kind=cfg.kind or "r3", n=cfg.n or 10)
            if cfg.kind not in ("r3", "margin"):
                raise ValueError("witness kind is r3 or margin")
            if cfg.n < 2:
                raise ValueError("witnesses need n >= 2")
        else:
            cfg = replace(cfg, kind="grid", N=cfg.N or 8, d=cfg.d or 2)
        for name in ("N", "d", "n"):
            v = getattr(cfg, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive")
        return cfg


def trial_seeds(seed: int, trial: int, count: int = 2) -> list[int]:
    state = np.random.SeedSequence([seed, trial]).generate_state(count, np.uint64)
    return [int(s) for s in state]


def _row(cfg: ExperimentConfig, trial: int, **kw) -> dict:
    row = {c: "" for c in COLUMNS}
    row.update(trial=trial, mode=cfg.mode)
    row.update(kw)
    return row


def _stats(report) -> dict:
    s = report.stats
    return dict(label_queries=s.label_count, comparison_queries=s.compare_count,
                total_queries=s.total, iterations=report.iterations, resamples=report.resamples)


class GridDistribution:
    """Uniform distribution on ``{0..N}^d``."""

    def __init__(self, N: int, d: int):
        self.N, self.dim = N, d

    def sample(self, rng: np.random.Generator, n: int) -> list[tuple[int, ...]]:
        return [tuple(int(c) for c in row) for row in rng.integers(0, self.N + 1, size=(n, self.dim))]


def heldout_error(concept, truth, points: np.ndarray) -> float:
    """Fraction of ``points`` (an integer array) on which the two concepts disagree."""
    a, b = integer_row(concept.w), integer_row(truth.w)
    big = max(map(abs, a + b)) * int(np.abs(points).max(initial=1)) * points.shape[1] >= 1 << 62
    X = points.astype(object) if big else points
    fa = X @ np.array(a, dtype=X.dtype)
    fb = X @ np.array(b, dtype=X.dtype)
    return float(np.mean((fa >= 0) != (fb >= 0)))


def run_trial(cfg: ExperimentConfig, trial: int) -> dict:
    s0, s1 = trial_seeds(cfg.seed, trial)
    t0 = time.perf_counter()
    if cfg.mode == "learn2d":
        inst = gen_plane(cfg.n, s0)
        oracle = inst.oracle()
        rep = learn_2d(planar(inst.pool), oracle, seed=s1)
        row = _row(cfg, trial, d=2, n=cfg.n, **_stats(rep),
                   soundness_violations=count_violations(rep.labels, oracle))
    elif cfg.mode == "boost":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            inst = (gen_grid(cfg.N, cfg.d, cfg.n, s0) if cfg.kind == "grid"
                    else gen_margin(cfg.d, cfg.n, cfg.eta, s0))
        k = cfg.k_override or inst.meta.suggested_k
        oracle = inst.oracle()
        rep = boost(inst.pool, oracle, BoostConfig(k=k, rng_seed=s1))
        row = _row(cfg, trial, d=cfg.d, N_or_eta=cfg.N if cfg.kind == "grid" else str(cfg.eta),
                   n=len(inst.pool), k=k, **_stats(rep),
                   soundness_violations=count_violations(rep.labels, oracle))
    elif cfg.mode == "statistical":
        rng = np.random.default_rng(s0)
        dist = GridDistribution(cfg.N, cfg.d)
        hidden = random_grid_concept(rng, cfg.N, cfg.d, grid_points(cfg.N, cfg.d))
        k = cfg.k_override or grid_k(cfg.N, cfg.d)
        made = []

        def factory(pool):
            made.append(SimulatedOracle(hidden, pool))
            return made[-1]

        concept, rep = learn_statistical(dist, cfg.eps, cfg.delta, factory, k=k, seed=s1)
        test = np.array(dist.sample(rng, HELDOUT), dtype=np.int64)
        row = _row(cfg, trial, d=cfg.d, N_or_eta=cfg.N, n=len(rep.labels), k=k, **_stats(rep),
                   soundness_violations=count_violations(rep.labels, made[0]))
        row["_heldout_error"] = heldout_error(concept, hidden, test)
    elif cfg.mode == "witness":
        w = gen_lb_r3(cfg.n) if cfg.kind == "r3" else gen_lb_margin(cfg.n)
        rep = verify_witness(w)
        row = _row(cfg, trial, d=len(w.pool[0]), n=w.n, soundness_violations=len(rep.violations))
        row["_report"] = rep.summary()
    else:
        k = cfg.k_override or grid_k(cfg.N, cfg.d)
        res = infdim_trial(cfg.N, cfg.d, k, s0)
        row = _row(cfg, trial, d=cfg.d, N_or_eta=cfg.N, n=len(res.subset), k=k,
                   soundness_violations=int(res.inferable is None))
    row["wall_ms"] = round((time.perf_counter() - t0) * 1000)
    return row


def _run_one(args):
    return run_trial(*args)


def run_rows(cfg: ExperimentConfig, jobs: int = 1) -> list[dict]:
    work = [(cfg, t) for t in range(cfg.trials)]
    if jobs > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_run_one, work))
    return [_run_one(w) for w in work]


def write_csv(cfg: ExperimentConfig, rows: list[dict], stream) -> None:
    stream.write(f"# cqlearn rng={RNG_NAME} seeding=SeedSequence([seed,trial]) seed={cfg.seed} mode={cfg.mode}\n")
    writer = csv.DictWriter(stream, fieldnames=COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def cmd_run(cfg: ExperimentConfig, jobs: int | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if jobs is None:
        jobs = int(os.environ.get("CQLEARN_JOBS", "1") or 1)
    if cfg.mode == "boost" and cfg.kind == "grid" and cfg.n > (cfg.N + 1) ** cfg.d:
        print(f"note: n={cfg.n} exceeds the {(cfg.N + 1) ** cfg.d} grid points; using the full grid",
              file=stderr)
    try:
        rows = run_rows(cfg, jobs)
    except Inconsistent as e:
        print(f"inconsistent transcript: {e}", file=stderr)
        return EXIT_INCONSISTENT
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(cfg, rows, fh)
    else:
        write_csv(cfg, rows, stdout)
    bad = sum(int(r["soundness_violations"]) for r in rows)
    for r in rows:
        if "_report" in r:
            print(f"trial {r['trial']}: {r['_report']}", file=stderr)
    summary = f"{cfg.mode}: {len(rows)} trial(s), violations/failures {bad}"
    if rows and rows[0]["total_queries"] != "":
        summary += f", mean total queries {np.mean([r['total_queries'] for r in rows]):.1f}"
        summary += f", mean iterations {np.mean([r['iterations'] for r in rows]):.2f}"
    if rows and "_heldout_error" in rows[0]:
        errs = [r["_heldout_error"] for r in rows]
        summary += (f", held-out error mean {np.mean(errs):.4f}, "
                    f"{sum(e <= cfg.eps for e in errs)}/{len(errs)} trials <= eps")
    print(summary, file=stderr)
    return EXIT_OK if bad == 0 else EXIT_FAIL


def check_instance(inst: Instance) -> list[str]:
    """Realisability checks for a parsed instance; returns failure messages."""
    problems = []
    if inst.labels is not None:
        if inst.hidden is not None:
            for i, (p, y) in enumerate(zip(inst.pool, inst.labels)):
                if inst.hidden(p) != y:
                    problems.append(f"point {i}: recorded label {y:+d} disagrees with w")
        try:
            fit_consistent(inst.pool, dict(enumerate(inst.labels)))
        except Inconsistent:
            problems.append("labels are not realisable by any homogeneous half space")
    if inst.hidden is not None:
        if len(inst.hidden.w) != inst.dim:
            problems.append("concept dimension differs from the pool dimension")
        elif inst.meta.kind == "margin" and inst.meta.eta is not None:
            eta = margin_report(inst.hidden, inst.pool).eta
            if eta < inst.meta.eta:
                problems.append(f"minimal ratio {eta} is below the promised {inst.meta.eta}")
    if inst.meta.kind == "grid" and inst.meta.N is not None:
        if any(c.denominator != 1 or not 0 <= c <= inst.meta.N for p in inst.pool for c in map(Fraction, p)):
            problems.append(f"grid points must be integers in [0, {inst.meta.N}]")
    return problems


def cmd_verify(path: str, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with open(path, encoding="utf-8") as fh:
            obj = parse_instance_file(fh.read())
    except ParseError as e:
        print(f"{path}:{e.line}: {e.message}", file=stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"{path}: {e.strerror}", file=stderr)
        return EXIT_USAGE
    if isinstance(obj, WitnessInstance):
        rep = verify_witness(obj)
        print(f"witness ({obj.kind}, n={obj.n}): {rep.summary()}", file=stdout)
        return EXIT_OK if rep.clean else EXIT_FAIL
    problems = check_instance(obj)
    if obj.hidden is None and obj.labels is None:
        print(f"instance with {len(obj.pool)} points and no concept or labels: nothing to check", file=stdout)
        return EXIT_OK
    for p in problems:
        print(p, file=stdout)
    print(f"instance ({obj.meta.kind}, {len(obj.pool)} points): "
          + ("realisable" if not problems else f"{len(problems)} problem(s)"), file=stdout)
    return EXIT_OK if not problems else EXIT_FAIL


EXPORT_KINDS = ("r3", "margin-witness", "grid", "margin", "plane")


def export_text(kind: str, n: int, N: int = 8, d: int = 2, eta: Fraction = Fraction(1, 4), seed: int = 0) -> str:
    if kind == "r3":
        return format_witness(gen_lb_r3(n))
    if kind == "margin-witness":
        return format_witness(gen_lb_margin(n))
    if kind == "grid":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return format_instance(gen_grid(N, d, n, seed))
    if kind == "margin":
        return format_instance(gen_margin(d, n, eta, seed))
    if kind == "plane":
        return format_instance(gen_plane(n, seed))
    raise ValueError(f"unknown export kind {kind!r}")


# -- argument parsing --------------------------------------------------------------

_KEYS = {"N": int, "d": int, "n": int, "eta": Fraction, "trials": int, "seed": int, "k": int,
         "kind": str, "eps": float, "delta": float, "jobs": int, "out": str}


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", type=int, help="grid side (points in {0..N}^d)")
    p.add_argument("--d", type=int, help="dimension")
    p.add_argument("--n", type=int, help="pool size or witness size")
    p.add_argument("--eta", type=Fraction, help="minimal-ratio target, e.g. 1/8")
    p.add_argument("--kind", help="instance or witness kind")
    p.add_argument("--seed", type=int, help="64-bit seed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cqlearn", description="Active half-space learning with comparison queries.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run seeded trials and write CSV")
    run.add_argument("mode", choices=MODES)
    _add_params(run)
    run.add_argument("--grid", dest="kind", action="store_const", const="grid")
    run.add_argument("--margin", dest="kind", action="store_const", const="margin")
    run.add_argument("--trials", type=int)
    run.add_argument("--k", type=int, help="override the suggested inference-dimension budget")
    run.add_argument("--eps", type=float)
    run.add_argument("--delta", type=float)
    run.add_argument("--jobs", type=int, help="worker processes (default: $CQLEARN_JOBS or 1)")
    run.add_argument("--out", help="CSV path (default: standard output)")
    run.add_argument("params", nargs="*", metavar="KEY=VALUE", help="same parameters in key=value form")

    ver = sub.add_parser("verify", help="verify a witness or instance file")
    ver.add_argument("path")

    exp = sub.add_parser("export", help="write a generated instance or witness")
    exp.add_argument("what", choices=EXPORT_KINDS)
    _add_params(exp)
    exp.add_argument("--out")
    return ap


def _merge_params(ap, ns) -> None:
    for item in ns.params:
        key, sep, val = item.partition("=")
        if not sep or key not in _KEYS:
            ap.error(f"unrecognised parameter {item!r}")
        try:
            setattr(ns, key, _KEYS[key](val))
        except (ValueError, ZeroDivisionError):
            ap.error(f"bad value for {key}: {val!r}")


def main(argv=None) -> int:
    ap = build_parser()
    ns, extra = ap.parse_known_args(argv)
    if extra:
        if ns.command != "run" or any(tok.startswith("-") or "=" not in tok for tok in extra):
            ap.error("unrecognized arguments: " + " ".join(extra))
        ns.params = list(ns.params) + extra
    if ns.command == "verify":
        return cmd_verify(ns.path)
    if ns.command == "export":
        try:
            text = export_text(ns.what, ns.n or 10, N=ns.N or 8, d=ns.d or 2,
                               eta=ns.eta if ns.eta is not None else Fraction(1, 4), seed=ns.seed or 0)
        except (ValueError, CQLearnError) as e:
            print(f"cqlearn export: {e}", file=sys.stderr)
            return EXIT_USAGE
        if ns.out:
            with open(ns.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    _merge_params(ap, ns)
    try:
        cfg = ExperimentConfig(
            mode=ns.mode, kind=ns.kind, N=ns.N, d=ns.d, n=ns.n, eta=ns.eta,
            trials=1 if ns.trials is None else ns.trials, seed=ns.seed or 0, k_override=ns.k,
            eps=ns.eps if ns.eps is not None else 0.1, delta=ns.delta if ns.delta is not None else 0.1,
            out=ns.out).validated()
    except ValueError as e:
        ap.error(str(e))
    return cmd_run(cfg, ns.jobs)


if __name__ == "__main__":
    sys.exit(main())
