"""Active learners built on label and comparison queries.

* :func:`learn_2d` - the planar cone algorithm: sample 30 points, find the
  positive and negative points closest to the boundary with comparisons and
  label everything inside the two cones they span.
* :func:`weak_confident_learn` - query a sample, sort each label class by
  ``|f|`` and return every label the transcript forces.
* :func:`boost` - repeat the weak learner on the uninferred points until few
  remain, then label those directly.
* :func:`learn_statistical` - label an i.i.d. sample with :func:`boost` and fit
  one consistent half space.
"""
from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import Inconsistent, NonTermination
from .geometry import LinearConcept, as_vector, common_scale, integer_points, primitive
from .inference import IntegerPool, coverage, infer_all
from .lp import INT64_SAFE, ConstraintSystem, feasible
from .queries import QueryStats, QueryTranscript, SimulatedOracle


def q_bound(m: int) -> int:
    """Label plus merge-sort comparison budget for ``m`` sampled points."""
    return m + m * math.ceil(math.log2(m)) if m > 1 else m


@dataclass
class RunReport:
    """Outcome of a learner run.

    ``labels`` covers the whole pool. ``dis_sizes`` lists ``|DIS_t|`` at the start
    of every boosting round (a final 0 when inference labelled everything), so
    accepted step ``t`` shrinks ``dis_sizes[t]`` to ``dis_sizes[t + 1]``.
    ``per_iteration_queries`` is filled by :func:`learn_2d`.
    """

    labels: dict[int, int]
    stats: QueryStats
    iterations: int = 0
    resamples: int = 0
    dis_sizes: list[int] = field(default_factory=list)
    per_iteration_queries: list[int] = field(default_factory=list)
    coverages: list[Fraction] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["labels"] = {str(k): v for k, v in sorted(self.labels.items())}
        d["coverages"] = [str(c) for c in self.coverages]
        return d


def count_violations(labels: dict[int, int], oracle: SimulatedOracle) -> int:
    """Number of emitted labels that disagree with the oracle's hidden concept.

    Exact and vectorised: the concept and the pool are scaled to integers.
    """
    if not labels:
        return 0
    ids = np.fromiter(labels.keys(), dtype=np.int64, count=len(labels))
    got = np.fromiter(labels.values(), dtype=np.int64, count=len(labels))
    w = oracle.hidden.w
    L = common_scale([w])
    wi = [int(c * L) for c in w]
    pts = [oracle.pool[i] for i in ids.tolist()]
    X = IntegerPool(pts).ints
    big = max(abs(c) for p in X for c in p) * max(map(abs, wi)) * len(wi) >= INT64_SAFE
    dtype = object if big else np.int64
    f = np.array(X, dtype=dtype) @ np.array(wi, dtype=dtype)
    truth = np.where(f >= 0, 1, -1)
    return int(np.count_nonzero(truth != got))


# -- sorting ---------------------------------------------------------------------


def sort_with_queries(ids: Sequence[int], y: int, oracle: SimulatedOracle,
                      transcript: QueryTranscript | None = None) -> list[int]:
    """Merge sort ``ids`` (all labelled ``y``) by nondecreasing ``|f|``.

    For ``y = +1`` the ``|f|`` order is the ``f`` order; for ``y = -1`` it is reversed.
    """
    if y not in (1, -1):
        raise ValueError("y must be +1 or -1")

    def not_after(a, b) -> bool:  # |f(a)| <= |f(b)|
        if y == 1:
            return oracle.query_compare(b, a, transcript)
        return oracle.query_compare(a, b, transcript)

    def msort(xs):
        if len(xs) <= 1:
            return list(xs)
        mid = len(xs) // 2
        left, right = msort(xs[:mid]), msort(xs[mid:])
        out = []
        i = j = 0
        while i < len(left) and j < len(right):
            if not_after(left[i], right[j]):
                out.append(left[i])
                i += 1
            else:
                out.append(right[j])
                j += 1
        out.extend(left[i:])
        out.extend(right[j:])
        return out

    return msort(list(ids))


# -- planar cones ------------------------------------------------------------------


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _half(v) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = _cross(a, b)
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass(frozen=True)
class Cone2D:
    """Closed convex cone generated by finitely many integer vectors in the plane.

    ``kind`` is one of ``point``, ``ray``, ``line``, ``pointed``, ``halfplane``,
    ``plane``; ``gens`` holds the boundary directions that describe it.
    """

    kind: str
    gens: tuple[tuple[int, int], ...] = ()

    @classmethod
    def spanned_by(cls, vectors) -> "Cone2D":
        dirs = sorted({primitive((int(v[0]), int(v[1]))) for v in vectors if v[0] or v[1]},
                      key=functools.cmp_to_key(_angle_cmp))
        k = len(dirs)
        if k == 0:
            return cls("point")
        if k == 1:
            return cls("ray", (dirs[0],))
        straight = []
        for i in range(k):
            a, b = dirs[i], dirs[(i + 1) % k]
            c = _cross(a, b)
            if c < 0:
                # angular gap wider than pi: the cone runs from b counter-clockwise to a
                return cls("pointed", (b, a))
            if c == 0:
                straight.append(i)
        if len(straight) == 2 and k == 2:
            return cls("line", (dirs[0],))
        if straight:
            i = straight[0]
            return cls("halfplane", (dirs[(i + 1) % k],))
        return cls("plane")

    def contains(self, T: np.ndarray) -> np.ndarray:
        """Membership mask for the rows of an ``(m, 2)`` integer array of offsets."""
        t0, t1 = T[:, 0], T[:, 1]
        if self.kind == "plane":
            return np.ones(len(T), dtype=bool)
        if self.kind == "point":
            return (t0 == 0) & (t1 == 0)
        g = self.gens[0]
        cross_g = g[0] * t1 - g[1] * t0
        if self.kind == "ray":
            return (cross_g == 0) & (g[0] * t0 + g[1] * t1 >= 0)
        if self.kind == "line":
            return cross_g == 0
        if self.kind == "halfplane":
            return cross_g >= 0
        h = self.gens[1]
        return (cross_g >= 0) & (t0 * h[1] - t1 * h[0] >= 0)


def in_cone2d(apex, a, b, z) -> bool:
    """Is ``z - apex`` a nonnegative combination of ``a - apex`` and ``b - apex``?"""
    pts = [as_vector(p) for p in (apex, a, b, z)]
    if any(len(p) != 2 for p in pts):
        raise ValueError("in_cone2d works on planar points")
    q, pa, pb, pz = integer_points(pts)
    sub = lambda u: (u[0] - q[0], u[1] - q[1])  # noqa: E731
    cone = Cone2D.spanned_by([sub(pa), sub(pb)])
    return bool(cone.contains(np.array([sub(pz)], dtype=object))[0])


def _closest(ids: list[int], y: int, oracle, transcript) -> int:
    """First point of minimal ``|f|`` among ``ids`` using ``len(ids) - 1`` comparisons."""
    best = ids[0]
    for p in ids[1:]:
        if y == 1:
            if not oracle.query_compare(p, best, transcript):
                best = p
        elif not oracle.query_compare(best, p, transcript):
            best = p
    return best


def learn_2d(pool, oracle: SimulatedOracle, subsample: int = 30, seed: int = 0) -> RunReport:
    """Label every point of a planar pool with the cone algorithm.

    ``pool`` holds the planar points; ``oracle`` answers for an affine concept on
    the same ids (typically over the lifted points). Each iteration samples
    ``subsample`` unlabelled points without replacement, queries their labels,
    locates the closest point to the boundary in each class and labels every
    unlabelled point inside the cone that class spans at that point.
    """
    ipool = IntegerPool.coerce(pool)
    if ipool.dim != 2:
        raise ValueError("learn_2d expects planar points")
    big = max(abs(c) for p in ipool.ints for c in p) >= 1 << 30
    X = np.array(ipool.ints, dtype=object if big else np.int64)
    n = len(ipool)
    rng = np.random.default_rng(seed)
    unlabeled = np.ones(n, dtype=bool)
    labels: dict[int, int] = {}
    start = oracle.stats.copy()
    per_iter: list[int] = []
    transcript = QueryTranscript()
    while unlabeled.any():
        before = oracle.stats.copy()
        rem = np.flatnonzero(unlabeled)
        S = rng.choice(rem, size=min(subsample, rem.size), replace=False)
        P, N = [], []
        for x in S.tolist():
            yx = oracle.query_label(x, transcript)
            labels[x] = yx
            (P if yx == 1 else N).append(x)
        unlabeled[S] = False
        rest = np.flatnonzero(unlabeled)
        marks = []
        for cls_ids, y in ((P, 1), (N, -1)):
            if not cls_ids or rest.size == 0:
                continue
            q = _closest(cls_ids, y, oracle, transcript)
            cone = Cone2D.spanned_by([X[p] - X[q] for p in cls_ids])
            inside = rest[cone.contains(X[rest] - X[q])]
            marks.append((inside, y))
        if len(marks) == 2 and np.intersect1d(marks[0][0], marks[1][0]).size:
            raise Inconsistent("a point lies in both the positive and the negative cone")
        for inside, y in marks:
            for x in inside.tolist():
                labels[x] = y
            unlabeled[inside] = False
        per_iter.append((oracle.stats - before).total)
    return RunReport(labels=labels, stats=oracle.stats - start, iterations=len(per_iter),
                     per_iteration_queries=per_iter)


# -- weak confident learner and boosting -------------------------------------------


def weak_confident_learn(sample_ids: Sequence[int], pool, oracle: SimulatedOracle,
                         targets: Sequence[int] | None = None):
    """Query every sampled label, sort both classes and infer what the transcript forces.

    Returns ``(hypothesis, transcript)``; the hypothesis is defined on ``targets``
    (default: the whole pool).
    """
    ipool = IntegerPool.coerce(pool)
    transcript = QueryTranscript()
    classes: dict[int, dict[int, None]] = {1: {}, -1: {}}
    for x in sample_ids:
        x = ipool.check(x)
        classes[oracle.query_label(x, transcript)][x] = None
    for y, ids in classes.items():
        if len(ids) > 1:
            sort_with_queries(list(ids), y, oracle, transcript)
    return infer_all(transcript, ipool, targets), transcript


@dataclass(frozen=True)
class BoostConfig:
    """Parameters of :func:`boost`; sizes default to ``4k``."""

    k: int
    subsample_size: int | None = None
    direct_label_threshold: int | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.subsample_size is None:
            object.__setattr__(self, "subsample_size", 4 * self.k)
        if self.direct_label_threshold is None:
            object.__setattr__(self, "direct_label_threshold", 4 * self.k)
        if self.subsample_size < 1 or self.direct_label_threshold < 0:
            raise ValueError("subsample_size must be positive and the threshold nonnegative")


def boost(pool, oracle: SimulatedOracle, cfg: BoostConfig) -> RunReport:
    """Label the whole pool by repeatedly halving the uninferred set ``DIS``."""
    ipool = IntegerPool.coerce(pool)
    n = len(ipool)
    rng = np.random.default_rng(cfg.rng_seed)
    guard = 64 * math.log2(max(n, 2))
    dis = np.arange(n)
    labels: dict[int, int] = {}
    start = oracle.stats.copy()
    report = RunReport(labels=labels, stats=QueryStats())
    while True:
        report.dis_sizes.append(int(dis.size))
        if dis.size == 0:
            break
        if dis.size <= cfg.direct_label_threshold:
            for x in dis.tolist():
                labels[x] = oracle.query_label(x)
            break
        tries = 0
        while True:
            sample = rng.choice(dis, size=cfg.subsample_size, replace=True)
            targets = dis.tolist()
            h, _ = weak_confident_learn(sample.tolist(), ipool, oracle, targets)
            e = coverage(h, targets)
            if e >= Fraction(1, 2):
                break
            tries += 1
            report.resamples += 1
            if tries > guard:
                raise NonTermination(f"{tries} consecutive rejected updates with |DIS| = {dis.size}")
        report.iterations += 1
        report.coverages.append(e)
        labels.update(h.labeled())
        dis = np.array(h.abstentions(), dtype=np.int64)
    report.stats = oracle.stats - start
    return report


# -- statistical wrapper -------------------------------------------------------------


def sample_size(d: int, eps, delta, C: float = 8) -> int:
    return math.ceil(C * (d + math.log(1 / delta)) / eps)


def fit_consistent(pool, labels: dict[int, int]) -> LinearConcept:
    """One feasibility call: a homogeneous concept agreeing with every label."""
    pts = [as_vector(p) for p in pool]
    dim = len(pts[0])
    nonstrict = tuple(pts[i] for i, y in sorted(labels.items()) if y == 1)
    strict = tuple(-pts[i] for i, y in sorted(labels.items()) if y == -1)
    res = feasible(ConstraintSystem(dim, nonstrict, strict))
    if not res:
        raise Inconsistent("labels are not realisable by a homogeneous half space")
    return LinearConcept(res.witness)


def learn_statistical(sampler, eps, delta, oracle_factory: Callable[[list], SimulatedOracle],
                      k: int, C: float = 8, seed: int = 0):
    """Learn to error ``eps`` with confidence ``1 - delta`` from a sampled pool.

    ``sampler`` exposes ``dim`` and ``sample(rng, n)``; ``oracle_factory`` builds
    the annotator for the drawn pool. Returns ``(concept, report)``.
    """
    if not 0 < eps < 1 or not 0 < delta < 1:
        raise ValueError("eps and delta must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    n = sample_size(sampler.dim, eps, delta, C)
    pool = sampler.sample(rng, n)
    oracle = oracle_factory(pool)
    report = boost(pool, oracle, BoostConfig(k=k, rng_seed=int(rng.integers(2**63))))
    return fit_consistent(pool, report.labels), report
