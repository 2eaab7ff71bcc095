"""Instance generators and certified lower-bound witnesses.

Generators are deterministic functions of their parameters and a seed (numpy
``PCG64`` through :func:`numpy.random.default_rng`). Pool points are tuples of
exact rationals; integer-valued pools use plain ``int`` tuples so that large
pools stay cheap.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import GenerationFailed
from .geometry import LinearConcept, RationalVector, as_vector, evaluate, margin_report
from .inference import IntegerPool, infer_label
from .queries import QueryTranscript, SimulatedOracle


@dataclass(frozen=True)
class InstanceMeta:
    kind: str = "custom"  # grid | margin | plane | custom
    N: int | None = None
    eta: Fraction | None = None
    suggested_k: int | None = None


@dataclass(frozen=True)
class Instance:
    """A pool, the hidden concept labelling it and generator metadata.

    ``labels`` optionally records a labelling read from a file; it is checked
    against ``hidden`` (when present) and for realisability.
    """

    pool: tuple
    hidden: LinearConcept | None
    meta: InstanceMeta = field(default_factory=InstanceMeta)
    labels: tuple[int, ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.pool[0])

    def oracle(self) -> SimulatedOracle:
        if self.hidden is None:
            raise ValueError("instance has no hidden concept")
        return SimulatedOracle(self.hidden, self.pool)


@dataclass(frozen=True)
class WitnessInstance:
    """Points ``x_1..x_n`` and concepts ``c_0..c_n``; ``c_i`` differs from ``c_0``
    only at ``x_i`` and no query inside the rest of the pool separates them."""

    pool: tuple[RationalVector, ...]
    concepts: tuple[LinearConcept, ...]
    kind: str = "custom"  # r3 | margin | custom
    M: int | None = None

    @property
    def n(self) -> int:
        return len(self.pool)


# -- positive-result instances -------------------------------------------------


def grid_k(N: int, d: int) -> int:
    return math.ceil(16 * d * math.log2(4 * N * d))


def margin_k(d: int, eta) -> int:
    return math.ceil(10 * d * math.log2(d + 1) * math.log2(2 / Fraction(eta)))


def random_grid_concept(rng: np.random.Generator, N: int, d: int, pool_ints=None,
                        attempts: int = 1000) -> LinearConcept:
    """Integer weights uniform in ``[-2Nd, 2Nd]``, redrawn until ``pool_ints`` sees both labels."""
    bound = 2 * N * d
    X = None if pool_ints is None else np.asarray(pool_ints, dtype=np.int64)
    w = None
    for _ in range(attempts):
        w = rng.integers(-bound, bound + 1, size=d)
        if not w.any():
            continue
        if X is None:
            break
        f = X @ w
        if (f >= 0).any() and (f < 0).any():
            break
    return LinearConcept(tuple(int(c) for c in w))


def grid_points(N: int, d: int, idx=None) -> list[tuple[int, ...]]:
    shape = (N + 1,) * d
    if idx is None:
        idx = np.arange((N + 1) ** d)
    cols = np.unravel_index(np.asarray(idx), shape)
    return [tuple(int(c) for c in row) for row in np.stack(cols, axis=1)]


def gen_grid(N: int, d: int, n: int, seed: int) -> Instance:
    """``n`` distinct uniform points of ``{0..N}^d`` and a random concept with both labels."""
    if N < 1 or d < 1 or n < 1:
        raise ValueError("N, d and n must be positive")
    rng = np.random.default_rng(seed)
    size = (N + 1) ** d
    if n >= size:
        if n > size:
            warnings.warn(f"n={n} exceeds the {size} grid points; using the full grid", stacklevel=2)
        pool = grid_points(N, d)
    else:
        pool = grid_points(N, d, np.sort(rng.choice(size, size=n, replace=False)))
    hidden = random_grid_concept(rng, N, d, pool)
    return Instance(tuple(pool), hidden, InstanceMeta("grid", N=N, suggested_k=grid_k(N, d)))


def gen_margin(d: int, n: int, eta_target, seed: int, denominator: int = 64,
               budget: int | None = None) -> Instance:
    """Rejection-sample rational points of ``[-1, 1]^d`` with ``|f| >= eta * max|f|``.

    Accepting only points with ``|f(x)| >= eta * R``, where ``R = ||w||_1`` bounds
    ``|f|`` on the cube, makes the minimal ratio at least ``eta`` exactly.
    """
    eta = Fraction(eta_target)
    if not 0 < eta <= 1:
        raise ValueError("eta_target must lie in (0, 1]")
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive")
    rng = np.random.default_rng(seed)
    while True:
        w = rng.integers(-4, 5, size=d)
        if w.any():
            break
    R = denominator * int(np.abs(w).sum())
    budget = budget if budget is not None else 2000 * n + 10000
    chosen: dict[tuple[int, ...], None] = {}
    drawn = 0
    while len(chosen) < n and drawn < budget:
        m = min(4096, budget - drawn)
        C = rng.integers(-denominator, denominator + 1, size=(m, d))
        drawn += m
        f = np.abs(C @ w)
        ok = f * eta.denominator >= eta.numerator * R
        for row in C[ok]:
            chosen[tuple(int(c) for c in row)] = None
            if len(chosen) == n:
                break
    if len(chosen) < n:
        raise GenerationFailed(
            f"only {len(chosen)} of {n} points reached ratio {eta} after {drawn} draws; "
            "try a smaller eta_target")
    pool = tuple(RationalVector(Fraction(c, denominator) for c in p) for p in chosen)
    hidden = LinearConcept(tuple(int(c) for c in w))
    return margin_instance(pool, hidden, eta)


def margin_instance(pool: Sequence, hidden: LinearConcept, eta_target) -> Instance:
    """Wrap a given pool and concept after checking the minimal ratio exactly."""
    eta = Fraction(eta_target)
    pool = tuple(as_vector(p) for p in pool)
    got = margin_report(hidden, pool).eta
    if got < eta:
        raise GenerationFailed(f"minimal ratio {got} is below {eta}")
    return Instance(pool, hidden, InstanceMeta("margin", eta=eta, suggested_k=margin_k(len(pool[0]), eta)))


def gen_plane(n: int, seed: int, resolution: int = 1 << 20) -> Instance:
    """Uniform points of the unit square and a random line through it.

    Coordinates live on the lattice ``resolution^-1 * Z``; the pool stores them
    scaled by ``resolution`` and lifted, ``(x, y, 1)``, which preserves every
    label and comparison. The line passes through two random lattice points.
    """
    rng = np.random.default_rng(seed)
    P = rng.integers(0, resolution, size=(n, 2))
    while True:
        a, b = rng.integers(0, resolution, size=(2, 2))
        if (a != b).any():
            break
    dx, dy = int(b[0] - a[0]), int(b[1] - a[1])
    hidden = LinearConcept((-dy, dx, dy * int(a[0]) - dx * int(a[1])))
    pool = tuple((int(x), int(y), 1) for x, y in P)
    return Instance(pool, hidden, InstanceMeta("plane", N=resolution))


def planar(pool) -> list[tuple]:
    """First two coordinates of lifted planar points."""
    return [tuple(p[:2]) for p in pool]


# -- lower-bound witnesses -------------------------------------------------------


def _r3_monotone(M: int, n: int) -> bool:
    for i in range(n + 1):
        prev = None
        for j in range(1, n + 1):
            g = abs(M ** j * (1 - 2 * (j - i) ** 2))
            if prev is not None and not prev < g:
                return False
            prev = g
    return True


def gen_lb_r3(n: int) -> WitnessInstance:
    """Points on the curve ``(M^j, j M^j, j^2 M^j)`` and quadratic-profile concepts.

    ``f_i(x_j) = M^j (1 - 2 (j - i)^2)`` is positive exactly when ``j = i``; ``M``
    is the smallest power of two making ``|f_i(x_j)|`` increase in ``j`` for
    every ``i``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    M = 2
    while not _r3_monotone(M, n):
        M *= 2
    pool = tuple(RationalVector((M ** j, j * M ** j, j * j * M ** j)) for j in range(1, n + 1))
    concepts = tuple(LinearConcept((1 - 2 * i * i, 4 * i, -2)) for i in range(n + 1))
    return WitnessInstance(pool, concepts, "r3", M)


def gen_lb_margin(n: int) -> WitnessInstance:
    """Points ``e_i + e_{n+1}`` with concepts of large margin that differ at one point each."""
    if n < 2:
        raise ValueError("n must be at least 2")
    D = 10 * n * n
    pool = tuple(RationalVector([int(j == i) for j in range(n)] + [1]) for i in range(n))
    concepts = []
    for i in range(n + 1):
        w = [Fraction(0)] * (n + 1)
        for j in range(1, n + 1):
            w[j - 1] = 1 + Fraction(j, D) if j == i else -Fraction(j, D)
        w[n] = Fraction(-1, 2)
        concepts.append(LinearConcept(w))
    return WitnessInstance(pool, tuple(concepts), "margin")


MARGIN_SQ_BOUND = Fraction(1, 64)


@dataclass
class VerificationReport:
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    min_margin_sq: Fraction | None = None

    @property
    def clean(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        lines = [f"checked {self.checked} held-out points: "
                 + ("clean" if self.clean else f"{len(self.violations)} violation(s)")]
        if self.min_margin_sq is not None:
            lines.append(f"smallest squared normalised margin: {self.min_margin_sq} "
                         f"(~{float(self.min_margin_sq):.5f}, bound {MARGIN_SQ_BOUND})")
        lines.extend(self.violations[:20])
        return "\n".join(lines)


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def verify_witness(w: WitnessInstance) -> VerificationReport:
    """Exact certificate check; violations are collected, never raised."""
    rep = VerificationReport()
    n = w.n
    if len(w.concepts) != n + 1:
        rep.violations.append(f"expected {n + 1} concepts, found {len(w.concepts)}")
        return rep
    F = [[evaluate(c, x) for x in w.pool] for c in w.concepts]
    lab = [[1 if v >= 0 else -1 for v in row] for row in F]
    order = sorted(range(n), key=lambda j: F[0][j])
    for i in range(1, n + 1):
        x = i - 1
        rep.checked += 1
        if lab[0][x] == lab[i][x]:
            rep.violations.append(f"c_0 and c_{i} agree on x_{i}")
        for j in range(n):
            if j != x and lab[0][j] != lab[i][j]:
                rep.violations.append(f"c_0 and c_{i} disagree on the label of x_{j + 1}")
        # equal weak orders <=> equal answers to every pairwise comparison
        chain = [j for j in order if j != x]
        for a, b in zip(chain, chain[1:]):
            if _cmp(F[0][a], F[0][b]) != _cmp(F[i][a], F[i][b]):
                rep.violations.append(f"c_0 and c_{i} answer differently on x_{a + 1} vs x_{b + 1}")
    if w.kind == "margin":
        rho_sq = max(as_vector(x).norm_sq() for x in w.pool)
        for i, c in enumerate(w.concepts):
            m = min(v * v for v in F[i]) / (c.w.norm_sq() * rho_sq)
            if rep.min_margin_sq is None or m < rep.min_margin_sq:
                rep.min_margin_sq = m
            if m < MARGIN_SQ_BOUND:
                rep.violations.append(f"c_{i} has squared normalised margin {m} < {MARGIN_SQ_BOUND}")
    return rep


# -- transcripts and the inference-dimension check -----------------------------------


def full_transcript(concept: LinearConcept, pool, ids: Sequence[int]) -> QueryTranscript:
    """Every label and every ordered pairwise comparison on ``ids``."""
    oracle = SimulatedOracle(concept, pool)
    tr = QueryTranscript()
    for a in ids:
        oracle.query_label(a, tr)
    for a in ids:
        for b in ids:
            if a != b:
                oracle.query_compare(a, b, tr)
    return tr


def chain_transcript(concept: LinearConcept, pool, ids: Sequence[int]) -> QueryTranscript:
    """Labels plus both comparisons of each consecutive pair in ``f`` order.

    Its version space equals that of :func:`full_transcript`: each pairwise
    constraint is a sum of consecutive ones, strict exactly when some summand is.
    """
    oracle = SimulatedOracle(concept, pool)
    tr = QueryTranscript()
    for a in ids:
        oracle.query_label(a, tr)
    chain = sorted(ids, key=oracle.value)
    for a, b in zip(chain, chain[1:]):
        oracle.query_compare(a, b, tr)
        oracle.query_compare(b, a, tr)
    return tr


def witness_unknowns(w: WitnessInstance, full: bool = True) -> list[bool]:
    """For each ``x_i``: is it Unknown under ``c_0``'s transcript on the rest of the pool?"""
    make = full_transcript if full else chain_transcript
    ipool = IntegerPool(w.pool)
    out = []
    for i in range(w.n):
        rest = [j for j in range(w.n) if j != i]
        out.append(infer_label(make(w.concepts[0], w.pool, rest), ipool, i).label is None)
    return out


def inferable_point(concept: LinearConcept, pool, ids: Sequence[int]) -> int | None:
    """Some ``x`` in ``ids`` whose label the rest of ``ids`` forces, else None."""
    ipool = IntegerPool.coerce(pool)
    for x in ids:
        rest = [j for j in ids if j != x]
        if infer_label(chain_transcript(concept, ipool.points, rest), ipool, x).label is not None:
            return x
    return None


@dataclass(frozen=True)
class InfdimTrial:
    subset: tuple[int, ...]
    hidden: LinearConcept
    inferable: int | None


def infdim_trial(N: int, d: int, k: int, seed: int) -> InfdimTrial:
    """Random size-``k`` subset of the grid (the whole grid when it is smaller)."""
    rng = np.random.default_rng(seed)
    pool = grid_points(N, d)
    size = len(pool)
    subset = sorted(rng.choice(size, size=min(k, size), replace=False).tolist())
    hidden = random_grid_concept(rng, N, d, [pool[i] for i in subset])
    order = rng.permutation(subset).tolist()
    return InfdimTrial(tuple(subset), hidden, inferable_point(hidden, pool, order))
