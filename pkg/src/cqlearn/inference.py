"""Version-space inference for homogeneous half spaces.

A transcript constrains the weight vector ``w``:

* ``Label(x) = +1``  ->  ``<w, x> >= 0``
* ``Label(x) = -1``  ->  ``<w, -x> > 0``
* ``Compare(a, b)``  ->  ``<w, a - b> >= 0`` when True, ``<w, b - a> > 0`` when False

A point ``x`` is forced positive when no consistent ``w`` has ``<w, x> < 0``
and forced negative when none has ``<w, x> >= 0``. Both questions are LP
feasibility questions, and the LP is the source of truth. To keep batch
inference affordable, :class:`VersionSpace` caches two kinds of exact
certificates produced by earlier LP calls and tries them first:

* witnesses ``w`` in the version space; two of them disagreeing on ``x``
  prove the verdict is Unknown;
* simplicial Farkas cones ``x = sum lam_i r_i`` (``lam >= 0``) over constraint
  rows, which prove ``<w, x> >= 0`` on the whole version space. The negative
  side needs ``-x`` in the cone with positive weight on a strict row.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, Inconsistent, UnknownPoint
from .geometry import RationalVector, as_vector, integer_points, primitive
from .lp import INT64_SAFE, ConstraintSystem, RowSystem, feasible
from .queries import Label, QueryTranscript

MAX_CACHED_CONES = 256


class InferenceResult(enum.Enum):
    FORCED_POSITIVE = 1
    FORCED_NEGATIVE = -1
    UNKNOWN = 0

    @property
    def label(self) -> int | None:
        return None if self is InferenceResult.UNKNOWN else self.value


@dataclass
class PartialHypothesis:
    """Map from point id to +1, -1 or ``None`` (abstain)."""

    assignments: dict[int, int | None]

    def __getitem__(self, x: int) -> int | None:
        return self.assignments[x]

    def __len__(self):
        return len(self.assignments)

    def labeled(self) -> dict[int, int]:
        return {i: y for i, y in self.assignments.items() if y is not None}

    def abstentions(self) -> list[int]:
        return [i for i, y in self.assignments.items() if y is None]


class IntegerPool:
    """Pool together with an integral copy scaled by one common positive factor."""

    def __init__(self, points: Sequence):
        points = list(points)
        if not points:
            raise ValueError("empty pool")
        if all(type(c) is int for p in points for c in p):
            self.ints = [tuple(p) for p in points]
        else:
            self.ints = integer_points([as_vector(p) for p in points])
        self.dim = len(self.ints[0])
        if any(len(p) != self.dim for p in self.ints):
            raise DimensionMismatch(self.dim, next(len(p) for p in self.ints if len(p) != self.dim), "pool point")
        self.points = points

    @classmethod
    def coerce(cls, pool) -> "IntegerPool":
        return pool if isinstance(pool, cls) else cls(pool)

    def __len__(self):
        return len(self.points)

    def check(self, x) -> int:
        if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)) or not 0 <= x < len(self.points):
            raise UnknownPoint(x)
        return int(x)


def _transcript_rows(transcript: QueryTranscript, ipool: IntegerPool):
    """Integer constraint rows of a transcript, exact duplicates merged."""
    X = ipool.ints
    found: dict[tuple[int, ...], bool] = {}
    zero = (0,) * ipool.dim
    for e in transcript.unique():
        q = e.query
        if isinstance(q, Label):
            x = X[ipool.check(q.x)]
            if e.answer == 1:
                row, strict = x, False
            else:
                row, strict = tuple(-c for c in x), True
        else:
            a, b = X[ipool.check(q.x1)], X[ipool.check(q.x2)]
            if e.answer:
                row, strict = tuple(u - v for u, v in zip(a, b)), False
            else:
                row, strict = tuple(v - u for u, v in zip(a, b)), True
        row = primitive(row)
        if row == zero and not strict:
            continue
        found[row] = found.get(row, False) or strict
    return list(found), list(found.values())


def constraints_of(transcript: QueryTranscript, pool) -> ConstraintSystem:
    """Constraint system on ``w`` whose solutions are the transcript's version space."""
    points = [as_vector(p) for p in pool]
    dim = len(points[0])

    def pt(i):
        if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or not 0 <= i < len(points):
            raise UnknownPoint(i)
        return points[i]

    nonstrict: list[RationalVector] = []
    strict: list[RationalVector] = []
    for e in transcript.unique():
        q = e.query
        if isinstance(q, Label):
            if e.answer == 1:
                nonstrict.append(pt(q.x))
            else:
                strict.append(-pt(q.x))
        elif e.answer:
            nonstrict.append(pt(q.x1) - pt(q.x2))
        else:
            strict.append(pt(q.x2) - pt(q.x1))
    return ConstraintSystem(dim, tuple(nonstrict), tuple(strict))


# -- exact vectorised helpers ---------------------------------------------------


class _Points:
    """Integer matrix with an int64 copy when magnitudes allow it."""

    def __init__(self, Z: Sequence[Sequence[int]], dim: int):
        self.obj = np.array([tuple(z) for z in Z], dtype=object).reshape(len(Z), dim)
        self.max = max((abs(c) for z in Z for c in z), default=0)
        self.i64 = self.obj.astype(np.int64) if self.max < INT64_SAFE else None
        self.dim = dim

    def matvec(self, v: Sequence[int], rows=None) -> np.ndarray:
        vmax = max((abs(c) for c in v), default=0)
        if self.i64 is not None and self.max * vmax * self.dim < INT64_SAFE:
            M = self.i64 if rows is None else self.i64[rows]
            return M @ np.array(v, dtype=np.int64)
        M = self.obj if rows is None else self.obj[rows]
        return M @ np.array(v, dtype=object)

    def matmat(self, A: Sequence[Sequence[int]], rows=None) -> np.ndarray:
        """``Z[rows] @ A.T`` exactly."""
        amax = max((abs(c) for a in A for c in a), default=0)
        if self.i64 is not None and self.max * amax * self.dim < INT64_SAFE:
            M = self.i64 if rows is None else self.i64[rows]
            return M @ np.array(A, dtype=np.int64).T
        M = self.obj if rows is None else self.obj[rows]
        return M @ np.array(A, dtype=object).T


def _adjugate(G: Sequence[Sequence[int]]):
    """``(adj, det)`` of a square integer matrix, or None if singular."""
    n = len(G)
    M = [[Fraction(c) for c in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(G)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        p = M[col][col]
        det *= p
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    adj = [[int(v * det) for v in row[n:]] for row in M]
    return adj, int(det)


@dataclass(frozen=True)
class _Cone:
    """Simplicial cone spanned by ``d`` independent constraint rows."""

    adj: tuple[tuple[int, ...], ...]  # adj(G^T) up to sign, so coefficients = adj @ z
    strict: np.ndarray  # strictness of each generator


class VersionSpace:
    """All homogeneous half spaces consistent with a set of integer constraints."""

    def __init__(self, rows: Sequence[Sequence[int]], strict: Sequence[bool], dim: int):
        self.dim = dim
        self.system = RowSystem(rows, strict, dim)
        ok, w = self.system.solve()
        if not ok:
            raise Inconsistent("no half space is consistent with the transcript")
        self.witnesses: list[tuple[int, ...]] = [tuple(w)]
        self.cones: list[_Cone] = []
        self._rows = {}
        for r, s in zip(self.system.rows, self.system.strict):
            self._rows[r] = self._rows.get(r, False) or s
        self.lp_calls = 0

    @classmethod
    def from_transcript(cls, transcript: QueryTranscript, pool) -> "VersionSpace":
        ipool = IntegerPool.coerce(pool)
        rows, strict = _transcript_rows(transcript, ipool)
        return cls(rows, strict, ipool.dim)

    # single point ------------------------------------------------------------
    def classify(self, z: Sequence[int]) -> InferenceResult:
        return self.classify_many([z])[0]

    def _lp(self, z, side: int):
        """Is label ``-side`` realisable for ``z``? Caches the certificate either way."""
        self.lp_calls += 1
        if side == 1:
            extra = (tuple(-c for c in z), True)  # some w with <w,z> < 0 ?
        else:
            extra = (tuple(z), False)  # some w with <w,z> >= 0 ?
        ok, payload = self.system.solve([extra])
        if ok:
            self.witnesses.append(tuple(payload))
            return True, tuple(payload)
        if ("extra", 0) not in payload:
            raise RuntimeError("base system reported infeasible after a consistent start")
        support = [i for kind, i in payload if kind == "row"]
        cone = None
        if len(support) == self.dim and len(self.cones) < MAX_CACHED_CONES:
            G = [self.system.rows[i] for i in support]
            res = _adjugate([list(col) for col in zip(*G)])
            if res is not None:
                adj, det = res
                if det < 0:
                    adj = [[-c for c in row] for row in adj]
                cone = _Cone(tuple(map(tuple, adj)), np.array([self.system.strict[i] for i in support]))
                self.cones.append(cone)
        return False, cone

    # batch --------------------------------------------------------------------
    def classify_many(self, Z: Sequence[Sequence[int]]) -> list[InferenceResult]:
        n = len(Z)
        if n == 0:
            return []
        P = _Points(Z, self.dim)
        status = np.zeros(n, dtype=np.int8)  # 0 pending, 1/-1 forced, 2 unknown
        seen_pos = np.zeros(n, dtype=bool)
        seen_neg = np.zeros(n, dtype=bool)

        for i, z in enumerate(Z):
            z = tuple(z)
            if not any(z):
                status[i] = 1
                continue
            pz = primitive(z)
            if pz in self._rows:
                status[i] = 1
                continue
            if self._rows.get(tuple(-c for c in pz)):
                status[i] = -1

        def apply_witness(w, idx):
            v = P.matvec(w, idx)
            seen_pos[idx] |= v >= 0
            seen_neg[idx] |= v < 0
            both = idx[seen_pos[idx] & seen_neg[idx]]
            status[both] = 2

        def apply_cone(cone, idx):
            lam = P.matmat(cone.adj, idx)
            pos = np.all(lam >= 0, axis=1)
            status[idx[pos]] = 1
            rest = ~pos
            neg = np.all(lam <= 0, axis=1) & np.any((lam < 0) & cone.strict[None, :], axis=1) & rest
            status[idx[neg]] = -1

        pending = np.flatnonzero(status == 0)
        for w in self.witnesses:
            if pending.size == 0:
                break
            apply_witness(w, pending)
            pending = pending[status[pending] == 0]
        for cone in self.cones:
            if pending.size == 0:
                break
            apply_cone(cone, pending)
            pending = pending[status[pending] == 0]

        for i in pending:
            if status[i] != 0:
                continue
            z = Z[i]
            # test the side the cached witnesses point to first
            side = 1 if seen_pos[i] else -1
            other_ok, payload = self._lp(z, side)
            if not other_ok:
                status[i] = side
                if payload is not None:
                    rest = np.flatnonzero(status == 0)
                    if rest.size:
                        apply_cone(payload, rest)
                continue
            rest = np.flatnonzero(status == 0)
            apply_witness(payload, rest)
            if status[i] != 0:
                continue
            # the first side is realisable; the other side has not been seen yet
            ok2, payload2 = self._lp(z, -side)
            if ok2:
                status[i] = 2
                rest = np.flatnonzero(status == 0)
                if rest.size:
                    apply_witness(payload2, rest)
            else:
                status[i] = -side
                if payload2 is not None:
                    rest = np.flatnonzero(status == 0)
                    if rest.size:
                        apply_cone(payload2, rest)

        out = []
        for s in status:
            out.append(InferenceResult.FORCED_POSITIVE if s == 1 else
                       InferenceResult.FORCED_NEGATIVE if s == -1 else InferenceResult.UNKNOWN)
        return out


def infer_label(transcript: QueryTranscript, pool, x: int) -> InferenceResult:
    """Decide whether the transcript forces the label of pool point ``x``."""
    ipool = IntegerPool.coerce(pool)
    x = ipool.check(x)
    return VersionSpace.from_transcript(transcript, ipool).classify(ipool.ints[x])


def infer_all(transcript: QueryTranscript, pool, targets: Iterable[int] | None = None,
              space: VersionSpace | None = None) -> PartialHypothesis:
    """Partial hypothesis labelling every target whose label the transcript forces."""
    ipool = IntegerPool.coerce(pool)
    targets = list(range(len(ipool))) if targets is None else [ipool.check(t) for t in targets]
    if space is None:
        space = VersionSpace.from_transcript(transcript, ipool)
    uniq = list(dict.fromkeys(targets))
    verdicts = space.classify_many([ipool.ints[t] for t in uniq])
    return PartialHypothesis({t: v.label for t, v in zip(uniq, verdicts)})


def coverage(h: PartialHypothesis, targets: Sequence[int]) -> Fraction:
    """Exact fraction of ``targets`` on which ``h`` does not abstain."""
    targets = list(targets)
    if not targets:
        raise ValueError("coverage of an empty target set")
    return Fraction(sum(1 for t in targets if h[t] is not None), len(targets))


# -- cone rules ------------------------------------------------------------------


def _cone_system(sorted_pts, x, eta: Fraction) -> ConstraintSystem:
    pts = [as_vector(p) for p in sorted_pts]
    x = as_vector(x)
    diffs = [b - a for a, b in zip(pts, pts[1:])]
    target = x - pts[0]
    m = len(diffs)
    dim = m + 1  # alpha_1..alpha_m, t
    nonstrict = []
    for k in range(len(x)):
        form = [d[k] for d in diffs] + [-target[k]]
        nonstrict.append(form)
        nonstrict.append([-c for c in form])
    for i in range(m):
        form = [0] * dim
        form[i] = 1
        form[m] = eta
        nonstrict.append(form)
    t = [0] * m + [1]
    return ConstraintSystem(dim, tuple(RationalVector(f) for f in nonstrict), (RationalVector(t),))


def cone_infer(sorted_pts: Sequence, y: int, x) -> bool:
    """True iff ``x - x_1`` is a nonnegative combination of consecutive differences.

    ``sorted_pts`` must share label ``y`` and be ordered by nondecreasing
    ``|f|``; a True verdict then certifies ``c(x) = y``.
    """
    return cone_infer_margin(sorted_pts, y, x, Fraction(0))


def cone_infer_margin(sorted_pts: Sequence, y: int, x, eta) -> bool:
    """As :func:`cone_infer` but with coefficients allowed down to ``-eta``.

    Sound only when the concept's minimal ratio on the pool is at least ``eta``.
    """
    eta = Fraction(eta)
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    if len(sorted_pts) < 2:
        raise ValueError("cone rules need at least two sorted points")
    if y not in (1, -1):
        raise ValueError("y must be +1 or -1")
    return feasible(_cone_system(sorted_pts, x, eta)).feasible
