"""Exact feasibility of homogeneous systems of strict and non-strict inequalities.

A system ``{<a, w> >= 0 : a in nonstrict} & {<b, w> > 0 : b in strict}`` is
positively homogeneous, so each strict row may be normalised to ``<b, w> >= 1``.
Feasibility of ``M w >= s`` (``s`` the 0/1 strictness indicator) is decided by
running phase 1 of the simplex method, with Bland's rule, on the alternative
system

    y >= 0,   M^T y = 0,   s^T y = 1,

which has ``d + 1`` equality rows and one column per constraint. A zero phase-1
optimum yields a Farkas certificate ``y`` (the system is infeasible); a positive
optimum yields dual multipliers from which a witness ``w`` is read off.

The tableau is integral throughout (fraction-free pivoting: every entry is a
minor of the initial matrix and the common denominator is the last pivot), so
the whole computation runs on Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch
from .geometry import RationalVector, as_vector, integer_row, primitive

INT64_SAFE = 1 << 62


# -- phase-1 core ----------------------------------------------------------------


def _phase1(rows: Sequence[Sequence[int]], strict: Sequence[bool], dim: int):
    """Return ``(True, w)`` with an integer witness, or ``(False, y)`` with
    ``y`` a dict ``column -> positive int`` forming a Farkas certificate."""
    m = len(rows)
    nr = dim + 1
    ncol = m + nr
    rhs = ncol
    T = []
    for r in range(dim):
        T.append([row[r] for row in rows] + [1 if q == r else 0 for q in range(nr)] + [0])
    T.append([1 if s else 0 for s in strict] + [1 if q == dim else 0 for q in range(nr)] + [1])
    obj = [-sum(T[i][j] for i in range(nr)) for j in range(m)] + [0] * nr + [-1]
    T.append(obj)
    basis = list(range(m, m + nr))
    D = 1
    while True:
        obj = T[nr]
        c = next((j for j in range(ncol) if obj[j] < 0), -1)
        if c < 0:
            break
        r = -1
        num = den = 0
        for i in range(nr):
            a = T[i][c]
            if a > 0:
                if r < 0:
                    r, num, den = i, T[i][rhs], a
                    continue
                lhs = T[i][rhs] * den
                cur = num * a
                if lhs < cur or (lhs == cur and basis[i] < basis[r]):
                    r, num, den = i, T[i][rhs], a
        # phase 1 is bounded below by zero, so some row always qualifies
        prow = T[r]
        p = prow[c]
        for i in range(nr + 1):
            if i == r:
                continue
            row = T[i]
            f = row[c]
            if f == 0:
                if p != D:
                    T[i] = [x * p // D for x in row]
            else:
                T[i] = [(x * p - f * y) // D for x, y in zip(row, prow)]
        D = p
        basis[r] = c

    obj = T[nr]
    if obj[rhs] == 0:
        cert = {}
        for i, col in enumerate(basis):
            if col < m and T[i][rhs] != 0:
                cert[col] = T[i][rhs]
        return False, cert
    return True, primitive([obj[m + r] - D for r in range(dim)])


# -- integer row systems with constraint generation ------------------------------


class RowSystem:
    """Integer homogeneous system with exact vectorised residual checks.

    ``solve`` decides feasibility of the system plus optional extra rows by
    solving on a working subset of rows and adding violated rows until the
    subset witness satisfies everything (or the subset is already infeasible,
    which certifies infeasibility of the full system).
    """

    def __init__(self, rows: Sequence[Sequence[int]], strict: Sequence[bool], dim: int):
        self.dim = dim
        self.rows = [tuple(r) for r in rows]
        self.strict = list(strict)
        m = len(self.rows)
        self._obj = np.array(self.rows, dtype=object).reshape(m, dim)
        self._max = max((abs(c) for r in self.rows for c in r), default=0)
        self._i64 = self._obj.astype(np.int64) if self._max < INT64_SAFE else None
        self._strict_mask = np.array(self.strict, dtype=bool)
        self.working: list[int] = []
        self._in_working: set[int] = set()
        if m <= 8 * (dim + 1):
            self.extend_working(range(m))
        else:
            self.extend_working(range(2 * (dim + 1)))

    def __len__(self):
        return len(self.rows)

    def extend_working(self, idx: Iterable[int]) -> None:
        for i in idx:
            if i not in self._in_working:
                self._in_working.add(i)
                self.working.append(i)

    def residuals(self, w: Sequence[int]) -> np.ndarray:
        wmax = max((abs(c) for c in w), default=0)
        if self._i64 is not None and self._max * wmax * self.dim < INT64_SAFE:
            return self._i64 @ np.array(w, dtype=np.int64)
        return self._obj @ np.array(w, dtype=object)

    def violated(self, w: Sequence[int]) -> np.ndarray:
        if not self.rows:
            return np.zeros(0, dtype=np.int64)
        res = self.residuals(w)
        bad = np.where(self._strict_mask, res <= 0, res < 0)
        idx = np.flatnonzero(bad)
        if idx.size > 1:
            if res.dtype == object:
                idx = np.array(sorted(idx, key=lambda i: res[i]), dtype=np.int64)
            else:
                idx = idx[np.argsort(res[idx], kind="stable")]
        return idx

    def satisfied_by(self, w: Sequence[int]) -> bool:
        return self.violated(w).size == 0

    def solve(self, extra: Sequence[tuple[Sequence[int], bool]] = (), batch: int | None = None):
        """Feasibility of the system together with ``extra`` ``(row, strict)`` pairs.

        Returns ``(True, w)`` or ``(False, cert)`` where ``cert`` maps
        ``("row", i)`` / ``("extra", k)`` to positive integer multipliers.
        """
        if batch is None:
            batch = 2 * (self.dim + 1)
        extra = [(tuple(r), bool(s)) for r, s in extra]
        if not any(self.strict) and not any(s for _, s in extra):
            return True, (0,) * self.dim
        while True:
            sub = self.working
            rows = [self.rows[i] for i in sub] + [r for r, _ in extra]
            strict = [self.strict[i] for i in sub] + [s for _, s in extra]
            ok, payload = _phase1(rows, strict, self.dim)
            if not ok:
                cert = {}
                for col, val in payload.items():
                    key = ("row", sub[col]) if col < len(sub) else ("extra", col - len(sub))
                    cert[key] = val
                return False, cert
            w = payload
            for r, s in extra:
                v = sum(a * b for a, b in zip(r, w))
                if v < 0 or (s and v == 0):
                    raise RuntimeError("phase-1 witness violates an extra row")
            bad = self.violated(w)
            if bad.size == 0:
                return True, w
            new = [int(i) for i in bad if int(i) not in self._in_working][:batch]
            if not new:
                raise RuntimeError("phase-1 witness violates a working row")
            self.extend_working(new)


# -- public rational interface ---------------------------------------------------


@dataclass(frozen=True)
class ConstraintSystem:
    """``<a, w> >= 0`` for ``a`` in ``nonstrict`` and ``<b, w> > 0`` for ``b`` in ``strict``."""

    dim: int
    nonstrict: tuple[RationalVector, ...] = ()
    strict: tuple[RationalVector, ...] = ()

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        ns = tuple(as_vector(a) for a in self.nonstrict)
        st = tuple(as_vector(b) for b in self.strict)
        for a in ns + st:
            if len(a) != self.dim:
                raise DimensionMismatch(self.dim, len(a), "linear form")
        object.__setattr__(self, "nonstrict", ns)
        object.__setattr__(self, "strict", st)

    def __len__(self):
        return len(self.nonstrict) + len(self.strict)

    def with_constraints(self, nonstrict=(), strict=()) -> "ConstraintSystem":
        return ConstraintSystem(self.dim, self.nonstrict + tuple(nonstrict), self.strict + tuple(strict))

    def is_satisfied_by(self, w) -> bool:
        w = as_vector(w)
        if len(w) != self.dim:
            raise DimensionMismatch(self.dim, len(w), "witness")
        return all(a.dot(w) >= 0 for a in self.nonstrict) and all(b.dot(w) > 0 for b in self.strict)

    def integer_rows(self) -> tuple[list[tuple[int, ...]], list[bool]]:
        rows = [integer_row(a) for a in self.nonstrict] + [integer_row(b) for b in self.strict]
        strict = [False] * len(self.nonstrict) + [True] * len(self.strict)
        return rows, strict


@dataclass(frozen=True)
class Feasibility:
    """Outcome of :func:`feasible`.

    ``witness`` is set iff feasible. For infeasible systems ``certificate`` maps
    ``("nonstrict", i)`` / ``("strict", i)`` to nonnegative multipliers whose
    combination of the (original) forms is the zero functional while giving the
    strict forms positive total weight.
    """

    feasible: bool
    witness: RationalVector | None = None
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.feasible


def feasible(system: ConstraintSystem) -> Feasibility:
    """Decide whether some ``w`` satisfies every constraint of ``system``."""
    rows, strict = system.integer_rows()
    rs = RowSystem(rows, strict, system.dim)
    ok, payload = rs.solve()
    if ok:
        w = RationalVector(payload)
        if not system.is_satisfied_by(w):
            raise RuntimeError("feasibility witness failed exact verification")
        return Feasibility(True, witness=w)
    n_ns = len(system.nonstrict)
    cert = {}
    for (_, i), val in payload.items():
        form = system.nonstrict[i] if i < n_ns else system.strict[i - n_ns]
        # rows were rescaled to coprime integers; undo so the certificate refers to the forms
        k = _first_nonzero(rows[i])
        scale = Fraction(rows[i][k]) / form[k] if form[k] != 0 else Fraction(1)
        key = ("nonstrict", i) if i < n_ns else ("strict", i - n_ns)
        cert[key] = Fraction(val) * scale
    return Feasibility(False, certificate=cert)


def _first_nonzero(row) -> int:
    for k, c in enumerate(row):
        if c != 0:
            return k
    return 0
