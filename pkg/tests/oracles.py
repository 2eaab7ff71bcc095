"""Independent brute-force oracles used by the test-suite.

None of these touch the simplex code: they enumerate candidate points of
hyperplane arrangements with Cramer's rule.
"""
from __future__ import annotations

import itertools
from fractions import Fraction


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        a, b, c = m
        return (a[0] * (b[1] * c[2] - b[2] * c[1])
                - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]))
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n))


def _solve(normals, levels):
    """Unique solution of ``<n_i, w> = level_i`` or None when singular."""
    det = _det(normals)
    if det == 0:
        return None
    d = len(normals)
    out = []
    for j in range(d):
        mj = [list(row[:j]) + [lv] + list(row[j + 1:]) for row, lv in zip(normals, levels)]
        out.append(Fraction(_det(mj), det))
    return tuple(out)


def arrangement_vertices(hyperplanes, dim):
    """All points cut out by ``dim`` independent hyperplanes ``(normal, level)``.

    Coordinate hyperplanes ``w_i = 0`` are always added, which guarantees that a
    nonempty polyhedron bounded by the given hyperplanes contains a candidate
    (slice away its lineality space with coordinate hyperplanes, then take a
    vertex).
    """
    hs = [(tuple(Fraction(c) for c in n), Fraction(lv)) for n, lv in hyperplanes]
    for i in range(dim):
        hs.append((tuple(Fraction(int(i == j)) for j in range(dim)), Fraction(0)))
    seen = set()
    for combo in itertools.combinations(range(len(hs)), dim):
        pt = _solve([hs[i][0] for i in combo], [hs[i][1] for i in combo])
        if pt is not None and pt not in seen:
            seen.add(pt)
            yield pt


def _dot(a, b):
    return sum(Fraction(x) * y for x, y in zip(a, b))


def satisfies(w, nonstrict, strict):
    return all(_dot(a, w) >= 0 for a in nonstrict) and all(_dot(b, w) > 0 for b in strict)


def brute_feasible(dim, nonstrict, strict) -> bool:
    """Feasibility by vertex enumeration of ``{a.w = 0} u {b.w = 1}``."""
    hs = [(a, 0) for a in nonstrict] + [(b, 1) for b in strict]
    return any(satisfies(w, nonstrict, strict) for w in arrangement_vertices(hs, dim))


def brute_infer(dim, nonstrict, strict, x):
    """Classify ``x`` by enumerating candidate concepts.

    Returns +1 / -1 when every consistent candidate agrees, None otherwise,
    and raises ValueError when no candidate is consistent.

    With strict rows normalised to ``<b, w> >= 1``, the three polyhedra
    ``S``, ``S & <x, w> <= -1`` and ``S & <x, w> >= 0`` are all bounded by the
    hyperplanes ``{a.w = 0}``, ``{b.w = 1}``, ``{x.w = 0}`` and ``{x.w = -1}``,
    so each one, when nonempty, contains a vertex of that arrangement (with the
    coordinate hyperplanes added).
    """
    hs = [(a, 0) for a in nonstrict] + [(b, 1) for b in strict] + [(x, 0), (x, -1)]
    normalised_strict = [tuple(b) for b in strict]
    consistent = [w for w in arrangement_vertices(hs, dim)
                  if all(_dot(a, w) >= 0 for a in nonstrict) and all(_dot(b, w) >= 1 for b in normalised_strict)]
    if not consistent:
        raise ValueError("inconsistent system")
    labels = {1 if _dot(x, w) >= 0 else -1 for w in consistent}
    return labels.pop() if len(labels) == 1 else None
