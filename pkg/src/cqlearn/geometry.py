"""Exact-rational vectors, homogeneous linear concepts and margin statistics.

Everything here is exact: coordinates are :class:`fractions.Fraction` and no
square root is ever taken (margins are reported squared).
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegeneratePool, DimensionMismatch


def _to_fraction(c) -> Fraction:
    if type(c) is Fraction:
        return c
    if isinstance(c, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(c, numbers.Rational):
        return Fraction(int(c.numerator), int(c.denominator))
    if isinstance(c, str):
        return Fraction(c.strip())
    raise TypeError(f"coordinate {c!r} is not an exact rational")


class RationalVector(tuple):
    """Immutable vector of Fractions.

    ``+``/``-`` are vector operations (not tuple concatenation); ``*`` scales.
    """

    __slots__ = ()

    def __new__(cls, coords: Iterable = ()):
        vec = super().__new__(cls, (_to_fraction(c) for c in coords))
        if len(vec) == 0:
            raise ValueError("a RationalVector needs at least one coordinate")
        return vec

    @classmethod
    def zeros(cls, d: int) -> "RationalVector":
        return cls([0] * d)

    @classmethod
    def basis(cls, d: int, i: int) -> "RationalVector":
        return cls([1 if j == i else 0 for j in range(d)])

    @property
    def dim(self) -> int:
        return len(self)

    def _check(self, other) -> None:
        if len(other) != len(self):
            raise DimensionMismatch(len(self), len(other))

    def __add__(self, other):
        self._check(other)
        return RationalVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        self._check(other)
        return RationalVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return RationalVector(-a for a in self)

    def __mul__(self, scalar):
        s = _to_fraction(scalar)
        return RationalVector(s * a for a in self)

    __rmul__ = __mul__

    def dot(self, other) -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self, other)), Fraction(0))

    def norm_sq(self) -> Fraction:
        return sum((a * a for a in self), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    def __repr__(self):
        return "RationalVector(" + ", ".join(str(a) for a in self) + ")"


def as_vector(x) -> RationalVector:
    return x if isinstance(x, RationalVector) else RationalVector(x)


@dataclass(frozen=True)
class LinearConcept:
    """Homogeneous half space ``c(x) = sign(<w, x>)`` with ``sign(0) = +1``."""

    w: RationalVector

    def __post_init__(self):
        object.__setattr__(self, "w", as_vector(self.w))

    @property
    def dim(self) -> int:
        return len(self.w)

    def __call__(self, x) -> int:
        return label_of(self, x)

    def scaled(self, lam) -> "LinearConcept":
        lam = _to_fraction(lam)
        if lam <= 0:
            raise ValueError("only positive scalings preserve the concept")
        return LinearConcept(self.w * lam)


def evaluate(concept: LinearConcept, x) -> Fraction:
    """Exact value of ``<w, x>``."""
    x = as_vector(x)
    if len(x) != concept.dim:
        raise DimensionMismatch(concept.dim, len(x), "point")
    return concept.w.dot(x)


def label_of(concept: LinearConcept, x) -> int:
    """+1 iff ``<w, x> >= 0`` (zero maps to +1)."""
    return 1 if evaluate(concept, x) >= 0 else -1


def lift(x) -> RationalVector:
    """Append the constant coordinate 1, turning affine concepts into homogeneous ones."""
    return RationalVector(tuple(as_vector(x)) + (Fraction(1),))


def affine_concept(a: Sequence, b) -> LinearConcept:
    """Homogeneous form of ``sign(<a, x> + b)`` acting on lifted points."""
    return LinearConcept(RationalVector(list(a) + [b]))


@dataclass(frozen=True)
class MarginReport:
    """Scale-free margin statistics of a concept on a pool.

    ``gamma_over_rho_sq`` is ``(gamma/rho)^2`` with ``gamma`` the geometric margin
    and ``rho`` the largest point norm; ``eta`` is the minimal ratio
    ``min|f| / max|f|``.
    """

    gamma_over_rho_sq: Fraction
    eta: Fraction
    max_norm_sq: Fraction


def margin_report(concept: LinearConcept, pool: Sequence) -> MarginReport:
    if not pool:
        raise ValueError("margin_report needs a nonempty pool")
    values = [abs(evaluate(concept, x)) for x in pool]
    fmax = max(values)
    if fmax == 0:
        raise DegeneratePool("all points evaluate to zero; minimal ratio undefined")
    fmin = min(values)
    rho_sq = max(as_vector(x).norm_sq() for x in pool)
    return MarginReport(
        gamma_over_rho_sq=fmin * fmin / (concept.w.norm_sq() * rho_sq),
        eta=fmin / fmax,
        max_norm_sq=rho_sq,
    )


# -- integer views -------------------------------------------------------------
# The LP and inference engines work on integer data. Uniform positive scaling of
# the whole pool preserves every label, comparison and cone relation.


def common_scale(points: Sequence[Sequence[Fraction]]) -> int:
    """Least common multiple of all coordinate denominators."""
    lcm = 1
    for p in points:
        for c in p:
            den = c.denominator
            if den != 1:
                lcm = lcm * den // math.gcd(lcm, den)
    return lcm


def integer_points(points: Sequence[Sequence[Fraction]]) -> list[tuple[int, ...]]:
    """Scale all points by one common positive factor so they become integral."""
    L = common_scale(points)
    if L == 1:
        return [tuple(int(c) for c in p) for p in points]
    return [tuple(int(c * L) for c in p) for p in points]


def integer_row(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive multiple of a single rational vector with coprime integer entries."""
    L = common_scale([v])
    return primitive(tuple(int(c * L) for c in v))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v)
    if g <= 1:
        return tuple(v)
    return tuple(c // g for c in v)
