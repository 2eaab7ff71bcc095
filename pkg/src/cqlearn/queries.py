"""Label and comparison queries, answered transcripts and a simulated annotator.

Comparison orientation is fixed everywhere: ``Compare(a, b)`` asks
"is f(a) >= f(b)?" and ties answer True.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .errors import ParseError, UnknownPoint
from .geometry import LinearConcept, as_vector, evaluate


@dataclass(frozen=True)
class Label:
    x: int


@dataclass(frozen=True)
class Compare:
    x1: int
    x2: int


Query = Union[Label, Compare]


@dataclass(frozen=True)
class AnsweredQuery:
    query: Query
    answer: Union[int, bool]

    def __post_init__(self):
        if isinstance(self.query, Label):
            if isinstance(self.answer, bool) or self.answer not in (1, -1):
                raise TypeError(f"label answers are +1/-1, got {self.answer!r}")
        elif isinstance(self.query, Compare):
            if not isinstance(self.answer, bool):
                raise TypeError(f"comparison answers are booleans, got {self.answer!r}")
        else:
            raise TypeError(f"not a query: {self.query!r}")

    def point_ids(self) -> tuple[int, ...]:
        q = self.query
        return (q.x,) if isinstance(q, Label) else (q.x1, q.x2)


class QueryTranscript:
    """Append-only ordered sequence of answered queries."""

    def __init__(self, entries: Sequence[AnsweredQuery] = ()):
        self._entries: list[AnsweredQuery] = []
        for e in entries:
            self.append(e)

    def append(self, entry: AnsweredQuery) -> None:
        if not isinstance(entry, AnsweredQuery):
            raise TypeError("transcripts hold AnsweredQuery entries")
        self._entries.append(entry)

    def extend(self, entries) -> None:
        for e in entries:
            self.append(e)

    def record_label(self, x: int, answer: int) -> None:
        self._entries.append(AnsweredQuery(Label(x), answer))

    def record_compare(self, x1: int, x2: int, answer: bool) -> None:
        self._entries.append(AnsweredQuery(Compare(x1, x2), answer))

    @property
    def entries(self) -> tuple[AnsweredQuery, ...]:
        return tuple(self._entries)

    def __iter__(self) -> Iterator[AnsweredQuery]:
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __add__(self, other: "QueryTranscript") -> "QueryTranscript":
        return QueryTranscript(self._entries + list(other))

    def unique(self) -> list[AnsweredQuery]:
        """Entries with duplicates dropped, first occurrence order kept."""
        return list(dict.fromkeys(self._entries))

    def counts(self) -> tuple[int, int]:
        n_label = sum(1 for e in self._entries if isinstance(e.query, Label))
        return n_label, len(self._entries) - n_label

    def dump(self) -> str:
        """One line per entry: ``L <id> <+1|-1>`` or ``C <id1> <id2> <0|1>``."""
        lines = []
        for e in self._entries:
            q = e.query
            if isinstance(q, Label):
                lines.append(f"L {q.x} {'+1' if e.answer == 1 else '-1'}")
            else:
                lines.append(f"C {q.x1} {q.x2} {int(e.answer)}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def parse(cls, text: str) -> "QueryTranscript":
        tr = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            try:
                if tok[0] == "L" and len(tok) == 3 and tok[2] in ("+1", "-1", "1"):
                    tr.record_label(int(tok[1]), -1 if tok[2] == "-1" else 1)
                elif tok[0] == "C" and len(tok) == 4 and tok[3] in ("0", "1"):
                    tr.record_compare(int(tok[1]), int(tok[2]), tok[3] == "1")
                else:
                    raise ValueError(line)
            except ValueError:
                raise ParseError(lineno, f"malformed transcript entry {line!r}") from None
        return tr


@dataclass
class QueryStats:
    label_count: int = 0
    compare_count: int = 0

    @property
    def total(self) -> int:
        return self.label_count + self.compare_count

    def copy(self) -> "QueryStats":
        return QueryStats(self.label_count, self.compare_count)

    def __sub__(self, other: "QueryStats") -> "QueryStats":
        return QueryStats(self.label_count - other.label_count, self.compare_count - other.compare_count)


@dataclass
class SimulatedOracle:
    """Annotator answering from a hidden concept over a fixed pool.

    Every answer is appended to ``log`` and, when given, to the caller's
    transcript. ``f`` values are cached per point id.
    """

    hidden: LinearConcept
    pool: Sequence
    stats: QueryStats = field(default_factory=QueryStats)
    log: QueryTranscript = field(default_factory=QueryTranscript)

    def __post_init__(self):
        # points are converted to exact vectors on first use; large pools stay cheap
        self.pool = list(self.pool)
        self._f: dict[int, Fraction] = {}

    def value(self, x: int) -> Fraction:
        """Hidden ``f`` value; not a query (used by tests and bookkeeping only)."""
        v = self._f.get(x)
        if v is None:
            try:
                i = operator.index(x)
            except TypeError:
                raise UnknownPoint(x) from None
            if not 0 <= i < len(self.pool):
                raise UnknownPoint(x)
            v = self._f[x] = evaluate(self.hidden, as_vector(self.pool[i]))
        return v

    def true_label(self, x: int) -> int:
        return 1 if self.value(x) >= 0 else -1

    def query_label(self, x: int, transcript: QueryTranscript | None = None) -> int:
        y = 1 if self.value(x) >= 0 else -1
        x = operator.index(x)
        self.stats.label_count += 1
        self.log.record_label(x, y)
        if transcript is not None:
            transcript.record_label(x, y)
        return y

    def query_compare(self, x1: int, x2: int, transcript: QueryTranscript | None = None) -> bool:
        ans = self.value(x1) >= self.value(x2)
        x1, x2 = operator.index(x1), operator.index(x2)
        self.stats.compare_count += 1
        self.log.record_compare(x1, x2, ans)
        if transcript is not None:
            transcript.record_compare(x1, x2, ans)
        return ans
