"""Plain-text instance format.

::

    # meta: kind=grid N=8 suggested_k=192
    d n
    <n lines of d rationals, "p/q" or integers>
    w: <d rationals>          zero, one or n + 1 of these lines
    y: <n labels +1/-1>       optional

One ``w:`` line gives an :class:`Instance` with a hidden concept, ``n + 1``
lines give a :class:`WitnessInstance` (``c_0`` first). ``#`` starts a comment;
``# meta:`` comments carry generator metadata so exported files round-trip.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .geometry import LinearConcept, RationalVector
from .instances import Instance, InstanceMeta, WitnessInstance


def _rational(tok: str, lineno: int) -> Fraction:
    num, sep, den = tok.partition("/")
    try:
        if sep and not den:
            raise ValueError
        value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"malformed rational {tok!r}") from None
    return value


def _fmt(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _vec(v) -> str:
    return " ".join(_fmt(c) for c in v)


_META_INT = {"N", "suggested_k", "M"}


def _parse_meta(body: str, lineno: int) -> dict:
    meta = {}
    for item in body.split():
        key, sep, val = item.partition("=")
        if not sep:
            raise ParseError(lineno, f"malformed meta item {item!r}")
        if key in _META_INT:
            try:
                meta[key] = int(val)
            except ValueError:
                raise ParseError(lineno, f"meta {key} must be an integer") from None
        elif key == "eta":
            meta[key] = _rational(val, lineno)
        else:
            meta[key] = val
    return meta


def parse_instance_file(text: str) -> Instance | WitnessInstance:
    meta: dict = {}
    body: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            if line[1:].strip().startswith("meta:"):
                meta.update(_parse_meta(line[1:].strip()[5:], lineno))
            continue
        if line:
            body.append((lineno, line))
    if not body:
        last = len(text.splitlines())
        raise ParseError(max(last, 1), "missing header line 'd n'")
    lineno, header = body[0]
    tok = header.split()
    if len(tok) != 2 or not all(t.isdigit() for t in tok):
        raise ParseError(lineno, "header must be two nonnegative integers 'd n'")
    d, n = int(tok[0]), int(tok[1])
    if d < 1 or n < 1:
        raise ParseError(lineno, "d and n must be positive")
    rows = body[1:]
    if len(rows) < n:
        at = rows[-1][0] + 1 if rows else lineno + 1
        raise ParseError(at, f"expected {n} points, found {len(rows)}")
    pool = []
    for lineno, line in rows[:n]:
        if line.startswith(("w:", "y:")):
            raise ParseError(lineno, f"expected {n} points before concept lines")
        parts = line.split()
        if len(parts) != d:
            raise ParseError(lineno, f"point has {len(parts)} coordinates, expected {d}")
        pool.append(RationalVector(_rational(t, lineno) for t in parts))
    concepts, labels = [], None
    for lineno, line in rows[n:]:
        if line.startswith("w:"):
            if labels is not None:
                raise ParseError(lineno, "'w:' lines must precede the 'y:' line")
            parts = line[2:].split()
            if len(parts) != d:
                raise ParseError(lineno, f"concept has {len(parts)} weights, expected {d}")
            concepts.append(LinearConcept(RationalVector(_rational(t, lineno) for t in parts)))
        elif line.startswith("y:"):
            if labels is not None:
                raise ParseError(lineno, "duplicate 'y:' line")
            parts = line[2:].split()
            if len(parts) != n or any(t not in ("+1", "-1", "1") for t in parts):
                raise ParseError(lineno, f"'y:' needs {n} labels from +1/-1")
            labels = tuple(-1 if t == "-1" else 1 for t in parts)
        else:
            raise ParseError(lineno, f"unexpected line {line!r}")
    last = rows[-1][0]
    if len(concepts) == n + 1 and n + 1 != 1:
        if labels is not None:
            raise ParseError(last, "witness files carry no 'y:' line")
        return WitnessInstance(tuple(pool), tuple(concepts), meta.get("kind", "custom"), meta.get("M"))
    if len(concepts) > 1:
        raise ParseError(last, f"found {len(concepts)} 'w:' lines; expected 0, 1 or {n + 1}")
    im = InstanceMeta(meta.get("kind", "custom"), meta.get("N"), meta.get("eta"), meta.get("suggested_k"))
    return Instance(tuple(pool), concepts[0] if concepts else None, im, labels)


def format_instance(inst: Instance) -> str:
    m = inst.meta
    items = [f"kind={m.kind}"]
    if m.N is not None:
        items.append(f"N={m.N}")
    if m.eta is not None:
        items.append(f"eta={_fmt(m.eta)}")
    if m.suggested_k is not None:
        items.append(f"suggested_k={m.suggested_k}")
    lines = ["# meta: " + " ".join(items), f"{inst.dim} {len(inst.pool)}"]
    lines += [_vec(p) for p in inst.pool]
    if inst.hidden is not None:
        lines.append("w: " + _vec(inst.hidden.w))
    if inst.labels is not None:
        lines.append("y: " + " ".join("+1" if y == 1 else "-1" for y in inst.labels))
    return "\n".join(lines) + "\n"


def format_witness(w: WitnessInstance) -> str:
    items = [f"kind={w.kind}"] + ([f"M={w.M}"] if w.M is not None else [])
    lines = ["# meta: " + " ".join(items), f"{len(w.pool[0])} {w.n}"]
    lines += [_vec(p) for p in w.pool]
    lines += ["w: " + _vec(c.w) for c in w.concepts]
    return "\n".join(lines) + "\n"
