"""Formal contexts, the derivation operators, and the two text input formats.

Object and attribute sets are plain Python ints used as bitsets: bit ``i`` of
an object set is object ``i``, bit ``j`` of an attribute set is attribute
``j``.  Names only appear at the I/O boundary.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    BadId,
    BadMagic,
    DimensionMismatch,
    DuplicateObject,
    MalformedLine,
    ParseError,
)

__all__ = [
    "FormalContext",
    "iter_bits",
    "to_bits",
    "bit_list",
    "parse_object_list",
    "serialize_object_list",
    "parse_cxt",
    "serialize_cxt",
    "up",
    "down",
    "closure_intent",
    "closure_extent",
    "object_forming",
    "attribute_forming",
]

_FORBIDDEN_NAME_CHARS = "\n\r"


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the positions of set bits in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def bit_list(bits: int) -> list[int]:
    return list(iter_bits(bits))


def to_bits(ids: Iterable[int]) -> int:
    bits = 0
    for i in ids:
        bits |= 1 << i
    return bits


def _check_names(names: Sequence[str], kind: str) -> tuple[str, ...]:
    names = tuple(str(n) for n in names)
    seen = set()
    for n in names:
        if not n or n != n.strip():
            raise ValueError(f"{kind} name {n!r} must be non-empty with no surrounding whitespace")
        if any(c in n for c in _FORBIDDEN_NAME_CHARS):
            raise ValueError(f"{kind} name {n!r} contains a line break")
        if n in seen:
            if kind == "object":
                raise DuplicateObject(n)
            raise ValueError(f"duplicate {kind} name {n!r}")
        seen.add(n)
    return names


class FormalContext:
    """Immutable binary relation between named objects and attributes.

    ``rows[g]`` is the attribute bitset of object ``g`` and ``cols[m]`` the
    object bitset of attribute ``m``; one is the transpose of the other.
    """

    __slots__ = ("objects", "attributes", "rows", "cols", "__dict__")

    def __init__(self, objects: Sequence[str], attributes: Sequence[str], rows: Sequence[int]):
        objects = _check_names(objects, "object")
        attributes = _check_names(attributes, "attribute")
        if len(rows) != len(objects):
            raise DimensionMismatch(f"{len(rows)} rows for {len(objects)} objects")
        full = (1 << len(attributes)) - 1
        rows = tuple(int(r) for r in rows)
        for g, r in enumerate(rows):
            if r < 0 or r & ~full:
                raise DimensionMismatch(f"row {g} has bits outside {len(attributes)} attributes")
        cols = [0] * len(attributes)
        for g, r in enumerate(rows):
            for m in iter_bits(r):
                cols[m] |= 1 << g
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", tuple(cols))

    def __setattr__(self, name, value):
        raise AttributeError("FormalContext is immutable")

    @classmethod
    def from_incidence(cls, objects, attributes, pairs) -> FormalContext:
        """Build from ``(object_name, attribute_name)`` pairs."""
        objects = list(objects)
        attributes = list(attributes)
        oid = {n: i for i, n in enumerate(objects)}
        aid = {n: i for i, n in enumerate(attributes)}
        rows = [0] * len(objects)
        for g, m in pairs:
            rows[oid[g]] |= 1 << aid[m]
        return cls(objects, attributes, rows)

    @classmethod
    def from_array(cls, X, objects=None, attributes=None) -> FormalContext:
        """Build from a 2-D boolean array with objects as rows."""
        X = np.asarray(X, dtype=bool)
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D incidence matrix, got shape {X.shape}")
        n_obj, n_att = X.shape
        if objects is None:
            objects = [f"g{i + 1}" for i in range(n_obj)]
        if attributes is None:
            attributes = [f"m{j + 1}" for j in range(n_att)]
        rows = [to_bits(np.flatnonzero(row).tolist()) for row in X]
        return cls(objects, attributes, rows)

    def to_array(self) -> np.ndarray:
        X = np.zeros((len(self.objects), len(self.attributes)), dtype=bool)
        for g, r in enumerate(self.rows):
            X[g, bit_list(r)] = True
        return X

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def all_objects(self) -> int:
        return (1 << len(self.objects)) - 1

    @property
    def all_attributes(self) -> int:
        return (1 << len(self.attributes)) - 1

    @cached_property
    def row_array(self) -> np.ndarray | None:
        """Rows packed into uint64 words, or None when there are over 64 attributes."""
        if len(self.attributes) > 64:
            return None
        return np.array(self.rows, dtype=np.uint64)

    def incident(self, g: int, m: int) -> bool:
        return bool(self.rows[g] >> m & 1)

    def __eq__(self, other):
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (self.objects, self.attributes, self.rows) == (
            other.objects,
            other.attributes,
            other.rows,
        )

    def __hash__(self):
        return hash((self.objects, self.attributes, self.rows))

    def __repr__(self):
        return f"FormalContext({len(self.objects)} objects x {len(self.attributes)} attributes)"

    def __reduce__(self):
        return (FormalContext, (self.objects, self.attributes, self.rows))


def up(ctx: FormalContext, A: int) -> int:
    """Attributes shared by every object in ``A``; the empty set maps to all attributes."""
    B = ctx.all_attributes
    rows = ctx.rows
    for g in iter_bits(A):
        B &= rows[g]
        if not B:
            break
    return B


def down(ctx: FormalContext, B: int) -> int:
    """Objects having every attribute in ``B``; the empty set maps to all objects."""
    A = ctx.all_objects
    cols = ctx.cols
    for m in iter_bits(B):
        A &= cols[m]
        if not A:
            break
    return A


def closure_intent(ctx: FormalContext, B: int) -> int:
    return up(ctx, down(ctx, B))


def closure_extent(ctx: FormalContext, A: int) -> int:
    return down(ctx, up(ctx, A))


def object_forming(ctx: FormalContext, x: int) -> int:
    """Attribute set of the single object ``x``."""
    if not 0 <= x < len(ctx.rows):
        raise BadId(f"object id {x} out of range [0, {len(ctx.rows)})")
    return ctx.rows[x]


def attribute_forming(ctx: FormalContext, B: int) -> int:
    """Objects sharing all attributes of ``B`` (same as :func:`down`)."""
    return down(ctx, B)


def _check_separator(sep: str) -> None:
    if len(sep) != 1 or sep in "\r\n":
        raise ValueError(f"separator must be a single non-newline character, got {sep!r}")


def parse_object_list(text: str, sep: str = ",") -> FormalContext:
    """Parse ``object<sep>attr<sep>attr...`` lines.

    Attributes are numbered in order of first appearance.  Blank lines are
    skipped; an object may have no attributes.
    """
    _check_separator(sep)
    objects: list[str] = []
    seen_objects: set[str] = set()
    attr_ids: dict[str, int] = {}
    rows: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        tokens = [t.strip() for t in line.split(sep)]
        head, tail = tokens[0], tokens[1:]
        if not head:
            raise MalformedLine(lineno, "empty object name")
        if head in seen_objects:
            raise DuplicateObject(head)
        row = 0
        for tok in tail:
            if not tok:
                raise MalformedLine(lineno, "empty attribute token")
            j = attr_ids.setdefault(tok, len(attr_ids))
            row |= 1 << j
        seen_objects.add(head)
        objects.append(head)
        rows.append(row)
    return FormalContext(objects, list(attr_ids), rows)


def serialize_object_list(ctx: FormalContext, sep: str = ",") -> str:
    _check_separator(sep)
    for name in ctx.objects + ctx.attributes:
        if sep in name:
            raise ValueError(f"name {name!r} contains the separator {sep!r}")
    lines = []
    for g, row in enumerate(ctx.rows):
        lines.append(sep.join([ctx.objects[g]] + [ctx.attributes[m] for m in iter_bits(row)]))
    return "".join(line + "\n" for line in lines)


def _parse_count(lines: list[str], idx: int) -> int:
    try:
        value = int(lines[idx].strip())
    except (IndexError, ValueError):
        raise MalformedLine(idx + 1, "expected a non-negative integer") from None
    if value < 0:
        raise MalformedLine(idx + 1, "expected a non-negative integer")
    return value


def parse_cxt(text: str) -> FormalContext:
    """Parse a Burmeister ``.cxt`` file.

    Layout: ``B``, a blank (or context-name) line, object count, attribute
    count, a blank line, the object names, the attribute names, then one row
    of ``X``/``.`` per object.
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != "B":
        raise BadMagic(lines[0] if lines else "")
    n_obj = _parse_count(lines, 2)
    n_att = _parse_count(lines, 3)
    if len(lines) <= 4 or lines[4].strip():
        raise MalformedLine(5, "expected a blank line after the dimensions")
    body = lines[5:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) < n_obj + n_att:
        raise DimensionMismatch(
            f"expected {n_obj} object and {n_att} attribute names, file has {len(body)} lines"
        )
    objects = [s.strip() for s in body[:n_obj]]
    attributes = [s.strip() for s in body[n_obj : n_obj + n_att]]
    table = body[n_obj + n_att :]
    if len(table) != n_obj:
        raise DimensionMismatch(f"expected {n_obj} rows, found {len(table)}")
    rows = []
    first_row_line = 6 + n_obj + n_att
    for i, raw in enumerate(table):
        cells = raw.strip()
        if len(cells) != n_att:
            raise DimensionMismatch(
                f"row {i + 1} has length {len(cells)}, expected {n_att}"
            )
        row = 0
        for j, c in enumerate(cells):
            if c in "Xx":
                row |= 1 << j
            elif c != ".":
                raise MalformedLine(first_row_line + i, f"unexpected cell character {c!r}")
        rows.append(row)
    try:
        return FormalContext(objects, attributes, rows)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_cxt(ctx: FormalContext) -> str:
    n_att = len(ctx.attributes)
    out = ["B", "", str(len(ctx.objects)), str(n_att), ""]
    out.extend(ctx.objects)
    out.extend(ctx.attributes)
    for row in ctx.rows:
        out.append("".join("X" if row >> j & 1 else "." for j in range(n_att)))
    return "\n".join(out) + "\n"
