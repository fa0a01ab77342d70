"""Concepts, the upper-neighbor step and the two-step canonicity test.

A concept generates its upper neighbors by adding one outside object at a
time: ``B1 = intent & x↑``, ``A1 = B1↓``.  A running min-set of candidate
objects decides which of these children are upper covers of the parent
(``is_valid_neighbor``).  Only valid children are expanded further, and the
:class:`SeenCache` makes sure each intent is expanded once.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .context import FormalContext, bit_list, down, iter_bits, up
from .errors import CalledOnTop

__all__ = [
    "Concept",
    "NeighborBatch",
    "SeenCache",
    "bottom_concept",
    "is_top",
    "upper_neighbors",
    "upper_cover_intents",
    "intent_key",
    "is_canonical",
    "record",
]


@dataclass(frozen=True, slots=True)
class Concept:
    extent: int
    intent: int
    is_valid_neighbor: bool = True
    level: int = 1

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")

    @property
    def extent_ids(self) -> list[int]:
        return bit_list(self.extent)

    @property
    def intent_ids(self) -> list[int]:
        return bit_list(self.intent)


def intent_key(intent: int) -> tuple[int, ...]:
    """Sort key for intents: the ascending attribute-id sequence."""
    return tuple(iter_bits(intent))


@dataclass
class NeighborBatch:
    """Children produced by expanding one parent, one entry per distinct intent."""

    parent: Concept
    children: list[tuple[Concept, int]] = field(default_factory=list)

    def __iter__(self) -> Iterator[tuple[Concept, int]]:
        return iter(self.children)

    def __len__(self) -> int:
        return len(self.children)

    @property
    def valid(self) -> list[Concept]:
        return [c for c, _ in self.children if c.is_valid_neighbor]

    @property
    def invalid(self) -> list[Concept]:
        return [c for c, _ in self.children if not c.is_valid_neighbor]


class SeenCache:
    """Thread-safe set of intents with an atomic insert-if-absent.

    Intents are stored as their attribute bitsets, which encode the sorted
    attribute-id sequence one-to-one.
    """

    def __init__(self, intents=()):
        self._items: set[int] = set(intents)
        self._lock = threading.Lock()

    def __contains__(self, intent: int) -> bool:
        return intent in self._items

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(list(self._items))

    def insert(self, intent: int) -> bool:
        """Add ``intent``; True iff it was not present before."""
        with self._lock:
            if intent in self._items:
                return False
            self._items.add(intent)
            return True


def is_canonical(intent: int, cache: SeenCache) -> bool:
    return intent not in cache


def record(concept: Concept, cache: SeenCache) -> bool:
    return cache.insert(concept.intent)


def bottom_concept(ctx: FormalContext) -> Concept:
    extent = down(ctx, ctx.all_attributes)
    return Concept(extent, up(ctx, extent), True, 1)


def is_top(ctx: FormalContext, c: Concept) -> bool:
    return c.extent == ctx.all_objects


def upper_neighbors(ctx: FormalContext, parent: Concept) -> NeighborBatch:
    """Expand ``parent`` with the min-set filter, objects in ascending id order.

    Each outside object ``x`` yields a child; it is flagged valid when the
    min-set misses ``A1 - extent - {x}``, otherwise ``x`` leaves the min-set
    and the child is flagged invalid.  Children are then deduplicated by
    intent, a valid emission replacing an invalid one.
    """
    if is_top(ctx, parent):
        raise CalledOnTop("the greatest concept has no upper neighbors")
    A, B = parent.extent, parent.intent
    level = parent.level + 1
    rows = ctx.rows
    outside = ctx.all_objects & ~A
    min_set = outside
    by_intent: dict[int, tuple[Concept, int]] = {}
    for x in iter_bits(outside):
        B1 = B & rows[x]
        A1 = down(ctx, B1)
        if min_set & (A1 & ~A & ~(1 << x)) == 0:
            by_intent[B1] = (Concept(A1, B1, True, level), x)
        else:
            min_set &= ~(1 << x)
            if B1 not in by_intent:
                by_intent[B1] = (Concept(A1, B1, False, level), x)
    return NeighborBatch(parent, list(by_intent.values()))


def _maximal(values: np.ndarray) -> np.ndarray:
    """Distinct bitmasks of ``values`` not strictly contained in another one."""
    if values.size == 0:
        return values
    counts = np.bitwise_count(values)
    order = np.argsort(-counts.astype(np.int64), kind="stable")
    values, counts = values[order], counts[order]
    cuts = np.flatnonzero(np.diff(counts)) + 1
    found = []
    maxima = values[:0]
    for layer in np.split(values, cuts):
        if maxima.size:
            covered = ((layer[:, None] & maxima[None, :]) == layer[:, None]).any(axis=1)
            layer = layer[~covered]
        if layer.size:
            found.append(layer)
            maxima = np.concatenate(found)
    return maxima


def upper_cover_intents(ctx: FormalContext, intent: int) -> list[int]:
    """Intents of the valid children of the concept with this intent.

    Same result as the valid part of :func:`upper_neighbors`, computed from
    the distinct values of ``intent & x↑``: an object passes the min-set
    test exactly when its value is maximal and it is the last object
    producing that value.  Objects inside the extent are those whose value
    equals ``intent`` itself, so the extent is never materialized.
    """
    rows = ctx.row_array
    if rows is None:
        return _upper_cover_intents_py(ctx, intent)
    b = np.uint64(intent)
    vals = rows & b
    vals = np.unique(vals[vals != b])
    return [int(v) for v in _maximal(vals)]


def _upper_cover_intents_py(ctx: FormalContext, intent: int) -> list[int]:
    distinct = {intent & r for r in ctx.rows}
    distinct.discard(intent)
    ordered = sorted(distinct, key=lambda v: -v.bit_count())
    maxima: list[int] = []
    for v in ordered:
        if not any(v & w == v for w in maxima):
            maxima.append(v)
    return maxima
