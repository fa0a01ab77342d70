"""Slow reference enumerators used to check the engine.

Everything here works on frozensets of ids read straight from the incidence
relation, never on the bitset helpers the engine uses.
"""
from __future__ import annotations

from collections import deque
from itertools import combinations

from .context import FormalContext
from .errors import TooLarge

__all__ = [
    "MAX_OBJECTS",
    "brute_force_concepts",
    "brute_force_covers",
    "next_closure",
    "lectic_less",
    "cover_depths",
    "lattice_height",
    "longest_chain",
]

MAX_OBJECTS = 20

OracleConcept = tuple[frozenset, frozenset]


def _relation(ctx: FormalContext):
    n_att = ctx.n_attributes
    obj_attrs = [frozenset(m for m in range(n_att) if ctx.incident(g, m)) for g in range(ctx.n_objects)]
    return obj_attrs, frozenset(range(ctx.n_objects)), frozenset(range(n_att))


def _intent_of(objs, obj_attrs, all_attrs):
    common = set(all_attrs)
    for g in objs:
        common &= obj_attrs[g]
    return frozenset(common)


def _extent_of(attrs, obj_attrs, all_objs):
    return frozenset(g for g in all_objs if attrs <= obj_attrs[g])


def brute_force_concepts(ctx: FormalContext) -> list[OracleConcept]:
    """All concepts, by closing every subset of objects.

    Sorted by extent size, then by sorted extent ids.
    """
    if ctx.n_objects > MAX_OBJECTS:
        raise TooLarge(
            f"{ctx.n_objects} objects exceed the brute-force limit of {MAX_OBJECTS}"
        )
    obj_attrs, all_objs, all_attrs = _relation(ctx)
    found = set()
    for k in range(len(all_objs) + 1):
        for objs in combinations(sorted(all_objs), k):
            intent = _intent_of(objs, obj_attrs, all_attrs)
            found.add((_extent_of(intent, obj_attrs, all_objs), intent))
    return sorted(found, key=lambda c: (len(c[0]), sorted(c[0])))


def brute_force_covers(concepts: list[OracleConcept]) -> set[tuple[OracleConcept, OracleConcept]]:
    """Pairs ``(c, u)`` where ``u`` covers ``c`` in extent order."""
    covers = set()
    for c in concepts:
        above = sorted((u for u in concepts if c[0] < u[0]), key=lambda u: len(u[0]))
        minimal: list[OracleConcept] = []
        for u in above:
            # anything strictly between c and u would be smaller than u, so already seen
            if not any(w[0] < u[0] for w in minimal):
                minimal.append(u)
        covers.update((c, u) for u in minimal)
    return covers


def next_closure(ctx: FormalContext) -> list[frozenset]:
    """All intents in lectic order, attribute ids ascending as the base order."""
    obj_attrs, all_objs, all_attrs = _relation(ctx)

    def close(attrs):
        return _intent_of(_extent_of(frozenset(attrs), obj_attrs, all_objs), obj_attrs, all_attrs)

    n = len(all_attrs)
    current = close(())
    out = [current]
    while current != all_attrs:
        for m in range(n - 1, -1, -1):
            if m in current:
                continue
            prefix = {a for a in current if a < m}
            candidate = close(prefix | {m})
            if {a for a in candidate if a < m} == prefix:
                current = candidate
                out.append(current)
                break
        else:  # pragma: no cover - unreachable for a closure system containing all attributes
            break
    return out


def lectic_less(a: frozenset, b: frozenset) -> bool:
    """True iff the smallest element of the symmetric difference lies in ``b``."""
    diff = a ^ b
    return bool(diff) and min(diff) in b


def cover_depths(concepts, covers) -> dict:
    """Breadth-first distance, counted in concepts, from the least concept to each concept."""
    if not concepts:
        return {}
    bottom = min(concepts, key=lambda c: len(c[0]))
    upward: dict = {c: [] for c in concepts}
    for c, u in covers:
        upward[c].append(u)
    depth = {bottom: 1}
    queue = deque([bottom])
    while queue:
        c = queue.popleft()
        for u in upward[c]:
            if u not in depth:
                depth[u] = depth[c] + 1
                queue.append(u)
    return depth


def lattice_height(concepts, covers) -> int:
    """Largest breadth-first depth of any concept (1 for a single concept)."""
    return max(cover_depths(concepts, covers).values(), default=0)


def longest_chain(concepts, covers) -> int:
    """Number of concepts on the longest cover chain starting at the least concept."""
    upward: dict = {c: [] for c in concepts}
    for c, u in covers:
        upward[c].append(u)
    best: dict = {}
    for c in sorted(concepts, key=lambda c: -len(c[0])):
        best[c] = 1 + max((best[u] for u in upward[c]), default=0)
    return max(best.values(), default=0)
