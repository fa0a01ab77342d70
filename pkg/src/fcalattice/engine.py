"""Level-synchronous enumeration of all concepts.

Iteration ``k`` expands every concept of level ``k`` (the frontier).  The
frontier is cut into contiguous chunks, one per worker; workers compute the
valid children of their chunk and the driver merges their buffers at the
barrier.  A child whose intent is newly recorded in the seen-cache joins the
next frontier with level ``k + 1``; a repeat is counted as a cache hit.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .context import FormalContext, down, up
from .core import (
    Concept,
    SeenCache,
    bottom_concept,
    intent_key,
    is_canonical,
    upper_cover_intents,
    upper_neighbors,
)

__all__ = [
    "EdgeEvidence",
    "IterationStats",
    "RunStats",
    "enumerate_concepts",
    "stats_report",
    "stats_from_report",
    "chunk",
    "KERNELS",
    "BACKENDS",
]

KERNELS = ("vectorized", "minset")
BACKENDS = ("process", "thread")

EdgeEvidence = set  # of (parent intent, child intent)


@dataclass
class IterationStats:
    level: int
    new_concepts: int
    ms: float


@dataclass
class RunStats:
    workers: int
    iterations: int = 0
    total_concepts: int = 0
    total_edges: int = 0
    cache_hits: int = 0
    peak_frontier: int = 0
    total_ms: float = 0.0
    per_iteration: list[IterationStats] = field(default_factory=list)


def stats_report(stats: RunStats) -> dict:
    return asdict(stats)


def stats_from_report(doc: dict | str) -> RunStats:
    if isinstance(doc, str):
        doc = json.loads(doc)
    doc = dict(doc)
    doc["per_iteration"] = [IterationStats(**it) for it in doc["per_iteration"]]
    return RunStats(**doc)


def chunk(items: list, parts: int) -> list[list]:
    """Split into at most ``parts`` contiguous, nearly equal slices."""
    parts = max(1, min(parts, len(items)))
    size, extra = divmod(len(items), parts)
    out, start = [], 0
    for i in range(parts):
        stop = start + size + (i < extra)
        out.append(items[start:stop])
        start = stop
    return out


def _children(ctx: FormalContext, intent: int, level: int, kernel: str) -> list[int]:
    if kernel == "vectorized":
        return upper_cover_intents(ctx, intent)
    parent = Concept(down(ctx, intent), intent, True, level)
    return [c.intent for c in upper_neighbors(ctx, parent).valid]


def _expand(ctx, intents, level, top, kernel):
    return [[] if b == top else _children(ctx, b, level, kernel) for b in intents]


# per-process state for the process backend
_worker_ctx: FormalContext | None = None


def _init_worker(ctx: FormalContext) -> None:
    global _worker_ctx
    _worker_ctx = ctx
    ctx.row_array  # noqa: B018  materialize once per process


def _expand_in_worker(intents, level, top, kernel):
    return _expand(_worker_ctx, intents, level, top, kernel)


def _extents_in_worker(intents):
    return _extents(_worker_ctx, intents)


def _extents(ctx: FormalContext, intents: list[int]) -> list[int]:
    rows = ctx.row_array
    if rows is None or not ctx.n_objects:
        return [down(ctx, b) for b in intents]
    out = []
    for b in intents:
        mask = (rows & np.uint64(b)) == np.uint64(b)
        out.append(int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little"))
    return out


def enumerate_concepts(
    ctx: FormalContext,
    workers: int = 1,
    *,
    backend: str = "process",
    kernel: str = "vectorized",
    cache: SeenCache | None = None,
) -> tuple[list[Concept], set[tuple[int, int]], RunStats]:
    """Enumerate every concept of ``ctx``.

    Returns the concepts sorted by (level, intent id sequence), the edge
    evidence as ``(parent intent, child intent)`` pairs of every valid
    emission, and the run statistics.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    cache = SeenCache() if cache is None else cache
    stats = RunStats(workers=workers)
    start = time.perf_counter()

    bottom = bottom_concept(ctx)
    top = up(ctx, ctx.all_objects)
    cache.insert(bottom.intent)
    levels: dict[int, int] = {bottom.intent: 1}
    evidence: set[tuple[int, int]] = set()
    frontier = [bottom.intent]
    level = 1

    pool = None
    if workers > 1 and backend == "process":
        pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(ctx,))
    elif workers > 1:
        pool = ThreadPoolExecutor(workers)
    try:
        while frontier:
            t0 = time.perf_counter()
            stats.peak_frontier = max(stats.peak_frontier, len(frontier))
            slices = chunk(frontier, workers)
            if pool is None:
                buffers = [_expand(ctx, frontier, level, top, kernel)]
            elif backend == "process":
                futures = [
                    pool.submit(_expand_in_worker, s, level, top, kernel) for s in slices
                ]
                buffers = [f.result() for f in futures]
            else:
                futures = [pool.submit(_expand, ctx, s, level, top, kernel) for s in slices]
                buffers = [f.result() for f in futures]

            nxt = []
            for parents, results in zip(slices, buffers):
                for parent, children in zip(parents, results):
                    for child in children:
                        evidence.add((parent, child))
                        if is_canonical(child, cache) and cache.insert(child):
                            levels[child] = level + 1
                            nxt.append(child)
                        else:
                            stats.cache_hits += 1
            stats.per_iteration.append(
                IterationStats(level, len(frontier), (time.perf_counter() - t0) * 1e3)
            )
            frontier = nxt
            level += 1

        intents = sorted(levels, key=lambda b: (levels[b], intent_key(b)))
        if pool is not None and backend == "process":
            parts = chunk(intents, workers)
            extents = [e for part in pool.map(_extents_in_worker, parts) for e in part]
        else:
            extents = _extents(ctx, intents)
    finally:
        if pool is not None:
            pool.shutdown()

    concepts = [Concept(a, b, True, levels[b]) for a, b in zip(extents, intents)]
    stats.iterations = len(stats.per_iteration)
    stats.total_concepts = len(concepts)
    stats.total_edges = len(evidence)
    stats.total_ms = (time.perf_counter() - start) * 1e3
    return concepts, evidence, stats


def default_workers() -> int:
    return os.cpu_count() or 1
