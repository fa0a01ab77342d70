"""Wall-time benchmark over worker counts, averaging repeated runs."""
from __future__ import annotations

import statistics

import numpy as np

from .context import FormalContext
from .engine import enumerate_concepts

__all__ = ["random_context", "run_bench", "format_bench"]


def random_context(n_objects: int, n_attributes: int, density: float, seed=None) -> FormalContext:
    rng = np.random.default_rng(seed)
    return FormalContext.from_array(rng.random((n_objects, n_attributes)) < density)


def run_bench(ctx: FormalContext, worker_counts, repeat: int = 5, backend: str = "process",
              kernel: str = "vectorized") -> dict[str, dict]:
    """Run every worker count ``repeat`` times; one row per worker count."""
    if repeat < 1:
        raise ValueError("repeat must be >= 1")
    table = {}
    for w in worker_counts:
        times, iterations, concepts = [], set(), set()
        for _ in range(repeat):
            found, _, stats = enumerate_concepts(ctx, w, backend=backend, kernel=kernel)
            times.append(stats.total_ms)
            iterations.add(stats.iterations)
            concepts.add(len(found))
        if len(iterations) != 1 or len(concepts) != 1:
            raise RuntimeError(f"non-deterministic results with {w} workers")
        table[str(w)] = {
            "workers": w,
            "runs": repeat,
            "min_ms": min(times),
            "mean_ms": statistics.fmean(times),
            "max_ms": max(times),
            "iterations": iterations.pop(),
            "concepts": concepts.pop(),
        }
    return table


def format_bench(table: dict[str, dict]) -> str:
    header = f"{'workers':>7} {'runs':>4} {'min_ms':>10} {'mean_ms':>10} {'max_ms':>10} {'iters':>5} {'concepts':>9}"
    lines = [header]
    for row in table.values():
        lines.append(
            f"{row['workers']:>7} {row['runs']:>4} {row['min_ms']:>10.1f} {row['mean_ms']:>10.1f} "
            f"{row['max_ms']:>10.1f} {row['iterations']:>5} {row['concepts']:>9}"
        )
    return "\n".join(lines)
