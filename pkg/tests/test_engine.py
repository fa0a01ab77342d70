import json

import pytest
from hypothesis import given, settings

from conftest import chain, contexts, contranominal, diagonal, full, random_ctx
from fcalattice import (
    FormalContext,
    SeenCache,
    enumerate_concepts,
    stats_from_report,
    stats_report,
)
from fcalattice import oracle
from fcalattice.context import iter_bits
from fcalattice.engine import chunk


def as_sets(c):
    return frozenset(iter_bits(c.extent)), frozenset(iter_bits(c.intent))


def engine_covers(concepts, evidence):
    by_intent = {c.intent: as_sets(c) for c in concepts}
    return {(by_intent[p], by_intent[c]) for p, c in evidence}


class TestExamples:
    def test_full(self):
        concepts, evidence, stats = enumerate_concepts(full(2, 2))
        assert [(c.extent, c.intent, c.level) for c in concepts] == [(0b11, 0b11, 1)]
        assert evidence == set() and stats.iterations == 1

    def test_diagonal(self):
        ctx = diagonal(3)
        concepts, evidence, stats = enumerate_concepts(ctx)
        truth = oracle.brute_force_concepts(ctx)
        assert {as_sets(c) for c in concepts} == set(truth)
        assert len(concepts) == 5 and len(evidence) == 6 and stats.iterations == 3
        assert engine_covers(concepts, evidence) == oracle.brute_force_covers(truth)

    @pytest.mark.parametrize("n", [3, 10])
    def test_contranominal_counts(self, n):
        ctx = contranominal(n)
        concepts, _, stats = enumerate_concepts(ctx)
        # independent count: close every attribute subset with the oracle's closure
        assert len(concepts) == len(oracle.next_closure(ctx)) == 2 ** n
        assert stats.iterations == n + 1

    def test_chain(self):
        concepts, evidence, stats = enumerate_concepts(chain())
        assert [c.level for c in concepts] == [1, 2, 3]
        assert stats.iterations == 3 and len(evidence) == 2

    @pytest.mark.parametrize("n_obj,n_att", [(0, 0), (0, 3), (3, 0)])
    def test_degenerate(self, n_obj, n_att):
        ctx = FormalContext([f"g{i}" for i in range(n_obj)], [f"m{j}" for j in range(n_att)], [0] * n_obj)
        concepts, evidence, stats = enumerate_concepts(ctx)
        assert len(concepts) == 1 and not evidence and stats.iterations == 1
        assert (concepts[0].extent, concepts[0].intent) == (ctx.all_objects, ctx.all_attributes)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            enumerate_concepts(diagonal(2), 0)
        with pytest.raises(ValueError):
            enumerate_concepts(diagonal(2), kernel="nope")
        with pytest.raises(ValueError):
            enumerate_concepts(diagonal(2), backend="mpi")


@settings(max_examples=200, deadline=None)
@given(ctx=contexts(max_objects=10, max_attributes=10))
def test_oracle_equivalence_and_laws(ctx):
    concepts, evidence, stats = enumerate_concepts(ctx)
    truth = oracle.brute_force_concepts(ctx)
    covers = oracle.brute_force_covers(truth)
    got = [as_sets(c) for c in concepts]
    assert set(got) == set(truth)
    assert len({c.intent for c in concepts}) == len(concepts)
    assert len({c.extent for c in concepts}) == len(concepts)
    # level = breadth-first depth over the oracle's cover graph
    depth = oracle.cover_depths(truth, covers)
    assert all(c.level == depth[as_sets(c)] for c in concepts)
    assert stats.iterations == max(depth.values())
    # edge law
    level = {c.intent: c.level for c in concepts}
    ext = {c.intent: c.extent for c in concepts}
    for p, c in evidence:
        assert ext[p] & ~ext[c] == 0 and ext[p] != ext[c]
        assert level[c] <= level[p] + 1
    assert engine_covers(concepts, evidence) == covers
    # stats bookkeeping
    assert sum(it.new_concepts for it in stats.per_iteration) == stats.total_concepts == len(concepts)
    assert [it.level for it in stats.per_iteration] == list(range(1, stats.iterations + 1))


def test_minset_kernel_gives_identical_output(rng):
    for _ in range(20):
        ctx = random_ctx(rng, 25, 8, rng.uniform(0.2, 0.8))
        a = enumerate_concepts(ctx, kernel="vectorized")
        b = enumerate_concepts(ctx, kernel="minset")
        assert a[0] == b[0] and a[1] == b[1] and a[2].iterations == b[2].iterations


@pytest.mark.parametrize("backend", ["process", "thread"])
def test_determinism_across_workers(rng, backend):
    ctx = random_ctx(rng, 120, 12, 0.35)
    ref_concepts, ref_evidence, ref_stats = enumerate_concepts(ctx, 1)
    for w in (2, 4, 8):
        concepts, evidence, stats = enumerate_concepts(ctx, w, backend=backend)
        assert concepts == ref_concepts
        assert evidence == ref_evidence
        assert stats.iterations == ref_stats.iterations
        assert stats.cache_hits == ref_stats.cache_hits
        assert stats.workers == w


def test_cache_hits_and_record_events(rng):
    class CountingCache(SeenCache):
        def __init__(self):
            super().__init__()
            self.wins = 0

        def insert(self, intent):
            won = super().insert(intent)
            self.wins += won
            return won

    cache = CountingCache()
    concepts, _, stats = enumerate_concepts(contranominal(4), cache=cache)
    assert cache.wins == len(concepts) == 16
    assert stats.cache_hits > 0
    _, _, chain_stats = enumerate_concepts(chain())
    assert chain_stats.cache_hits == 0


class TestStatsReport:
    def test_keys_and_round_trip(self):
        _, _, stats = enumerate_concepts(diagonal(3))
        doc = stats_report(stats)
        assert set(doc) == {
            "workers", "iterations", "total_concepts", "total_edges",
            "cache_hits", "peak_frontier", "total_ms", "per_iteration",
        }
        assert set(doc["per_iteration"][0]) == {"level", "new_concepts", "ms"}
        assert doc["iterations"] == 3
        assert stats_from_report(json.dumps(doc)) == stats

    def test_single_concept(self):
        concepts, _, stats = enumerate_concepts(full(2, 3))
        doc = stats_report(stats)
        assert doc["iterations"] == 1 and doc["total_edges"] == 0
        assert doc["iterations"] == max(c.level for c in concepts)
        assert doc["peak_frontier"] == 1


def test_chunk():
    assert chunk(list(range(7)), 3) == [[0, 1, 2], [3, 4], [5, 6]]
    assert chunk([1], 4) == [[1]]
    assert chunk([], 4) == [[]]
