import itertools

import pytest
from hypothesis import given, settings

from conftest import chain, contexts, contranominal, diagonal, full, random_ctx
from fcalattice import TooLarge
from fcalattice import oracle

fs = frozenset


def test_brute_force_diagonal_by_hand():
    # subsets {} -> (∅, M); {gi} -> ({gi}, {mi}); any pair or more -> (G, ∅)
    assert set(oracle.brute_force_concepts(diagonal(3))) == {
        (fs(), fs({0, 1, 2})),
        (fs({0}), fs({0})),
        (fs({1}), fs({1})),
        (fs({2}), fs({2})),
        (fs({0, 1, 2}), fs()),
    }


def test_brute_force_small_families():
    assert oracle.brute_force_concepts(full(2, 2)) == [(fs({0, 1}), fs({0, 1}))]
    concepts = oracle.brute_force_concepts(contranominal(3))
    assert len(concepts) == 8
    # every attribute subset is closed in the contranominal scale
    assert {i for _, i in concepts} == {fs(s) for k in range(4) for s in itertools.combinations(range(3), k)}


def test_too_large(rng):
    with pytest.raises(TooLarge):
        oracle.brute_force_concepts(random_ctx(rng, 21, 3, 0.5))


def test_covers():
    d = oracle.brute_force_concepts(diagonal(3))
    assert len(oracle.brute_force_covers(d)) == 6
    c = oracle.brute_force_concepts(chain())
    assert oracle.brute_force_covers(c) == {
        ((fs({0}), fs({0, 1, 2})), (fs({0, 1}), fs({1, 2}))),
        ((fs({0, 1}), fs({1, 2})), (fs({0, 1, 2}), fs({2}))),
    }
    assert oracle.brute_force_covers(oracle.brute_force_concepts(full(2, 2))) == set()


def test_next_closure_examples():
    intents = oracle.next_closure(contranominal(3))
    assert len(intents) == 8 and intents[0] == fs() and intents[-1] == fs({0, 1, 2})
    assert oracle.next_closure(full(2, 2)) == [fs({0, 1})]
    assert set(oracle.next_closure(diagonal(3))) == {i for _, i in oracle.brute_force_concepts(diagonal(3))}


def test_lectic_less():
    assert oracle.lectic_less(fs({1}), fs({0}))
    assert not oracle.lectic_less(fs({0}), fs({1}))
    assert oracle.lectic_less(fs({0}), fs({0, 2}))
    assert not oracle.lectic_less(fs({0}), fs({0}))


def test_heights():
    for ctx, h in [(diagonal(3), 3), (chain(), 3), (full(2, 2), 1), (contranominal(4), 5)]:
        truth = oracle.brute_force_concepts(ctx)
        covers = oracle.brute_force_covers(truth)
        assert oracle.lattice_height(truth, covers) == h
        assert oracle.longest_chain(truth, covers) == h


@settings(max_examples=150, deadline=None)
@given(ctx=contexts())
def test_oracle_properties(ctx):
    truth = oracle.brute_force_concepts(ctx)
    intents = oracle.next_closure(ctx)
    assert set(intents) == {i for _, i in truth}
    assert len(intents) == len(truth)
    assert all(oracle.lectic_less(a, b) for a, b in zip(intents, intents[1:]))

    covers = oracle.brute_force_covers(truth)
    for c, u in covers:
        assert (u, c) not in covers
    # transitive closure of the covers is strict extent containment
    reach = {c: {u for cc, u in covers if cc == c} for c in truth}
    changed = True
    while changed:
        changed = False
        for c in truth:
            extra = set().union(*(reach[u] for u in reach[c])) - reach[c] if reach[c] else set()
            if extra:
                reach[c] |= extra
                changed = True
    for c in truth:
        assert reach[c] == {u for u in truth if c[0] < u[0]}
