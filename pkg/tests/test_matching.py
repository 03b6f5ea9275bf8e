import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamcubic import named
from hamcubic.graph import from_edge_list
from hamcubic.matching import (
    NoPerfectMatching,
    PerfectMatching,
    enumerate_perfect_matchings,
    perfect_matching,
    verify_matching,
)
from hamcubic.oracle import cubic_graph_classes, enumerate_cubic_graphs, random_cubic_bridgeless


def subset_matchings(g):
    """Oracle: every n/2-subset of edges that covers all vertices."""
    out = []
    for sub in itertools.combinations(g.sorted_edges(), g.n // 2):
        if len({v for e in sub for v in e}) == g.n:
            out.append(tuple(sorted(sub)))
    return sorted(out)


def test_k4_canonical_matching(k4):
    assert perfect_matching(k4).pairs == ((0, 1), (2, 3))
    assert len(subset_matchings(k4)) == 3


def test_prism_rungs_valid(prism):
    rungs = PerfectMatching.from_pairs(6, [(0, 3), (1, 4), (2, 5)])
    assert verify_matching(prism, rungs)
    assert rungs.pairs in subset_matchings(prism)
    pm = perfect_matching(prism)
    assert verify_matching(prism, pm) and pm.pairs == subset_matchings(prism)[0]


def test_petersen_matching(petersen):
    pm = perfect_matching(petersen)
    assert len(pm) == 5 and verify_matching(petersen, pm)
    assert len(subset_matchings(petersen)) == 6


def test_partner_table(petersen):
    pm = perfect_matching(petersen)
    for u, v in pm.pairs:
        assert pm.partner[u] == v and pm.partner[v] == u


@pytest.mark.parametrize(
    "pairs, ok",
    [([(0, 1), (2, 3)], True), ([(0, 1), (1, 2)], False), ([(0, 1)], False), ([(0, 1), (2, 3), (0, 2)], False)],
)
def test_verify_matching_k4(k4, pairs, ok):
    assert verify_matching(k4, pairs) is ok


def test_verify_matching_non_edge(prism):
    assert not verify_matching(prism, [(0, 4), (1, 3), (2, 5)])
    assert verify_matching(prism, PerfectMatching.from_pairs(6, [(0, 3), (1, 4), (2, 5)]))


def test_from_pairs_rejects_overlap():
    with pytest.raises(ValueError):
        PerfectMatching.from_pairs(4, [(0, 1), (1, 2)])


def test_enumerate_examples(k4, petersen):
    assert len(enumerate_perfect_matchings(k4, 10)) == 3
    assert len(enumerate_perfect_matchings(named.cycle(6), 10)) == 2
    three = enumerate_perfect_matchings(petersen, 3)
    assert len({m.pairs for m in three}) == 3
    assert len(enumerate_perfect_matchings(petersen)) == 6


def test_enumerate_rejects_bad_cap(k4):
    with pytest.raises(ValueError):
        enumerate_perfect_matchings(k4, 0)


def test_no_perfect_matching():
    star_plus = from_edge_list(4, [(0, 1), (0, 2), (0, 3)])
    with pytest.raises(NoPerfectMatching):
        perfect_matching(star_plus)
    assert enumerate_perfect_matchings(named.cycle(5), 5) == []


def test_enumerate_matches_subset_oracle():
    corpus = list(enumerate_cubic_graphs(6)) + [g for n in (8, 10) for g in cubic_graph_classes(n)]
    corpus.append(named.bridged_cubic())
    for g in corpus:
        got = [m.pairs for m in enumerate_perfect_matchings(g)]
        assert got == subset_matchings(g)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 6, 8, 10, 12, 14, 16, 18, 20]), st.integers(min_value=0, max_value=10**6))
def test_random_bridgeless_always_matched(n, seed):
    g = random_cubic_bridgeless(n, seed)
    pm = perfect_matching(g)
    assert verify_matching(g, pm)
    assert pm == enumerate_perfect_matchings(g, 1)[0]
