from __future__ import annotations

import random
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from holant_lab.grids import (
    ColouredPattern,
    Graph,
    GridError,
    SignatureGrid,
    aut_count_pattern,
    bottom_fracture,
    canonical_form,
    enumerate_fractures,
    enumerate_patterns,
    fracture_count,
    fracture_mobius,
    fractured_graph,
    patterns_up_to,
    quotient,
    top_fracture,
    treewidth,
)
from holant_lab.partitions import SetPartition, bell
from holant_lab.signatures import builtin


def brute_canon(P: ColouredPattern):
    best = None
    for perm in permutations(range(P.n)):
        es = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in P.edges))
        cols = [None] * P.n
        for v in range(P.n):
            cols[perm[v]] = P.colours[v]
        key = (es, tuple(cols))
        if best is None or key < best:
            best = key
    return best


def brute_auts(P: ColouredPattern) -> int:
    es = set(P.edges)
    return sum(
        1
        for perm in permutations(range(P.n))
        if all(P.colours[perm[v]] == P.colours[v] for v in range(P.n))
        and {tuple(sorted((perm[u], perm[v]))) for u, v in es} == es
    )


def test_graph_validation():
    with pytest.raises(GridError):
        Graph(2, [(0, 0)])
    with pytest.raises(GridError):
        Graph(2, [(0, 1), (1, 0)])
    with pytest.raises(GridError):
        Graph(2, [(0, 2)])
    g = Graph(4, [(2, 1), (0, 1)])
    assert g.edges == ((1, 2), (0, 1))
    assert g.edge_index(1, 0) == 1
    assert g.components() == [[0, 1, 2], [3]]
    assert g.is_forest()


@pytest.mark.parametrize("colours, expected", [(["a"], [1, 2, 5, 11, 26]), (["a", "b"], [3, 12, 50])])
def test_pattern_counts(colours, expected):
    assert [len(enumerate_patterns(colours, k)) for k in range(1, len(expected) + 1)] == expected


def test_canonical_form_matches_brute_force():
    pats = patterns_up_to(["a", "b"], 3)
    keys = [brute_canon(P) for P in pats]
    assert len(set(keys)) == len(pats)
    for P in pats:
        assert aut_count_pattern(P) == brute_auts(P)


@given(st.integers(0, 10 ** 6))
def test_canonical_form_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    P = rng.choice(enumerate_patterns(["a", "b"], rng.randint(1, 4)))
    perm = list(range(P.n))
    rng.shuffle(perm)
    cols = [None] * P.n
    for v in range(P.n):
        cols[perm[v]] = P.colours[v]
    Q = ColouredPattern.make(P.n, [(perm[u], perm[v]) for u, v in P.edges], cols)
    assert canonical_form(Q) == canonical_form(P)
    assert aut_count_pattern(Q) == aut_count_pattern(P)


def test_disconnected_aut_counts():
    two_edges = ColouredPattern.make(4, [(0, 1), (2, 3)], "aaaa")
    assert aut_count_pattern(two_edges) == 8
    mixed = ColouredPattern.make(4, [(0, 1), (2, 3)], "aabb")
    assert aut_count_pattern(mixed) == 4


def test_pattern_rejects_isolated_vertices():
    with pytest.raises(GridError):
        ColouredPattern.make(3, [(0, 1)], "aaa")


@pytest.mark.parametrize(
    "g, tw",
    [
        (Graph(3, [(0, 1), (1, 2)]), 1),
        (Graph(5, [(i, (i + 1) % 5) for i in range(5)]), 2),
        (Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)]), 3),
        (Graph(5, [(u, v) for u in range(5) for v in range(u + 1, 5)]), 4),
        (Graph(9, [(3 * r + c, 3 * r + c + 1) for r in range(3) for c in range(2)]
               + [(3 * r + c, 3 * r + c + 3) for r in range(2) for c in range(3)]), 3),
        (Graph(3, []), 0),
    ],
)
def test_treewidth(g, tw):
    assert treewidth(g) == tw


def test_fracture_enumeration():
    H = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
    fr = list(enumerate_fractures(H))
    assert len(fr) == fracture_count(H) == bell(3) * bell(2) * bell(2) * bell(1)
    assert len(set(fr)) == len(fr)
    top_g, _ = fractured_graph(H, top_fracture(H))
    assert top_g == H
    bot_g, owner = fractured_graph(H, bottom_fracture(H))
    assert bot_g.n == 2 * H.m and all(bot_g.degree(v) == 1 for v in range(bot_g.n))
    assert sorted(owner) == sorted(v for v in range(H.n) for _ in H.inc[v])


def test_fractured_graph_skips_isolated_vertices():
    H = Graph(3, [(0, 1)])
    g, owner = fractured_graph(H, top_fracture(H))
    assert g.n == 2 and owner == [0, 1]


def test_fracture_mobius_from_local_mobius():
    H = Graph(3, [(0, 1), (0, 2)])
    bot, top = bottom_fracture(H), top_fracture(H)
    assert fracture_mobius(H, bot, top) == -1
    assert fracture_mobius(H, top, top) == 1
    # sum over the whole interval vanishes
    assert sum(fracture_mobius(H, s, top) for s in enumerate_fractures(H)) == 0


def test_quotient():
    H = Graph(4, [(0, 1), (1, 2), (2, 3)])
    q = quotient(H, SetPartition.from_blocks(4, [[0, 2], [1], [3]]))
    assert q.graph.edges == ((0, 1), (0, 2))
    assert q.loops == ()
    q2 = quotient(H, SetPartition.from_blocks(4, [[0, 1], [2, 3]]))
    assert q2.loops == (0, 1)


def test_signature_grid_checks():
    e = builtin("e", "even", [])
    m = builtin("m", "hw_le_1", [])
    g = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(GridError):
        SignatureGrid(g, [e, e])
    with pytest.raises(GridError):
        SignatureGrid(g, [e, e, e], edge_colours=[1])
    H = Graph(2, [(0, 1)])
    with pytest.raises(GridError):
        SignatureGrid(g, [e, e, e], h_colouring=[0, 0, 1], H=H)  # edge 0-1 to a loop
    with pytest.raises(GridError):
        SignatureGrid(g, [e, m, m], h_colouring=[0, 1, 0], H=H)  # class 0 mixes e and m
    grid = SignatureGrid(g, [e, m, e], h_colouring=[0, 1, 0], H=H)
    assert grid.k_colours == 1
    assert grid.h_edge_colours() == (1, 1)
    assert [s.name for s in grid.distinct_signatures()] == ["e", "m"]
    sub = grid.edge_subgrid([1])
    assert sub.graph.edges == ((1, 2),) and sub.colours() is None


def test_pattern_enumeration_limit():
    with pytest.raises(GridError):
        enumerate_patterns(["a"], 6)
