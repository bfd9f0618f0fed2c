from __future__ import annotations

import random
from itertools import product

import pytest

from holant_lab import kernels
from holant_lab.grids import ColouredPattern, Graph, SignatureGrid, top_fracture, treewidth
from holant_lab.homcount import (
    HomCountError,
    TreewidthError,
    check_tree_decomposition,
    count_cp_homs,
    count_homs,
    count_homs_brute,
    count_homs_tree,
    count_homs_tw2,
    count_list_homs,
    count_partial_extensions,
    tw2_decomposition,
)
from holant_lab.signatures import builtin


def naive_homs(g: Graph, host: Graph, lists=None) -> int:
    """Product over all maps; the oracle for every engine."""
    L = [range(host.n) if lists is None else sorted(lists[v]) for v in range(g.n)]
    return sum(1 for f in product(*L) if all(host.has_edge(f[u], f[v]) for u, v in g.edges))


def random_graph(rng, n, p):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_tw2_pattern(rng, max_n=6):
    while True:
        n = rng.randint(2, max_n)
        g = random_graph(rng, n, rng.uniform(0.3, 0.8))
        if g.m and all(g.degree(v) for v in range(n)) and treewidth(g) <= 2:
            return g


def complete(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def test_small_known_counts():
    assert count_homs(complete(3), complete(4)) == 24
    assert count_homs(cycle(4), complete(3)) == 18
    assert count_homs(Graph(2, [(0, 1)]), cycle(5)) == 10


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_random_pairs_against_naive(backend):
    rng = random.Random(2024)
    with kernels.use_backend(backend):
        for trial in range(220):
            g = random_tw2_pattern(rng)
            host = random_graph(rng, rng.randint(2, 7), rng.uniform(0.2, 0.9))
            lists = None
            if trial % 2:
                lists = [set(x for x in range(host.n) if rng.random() < 0.7) for _ in range(g.n)]
            expected = naive_homs(g, host, lists)
            assert count_homs_tw2(g, host, lists) == expected
            assert count_homs_brute(g, host, lists) == expected
            assert count_list_homs(g, host, lists or [range(host.n)] * g.n) == expected
            if g.is_forest():
                assert count_homs_tree(g, host, lists) == expected


def test_tree_dp_on_forests():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(2, 7)
        es = [(v, rng.randrange(v)) for v in range(1, n)]
        g = Graph(n, rng.sample(es, rng.randint(1, len(es))))
        host = random_graph(rng, rng.randint(2, 6), 0.6)
        assert count_homs_tree(g, host) == naive_homs(g, host)


def test_tree_dp_rejects_cycles():
    with pytest.raises(HomCountError):
        count_homs_tree(cycle(3), complete(3))


def test_decomposition_is_valid():
    rng = random.Random(11)
    checked = 0
    while checked < 100:
        g = random_tw2_pattern(rng, 8)
        if len(g.components()) != 1:
            continue
        check_tree_decomposition(g, tw2_decomposition(g))
        checked += 1


def test_decomposition_rejects_k4():
    with pytest.raises(TreewidthError):
        tw2_decomposition(complete(4))
    with pytest.raises(TreewidthError):
        count_homs_tw2(complete(4), complete(5))
    # the dispatcher falls back to brute force
    assert count_homs(complete(4), complete(5)) == 120


def test_checker_catches_broken_decomposition():
    g = cycle(4)
    td = tw2_decomposition(g)
    bad = type(td)(td.n, td.number, td.root, tuple((a, b, b) for a, b, _ in td.bags), td.parent)
    with pytest.raises(AssertionError):
        check_tree_decomposition(g, bad)


def test_multiplicativity_and_doubling():
    rng = random.Random(3)
    for _ in range(30):
        a, b = random_tw2_pattern(rng, 4), random_tw2_pattern(rng, 4)
        host = random_graph(rng, 6, 0.6)
        assert count_homs(a.disjoint_union(b), host) == count_homs(a, host) * count_homs(b, host)
        if len(a.components()) == 1:
            assert count_homs(a, host.disjoint_union(host)) == 2 * count_homs(a, host)


def test_exact_beyond_machine_words():
    n = 400
    star = Graph(8, [(0, i) for i in range(1, 8)])
    assert count_homs(star, complete(n)) == n * (n - 1) ** 7
    assert count_homs(cycle(5), complete(n)) == (n - 1) ** 5 - (n - 1)
    theta = Graph(5, [(0, 1), (1, 4), (0, 2), (2, 4), (0, 3), (3, 4)])
    # K_{2,3}: choose images a, b of the poles, each middle vertex is a common neighbour
    k = 60
    expected = k * (k - 1) ** 3 + k * (k - 1) * (k - 2) ** 3
    assert count_homs(theta, complete(k)) == expected


def test_coloured_pattern_respects_classes():
    m, e = builtin("m", "hw_le_1", []), builtin("e", "even", [])
    host = complete(4)
    grid = SignatureGrid(host, [m, m, e, e])
    P = ColouredPattern.make(2, [(0, 1)], ["m", "e"])
    assert count_homs(P, grid) == 2 * 2
    P2 = ColouredPattern.make(3, [(0, 1), (1, 2)], ["m", "m", "m"])
    assert count_homs(P2, grid) == 2


def test_cp_homs_top_fracture_counts_colourful_copies():
    # H = triangle; host = two disjoint triangles, h-coloured consistently
    H = cycle(3)
    host = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    e = builtin("e", "even", [])
    grid = SignatureGrid(host, [e] * 6, h_colouring=[0, 1, 2, 0, 1, 2], H=H)
    assert count_cp_homs(H, top_fracture(H), grid) == 2


def test_partial_extensions():
    rng = random.Random(8)
    for _ in range(40):
        g = random_tw2_pattern(rng, 5)
        host = random_graph(rng, 5, 0.7)
        X = [0]
        total = sum(count_partial_extensions(g, host, X, [x]) for x in range(host.n))
        assert total == naive_homs(g, host)


def test_partial_extension_validation():
    with pytest.raises(HomCountError):
        count_partial_extensions(cycle(3), complete(3), [0, 1], {0: 1})
