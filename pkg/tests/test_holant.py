from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from holant_lab.grids import Graph, SignatureGrid
from holant_lab.holant import (
    HolantError,
    evaluate,
    forbidden_points,
    holant_brute_coloured,
    holant_brute_uncoloured,
    holant_coloured_via_inclusion_exclusion,
    holant_mod_p,
    holant_star_fast,
    holant_uncol_fast,
    holant_with_zeros,
)
from holant_lab.instances import random_instance
from holant_lab.scalars import GAUSSIAN, RATIONAL, prime_field
from holant_lab.signatures import Signature, builtin
from holant_lab.verify import run_trial


def naive(grid: SignatureGrid, k: int, colourful: bool = False):
    """Literal definition, written without the library's brute route."""
    F = grid.field
    edges = grid.graph.edges
    total = F.zero
    if colourful:
        cols = grid.colours()
        pools = [[i for i, c in enumerate(cols) if c == j] for j in range(1, k + 1)]
        choices = product(*pools)
    else:
        choices = combinations(range(len(edges)), k)
    for A in choices:
        w = F.one
        for v, s in enumerate(grid.signatures):
            w = w * s(sum(1 for i in A if v in edges[i]))
        total = total + w
    return total


def triangle(sig, colours=None):
    return SignatureGrid(Graph(3, [(0, 1), (1, 2), (0, 2)]), [sig] * 3, edge_colours=colours)


def K(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def test_triangle_matchings():
    hw = builtin("m", "hw_le_1", [])
    assert [evaluate(triangle(hw), k).value for k in range(4)] == [1, 3, 0, 0]


def test_even_triangle():
    e = builtin("e", "even", [])
    assert evaluate(triangle(e), 3).value == 1
    assert evaluate(triangle(e), 2).value == 0
    g = triangle(e, [1, 2, 3])
    for route in ("auto", "brute", "ie", "interp"):
        assert evaluate(g, None, "coloured", route).value == 1
    assert holant_mod_p(g, None, 2, "coloured").value == prime_field(2)(1)


def test_h_coloured_star_route_with_definitional_check():
    e = builtin("e", "even", [])
    H = K(3)
    grid = SignatureGrid(Graph(3, [(0, 1), (1, 2), (0, 2)]), [e] * 3, h_colouring=[0, 1, 2], H=H)
    assert holant_star_fast(grid, check=True).value == 1
    rng = random.Random(0)
    s = Signature("t", (2, -1, 3, 5), "zero")
    for _ in range(10):
        classes = [[0, 1], [2, 3], [4]]
        es = [(u, v) for a, b in H.edges for u in classes[a] for v in classes[b] if rng.random() < 0.7]
        g = Graph(5, es)
        grid = SignatureGrid(g, [s] * 5, h_colouring=[0, 0, 1, 1, 2], H=H)
        assert holant_star_fast(grid, check=True).value == naive(grid, 3, colourful=True)


def test_perfect_matchings_of_k4_by_interpolation():
    g = SignatureGrid(K(4), [builtin("h", "hw_eq_1", [])] * 4)
    res = evaluate(g, 2)
    assert res.route == "interpolation" and res.value == 3
    assert evaluate(g, 1).value == 0  # early-out: 2k < n0


def test_interpolation_mixed_signatures():
    rng = random.Random(4)
    z = Signature("z", (0, 2, -1), "zero", allows_zero=True)
    t = Signature("t", (3, 1, 1, 2), "zero")
    for _ in range(15):
        n = rng.randint(3, 7)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])
        grid = SignatureGrid(g, [rng.choice([z, t]) for _ in range(n)])
        for k in range(4):
            assert holant_with_zeros(grid, k, "uncoloured").value == naive(grid, k)


def test_forbidden_points():
    z = Signature("z", (0, 0, 4), "zero", allows_zero=True)
    t = Signature("t", (3, 1, 2), "zero")
    grid = SignatureGrid(Graph(2, [(0, 1)]), [z, t])
    # 0, s(0) = 3, and s(0) t(2) / s(2) = 3 * 4 / 2 = 6
    assert forbidden_points(grid) == {0, 3, 6}


def test_field_too_small():
    F2 = prime_field(2)
    h = builtin("h", "hw_eq_1", [], F2)
    grid = SignatureGrid(K(4), [h] * 4)
    with pytest.raises(HolantError, match="field too small"):
        evaluate(grid, 2)


def test_constant_zero_signature():
    z = Signature("z", (0,), "zero", allows_zero=True)
    grid = SignatureGrid(K(3), [z, builtin("m", "hw_le_1", []), builtin("m", "hw_le_1", [])])
    assert evaluate(grid, 1).value == 0


@pytest.mark.parametrize("F", [RATIONAL, GAUSSIAN, prime_field(3), prime_field(7)], ids=lambda F: F.spec())
def test_route_agreement_random(F):
    for i in range(40):
        inst = random_instance(random.Random(f"unit:{F.spec()}:{i}"), F)
        expected, got = run_trial(inst)
        k = inst.k
        direct = naive(inst.grid, k, colourful=inst.mode == "coloured")
        assert expected == direct
        for name, val in got:
            assert val is None or val == expected, (name, inst.describe())


def test_uncoloured_fast_over_gf2_uses_lift():
    F = prime_field(2)
    hw = builtin("m", "hw_le_1", [], F)
    grid = SignatureGrid(K(5), [hw] * 5)
    for k in range(4):
        assert holant_uncol_fast(grid, k).value == holant_brute_uncoloured(grid, k).value


def test_rescaling():
    rng = random.Random(9)
    t = Signature("t", (2, -1, 3), "zero")
    c = Fraction(3, 2)
    for _ in range(10):
        n = rng.randint(3, 6)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.6])
        base = SignatureGrid(g, [t] * n)
        scaled = SignatureGrid(g, [t.scaled(c)] * n)
        for k in range(4):
            assert evaluate(scaled, k).value == c ** n * evaluate(base, k).value


def test_inclusion_exclusion_matches_brute_on_edge_colours():
    rng = random.Random(12)
    t = Signature("t", (1, 2, -1), "zero")
    for _ in range(20):
        n = rng.randint(3, 6)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.6])
        k = rng.randint(1, 3)
        grid = SignatureGrid(g, [t] * n, edge_colours=[rng.randint(1, k) for _ in range(g.m)])
        assert (holant_coloured_via_inclusion_exclusion(grid, k).value
                == holant_brute_coloured(grid, k).value == naive(grid, k, colourful=True))


def test_route_errors():
    hw = builtin("m", "hw_le_1", [])
    h = builtin("h", "hw_eq_1", [])
    with pytest.raises(HolantError):
        evaluate(triangle(hw), 1, "uncoloured", "ie")
    with pytest.raises(HolantError):
        evaluate(triangle(h), 1, "uncoloured", "fast")
    with pytest.raises(HolantError):
        evaluate(triangle(hw), None, "uncoloured")
    with pytest.raises(HolantError):
        evaluate(triangle(hw), 1, "sideways")
    with pytest.raises(HolantError):
        evaluate(triangle(hw, [1, 1, 2]), None, "coloured", "fast")


def test_brute_limit_refusal():
    g = SignatureGrid(K(60), [builtin("m", "hw_le_1", [])] * 60)
    with pytest.raises(HolantError, match="refuses"):
        holant_brute_uncoloured(g, 4)


def test_stats_are_reported():
    res = evaluate(SignatureGrid(K(5), [builtin("m", "hw_le_1", [])] * 5), 2)
    assert res.route == "uncoloured_hombasis"
    assert res.stats.patterns > 0 and res.stats.hom_calls > 0
