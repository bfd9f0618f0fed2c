"""Application front-ends: k-matchings, (colourful) factors, weight-k XOR-SAT."""
from __future__ import annotations

from itertools import combinations

from .grids import Graph, SignatureGrid
from .holant import HolantError, evaluate
from .scalars import RATIONAL, Field
from .classifier import indicator_kind
from .signatures import Signature, SignatureError, builtin

__all__ = [
    "count_matchings",
    "enumerate_matchings",
    "count_factors",
    "xor_grid",
    "xor_weight",
    "xor_weight_brute",
]


def _as_int(x, F: Field) -> int:
    if F.kind == "gf":
        return int(F(x).v)
    v = F(x)
    if F.kind == "gaussian":
        if v.im:
            raise HolantError(f"non-real count {v}")
        v = v.re
    if v.denominator != 1:
        raise HolantError(f"non-integral count {v}")
    return int(v.numerator)


def count_matchings(graph: Graph, k: int, colourful: bool = False, colours=None, F: Field = RATIONAL,
                    route: str = "auto") -> int:
    """Number of k-matchings (colourful: one edge of each colour 1..k)."""
    if graph.n == 0:
        return 1 if k == 0 else 0
    hw = builtin("hw_le_1", "hw_le_1", [], F)
    if colourful:
        if colours is None:
            raise HolantError("colourful matchings need an edge colouring")
        grid = SignatureGrid(graph, [hw] * graph.n, edge_colours=colours)
        return _as_int(evaluate(grid, k, "coloured", route).value, F)
    grid = SignatureGrid(graph, [hw] * graph.n)
    return _as_int(evaluate(grid, k, "uncoloured", route).value, F)


def enumerate_matchings(graph: Graph, k: int, colours=None) -> int:
    """Independent enumerator: pairwise disjoint k-edge sets (colourful if colours given)."""
    edges = graph.edges
    count = 0

    def rec(start: int, used: set[int], left: int, seen_colours: set[int]):
        nonlocal count
        if left == 0:
            count += 1
            return
        for i in range(start, len(edges)):
            u, v = edges[i]
            if u in used or v in used:
                continue
            if colours is not None:
                c = colours[i]
                if c in seen_colours or c > k:
                    continue
                seen_colours.add(c)
            used.update((u, v))
            rec(i + 1, used, left - 1, seen_colours)
            used.difference_update((u, v))
            if colours is not None:
                seen_colours.discard(colours[i])

    rec(0, set(), k, set())
    return count


def count_factors(grid: SignatureGrid, k: int | None, coloured: bool = False, route: str = "auto") -> int:
    """Number of f-factors of size k (or colourful ones) for 0/1 indicator signatures."""
    for s in grid.distinct_signatures():
        try:
            indicator_kind(s)
        except SignatureError as exc:
            raise HolantError(str(exc)) from None
    mode = "coloured" if coloured else "uncoloured"
    return _as_int(evaluate(grid, k, mode, route).value, grid.field)


def xor_grid(matrix: list[list[int]], F: Field = RATIONAL) -> SignatureGrid:
    """Rows become `even` vertices, columns become edges.

    A column with one 1 hangs off an auxiliary vertex carrying the all-ones
    signature; a zero column is an edge between two such vertices (a free
    variable).
    """
    if not matrix:
        raise HolantError("empty matrix")
    rows, cols = len(matrix), len(matrix[0])
    if any(len(r) != cols for r in matrix):
        raise HolantError("ragged matrix")
    even = builtin("even", "even", [], F)
    one = Signature("one", (1,), "geom", 1, False, F)
    sigs: list[Signature] = [even] * rows
    labels = [f"r{i + 1}" for i in range(rows)]
    edges = []
    seen: dict[tuple[int, ...], int] = {}
    for j in range(cols):
        ones = [i for i in range(rows) if matrix[i][j]]
        if len(ones) > 2:
            raise HolantError(f"column {j + 1} has {len(ones)} ones (at most 2 allowed)")
        if len(ones) == 2:
            if tuple(ones) in seen:
                raise HolantError(f"columns {seen[tuple(ones)] + 1} and {j + 1} are equal (parallel edges)")
            seen[tuple(ones)] = j
        while len(ones) < 2:
            ones.append(len(sigs))
            sigs.append(one)
            labels.append(f"c{j + 1}.{len(ones)}")
        edges.append(tuple(ones))
    return SignatureGrid(Graph(len(sigs), edges), sigs, labels=labels)


def xor_weight(matrix: list[list[int]], k: int, F: Field = RATIONAL, route: str = "auto") -> int:
    """Number of x in GF(2)^cols of Hamming weight k with A x = 0."""
    grid = xor_grid(matrix, F)
    return _as_int(evaluate(grid, k, "uncoloured", route).value, F)


def xor_weight_brute(matrix: list[list[int]], k: int) -> int:
    rows, cols = len(matrix), len(matrix[0])
    total = 0
    for support in combinations(range(cols), k):
        if all(sum(matrix[i][j] for j in support) % 2 == 0 for i in range(rows)):
            total += 1
    return total
