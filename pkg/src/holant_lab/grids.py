"""Graphs, signature grids, quotients, fractures and coloured patterns."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from math import factorial, prod
from typing import Iterator, Sequence

from .partitions import SetPartition, bell, mobius, partitions_of
from .signatures import Signature

__all__ = [
    "GridError",
    "Graph",
    "SignatureGrid",
    "Quotient",
    "quotient",
    "Fracture",
    "enumerate_fractures",
    "top_fracture",
    "bottom_fracture",
    "fractured_graph",
    "fracture_mobius",
    "ColouredPattern",
    "canonical_form",
    "aut_count_pattern",
    "enumerate_patterns",
    "patterns_up_to",
    "treewidth",
    "CANON_LIMIT",
]

CANON_LIMIT = 10
FRACTURE_DEGREE_LIMIT = 8


class GridError(ValueError):
    pass


class Graph:
    """Simple undirected graph on 0..n-1 with positional edge indices."""

    __slots__ = ("n", "edges", "adj", "inc", "_edge_index")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]] = ()):
        self.n = n
        es = []
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GridError(f"edge ({u},{v}) out of range")
            if u == v:
                raise GridError(f"loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GridError(f"duplicate edge {key}")
            seen.add(key)
            es.append(key)
        self.edges: tuple[tuple[int, int], ...] = tuple(es)
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.inc: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(es):
            self.adj[u].append(v)
            self.adj[v].append(u)
            self.inc[u].append(i)
            self.inc[v].append(i)
        self._edge_index = {e: i for i, e in enumerate(es)}

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_index

    def edge_index(self, u: int, v: int) -> int:
        return self._edge_index[(min(u, v), max(u, v))]

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp, stack = [], [s]
            seen[s] = True
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_forest(self) -> bool:
        return self.m == self.n - len(self.components())

    def induced(self, verts: Sequence[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on verts (relabelled in the given order)."""
        pos = {v: i for i, v in enumerate(verts)}
        es = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph(len(verts), es), list(verts)

    def disjoint_union(self, other: "Graph") -> "Graph":
        return Graph(self.n + other.n, list(self.edges) + [(u + self.n, v + self.n) for u, v in other.edges])

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph({self.n}, {list(self.edges)})"


class SignatureGrid:
    """A graph with a signature per vertex, optionally edge- or H-coloured.

    edge_colours are 1..k; h_colouring maps each vertex to a vertex of the
    pattern graph H and must be a homomorphism with constant signatures on
    the colour classes.
    """

    def __init__(self, graph: Graph, signatures: Sequence[Signature], *, labels: Sequence[str] | None = None,
                 edge_colours: Sequence[int] | None = None, h_colouring: Sequence[int] | None = None,
                 H: Graph | None = None, h_labels: Sequence[str] | None = None,
                 extra_hedges: Sequence[tuple[str, str]] = (), written_edges: Sequence[tuple[int, int]] | None = None):
        if len(signatures) != graph.n:
            raise GridError("one signature per vertex required")
        self.graph = graph
        self.signatures = tuple(signatures)
        self.labels = tuple(labels) if labels is not None else tuple(str(i + 1) for i in range(graph.n))
        fields = {s.field for s in self.signatures}
        if len(fields) > 1:
            raise GridError("signatures over different fields")
        self.field = fields.pop() if fields else None
        self.edge_colours = None
        if edge_colours is not None:
            if len(edge_colours) != graph.m:
                raise GridError("one colour per edge required")
            if any(c < 1 for c in edge_colours):
                raise GridError("edge colours must be positive")
            self.edge_colours = tuple(edge_colours)
        self.h_colouring = None
        self.H = None
        if h_colouring is not None:
            if H is None:
                raise GridError("h-colouring needs a pattern graph H")
            h = tuple(h_colouring)
            if len(h) != graph.n or any(not 0 <= x < H.n for x in h):
                raise GridError("h-colouring must map every vertex into V(H)")
            for u, v in graph.edges:
                if not H.has_edge(h[u], h[v]):
                    raise GridError(f"h-colouring maps edge {self.labels[u]}-{self.labels[v]} to a non-edge of H")
            rep: dict[int, Signature] = {}
            for v, x in enumerate(h):
                if rep.setdefault(x, self.signatures[v]) != self.signatures[v]:
                    raise GridError(f"h-colour class {x + 1} carries different signatures")
            self.h_colouring = h
            self.H = H
        self.h_labels = tuple(h_labels) if h_labels is not None else None
        self.extra_hedges = tuple(extra_hedges)
        # endpoint order as read from a file, kept only for faithful re-emission
        if written_edges is not None and [tuple(sorted(e)) for e in written_edges] != list(graph.edges):
            raise GridError("written edge order disagrees with the graph")
        self.written_edges = tuple(written_edges) if written_edges is not None else graph.edges

    @property
    def k_colours(self) -> int:
        if self.edge_colours is not None:
            return max(self.edge_colours, default=0)
        if self.H is not None:
            return self.H.m
        return 0

    def h_edge_colours(self) -> tuple[int, ...]:
        """Edge colouring induced by the H-colouring (1-based H edge index)."""
        h = self.h_colouring
        return tuple(self.H.edge_index(h[u], h[v]) + 1 for u, v in self.graph.edges)

    def colours(self) -> tuple[int, ...] | None:
        if self.edge_colours is not None:
            return self.edge_colours
        if self.h_colouring is not None:
            return self.h_edge_colours()
        return None

    def distinct_signatures(self) -> list[Signature]:
        out: list[Signature] = []
        for s in self.signatures:
            if s not in out:
                out.append(s)
        return out

    def with_signatures(self, sigs: Sequence[Signature]) -> "SignatureGrid":
        return SignatureGrid(self.graph, sigs, labels=self.labels, edge_colours=self.edge_colours,
                             h_colouring=self.h_colouring, H=self.H, h_labels=self.h_labels,
                             extra_hedges=self.extra_hedges, written_edges=self.written_edges)

    def edge_subgrid(self, keep: Sequence[int]) -> "SignatureGrid":
        """Same vertices, only the edges with the given indices, uncoloured."""
        g = Graph(self.graph.n, [self.graph.edges[i] for i in keep])
        return SignatureGrid(g, self.signatures, labels=self.labels)

    def uncoloured(self) -> "SignatureGrid":
        return SignatureGrid(self.graph, self.signatures, labels=self.labels)


# -- quotients and fractures ----------------------------------------------

@dataclass(frozen=True)
class Quotient:
    graph: Graph
    loops: tuple[int, ...]
    block_of: tuple[int, ...]


def quotient(H: Graph, rho: SetPartition) -> Quotient:
    if rho.ground_size != H.n:
        raise GridError("partition does not cover V(H)")
    where = rho.block_of()
    es, loops = set(), set()
    for u, v in H.edges:
        a, b = where[u], where[v]
        if a == b:
            loops.add(a)
        else:
            es.add((min(a, b), max(a, b)))
    return Quotient(Graph(len(rho), sorted(es)), tuple(sorted(loops)), tuple(where))


@dataclass(frozen=True)
class Fracture:
    """parts[v] is a tuple of blocks, each a sorted tuple of edge indices at v."""

    parts: tuple[tuple[tuple[int, ...], ...], ...]

    def block_count(self) -> int:
        return sum(len(p) for p in self.parts)


def _check_degree(H: Graph):
    if any(H.degree(v) > FRACTURE_DEGREE_LIMIT for v in range(H.n)):
        raise GridError(f"fracture enumeration limited to degree <= {FRACTURE_DEGREE_LIMIT}")


def enumerate_fractures(H: Graph) -> Iterator[Fracture]:
    _check_degree(H)
    per_vertex = []
    for v in range(H.n):
        opts = [tuple(tuple(sorted(b)) for b in bl) for bl in partitions_of(H.inc[v])]
        per_vertex.append(opts)
    for choice in product(*per_vertex):
        yield Fracture(tuple(choice))


def fracture_count(H: Graph) -> int:
    return prod(bell(H.degree(v)) for v in range(H.n))


def top_fracture(H: Graph) -> Fracture:
    return Fracture(tuple((tuple(H.inc[v]),) if H.inc[v] else () for v in range(H.n)))


def bottom_fracture(H: Graph) -> Fracture:
    return Fracture(tuple(tuple((e,) for e in H.inc[v]) for v in range(H.n)))


def fractured_graph(H: Graph, rho: Fracture) -> tuple[Graph, list[int]]:
    """Split every vertex by its blocks; returns the graph and v^B -> v."""
    index: dict[tuple[int, int], int] = {}
    colour: list[int] = []
    for v in range(H.n):
        blocks = rho.parts[v]
        if sorted(e for b in blocks for e in b) != sorted(H.inc[v]):
            raise GridError(f"fracture at vertex {v} does not partition its incident edges")
        for b in blocks:
            for e in b:
                index[(v, e)] = len(colour)
            colour.append(v)
    es = [(index[(u, i)], index[(v, i)]) for i, (u, v) in enumerate(H.edges)]
    return Graph(len(colour), es), colour


def _local(H: Graph, v: int, blocks) -> SetPartition:
    pos = {e: i for i, e in enumerate(H.inc[v])}
    return SetPartition.from_blocks(len(pos), [[pos[e] for e in b] for b in blocks])


def fracture_mobius(H: Graph, sigma: Fracture, rho: Fracture) -> int:
    return prod(mobius(_local(H, v, sigma.parts[v]), _local(H, v, rho.parts[v])) for v in range(H.n)
                if H.inc[v])


# -- coloured patterns ------------------------------------------------------

@dataclass(frozen=True)
class ColouredPattern:
    """A graph without isolated vertices plus a colour (signature name) per vertex."""

    n: int
    edges: tuple[tuple[int, int], ...]
    colours: tuple[str, ...]

    def __post_init__(self):
        g = self.graph
        if len(self.colours) != self.n:
            raise GridError("one colour per pattern vertex required")
        if any(g.degree(v) == 0 for v in range(self.n)):
            raise GridError("patterns have no isolated vertices")

    @classmethod
    def make(cls, n: int, edges, colours) -> "ColouredPattern":
        es = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        return cls(n, es, tuple(colours))

    @property
    def graph(self) -> Graph:
        return _graph_cache(self.n, self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def canonical(self) -> str:
        return canonical_form(self)

    def __str__(self):
        return canonical_form(self)


@lru_cache(maxsize=65536)
def _graph_cache(n: int, edges: tuple) -> Graph:
    return Graph(n, edges)


def _refine(n: int, adj: list[list[int]], init: list) -> list[int]:
    """Colour refinement; returns isomorphism-invariant integer cell ranks."""
    keys = sorted(set(init))
    label = [keys.index(x) for x in init]
    while True:
        sig = [(label[v], tuple(sorted(label[u] for u in adj[v]))) for v in range(n)]
        keys = sorted(set(sig))
        new = [keys.index(s) for s in sig]
        if len(keys) == len(set(label)):
            return new
        label = new


def _cell_orders(n: int, cells: list[int]) -> Iterator[list[int]]:
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(cells[v], []).append(v)
    ordered = [groups[c] for c in sorted(groups)]
    for choice in product(*(permutations(g) for g in ordered)):
        yield [v for part in choice for v in part]


def _component_key(n: int, edges, colours) -> tuple:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    cells = _refine(n, adj, list(colours))
    best = None
    for order in _cell_orders(n, cells):
        pos = {v: i for i, v in enumerate(order)}
        key = (tuple(colours[v] for v in order),
               tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in edges)))
        if best is None or key < best:
            best = key
    return best


def _components(P: ColouredPattern):
    g = P.graph
    for comp in g.components():
        sub, verts = g.induced(comp)
        yield len(comp), sub.edges, tuple(P.colours[v] for v in verts)


def _key_string(key) -> str:
    colours, edges = key
    return ",".join(colours) + ":" + ",".join(f"{u}-{v}" for u, v in edges)


@lru_cache(maxsize=None)
def canonical_form(P: ColouredPattern) -> str:
    """Equal strings iff colour-isomorphic (component forms, sorted, '|'-joined)."""
    if P.n > CANON_LIMIT:
        raise GridError(f"canonical forms limited to {CANON_LIMIT} vertices")
    return "|".join(sorted(_key_string(_component_key(*c)) for c in _components(P)))


def _component_auts(n: int, edges, colours) -> int:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    cells = _refine(n, adj, list(colours))
    eset = {(min(u, v), max(u, v)) for u, v in edges}
    base = sorted(range(n), key=lambda v: (cells[v], v))
    count = 0
    for order in _cell_orders(n, cells):
        pi = dict(zip(base, order))
        if all((min(pi[u], pi[v]), max(pi[u], pi[v])) in eset for u, v in eset):
            count += 1
    return count


@lru_cache(maxsize=None)
def aut_count_pattern(P: ColouredPattern) -> int:
    """Colour-preserving automorphisms: per component, times swaps of equal components."""
    if P.n > CANON_LIMIT:
        raise GridError(f"automorphism counting limited to {CANON_LIMIT} vertices")
    comps = list(_components(P))
    total = prod(_component_auts(*c) for c in comps)
    counts = Counter(_key_string(_component_key(*c)) for c in comps)
    return total * prod(factorial(c) for c in counts.values())


def _extensions(P: ColouredPattern, colours: Sequence[str]) -> Iterator[ColouredPattern]:
    n, es = P.n, list(P.edges)
    for a in colours:
        for b in colours:
            if a <= b:
                yield ColouredPattern.make(n + 2, es + [(n, n + 1)], P.colours + (a, b))
    for v in range(n):
        for c in colours:
            yield ColouredPattern.make(n + 1, es + [(v, n)], P.colours + (c,))
    eset = set(es)
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in eset:
                yield ColouredPattern.make(n, es + [(u, v)], P.colours)


@lru_cache(maxsize=None)
def _patterns_exact(colours: tuple[str, ...], k: int) -> tuple[ColouredPattern, ...]:
    if k == 0:
        return (ColouredPattern(0, (), ()),)
    seen: dict[str, ColouredPattern] = {}
    for P in _patterns_exact(colours, k - 1):
        for Q in _extensions(P, colours):
            key = canonical_form(Q)
            if key not in seen:
                seen[key] = Q
    return tuple(seen[key] for key in sorted(seen))


def enumerate_patterns(S: Sequence, k: int) -> list[ColouredPattern]:
    """One representative per colour-isomorphism class with exactly k edges.

    S may hold Signatures or plain colour names.
    """
    if k > 5:
        raise GridError("pattern enumeration limited to k <= 5")
    names = tuple(sorted({s.name if isinstance(s, Signature) else str(s) for s in S}))
    if k == 0:
        return []
    return list(_patterns_exact(names, k))


def patterns_up_to(S: Sequence, k: int) -> list[ColouredPattern]:
    out: list[ColouredPattern] = []
    for j in range(1, k + 1):
        out.extend(enumerate_patterns(S, j))
    return out


def treewidth(g: Graph) -> int:
    """Exact treewidth by dynamic programming over vertex subsets."""
    n = g.n
    if g.m == 0:
        return 0
    if n > 16:
        raise GridError("exact treewidth limited to 16 vertices")
    nbr = [0] * n
    for u, v in g.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u

    def q(S: int, v: int) -> int:
        # vertices outside S + v reachable from v through S
        seen = 1 << v
        frontier = [v]
        out = 0
        while frontier:
            x = frontier.pop()
            m = nbr[x] & ~seen
            seen |= m
            while m:
                low = m & -m
                y = low.bit_length() - 1
                m ^= low
                if S >> y & 1:
                    frontier.append(y)
                else:
                    out += 1
        return out

    full = (1 << n) - 1
    tw = {0: -1}
    for S in range(1, full + 1):
        best = n
        m = S
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            rest = S ^ low
            val = max(tw[rest], q(rest, v))
            if val < best:
                best = val
        tw[S] = best
    return tw[full]
