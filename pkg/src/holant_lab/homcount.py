"""Counting (list-restricted, colour-preserving) homomorphisms.

Three engines: exhaustive backtracking (the oracle), a tree DP for forest
patterns, and a treewidth-2 DP whose inner step is one matrix product per
bag.  The DPs run modulo several primes and recombine by CRT, so results are
exact integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .grids import ColouredPattern, Fracture, Graph, SignatureGrid, fractured_graph
from .kernels import crt, matmul_mod, neighbour_sum, primes_for_bound

__all__ = [
    "HomCountError",
    "TreewidthError",
    "Host",
    "host_of",
    "TreeDecomp",
    "tw2_decomposition",
    "check_tree_decomposition",
    "count_homs_brute",
    "count_homs_tree",
    "count_homs_tw2",
    "count_homs",
    "count_list_homs",
    "count_cp_homs",
    "count_partial_extensions",
    "BRUTE_PATTERN_LIMIT",
]

BRUTE_PATTERN_LIMIT = 8


class HomCountError(ValueError):
    pass


class TreewidthError(HomCountError):
    pass


class Host:
    """Read-only host index: CSR adjacency plus a lazily built dense matrix."""

    def __init__(self, graph: Graph, colours: Sequence[str] | None = None,
                 edge_colours: Sequence[int] | None = None):
        self.graph = graph
        self.n = graph.n
        self.colours = tuple(colours) if colours is not None else None
        self.edge_colours = tuple(edge_colours) if edge_colours is not None else None
        deg = np.array([len(a) for a in graph.adj], dtype=np.int64)
        self.indptr = np.zeros(graph.n + 1, dtype=np.int64)
        np.cumsum(deg, out=self.indptr[1:])
        self.indices = np.fromiter((w for a in graph.adj for w in a), dtype=np.int64, count=int(deg.sum()))
        self.neigh = [frozenset(a) for a in graph.adj]
        self._dense = None

    @property
    def dense(self) -> np.ndarray:
        if self._dense is None:
            a = np.zeros((self.n, self.n), dtype=np.int64)
            if self.graph.m:
                e = np.array(self.graph.edges, dtype=np.int64)
                a[e[:, 0], e[:, 1]] = 1
                a[e[:, 1], e[:, 0]] = 1
            self._dense = a
        return self._dense

    def class_of(self, colour: str) -> frozenset[int]:
        if self.colours is None:
            return frozenset(range(self.n))
        return frozenset(v for v, c in enumerate(self.colours) if c == colour)


_HOSTS: dict[int, tuple[object, Host]] = {}


def host_of(obj) -> Host:
    """Host index for a Graph or SignatureGrid (cached per object)."""
    if isinstance(obj, Host):
        return obj
    cached = _HOSTS.get(id(obj))
    if cached is not None and cached[0] is obj:
        return cached[1]
    if isinstance(obj, SignatureGrid):
        h = Host(obj.graph, [s.name for s in obj.signatures], obj.colours())
    elif isinstance(obj, Graph):
        h = Host(obj)
    else:
        raise TypeError(f"not a host: {obj!r}")
    if len(_HOSTS) > 256:
        _HOSTS.clear()
    _HOSTS[id(obj)] = (obj, h)
    return h


def _pattern_parts(P) -> tuple[Graph, tuple[str, ...] | None]:
    if isinstance(P, ColouredPattern):
        return P.graph, P.colours
    if isinstance(P, Graph):
        return P, None
    raise TypeError(f"not a pattern: {P!r}")


def _final_lists(P, host: Host, lists) -> list[frozenset[int]]:
    g, colours = _pattern_parts(P)
    out = []
    for v in range(g.n):
        allowed = frozenset(range(host.n)) if lists is None or lists[v] is None else frozenset(lists[v])
        if colours is not None and host.colours is not None:
            allowed &= host.class_of(colours[v])
        out.append(allowed)
    return out


# -- brute force --------------------------------------------------------------

def _brute(g: Graph, host: Host, lists: list[frozenset[int]], pattern_edge_colours=None) -> int:
    n = g.n
    if n == 0:
        return 1
    order: list[int] = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    pos = {v: i for i, v in enumerate(order)}
    back = [[w for w in g.adj[v] if pos[w] < pos[v]] for v in order]
    ecol = None
    if pattern_edge_colours is not None:
        if host.edge_colours is None:
            raise HomCountError("edge-coloured pattern needs an edge-coloured host")
        ecol = {}
        for i, (u, v) in enumerate(g.edges):
            ecol[(u, v)] = ecol[(v, u)] = pattern_edge_colours[i]
        hcol = {}
        for i, (x, y) in enumerate(host.graph.edges):
            hcol[(x, y)] = hcol[(y, x)] = host.edge_colours[i]
    phi = [0] * n

    def rec(i: int) -> int:
        if i == n:
            return 1
        v = order[i]
        cand = lists[v]
        for w in back[i]:
            cand = cand & host.neigh[phi[w]]
        total = 0
        for x in cand:
            if ecol is not None and any(hcol[(x, phi[w])] != ecol[(v, w)] for w in back[i]):
                continue
            phi[v] = x
            total += rec(i + 1)
        return total

    return rec(0)


def count_homs_brute(P, host, lists=None, edge_colours=None) -> int:
    """Exhaustive count of homomorphisms respecting colours, lists and edge colours."""
    g, _ = _pattern_parts(P)
    if g.n > BRUTE_PATTERN_LIMIT:
        raise HomCountError(f"brute force limited to {BRUTE_PATTERN_LIMIT} pattern vertices")
    h = host_of(host)
    return _brute(g, h, _final_lists(P, h, lists), edge_colours)


# -- tree DP ----------------------------------------------------------------

def _mask_matrix(lists_sub, n, primes) -> np.ndarray:
    masks = np.zeros((len(lists_sub), n), dtype=np.int64)
    for i, L in enumerate(lists_sub):
        if L:
            masks[i, np.fromiter(L, dtype=np.int64, count=len(L))] = 1
    return masks


def _tree_component(g: Graph, comp: list[int], host: Host, lists) -> int:
    if len(comp) == 1:
        return len(lists[comp[0]])
    bound = prod(len(lists[v]) for v in comp)
    if bound == 0:
        return 0
    primes = primes_for_bound(bound)
    q = np.array(primes, dtype=np.int64)
    root = comp[0]
    parent = {root: -1}
    order = [root]
    for x in order:
        for y in g.adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    masks = {v: _mask_matrix([lists[v]], host.n, primes)[0] for v in comp}
    vec: dict[int, np.ndarray] = {}
    for v in reversed(order):
        acc = np.broadcast_to(masks[v], (len(primes), host.n)).copy()
        for c in g.adj[v]:
            if parent.get(c) == v:
                acc = (acc * neighbour_sum(host.indptr, host.indices, vec.pop(c), q)) % q[:, None]
        vec[v] = acc
    totals = vec[root].sum(axis=1) % q
    return crt(totals, primes)


def count_homs_tree(P, host, lists=None) -> int:
    g, _ = _pattern_parts(P)
    if not g.is_forest():
        raise HomCountError("tree DP needs an acyclic pattern")
    h = host_of(host)
    L = _final_lists(P, h, lists)
    return prod(_tree_component(g, comp, h, L) for comp in g.components())


# -- treewidth 2 ----------------------------------------------------------------

@dataclass(frozen=True)
class TreeDecomp:
    """Normal-form decomposition of a connected pattern of treewidth <= 2.

    number[v] is the position of pattern vertex v in the topological
    numbering; root is the root bag (two vertices); bags[i] = (u1, u2, u3)
    sorted by number with u3 the bag's own vertex; parent[i] is the index of
    the parent bag or -1 for the root.
    """

    n: int
    number: tuple[int, ...]
    root: tuple[int, ...]
    bags: tuple[tuple[int, int, int], ...]
    parent: tuple[int, ...]

    def separator(self, i: int) -> tuple[int, int]:
        return self.bags[i][0], self.bags[i][1]


def tw2_decomposition(P) -> TreeDecomp:
    g, _ = _pattern_parts(P)
    if g.n < 2 or len(g.components()) != 1:
        raise TreewidthError("normal-form decomposition needs a connected pattern with >= 2 vertices")
    nb = [set(a) for a in g.adj]
    alive = set(range(g.n))
    elim: list[tuple[int, int, int]] = []
    while len(alive) > 2:
        v = min(alive, key=lambda x: (len(nb[x]), x))
        if len(nb[v]) > 2:
            raise TreewidthError("degree-2 reduction stalled: treewidth > 2")
        if len(nb[v]) == 1:
            (a,) = nb[v]
            b = min(nb[a] - {v})
        else:
            a, b = sorted(nb[v])
            nb[a].add(b)
            nb[b].add(a)
        for w in nb[v]:
            nb[w].discard(v)
        nb[v] = set()
        alive.discard(v)
        elim.append((v, a, b))
    r1, r2 = sorted(alive)
    seq = [r1, r2] + [v for v, _, _ in reversed(elim)]
    number = [0] * g.n
    for i, v in enumerate(seq):
        number[v] = i
    when = {v: i for i, (v, _, _) in enumerate(elim)}
    bag_of = {v: i for i, (v, _, _) in enumerate(elim)}
    bags, parent = [], []
    for v, a, b in elim:
        u1, u2 = sorted((a, b), key=lambda x: number[x])
        bags.append((u1, u2, v))
        later = [x for x in (a, b) if x in when]
        parent.append(bag_of[min(later, key=lambda x: when[x])] if later else -1)
    return TreeDecomp(g.n, tuple(number), (r1, r2), tuple(bags), tuple(parent))


def check_tree_decomposition(g: Graph, td: TreeDecomp) -> None:
    """Independent validity check; raises AssertionError on violation."""
    all_bags = [set(td.root)] + [set(b) for b in td.bags]
    par = [-1] + [p + 1 for p in td.parent]  # bag index 0 is the root
    # cover
    assert set().union(*all_bags) == set(range(g.n)), "vertices not covered"
    for u, v in g.edges:
        assert any(u in b and v in b for b in all_bags), f"edge {u}-{v} not covered"
    # sizes and separators
    assert len(all_bags[0]) == 2
    for i in range(1, len(all_bags)):
        assert len(all_bags[i]) == 3, "non-root bag must have 3 vertices"
        sep = all_bags[i] & all_bags[par[i]]
        assert len(sep) == 2, "separator must have 2 vertices"
        u1, u2, u3 = td.bags[i - 1]
        assert td.number[u1] < td.number[u2] < td.number[u3]
        assert sep == {u1, u2}
    # occurrence sets connected: each vertex's bags form a subtree
    for v in range(g.n):
        occ = [i for i, b in enumerate(all_bags) if v in b]
        tops = [i for i in occ if par[i] == -1 or v not in all_bags[par[i]]]
        assert len(tops) == 1, f"occurrences of {v} disconnected"


def _tw2_component(g: Graph, comp: list[int], host: Host, lists) -> int:
    sub, verts = g.induced(comp)
    L = [lists[v] for v in verts]
    bound = prod(len(x) for x in L)
    if bound == 0:
        return 0
    td = tw2_decomposition(sub)
    primes = primes_for_bound(bound)
    masks = _mask_matrix(L, host.n, primes)
    A = host.dense
    residues = []
    for q in primes:
        def J(u: int, v: int) -> np.ndarray:
            outer = np.outer(masks[u], masks[v])
            return outer * A if sub.has_edge(u, v) else outer

        pending: dict[tuple[int, int, int], np.ndarray] = {}

        def alpha(node: int, u: int, v: int) -> np.ndarray:
            m = J(u, v)
            extra = pending.pop((node, u, v), None)
            return m if extra is None else (m * extra) % q

        def deliver(node: int, sep: tuple[int, int], table: np.ndarray):
            key = (node, sep[0], sep[1])
            prev = pending.get(key)
            pending[key] = table if prev is None else (prev * table) % q

        for i, (u1, u2, u3) in enumerate(td.bags):
            a12 = alpha(i, u1, u2)
            a13 = alpha(i, u1, u3)
            a23 = alpha(i, u2, u3)
            h = (a12 * matmul_mod(a13, a23.T, q)) % q
            deliver(td.parent[i], (u1, u2), h)
        r1, r2 = sorted(td.root, key=lambda x: td.number[x])
        final = alpha(-1, r1, r2)
        residues.append(int(final.sum() % q))
    return crt(residues, primes)


def count_homs_tw2(P, host, lists=None) -> int:
    g, _ = _pattern_parts(P)
    h = host_of(host)
    Lf = _final_lists(P, h, lists)
    total = 1
    for comp in g.components():
        if len(comp) == 1:
            total *= len(Lf[comp[0]])
        else:
            total *= _tw2_component(g, comp, h, Lf)
        if total == 0:
            return 0
    return total


# -- dispatch ---------------------------------------------------------------

def _component_count(g: Graph, comp: list[int], host: Host, L) -> tuple[int, str]:
    if len(comp) == 1:
        return len(L[comp[0]]), "tree"
    sub, verts = g.induced(comp)
    if sub.is_forest():
        return _tree_component(g, comp, host, L), "tree"
    try:
        return _tw2_component(g, comp, host, L), "tw2"
    except TreewidthError:
        pass
    if len(comp) > BRUTE_PATTERN_LIMIT:
        raise HomCountError("pattern component too large for brute force")
    return _brute(sub, host, [L[v] for v in verts]), "brute"


def count_list_homs(g: Graph, host, lists) -> int:
    """Homomorphisms of g into host with per-vertex lists, componentwise."""
    h = host_of(host)
    L = [frozenset(x) for x in lists]
    total = 1
    for comp in g.components():
        c, _ = _component_count(g, comp, h, L)
        total *= c
        if total == 0:
            return 0
    return total


def count_homs(P, host, lists=None) -> int:
    """Colour-preserving hom count, choosing the fastest applicable engine."""
    g, _ = _pattern_parts(P)
    h = host_of(host)
    return count_list_homs(g, h, _final_lists(P, h, lists))


def count_cp_homs(H: Graph, rho: Fracture, grid: SignatureGrid) -> int:
    """Colour-prescribed homs from the fractured graph into an H-coloured grid."""
    if grid.h_colouring is None:
        raise HomCountError("cp-hom counting needs an h-colouring")
    F, colour = fractured_graph(H, rho)
    classes: dict[int, set[int]] = {}
    for v, x in enumerate(grid.h_colouring):
        classes.setdefault(x, set()).add(v)
    lists = [classes.get(colour[i], set()) for i in range(F.n)]
    return count_list_homs(F, grid.graph, lists)


def count_partial_extensions(P, host, X: Sequence[int], phi: dict[int, int] | Sequence[int], lists=None) -> int:
    """Number of extensions of a partial map phi on X to a full homomorphism."""
    g, _ = _pattern_parts(P)
    h = host_of(host)
    L = _final_lists(P, h, lists)
    X = list(X)
    fixed = dict(phi) if isinstance(phi, dict) else dict(zip(X, phi))
    if set(fixed) != set(X):
        raise HomCountError("phi must be defined exactly on X")
    for v, x in fixed.items():
        if x not in L[v]:
            return 0
    for u, v in g.edges:
        if u in fixed and v in fixed and fixed[v] not in h.neigh[fixed[u]]:
            return 0
    Y = [v for v in range(g.n) if v not in fixed]
    if not Y:
        return 1
    U = []
    for v in Y:
        allowed = L[v]
        for w in g.adj[v]:
            if w in fixed:
                allowed = allowed & h.neigh[fixed[w]]
        U.append(allowed)
    sub, _ = g.induced(Y)
    return count_list_homs(sub, h, U)
