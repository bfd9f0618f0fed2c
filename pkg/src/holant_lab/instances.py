"""Seeded random instances for the verification harness.

Generation algorithm (everything drawn from one `random.Random(f"{seed}:{trial}")`):

1. mode = choice(uncoloured, coloured, hcoloured); k = randint(0 or 1, k_max).
2. Signature pool: randint(1, 3) signatures named s1, s2, ... Each picks a
   family uniformly from: const c, geometric c r, hw_le_1, even,
   generated T_Omega (c in -1..2), generated T_Infinity (c in -1..2),
   random table (length 2..4, entries -3..3, s(0) != 0, zero tail), and
   with probability 1/4 per pool slot a zero-at-0 signature (hw_eq_1, or a
   table with s(0)=0, s(1) in 1..3).  Constants c, r are drawn from
   -3..3 minus 0 (plus i*(-2..2) in Gaussian mode).  Over GF(p) draws
   whose s(0) vanishes mod p are redrawn.
3. uncoloured/coloured: n = randint(2, 10); m = randint(0, min(14, C(n,2)));
   edges are a uniform m-sample of vertex pairs in lexicographic order;
   each vertex gets a uniform pool signature; coloured edges get colours
   uniform in 1..k.
4. hcoloured: H is a uniform pick among the patterns with k edges
   (k >= 1); every H vertex gets a class of randint(1, 3) host vertices
   (total capped at 10) and one pool signature; every pair of host vertices
   in classes joined by an H edge becomes an edge with probability 1/2,
   stopping at 14 edges.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb

from .grids import Graph, SignatureGrid, enumerate_patterns
from .scalars import Field, FieldError, GaussianRational
from .signatures import T_INF, T_OMEGA, Signature, builtin, generate_signature

__all__ = ["Instance", "random_signature", "random_graph", "random_instance"]


@dataclass
class Instance:
    grid: SignatureGrid
    k: int
    mode: str
    kind: str

    def describe(self) -> str:
        g = self.grid.graph
        names = ",".join(s.name for s in self.grid.distinct_signatures())
        return f"{self.kind}\tn={g.n}\tm={g.m}\tk={self.k}\tsigs={names}"


def _scalar(rng: random.Random, F: Field, nonzero: bool = True):
    while True:
        a = rng.randint(-3, 3)
        if F.kind == "gaussian":
            x = GaussianRational(a, rng.randint(-2, 2))
        else:
            x = a
        v = F(x)
        if v or not nonzero:
            return v


def random_signature(rng: random.Random, F: Field, name: str, allow_zero: bool = True) -> Signature:
    for _ in range(100):
        try:
            if allow_zero and rng.random() < 0.25:
                if rng.random() < 0.5:
                    return builtin(name, "hw_eq_1", [], F)
                vals = [0, rng.randint(1, 3)] + [_scalar(rng, F, False) for _ in range(rng.randint(0, 2))]
                return Signature(name, tuple(vals), "zero", None, True, F)
            fam = rng.randrange(7)
            if fam == 0:
                return Signature(name, (_scalar(rng, F),), "geom", 1, False, F)
            if fam == 1:
                return Signature(name, (_scalar(rng, F),), "geom", _scalar(rng, F), False, F)
            if fam == 2:
                return builtin(name, "hw_le_1", [], F)
            if fam == 3:
                return builtin(name, "even", [], F)
            if fam in (4, 5):
                target = T_OMEGA if fam == 4 else T_INF
                return generate_signature(target, rng.randint(-1, 2), 10, F, name=name)
            vals = [_scalar(rng, F)] + [_scalar(rng, F, False) for _ in range(rng.randint(1, 3))]
            return Signature(name, tuple(vals), "zero", None, False, F)
        except (FieldError, ValueError):
            continue
    raise RuntimeError("could not draw a signature")


def random_graph(rng: random.Random, n: int, m: int) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, sorted(rng.sample(pairs, m)))


def random_instance(rng: random.Random, F: Field, k_max: int = 3, max_n: int = 10, max_m: int = 14,
                    mode: str | None = None) -> Instance:
    kind = mode or rng.choice(["uncoloured", "coloured", "hcoloured"])
    k = rng.randint(0 if kind == "uncoloured" else 1, k_max)
    pool = [random_signature(rng, F, f"s{i + 1}") for i in range(rng.randint(1, 3))]
    if kind in ("uncoloured", "coloured"):
        n = rng.randint(2, max_n)
        m = rng.randint(0, min(max_m, comb(n, 2)))
        g = random_graph(rng, n, m)
        sigs = [rng.choice(pool) for _ in range(n)]
        if kind == "uncoloured":
            return Instance(SignatureGrid(g, sigs), k, "uncoloured", kind)
        colours = [rng.randint(1, k) for _ in range(m)]
        return Instance(SignatureGrid(g, sigs, edge_colours=colours), k, "coloured", kind)
    H_pattern = rng.choice(enumerate_patterns(["h"], k))
    H = H_pattern.graph
    classes: list[list[int]] = []
    total = 0
    for _ in range(H.n):
        size = max(1, min(rng.randint(1, 3), max_n - total - (H.n - len(classes) - 1)))
        classes.append(list(range(total, total + size)))
        total += size
    h = [x for x, cls in enumerate(classes) for _ in cls]
    class_sig = [rng.choice(pool) for _ in range(H.n)]
    edges = []
    for a, b in H.edges:
        for u in classes[a]:
            for v in classes[b]:
                if len(edges) < max_m and rng.random() < 0.5:
                    edges.append((min(u, v), max(u, v)))
    g = Graph(total, sorted(edges))
    sigs = [class_sig[x] for x in h]
    return Instance(SignatureGrid(g, sigs, h_colouring=h, H=H), k, "coloured", kind)
