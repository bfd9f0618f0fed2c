"""Coefficients zeta_{S,k}(H, nu) of the uncoloured holant in the hom basis.

All values assume signatures normalised to s(0) = 1; callers pass any
signatures and they are normalised here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, prod
from typing import Iterator, Mapping, Sequence

from .grids import (
    ColouredPattern,
    aut_count_pattern,
    canonical_form,
    enumerate_patterns,
    patterns_up_to,
    quotient,
    treewidth,
)
from .partitions import IntPartition, SetPartition, int_partitions, iter_set_partitions, mobius_bottom, mult
from .signatures import Signature, chi_lambda, fingerprint

__all__ = [
    "ZetaEntry",
    "signature_map",
    "deg_partition",
    "edge_partition_assignments",
    "zeta_closed",
    "zeta_exact_k",
    "zeta_definitional",
    "definitional_table",
    "support",
]


@dataclass(frozen=True)
class ZetaEntry:
    pattern: ColouredPattern
    k: int
    value: object
    treewidth: int = -1
    over_threshold: bool = False

    @property
    def canonical(self) -> str:
        return canonical_form(self.pattern)


def signature_map(S) -> dict[str, Signature]:
    """name -> signature normalised to s(0) = 1."""
    if isinstance(S, Mapping):
        items = S.values()
    else:
        items = S
    out = {}
    for s in items:
        out[s.name] = s if s.table[0] == 1 else s.normalized()
    return out


def _compositions(k: int, m: int) -> Iterator[tuple[int, ...]]:
    if m == 0:
        if k == 0:
            yield ()
        return
    for first in range(1, k - m + 2):
        for rest in _compositions(k - first, m - 1):
            yield (first,) + rest


def edge_partition_assignments(m: int, k: int) -> Iterator[tuple[IntPartition, ...]]:
    """All lambda: E -> integer partitions with sum of sizes k, sizes >= 1."""
    for comp in _compositions(k, m):
        for choice in product(*(list(int_partitions(c)) for c in comp)):
            yield choice


def deg_partition(P: ColouredPattern, v: int, lam: Sequence[IntPartition]) -> IntPartition:
    parts: list[int] = []
    for i, (a, b) in enumerate(P.edges):
        if v in (a, b):
            parts.extend(lam[i].parts)
    return IntPartition.of(parts)


def zeta_closed(P: ColouredPattern, k: int, S) -> object:
    """Closed form: sum over edge-partition assignments of weight k."""
    sigs = signature_map(S)
    key = tuple(sorted((c, sigs[c]) for c in set(P.colours)))
    return _zeta_closed(P, k, key)


@lru_cache(maxsize=None)
def _zeta_closed(P: ColouredPattern, k: int, key) -> object:
    sigs = dict(key)
    F = next(iter(sigs.values())).field
    m = P.m
    total = F.zero
    if m == 0 or m > k:
        return total
    inc = [[i for i, e in enumerate(P.edges) if v in e] for v in range(P.n)]
    for lam in edge_partition_assignments(m, k):
        w = Fraction(prod(mult(l) for l in lam), prod(factorial(l.size) for l in lam))
        term = F(w)
        for v in range(P.n):
            dv = IntPartition.of([p for i in inc[v] for p in lam[i].parts])
            term = term * chi_lambda(dv, sigs[P.colours[v]])
            if not term:
                break
        total = total + term
    return total / aut_count_pattern(P)


def zeta_exact_k(P: ColouredPattern, S) -> object:
    """The |E(P)| = k special case: prod chi(deg(v), nu(v)) / #Aut."""
    sigs = signature_map(S)
    F = next(iter(sigs.values())).field
    val = prod((fingerprint(len(P.graph.adj[v]), sigs[P.colours[v]]) for v in range(P.n)), start=F.one)
    return val / aut_count_pattern(P)


def _colour_consistent_partitions(colours: Sequence[str]) -> Iterator[list[list[int]]]:
    classes: dict[str, list[int]] = {}
    for v, c in enumerate(colours):
        classes.setdefault(c, []).append(v)
    groups = list(classes.values())
    per = [[[[g[i] for i in b] for b in sp.blocks] for sp in iter_set_partitions(len(g))] for g in groups]
    for choice in product(*per):
        yield [b for blocks in choice for b in blocks]


@lru_cache(maxsize=None)
def _definitional(k: int, key) -> dict[str, object]:
    sigs = dict(key)
    F = next(iter(sigs.values())).field
    table: dict[str, object] = {}
    reps: dict[str, ColouredPattern] = {}
    for Fp in enumerate_patterns(list(sigs), k):
        g = Fp.graph
        weight = prod((sigs[Fp.colours[v]].eval(g.degree(v)) for v in range(Fp.n)), start=F.one)
        if not weight:
            continue
        weight = weight / aut_count_pattern(Fp)
        for blocks in _colour_consistent_partitions(Fp.colours):
            rho = SetPartition.from_blocks(Fp.n, blocks)
            qt = quotient(g, rho)
            if qt.loops:
                continue
            cols = [None] * len(rho)
            for v, b in enumerate(qt.block_of):
                cols[b] = Fp.colours[v]
            Q = ColouredPattern.make(len(rho), qt.graph.edges, cols)
            c = canonical_form(Q)
            reps.setdefault(c, Q)
            table[c] = table.get(c, F.zero) + weight * mobius_bottom(rho)
    return table


def definitional_table(S, k: int) -> dict[str, object]:
    """canonical form -> zeta for every pattern reachable as a quotient of G_k(S)."""
    if k > 4:
        raise ValueError("definitional zeta limited to k <= 4")
    sigs = signature_map(S)
    return dict(_definitional(k, tuple(sorted(sigs.items()))))


def zeta_definitional(P: ColouredPattern, k: int, S) -> object:
    sigs = signature_map(S)
    if k > 4:
        raise ValueError("definitional zeta limited to k <= 4")
    if any(c not in sigs for c in P.colours):
        raise KeyError("pattern colour outside S")
    F = next(iter(sigs.values())).field
    table = _definitional(k, tuple(sorted(sigs.items())))
    return table.get(canonical_form(P), F.zero)


def support(S, k: int, tw_threshold: int = 2) -> list[ZetaEntry]:
    """Patterns with at most k edges and nonzero zeta, with exact treewidth."""
    if k > 5:
        raise ValueError("support limited to k <= 5")
    sigs = signature_map(S)
    out = []
    for P in patterns_up_to(list(sigs), k):
        val = zeta_closed(P, k, sigs)
        if val:
            tw = treewidth(P.graph)
            out.append(ZetaEntry(P, k, val, tw, tw > tw_threshold))
    return out
