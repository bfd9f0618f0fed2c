"""Holant evaluators for coloured and uncoloured signature grids.

Routes:
  brute                 direct sums over edge subsets (the oracle)
  coloured_hombasis     fracture expansion for H-coloured grids
  uncoloured_hombasis   zeta-weighted hom counts over coloured patterns
  inclusion_exclusion   coloured holant from uncoloured ones on colour subsets
  interpolation         signatures with s(0) = 0, via a polynomial in s(0)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, prod

from .grids import Graph, SignatureGrid, enumerate_fractures, patterns_up_to
from .homcount import count_cp_homs, count_homs
from .scalars import Field, FieldError, prime_field
from .signatures import Signature, SignatureError, fingerprint
from .zeta import signature_map, zeta_closed

__all__ = [
    "HolantError",
    "HolantResult",
    "BRUTE_LIMIT",
    "FAST_K_LIMIT",
    "holant_brute_coloured",
    "holant_brute_uncoloured",
    "coeff_fracture",
    "coeff_fracture_definitional",
    "holant_star_fast",
    "holant_uncol_fast",
    "holant_coloured_via_inclusion_exclusion",
    "holant_with_zeros",
    "holant_mod_p",
    "evaluate",
    "ROUTES",
]

BRUTE_LIMIT = 10 ** 7
FAST_K_LIMIT = 5
ROUTES = ("auto", "brute", "fast", "ie", "interp")


class HolantError(ValueError):
    pass


@dataclass
class Stats:
    patterns: int = 0
    fractures: int = 0
    hom_calls: int = 0
    subinstances: int = 0

    def absorb(self, other: "Stats") -> None:
        self.patterns += other.patterns
        self.fractures += other.fractures
        self.hom_calls += other.hom_calls
        self.subinstances += other.subinstances + 1

    def as_dict(self) -> dict[str, int]:
        return {"patterns": self.patterns, "fractures": self.fractures,
                "hom_calls": self.hom_calls, "subinstances": self.subinstances}


@dataclass
class HolantResult:
    value: object
    route: str
    stats: Stats = field(default_factory=Stats)


def _field(grid: SignatureGrid) -> Field:
    if grid.field is None:
        raise HolantError("empty grid has no field; add a vertex")
    return grid.field


def _product_s0(grid: SignatureGrid):
    F = _field(grid)
    return prod((s.table[0] for s in grid.signatures), start=F.one)


def _weight(grid: SignatureGrid, chosen) -> object:
    """prod_v s_v(|A cap E(v)|) for the edge index set `chosen`."""
    F = _field(grid)
    deg: dict[int, int] = {}
    for i in chosen:
        u, v = grid.graph.edges[i]
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    w = F.one
    for v, s in enumerate(grid.signatures):
        w = w * s.eval(deg.get(v, 0))
        if not w:
            return w
    return w


def _colour_classes(grid: SignatureGrid, k: int) -> list[list[int]]:
    colours = grid.colours()
    if colours is None:
        raise HolantError("coloured holant needs an edge colouring or an h-colouring")
    classes: list[list[int]] = [[] for _ in range(k)]
    for i, c in enumerate(colours):
        if 1 <= c <= k:
            classes[c - 1].append(i)
    return classes


def holant_brute_coloured(grid: SignatureGrid, k: int | None = None) -> HolantResult:
    """Sum over colourful edge sets (one edge of each colour 1..k)."""
    F = _field(grid)
    k = grid.k_colours if k is None else k
    classes = _colour_classes(grid, k)
    size = prod(len(c) for c in classes)
    if size > BRUTE_LIMIT:
        raise HolantError(f"brute coloured route refuses {size} colourful tuples (> {BRUTE_LIMIT})")
    total = F.zero
    for choice in product(*classes):
        total = total + _weight(grid, choice)
    return HolantResult(total, "brute")


def holant_brute_uncoloured(grid: SignatureGrid, k: int) -> HolantResult:
    F = _field(grid)
    m = grid.graph.m
    if comb(m, k) > BRUTE_LIMIT:
        raise HolantError(f"brute uncoloured route refuses C({m},{k}) > {BRUTE_LIMIT} subsets")
    total = F.zero
    for chosen in combinations(range(m), k):
        total = total + _weight(grid, chosen)
    return HolantResult(total, "brute")


# -- coloured hom basis -------------------------------------------------------

def coeff_fracture(H: Graph, sigs, rho) -> object:
    """prod over vertices and blocks of chi(|B|, s_v)."""
    F = sigs[0].field
    c = F.one
    for v in range(H.n):
        for b in rho.parts[v]:
            c = c * fingerprint(len(b), sigs[v])
            if not c:
                return c
    return c


def coeff_fracture_definitional(H: Graph, sigs, rho) -> object:
    """Sum over sigma <= rho of mu(sigma, rho) * prod over blocks of sigma of s(|B|)/s(0)."""
    from .partitions import partitions_of, mobius, SetPartition

    F = sigs[0].field
    c = F.one
    for v in range(H.n):
        s = sigs[v]
        inv0 = 1 / s.table[0]
        pos = {e: i for i, e in enumerate(H.inc[v])}
        rho_v = SetPartition.from_blocks(len(pos), [[pos[e] for e in b] for b in rho.parts[v]])
        local = F.zero
        for blocks in partitions_of(list(range(len(pos)))):
            sigma = SetPartition.from_blocks(len(pos), blocks)
            try:
                mu = mobius(sigma, rho_v)
            except ValueError:
                continue
            local = local + mu * prod((s.eval(len(b)) * inv0 for b in blocks), start=F.one)
        c = c * local
    return c


def holant_star_fast(grid: SignatureGrid, check: bool = False) -> HolantResult:
    """Fracture expansion for an H-coloured grid (all s(0) nonzero)."""
    if grid.h_colouring is None:
        raise HolantError("coloured hom-basis route needs an h-colouring")
    F = _field(grid)
    H = grid.H
    if any(s.zero_at_0 for s in grid.signatures):
        raise HolantError("zero-at-0 signatures need the interpolation route")
    rep: dict[int, Signature] = {}
    for v, x in enumerate(grid.h_colouring):
        rep.setdefault(x, grid.signatures[v])
    stats = Stats()
    if any(H.degree(x) and x not in rep for x in range(H.n)):
        return HolantResult(F.zero, "coloured_hombasis", stats)
    sigs = [rep.get(x, grid.signatures[0]) for x in range(H.n)]
    total = F.zero
    for rho in enumerate_fractures(H):
        stats.fractures += 1
        c = coeff_fracture(H, sigs, rho)
        if check and c != coeff_fracture_definitional(H, sigs, rho):
            raise AssertionError(f"fracture coefficient mismatch at {rho}")
        if not c:
            continue
        stats.hom_calls += 1
        total = total + c * count_cp_homs(H, rho, grid)
    return HolantResult(total * _product_s0(grid), "coloured_hombasis", stats)


# -- uncoloured hom basis -----------------------------------------------------

def _check_names(grid: SignatureGrid):
    seen: dict[str, Signature] = {}
    for s in grid.signatures:
        if seen.setdefault(s.name, s) != s:
            raise HolantError(f"two different signatures share the name {s.name!r}")


def holant_uncol_fast(grid: SignatureGrid, k: int) -> HolantResult:
    """Sum over patterns P with <= k edges of zeta(P) * #Hom(P -> grid)."""
    F = _field(grid)
    if k > FAST_K_LIMIT:
        raise HolantError(f"uncoloured hom-basis route limited to k <= {FAST_K_LIMIT}")
    if any(s.zero_at_0 for s in grid.signatures):
        raise HolantError("zero-at-0 signatures need the interpolation route")
    _check_names(grid)
    if F.kind == "gf":
        # zeta has denominators that may vanish mod p; the holant itself is an
        # integer polynomial in the signature values, so evaluate on lifts.
        lifted = grid.with_signatures([s.lifted() for s in grid.signatures])
        res = holant_uncol_fast(lifted, k)
        return HolantResult(F(res.value), res.route, res.stats)
    stats = Stats()
    scale = _product_s0(grid)
    if k == 0:
        return HolantResult(scale, "uncoloured_hombasis", stats)
    sigs = signature_map(grid.distinct_signatures())
    total = F.zero
    for P in patterns_up_to(list(sigs), k):
        stats.patterns += 1
        z = zeta_closed(P, k, sigs)
        if not z:
            continue
        stats.hom_calls += 1
        hom = count_homs(P, grid)
        if hom:
            total = total + z * hom
    return HolantResult(total * scale, "uncoloured_hombasis", stats)


def _uncoloured_direct(grid: SignatureGrid, k: int) -> HolantResult:
    if k <= FAST_K_LIMIT:
        return holant_uncol_fast(grid, k)
    return holant_brute_uncoloured(grid, k)


def holant_coloured_via_inclusion_exclusion(grid: SignatureGrid, k: int | None = None,
                                            inner=None) -> HolantResult:
    """sum over T subset [k] of (-1)^(k-|T|) UnColHolant(grid restricted to colours T, k)."""
    F = _field(grid)
    k = grid.k_colours if k is None else k
    if k > FAST_K_LIMIT:
        raise HolantError(f"inclusion-exclusion limited to k <= {FAST_K_LIMIT}")
    colours = grid.colours()
    if colours is None:
        raise HolantError("coloured holant needs an edge colouring or an h-colouring")
    if inner is None:
        inner = _uncoloured_direct if not any(s.zero_at_0 for s in grid.signatures) else holant_brute_uncoloured
    stats = Stats()
    total = F.zero
    for r in range(k + 1):
        for T in combinations(range(1, k + 1), r):
            keep = [i for i, c in enumerate(colours) if c in T]
            if len(keep) < k:
                continue
            sub = inner(grid.edge_subgrid(keep), k)
            stats.absorb(sub.stats)
            total = total + (-1) ** (k - r) * sub.value
    return HolantResult(total, "inclusion_exclusion", stats)


# -- zeros at 0 ----------------------------------------------------------------

def _first_nonzero_degree(t: Signature) -> int | None:
    for d in range(1, t.degree + 1):
        if t.table[d]:
            return d
    if t.tail in ("geom", "periodic") and t.table[-1]:
        return t.degree
    return None


def forbidden_points(grid: SignatureGrid) -> set:
    F = _field(grid)
    zero = [t for t in grid.distinct_signatures() if t.zero_at_0]
    rest = [s for s in grid.distinct_signatures() if not s.zero_at_0]
    bad = {F.zero}
    bad.update(s.table[0] for s in rest)
    for t in zero:
        d = _first_nonzero_degree(t)
        if d is None:
            continue
        for s in rest:
            sd = s.eval(d)
            bad.add(s.table[0] * t.eval(d) / sd if sd else F.one)
    return bad


def _sample_points(F: Field, count: int, bad: set) -> list:
    pts = []
    x = 1
    limit = F.p if F.kind == "gf" else None
    while len(pts) < count:
        if limit is not None and x >= limit:
            raise HolantError(f"field too small: GF({F.p}) has fewer than {count} admissible sample points")
        val = F(x)
        if val not in bad:
            pts.append(val)
        x += 1
    return pts


def _lagrange_at_zero(xs, ys, F: Field):
    total = F.zero
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num, den = F.one, F.one
        for j, xj in enumerate(xs):
            if j != i:
                num = num * (-xj)
                den = den * (xi - xj)
        total = total + yi * num / den
    return total


def _is_constant_zero(s: Signature) -> bool:
    return not any(s.table) and s.tail in ("zero", "geom", "periodic")


def holant_with_zeros(grid: SignatureGrid, k: int | None, mode: str, inner=None) -> HolantResult:
    """Interpolate in alpha = s(0) of the zero-at-0 signatures."""
    F = _field(grid)
    if mode == "coloured" and k is None:
        k = grid.k_colours
    inner = inner or (lambda g: _direct(g, k, mode))
    zero_vertices = [v for v, s in enumerate(grid.signatures) if s.zero_at_0]
    n0 = len(zero_vertices)
    stats = Stats()
    if n0 == 0:
        res = inner(grid)
        stats.absorb(res.stats)
        return HolantResult(res.value, "interpolation", stats)
    if 2 * k < n0 or any(_is_constant_zero(s) for s in grid.signatures):
        return HolantResult(F.zero, "interpolation", stats)
    bad = forbidden_points(grid)
    xs = _sample_points(F, n0 + 1, bad)
    ys = []
    for a in xs:
        sigs = [s.with_s0(a) if s.zero_at_0 else s for s in grid.signatures]
        res = inner(grid.with_signatures(sigs))
        stats.absorb(res.stats)
        ys.append(res.value)
    return HolantResult(_lagrange_at_zero(xs, ys, F), "interpolation", stats)


# -- dispatch -------------------------------------------------------------------

def _direct(grid: SignatureGrid, k: int, mode: str) -> HolantResult:
    """Best route for a grid whose signatures all have s(0) != 0."""
    if mode == "coloured":
        if grid.h_colouring is not None:
            return holant_star_fast(grid)
        if k <= FAST_K_LIMIT:
            return holant_coloured_via_inclusion_exclusion(grid, k)
        return holant_brute_coloured(grid, k)
    return _uncoloured_direct(grid, k)


def evaluate(grid: SignatureGrid, k: int | None = None, mode: str = "uncoloured",
             route: str = "auto") -> HolantResult:
    if mode not in ("coloured", "uncoloured"):
        raise HolantError(f"unknown mode {mode!r}")
    if route not in ROUTES:
        raise HolantError(f"unknown route {route!r}")
    if mode == "coloured":
        k = grid.k_colours if k is None else k
    elif k is None:
        raise HolantError("uncoloured holant needs k")
    if k < 0:
        raise HolantError("k must be non-negative")
    has_zero = any(s.zero_at_0 for s in grid.signatures)
    if route == "brute":
        return holant_brute_coloured(grid, k) if mode == "coloured" else holant_brute_uncoloured(grid, k)
    if route == "interp" or (route == "auto" and has_zero):
        return holant_with_zeros(grid, k, mode)
    if route == "auto":
        return _direct(grid, k, mode)
    if has_zero:
        raise HolantError(f"route {route!r} cannot handle s(0) = 0; use interp")
    if route == "ie":
        if mode != "coloured":
            raise HolantError("inclusion-exclusion applies to the coloured problem only")
        return holant_coloured_via_inclusion_exclusion(grid, k)
    # fast
    if mode == "coloured":
        if grid.h_colouring is None:
            raise HolantError("coloured fast route needs an h-colouring")
        return holant_star_fast(grid)
    return holant_uncol_fast(grid, k)


def holant_mod_p(grid: SignatureGrid, k: int | None, p: int, mode: str, route: str = "auto") -> HolantResult:
    """Same pipelines with every signature reduced into GF(p)."""
    F = prime_field(p)
    sigs = []
    for s in grid.signatures:
        try:
            try:
                sigs.append(s.over(F))
            except SignatureError:
                # s(0) vanishes mod p: the interpolation route takes over
                sigs.append(Signature(s.name, s.table, s.tail, s.tail_param, True, s.field).over(F))
        except (FieldError, ValueError) as exc:
            raise HolantError(f"cannot reduce grid mod {p}: {exc}") from exc
    return evaluate(grid.with_signatures(sigs), k, mode, route)
