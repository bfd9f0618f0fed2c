"""Timing tables for the evaluation routes and for the two kernel backends.

Families (host graphs drawn from `random.Random(seed)`):

* ``acyclic``: random graph with n vertices and 2n edges, every vertex
  carries ``geometric 1 2`` (type T_Lin), uncoloured, k = 3.  Only
  matchings carry nonzero zeta, so the work is near-linear in n.
* ``tw2``: random graph with n vertices and 3n edges, every vertex carries
  ``hw_le_1``, uncoloured, k = 3.  The support contains the triangle, which
  goes through the treewidth-2 matrix DP.
* ``brute``: the ``acyclic`` instance on the brute route; beyond the brute
  limit the route refuses and the cell reports ``refused``.

A cell slower than ``timeout`` seconds marks the remaining (larger) sizes
of that family as ``skipped``.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grids import Graph, SignatureGrid
from .holant import HolantError, evaluate
from .homcount import Host
from .signatures import builtin

__all__ = ["BenchRow", "DEFAULT_SIZES", "FAMILIES", "family_instance", "run_bench", "fit_slope", "kernel_bench", "format_rows"]

FAMILIES = ("acyclic", "tw2", "brute")

# the tw2 family runs dense n x n matrix products, so it stays small
DEFAULT_SIZES = {
    "acyclic": [1000, 3000, 10000, 30000, 100000],
    "tw2": [50, 100, 200, 400],
    "brute": [10, 20, 30, 1000],
}


@dataclass
class BenchRow:
    family: str
    route: str
    size: int
    seconds: float | None
    status: str
    value: str = ""


def _random_sparse(rng: random.Random, n: int, m: int) -> Graph:
    seen: set[tuple[int, int]] = set()
    m = min(m, n * (n - 1) // 2)
    while len(seen) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            seen.add((min(u, v), max(u, v)))
    return Graph(n, sorted(seen))


def family_instance(family: str, n: int, seed: int = 0) -> SignatureGrid:
    rng = random.Random(f"{family}:{seed}:{n}")
    if family in ("acyclic", "brute"):
        sig = builtin("g", "geometric", ["1", "2"])
        g = _random_sparse(rng, n, 2 * n)
    elif family == "tw2":
        sig = builtin("m", "hw_le_1", [])
        g = _random_sparse(rng, n, 3 * n)
    else:
        raise ValueError(f"unknown family {family!r}")
    return SignatureGrid(g, [sig] * n)


def run_bench(family: str, sizes, route: str = "auto", k: int = 3, timeout: float = 60.0,
              seed: int = 0) -> list[BenchRow]:
    if family == "brute":
        route = "brute"
    rows = []
    over = False
    if family != "brute":
        # untimed warm-up: JIT compilation and the zeta cache
        evaluate(family_instance(family, 20, seed), k, "uncoloured", route)
    for n in sizes:
        if over:
            rows.append(BenchRow(family, route, n, None, "skipped"))
            continue
        grid = family_instance(family, n, seed)
        t0 = time.perf_counter()
        try:
            res = evaluate(grid, k, "uncoloured", route)
        except HolantError as exc:
            status = "refused" if "refuses" in str(exc) else "error"
            rows.append(BenchRow(family, route, n, None, status))
            continue
        dt = time.perf_counter() - t0
        rows.append(BenchRow(family, res.route, n, dt, "ok", str(res.value)))
        if dt > timeout:
            over = True
    return rows


def fit_slope(rows: list[BenchRow]) -> float | None:
    """Least-squares slope of log(seconds) against log(size) over ok rows."""
    pts = [(math.log(r.size), math.log(r.seconds)) for r in rows if r.status == "ok" and r.seconds]
    if len(pts) < 2:
        return None
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def kernel_bench(sizes=(1000, 10000, 100000), mat_sizes=(64, 128, 256), repeat: int = 3,
                 seed: int = 0) -> list[BenchRow]:
    """neighbour_sum and matmul_mod timed under every available backend."""
    rng = np.random.default_rng(seed)
    q = np.array(kernels.PRIMES[:2], dtype=np.int64)
    rows = []
    for name in kernels.available_backends():
        with kernels.use_backend(name):
            for n in sizes:
                g = _random_sparse(random.Random(n), n, 2 * n)
                host = Host(g)
                indptr, indices = host.indptr, host.indices
                x = rng.integers(0, int(q.min()), size=(len(q), n), dtype=np.int64)
                kernels.neighbour_sum(indptr, indices, x, q)  # warm-up / compile
                rows.append(_timed("neighbour_sum", name, n, repeat,
                                   lambda: kernels.neighbour_sum(indptr, indices, x, q)))
            for n in mat_sizes:
                a = rng.integers(0, int(q[0]), size=(n, n), dtype=np.int64)
                b = rng.integers(0, int(q[0]), size=(n, n), dtype=np.int64)
                kernels.matmul_mod(a, b, int(q[0]))
                rows.append(_timed("matmul_mod", name, n, repeat,
                                   lambda: kernels.matmul_mod(a, b, int(q[0]))))
    return rows


def _timed(kernel: str, backend: str, n: int, repeat: int, fn) -> BenchRow:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return BenchRow(kernel, backend, n, best, "ok")


def format_rows(rows: list[BenchRow], fmt: str = "tsv") -> str:
    sep = "\t" if fmt == "tsv" else "  "
    out = [sep.join(["family", "route", "size", "seconds", "status"])]
    for r in rows:
        secs = f"{r.seconds:.6f}" if r.seconds is not None else "-"
        out.append(sep.join([r.family, r.route, str(r.size), secs, r.status]))
    return "".join(line + "\n" for line in out)
