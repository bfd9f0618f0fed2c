"""Modular integer kernels behind the homomorphism-counting DPs.

Every kernel works on int64 arrays of residues modulo primes below 2^24, so
products fit in 48 bits and up to 2^14 of them can be summed before a
reduction.  Exact counts are recovered by CRT over enough primes.

Two implementations exist for each kernel: numba loops and vectorised numpy.
`backend()` reports which one is active; `use_backend()` switches (the
benchmark compares both).
"""
from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from . import _accel
from ._accel import njit

__all__ = [
    "PRIMES",
    "backend",
    "use_backend",
    "available_backends",
    "neighbour_sum",
    "matmul_mod",
    "primes_for_bound",
    "crt",
]

CHUNK = 1 << 14


def _primes_below(limit: int, count: int) -> list[int]:
    out = []
    c = limit - 1
    while len(out) < count:
        if c % 2 and all(c % d for d in range(3, int(c ** 0.5) + 1, 2)):
            out.append(c)
        c -= 1
    return out


PRIMES: list[int] = _primes_below(1 << 24, 64)


def primes_for_bound(bound: int) -> list[int]:
    """Smallest prefix of PRIMES whose product exceeds bound."""
    out, prod = [], 1
    for p in PRIMES:
        out.append(p)
        prod *= p
        if prod > bound:
            return out
    raise OverflowError("count bound exceeds CRT capacity")


def crt(residues, primes) -> int:
    x, m = 0, 1
    for r, p in zip(residues, primes):
        r = int(r)
        t = ((r - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    return x


# -- numba kernels -----------------------------------------------------------

@njit
def _neighbour_sum_nb(indptr, indices, x, q):
    r, n = x.shape
    out = np.zeros((r, n), dtype=np.int64)
    for j in range(r):
        qq = q[j]
        for u in range(n):
            acc = 0
            for t in range(indptr[u], indptr[u + 1]):
                acc += x[j, indices[t]]
                if acc >= (1 << 62):
                    acc %= qq
            out[j, u] = acc % qq
    return out


@njit
def _matmul_mod_nb(a, b, q):
    n, kk = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    acc = np.zeros(m, dtype=np.int64)
    for i in range(n):
        acc[:] = 0
        cnt = 0
        for t in range(kk):
            ait = a[i, t]
            if ait == 0:
                continue
            for j in range(m):
                acc[j] += ait * b[t, j]
            cnt += 1
            if cnt == 16384:
                for j in range(m):
                    acc[j] %= q
                cnt = 0
        for j in range(m):
            out[i, j] = acc[j] % q
    return out


# -- numpy kernels -----------------------------------------------------------

def _neighbour_sum_np(indptr, indices, x, q):
    r, n = x.shape
    gathered = x[:, indices]
    csum = np.zeros((r, len(indices) + 1), dtype=np.int64)
    np.cumsum(gathered, axis=1, out=csum[:, 1:])
    out = csum[:, indptr[1:]] - csum[:, indptr[:-1]]
    return out % q[:, None]


def _matmul_mod_np(a, b, q):
    kk = a.shape[1]
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, kk, CHUNK):
        out += a[:, s:s + CHUNK] @ b[s:s + CHUNK]
        out %= q
    return out


_IMPL = {
    "numba": (_neighbour_sum_nb, _matmul_mod_nb),
    "numpy": (_neighbour_sum_np, _matmul_mod_np),
}
_active = ["numba" if _accel.HAVE_NUMBA else "numpy"]


def available_backends() -> list[str]:
    return ["numba", "numpy"] if _accel.HAVE_NUMBA else ["numpy"]


def backend() -> str:
    return _active[0]


@contextmanager
def use_backend(name: str):
    if name not in available_backends():
        raise ValueError(f"backend {name!r} unavailable")
    old = _active[0]
    _active[0] = name
    try:
        yield
    finally:
        _active[0] = old


def neighbour_sum(indptr: np.ndarray, indices: np.ndarray, x: np.ndarray, q: np.ndarray) -> np.ndarray:
    """y[j, u] = sum of x[j, w] over neighbours w of u, modulo q[j]."""
    return _IMPL[_active[0]][0](indptr, indices, x, q)


def matmul_mod(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """(a @ b) mod q for residue matrices."""
    return _IMPL[_active[0]][1](np.ascontiguousarray(a), np.ascontiguousarray(b), np.int64(q))
