"""Set partitions, integer partitions, partition-lattice Moebius values.

Ground sets are 0..n-1 internally; blocks are sorted tuples and a partition
keeps its blocks sorted by their least element, so equal partitions compare
and hash equal.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb, factorial, prod
from typing import Iterator, Sequence

__all__ = [
    "ENUMERATION_LIMIT",
    "EnumerationLimitError",
    "SetPartition",
    "IntPartition",
    "iter_set_partitions",
    "enumerate_set_partitions",
    "partitions_of",
    "refines",
    "mobius",
    "mobius_bottom",
    "shape",
    "int_partitions",
    "mult",
    "mult_definitional",
    "aut_count",
    "bell",
    "multinomial",
]

ENUMERATION_LIMIT = 12


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class SetPartition:
    ground_size: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(self.ground_size)) or any(not b for b in self.blocks):
            raise ValueError(f"not a partition of {self.ground_size}: {self.blocks}")

    @classmethod
    def from_blocks(cls, n: int, blocks) -> "SetPartition":
        bs = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else -1)
        return cls(n, tuple(bs))

    @classmethod
    def bottom(cls, n: int) -> "SetPartition":
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def top(cls, n: int) -> "SetPartition":
        return cls(n, (tuple(range(n)),) if n else ())

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self) -> list[int]:
        """Element -> block index table."""
        idx = [0] * self.ground_size
        for i, b in enumerate(self.blocks):
            for x in b:
                idx[x] = i
        return idx

    def __str__(self):
        return "|".join(",".join(str(x + 1) for x in b) for b in self.blocks)


def iter_set_partitions(n: int) -> Iterator[SetPartition]:
    """All partitions of {0..n-1} via restricted growth strings."""
    if n < 0 or n > ENUMERATION_LIMIT:
        raise EnumerationLimitError(f"set-partition enumeration limited to n <= {ENUMERATION_LIMIT}, got {n}")
    if n == 0:
        yield SetPartition(0, ())
        return
    rgs = [0] * n

    def rec(i: int, m: int):
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(m + 1)]
            for x, b in enumerate(rgs):
                blocks[b].append(x)
            yield SetPartition(n, tuple(tuple(b) for b in blocks))
            return
        for b in range(m + 2):
            rgs[i] = b
            yield from rec(i + 1, max(m, b))

    rgs[0] = 0
    yield from rec(1, 0)


def enumerate_set_partitions(n: int) -> list[SetPartition]:
    if n < 1:
        raise EnumerationLimitError(f"n must be positive, got {n}")
    return list(iter_set_partitions(n))


def partitions_of(items: Sequence) -> Iterator[list[list]]:
    """Set partitions of an arbitrary item list, as lists of blocks."""
    for sp in iter_set_partitions(len(items)):
        yield [[items[i] for i in b] for b in sp.blocks]


def refines(sigma: SetPartition, rho: SetPartition) -> bool:
    if sigma.ground_size != rho.ground_size:
        raise ValueError("ground-set mismatch")
    where = rho.block_of()
    return all(len({where[x] for x in b}) == 1 for b in sigma.blocks)


def _block_mobius(c: int) -> int:
    return (-1) ** (c - 1) * factorial(c - 1)


def mobius(sigma: SetPartition, rho: SetPartition) -> int:
    """mu(sigma, rho) on the partition lattice; sigma must refine rho."""
    if not refines(sigma, rho):
        raise ValueError(f"{sigma} does not refine {rho}")
    where = rho.block_of()
    counts = Counter(where[b[0]] for b in sigma.blocks)
    return prod(_block_mobius(c) for c in counts.values())


def mobius_bottom(rho: SetPartition) -> int:
    """mu(bottom, rho) = prod over blocks (-1)^{|B|-1}(|B|-1)!."""
    return prod(_block_mobius(len(b)) for b in rho.blocks)


@dataclass(frozen=True, order=True)
class IntPartition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts) or list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"bad integer partition {self.parts}")

    @classmethod
    def of(cls, parts) -> "IntPartition":
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def union(self, other: "IntPartition") -> "IntPartition":
        return IntPartition.of(self.parts + other.parts)

    def exponential(self) -> dict[int, int]:
        return dict(sorted(Counter(self.parts).items(), reverse=True))

    def __str__(self):
        return "+".join(map(str, self.parts)) if self.parts else "0"


def shape(rho: SetPartition) -> IntPartition:
    return IntPartition.of(len(b) for b in rho.blocks)


def int_partitions(n: int, max_part: int | None = None) -> Iterator[IntPartition]:
    """Partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield IntPartition(())
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in int_partitions(n - first, first):
            yield IntPartition((first,) + rest.parts)


def aut_count(lam: IntPartition) -> int:
    return prod(factorial(m) for m in Counter(lam.parts).values())


def multinomial(n: int, parts: Sequence[int]) -> int:
    out, left = 1, n
    for p in parts:
        out *= comb(left, p)
        left -= p
    return out


def mult(lam: IntPartition) -> int:
    """Sum of mu(bottom, sigma) over set partitions sigma of shape lam (closed form)."""
    d = lam.size
    count = multinomial(d, lam.parts) // aut_count(lam)
    return count * (-1) ** (d - len(lam)) * prod(factorial(p - 1) for p in lam.parts)


def mult_definitional(lam: IntPartition) -> int:
    return sum(mobius_bottom(s) for s in iter_set_partitions(lam.size) if shape(s) == lam)


def bell(n: int) -> int:
    """Bell numbers via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]
