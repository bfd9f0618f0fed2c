"""Signatures s: N -> field, fingerprints chi, and signature-set types."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import factorial, prod

from .partitions import (
    ENUMERATION_LIMIT,
    EnumerationLimitError,
    IntPartition,
    SetPartition,
    aut_count,
    int_partitions,
    iter_set_partitions,
    mobius,
    multinomial,
    refines,
)
from .scalars import RATIONAL, Field

__all__ = [
    "T_LIN",
    "T_OMEGA",
    "T_INF",
    "SignatureError",
    "Signature",
    "SignatureSetType",
    "builtin",
    "parse_indicator",
    "fingerprint",
    "chi_partition",
    "chi_lambda",
    "classify",
    "is_linear_type",
    "generate_signature",
]

T_LIN = "T_Lin"
T_OMEGA = "T_Omega"
T_INF = "T_Infinity"

TAILS = ("zero", "geom", "undef", "periodic")


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Table s(0..D) plus a tail rule.

    tail: 'zero' (s(d)=0 beyond the table), 'geom' (s(D)*r^(d-D) with
    r = tail_param), 'periodic' (s(d) = s(d - P) beyond the table with
    P = tail_param) or 'undef' (evaluation beyond the table is an error).
    """

    name: str
    table: tuple
    tail: str = "zero"
    tail_param: object = None
    allows_zero: bool = False
    field: Field = dc_field(default=RATIONAL, compare=True)

    def __post_init__(self):
        if not self.table:
            raise SignatureError(f"{self.name}: empty table")
        if self.tail not in TAILS:
            raise SignatureError(f"{self.name}: unknown tail {self.tail!r}")
        F = self.field
        object.__setattr__(self, "table", tuple(F(v) for v in self.table))
        if self.tail == "geom":
            object.__setattr__(self, "tail_param", F(self.tail_param))
        elif self.tail == "periodic":
            P = self.tail_param
            if not isinstance(P, int) or P < 1 or P > len(self.table):
                raise SignatureError(f"{self.name}: bad period {P!r}")
        if not self.table[0] and not self.allows_zero:
            raise SignatureError(f"{self.name}: s(0) = 0 requires allow-zero")

    @property
    def degree(self) -> int:
        """Largest tabulated degree D_table."""
        return len(self.table) - 1

    def __call__(self, d: int):
        return self.eval(d)

    def eval(self, d: int):
        if d < 0:
            raise SignatureError("negative degree")
        D = self.degree
        if d <= D:
            return self.table[d]
        if self.tail == "zero":
            return self.field.zero
        if self.tail == "geom":
            return self.table[D] * self.tail_param ** (d - D)
        if self.tail == "periodic":
            P = self.tail_param
            return self.table[d - P * (-(-(d - D) // P))]
        raise SignatureError(f"{self.name}: s({d}) undefined beyond degree {D}")

    @property
    def zero_at_0(self) -> bool:
        return not self.table[0]

    def defined_up_to(self) -> float:
        return self.degree if self.tail == "undef" else float("inf")

    def scaled(self, c, name: str | None = None) -> "Signature":
        c = self.field(c)
        return Signature(name or self.name, tuple(v * c for v in self.table), self.tail,
                         self.tail_param, self.allows_zero or not c, self.field)

    def normalized(self) -> "Signature":
        """s / s(0)."""
        if self.zero_at_0:
            raise SignatureError(f"{self.name}: cannot normalise, s(0) = 0")
        return self.scaled(1 / self.table[0])

    def with_s0(self, alpha, name: str | None = None) -> "Signature":
        """Copy with s(0) replaced by alpha (used by the interpolation route)."""
        alpha = self.field(alpha)
        return Signature(name or self.name, (alpha,) + self.table[1:], self.tail,
                         self.tail_param, not alpha, self.field)

    def over(self, F: Field) -> "Signature":
        if F == self.field:
            return self
        return Signature(self.name, tuple(F(v) for v in self.table), self.tail,
                         self.tail_param if self.tail != "geom" else F(self.tail_param),
                         self.allows_zero, F)

    def lifted(self) -> "Signature":
        """Rational signature whose values are the least residues (GF(p) only)."""
        F = self.field
        if F.kind != "gf":
            return self
        lift = F.lift_rational
        param = lift(self.tail_param) if self.tail == "geom" else self.tail_param
        return Signature(self.name, tuple(lift(v) for v in self.table), self.tail, param,
                         self.allows_zero, RATIONAL)


def parse_indicator(spec: str):
    """Parse `0,2..4,7..,even,odd` into a membership predicate and a bound.

    Returns (member, threshold, period): membership is eventually periodic
    with the given period from `threshold` on.
    """
    finite: set[int] = set()
    intervals: list[tuple[int, int]] = []
    cofinite_from: list[int] = []
    parities: set[int] = set()
    for raw in spec.split(","):
        item = raw.strip()
        if not item:
            raise SignatureError(f"empty item in indicator {spec!r}")
        if item in ("even", "odd"):
            parities.add(0 if item == "even" else 1)
        elif ".." in item:
            lo, _, hi = item.partition("..")
            try:
                lo_i = int(lo)
                if hi:
                    intervals.append((lo_i, int(hi)))
                else:
                    cofinite_from.append(lo_i)
            except ValueError:
                raise SignatureError(f"bad interval {item!r}") from None
        else:
            try:
                finite.add(int(item))
            except ValueError:
                raise SignatureError(f"bad indicator item {item!r}") from None
    bounds = [0] + list(finite) + [hi for _, hi in intervals] + cofinite_from
    threshold = max(bounds) + 1

    def member(d: int) -> bool:
        return (d in finite or any(lo <= d <= hi for lo, hi in intervals)
                or any(d >= lo for lo in cofinite_from) or (d % 2) in parities)

    period = 2 if parities and len(parities) == 1 and not cofinite_from else 1
    return member, threshold, period


def _indicator(name: str, spec: str, F: Field) -> Signature:
    member, threshold, period = parse_indicator(spec)
    vals = [F.one if member(d) else F.zero for d in range(threshold + period)]
    if period == 1:
        if vals[threshold]:
            tail, param = "geom", 1
            while len(vals) > 1 and vals[-2]:
                vals.pop()
        else:
            tail, param = "zero", None
            while len(vals) > 1 and not vals[-1]:
                vals.pop()
        return Signature(name, tuple(vals), tail, param, True, F)
    return Signature(name, tuple(vals), "periodic", period, True, F)


def builtin(name: str, kind: str, args: list[str], F: Field = RATIONAL) -> Signature:
    """Built-in signature families."""
    if kind == "const":
        (c,) = args
        return Signature(name, (F.parse(c),), "geom", 1, False, F)
    if kind == "geometric":
        c, r = args
        return Signature(name, (F.parse(c),), "geom", F.parse(r), False, F)
    if kind == "hw_le_1":
        return Signature(name, (1, 1), "zero", None, False, F)
    if kind == "hw_eq_1":
        return Signature(name, (0, 1), "zero", None, True, F)
    if kind == "even":
        return Signature(name, (1, 0), "periodic", 2, False, F)
    if kind == "odd":
        return Signature(name, (0, 1), "periodic", 2, True, F)
    if kind == "indicator":
        if len(args) != 1:
            raise SignatureError("indicator takes one comma-separated set")
        return _indicator(name, args[0], F)
    raise SignatureError(f"unknown builtin {kind!r}")


# -- fingerprints ----------------------------------------------------------

def _shape_terms(d: int):
    """(parts, number of set partitions of that shape, mu(sigma, top))."""
    for lam in int_partitions(d):
        count = multinomial(d, lam.parts) // aut_count(lam)
        ell = len(lam)
        yield lam.parts, count * (-1) ** (ell - 1) * factorial(ell - 1)


_SHAPES: dict[int, list] = {}  # d -> shape terms


@lru_cache(maxsize=None)
def fingerprint(d: int, s: Signature):
    """chi(d, s): sum over set partitions of [d], grouped by block shape."""
    if d < 1:
        raise ValueError("fingerprint needs d >= 1")
    if d > ENUMERATION_LIMIT:
        raise EnumerationLimitError(f"fingerprint limited to d <= {ENUMERATION_LIMIT}")
    if s.zero_at_0:
        raise SignatureError(f"{s.name}: fingerprint needs s(0) != 0")
    if d not in _SHAPES:
        _SHAPES[d] = list(_shape_terms(d))
    inv0 = 1 / s.table[0]
    vals = [s.eval(i) * inv0 for i in range(d + 1)]
    total = s.field.zero
    for parts, coeff in _SHAPES[d]:
        total = total + coeff * prod((vals[p] for p in parts), start=s.field.one)
    return total


def chi_partition(rho: SetPartition, s: Signature):
    """Definitional sum over sigma <= rho of mu(sigma, rho) * prod s(|B|)/s(0)."""
    if s.zero_at_0:
        raise SignatureError(f"{s.name}: fingerprint needs s(0) != 0")
    inv0 = 1 / s.table[0]
    total = s.field.zero
    for sigma in iter_set_partitions(rho.ground_size):
        if refines(sigma, rho):
            total = total + mobius(sigma, rho) * prod((s.eval(len(b)) * inv0 for b in sigma.blocks),
                                                      start=s.field.one)
    return total


@lru_cache(maxsize=None)
def chi_lambda(lam: IntPartition, s: Signature):
    """chi(lambda, s) for a signature normalised to s(0) = 1."""
    if s.table[0] != 1:
        raise SignatureError(f"{s.name}: chi_lambda needs s(0) = 1, normalise first")
    ell = len(lam)
    if ell > ENUMERATION_LIMIT:
        raise EnumerationLimitError("chi_lambda limited to 12 parts")
    parts = lam.parts
    total = s.field.zero
    for sigma in iter_set_partitions(ell):
        m = len(sigma)
        term = prod((s.eval(sum(parts[i] for i in b)) for b in sigma.blocks), start=s.field.one)
        total = total + (-1) ** (m - 1) * factorial(m - 1) * term
    return total


# -- types -------------------------------------------------------------------

@dataclass(frozen=True)
class SignatureSetType:
    tag: str
    certified_up_to: int
    absolute: bool
    witness: tuple[str, int] | None = None


def is_linear_type(s: Signature) -> bool | None:
    """Decide s(n) = s(1)^n (after normalising) for all n from the tail rule.

    Returns None when the tail does not permit an exact decision.
    """
    if s.tail == "undef":
        return None
    t = s.normalized()
    c = t.eval(1)
    D = t.degree
    horizon = D + (t.tail_param if t.tail == "periodic" else 1) + 1
    if any(t.eval(n) != c ** n for n in range(horizon + 1)):
        return False
    if t.tail == "zero":
        return not c
    if t.tail == "geom":
        return t.tail_param == c or not c
    P = t.tail_param
    return not c or c ** P == 1


def classify(S: list[Signature], D: int) -> SignatureSetType:
    if D < 3:
        raise ValueError("degree bound must be at least 3")
    for s in S:
        if s.zero_at_0:
            raise SignatureError(f"{s.name}: s(0) = 0, classify the zero-free part only")
    # an undef tail caps the degrees that can be inspected for that signature;
    # a witness found below any cap is still a witness
    caps = [min(D, s.degree) if s.tail == "undef" else D for s in S]
    bound = min(caps, default=D)
    omega_witness = None
    for s, cap in zip(S, caps):
        for d in range(3, cap + 1):
            if fingerprint(d, s):
                return SignatureSetType(T_INF, cap, True, (s.name, d))
        if omega_witness is None and cap >= 2 and fingerprint(2, s):
            omega_witness = (s.name, 2)
    if omega_witness is not None:
        return SignatureSetType(T_OMEGA, bound, False, omega_witness)
    absolute = all(is_linear_type(s) is True for s in S)
    return SignatureSetType(T_LIN, bound, absolute, None)


def generate_signature(target: str, c, D: int, F: Field = RATIONAL, name: str | None = None) -> Signature:
    """Table signature with s(0)=1, s(1)=c whose fingerprints hit a target type."""
    if D > 10:
        raise ValueError("generator limited to D <= 10")
    c = F(c)
    vals = [F.one, c]

    def rest(d: int):
        # chi(d) without the top-partition term, given vals[0..d-1]
        if d not in _SHAPES:
            _SHAPES[d] = list(_shape_terms(d))
        total = F.zero
        for parts, coeff in _SHAPES[d]:
            if len(parts) > 1:
                total = total + coeff * prod((vals[p] for p in parts), start=F.one)
        return total

    name = name or f"{target}_{F.format(c)}"
    if target == T_LIN:
        for d in range(2, D + 1):
            vals.append(-rest(d))
        return Signature(name, tuple(vals), "undef", None, False, F)
    if target == T_OMEGA:
        vals.append(1 - rest(2))
        for d in range(3, D + 1):
            vals.append(-rest(d))
        return Signature(name, tuple(vals), "undef", None, False, F)
    if target == T_INF:
        vals.append(c)
        vals.append(1 - rest(3))
        return Signature(name, tuple(vals), "zero", None, False, F)
    raise ValueError(f"unknown target type {target!r}")
