"""Complexity-regime verdicts for signature sets.

Verdicts are metadata derived from fingerprints; nothing here runs a
reduction.  A verdict is certified up to a degree bound D unless the
signatures' tail rules decide the type for every degree.
"""
from __future__ import annotations

from dataclasses import dataclass

from .scalars import FieldError, prime_field
from .signatures import (
    T_INF,
    T_LIN,
    T_OMEGA,
    Signature,
    SignatureError,
    SignatureSetType,
    classify,
)

__all__ = [
    "NEAR_LINEAR",
    "MATRIX",
    "HARD",
    "Verdict",
    "classify_coloured",
    "classify_uncoloured",
    "classify_factor",
    "indicator_kind",
]

NEAR_LINEAR = "near_linear"
MATRIX = "matrix_multiplication"
HARD = "sharpW1_complete"

_REGIME = {T_LIN: NEAR_LINEAR, T_OMEGA: MATRIX, T_INF: HARD}


@dataclass(frozen=True)
class Verdict:
    problem: str
    regime: str
    basis: str
    witness: tuple[str, int] | None = None
    relative_bound: int | None = None
    type_tag: str | None = None
    note: str = ""

    def line(self) -> str:
        scope = f"certified_up_to={self.relative_bound}" if self.relative_bound is not None else "absolute"
        parts = [self.problem, self.regime, f"type={self.type_tag or '-'}", scope, f"basis={self.basis}"]
        if self.note:
            parts.append(f"note={self.note}")
        return "\t".join(parts)

    def witness_line(self) -> str | None:
        if self.witness is None:
            return None
        name, d = self.witness
        return f"witness\t{self.problem}\t{name}\tchi({d})!=0"


def _split(S: list[Signature]):
    zero = [s for s in S if s.zero_at_0]
    rest = [s for s in S if not s.zero_at_0]
    return zero, rest


def _reduce(S: list[Signature], p: int) -> list[Signature]:
    F = prime_field(p)
    out = []
    for s in S:
        try:
            out.append(s.over(F))
        except SignatureError:
            # s(0) vanishes mod p: it joins the zero-at-0 part
            out.append(Signature(s.name, s.table, s.tail, s.tail_param, True, s.field).over(F))
        except FieldError as exc:
            raise SignatureError(f"{s.name}: cannot reduce mod {p}: {exc}") from exc
    return out


def _verdict(problem: str, t: SignatureSetType, basis: str, regime: str, note: str = "",
             zero_part: bool = False) -> Verdict:
    relative = None if t.absolute else t.certified_up_to
    if zero_part:
        note = (note + "; " if note else "") + "zero-at-0 signatures split off"
    return Verdict(problem, regime, basis, t.witness, relative, t.tag, note)


def classify_coloured(S: list[Signature], D: int, p: int | None = None) -> Verdict:
    problem = "coloured" if p is None else "coloured_mod_p"
    if p is not None:
        S = _reduce(S, p)
    zero, rest = _split(S)
    basis = "coloured-trichotomy" if p is None else f"modular-trichotomy(p={p})"
    if zero:
        basis += "+zero-extension"
    if not rest:
        return Verdict(problem, NEAR_LINEAR, basis, None, None, None,
                       "only zero-at-0 signatures: nonzero only when k >= n0/2")
    t = classify(rest, D)
    regime = _REGIME[t.tag]
    note = ""
    if t.tag == T_OMEGA:
        note = "not near-linear unless the Triangle Conjecture fails"
    elif t.tag == T_INF:
        note = ("Mod_p-W[1]-hard; no f(k)n^o(k/log k) under rETH" if p is not None
                else "no f(k)n^o(k/log k) algorithm under ETH")
    return _verdict(problem, t, basis, regime, note, bool(zero))


def classify_uncoloured(S: list[Signature], D: int) -> Verdict:
    zero, rest = _split(S)
    basis = "uncoloured-dichotomy" + ("+zero-extension" if zero else "")
    if not rest:
        return Verdict("uncoloured", NEAR_LINEAR, basis, None, None, None,
                       "only zero-at-0 signatures: nonzero only when k >= n0/2")
    t = classify(rest, D)
    if t.tag == T_LIN:
        return _verdict("uncoloured", t, basis, NEAR_LINEAR, zero_part=bool(zero))
    note = "no f(k)n^o(k/log k) algorithm under ETH" if t.tag == T_INF else "#W[1]-complete"
    return _verdict("uncoloured", t, basis, HARD, note, bool(zero))


def indicator_kind(s: Signature) -> str:
    """'empty-at-0', 'zero-only', 'all', or 'proper' for a 0/1 indicator signature.

    'proper' means {0} is a proper subset of S and S is a proper subset of N.
    """
    if s.tail == "undef":
        raise SignatureError(f"{s.name}: membership beyond degree {s.degree} is undecidable")
    horizon = s.degree + (s.tail_param if s.tail == "periodic" else 1) + 1
    vals = [s.eval(d) for d in range(horizon + 1)]
    if any(v not in (0, 1) for v in vals) or (s.tail == "geom" and s.tail_param not in (0, 1)):
        raise SignatureError(f"{s.name}: not a 0/1 indicator")
    if not vals[0]:
        return "empty-at-0"
    if all(v == 1 for v in vals) and (s.tail != "geom" or s.tail_param == 1):
        return "all"
    if not any(vals[1:]) and not (s.tail == "geom" and s.tail_param and vals[-1]):
        return "zero-only"
    return "proper"


def classify_factor(B: list[Signature], coloured: bool) -> Verdict:
    problem = "col_factor" if coloured else "factor"
    proper = [s for s in B if indicator_kind(s) == "proper"]
    if proper:
        return Verdict(problem, HARD, "factor-criterion", None, None, None,
                       f"{proper[0].name} satisfies {{0}} < S < N; no f(k)n^o(k/log k) under ETH")
    return Verdict(problem, NEAR_LINEAR, "factor-criterion", None, None, None,
                   "every set is {0}, N, or misses 0")
