"""Oracle-equivalence harness: every applicable route against brute force."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .holant import (
    HolantError,
    holant_brute_coloured,
    holant_brute_uncoloured,
    holant_coloured_via_inclusion_exclusion,
    holant_star_fast,
    holant_uncol_fast,
    holant_with_zeros,
)
from .instances import Instance, random_instance
from .scalars import RATIONAL, Field

__all__ = ["RunConfig", "VerifyReport", "routes_for", "run_trial", "run_verify"]


@dataclass(frozen=True)
class RunConfig:
    field: Field = RATIONAL
    seed: int = 0
    k_max: int = 3
    brute_limit: int = 10 ** 7
    fmt: str = "text"

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.k_max < 0:
            raise ValueError("k_max must be non-negative")
        if self.fmt not in ("text", "tsv"):
            raise ValueError("format must be text or tsv")


@dataclass
class VerifyReport:
    lines: list[str] = field(default_factory=list)
    trials: int = 0
    comparisons: int = 0
    mismatch: str | None = None

    @property
    def ok(self) -> bool:
        return self.mismatch is None

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def routes_for(inst: Instance):
    """(name, thunk) pairs for every route applicable to the instance."""
    g, k = inst.grid, inst.k
    zeros = any(s.zero_at_0 for s in g.signatures)
    out = []
    if inst.mode == "uncoloured":
        if not zeros:
            out.append(("uncoloured_hombasis", lambda: holant_uncol_fast(g, k)))
        out.append(("interpolation", lambda: holant_with_zeros(g, k, "uncoloured")))
        return out
    if g.h_colouring is not None and not zeros:
        out.append(("coloured_hombasis", lambda: holant_star_fast(g)))
    if not zeros:
        out.append(("inclusion_exclusion", lambda: holant_coloured_via_inclusion_exclusion(g, k)))
    out.append(("interpolation", lambda: holant_with_zeros(g, k, "coloured")))
    return out


def run_trial(inst: Instance):
    """Returns (brute value, [(route, value or None if inapplicable)])."""
    g = inst.grid
    if inst.mode == "uncoloured":
        expected = holant_brute_uncoloured(g, inst.k).value
    else:
        expected = holant_brute_coloured(g, inst.k).value
    got = []
    for name, thunk in routes_for(inst):
        try:
            got.append((name, thunk().value))
        except HolantError as exc:
            if "field too small" not in str(exc):
                raise
            got.append((name, None))
    return expected, got


def run_verify(config: RunConfig, trials: int) -> VerifyReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    F = config.field
    rep = VerifyReport()
    sep = "\t" if config.fmt == "tsv" else " "
    for i in range(trials):
        rng = random.Random(f"{config.seed}:{i}")
        inst = random_instance(rng, F, config.k_max)
        expected, got = run_trial(inst)
        rep.trials += 1
        checked = []
        for name, val in got:
            if val is None:
                checked.append(name + "(skipped)")
                continue
            rep.comparisons += 1
            checked.append(name)
            if val != expected and rep.mismatch is None:
                rep.mismatch = (f"MISMATCH{sep}trial={i}{sep}route={name}{sep}"
                                f"got={F.format(val)}{sep}expected={F.format(expected)}{sep}"
                                + inst.describe().replace("\t", sep))
        rep.lines.append(sep.join([f"trial={i}", inst.describe().replace("\t", sep),
                                   f"value={F.format(expected)}", "routes=" + ",".join(checked)]))
        if rep.mismatch is not None:
            rep.lines.append(rep.mismatch)
            return rep
    rep.lines.append(sep.join(["all-pass", f"trials={rep.trials}", f"comparisons={rep.comparisons}",
                               f"field={F.spec().replace(' ', '')}", f"seed={config.seed}"]))
    return rep
