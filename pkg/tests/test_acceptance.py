"""Acceptance checks, one per criterion.

Each check prints a single line ``criterion N: PASS|FAIL (seconds) summary``.
Run ``python3 tests/test_acceptance.py`` for the bare report or
``pytest -s tests/test_acceptance.py`` to see the lines under pytest.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from itertools import product
from math import comb, factorial

import pytest

from holant_lab.apps import count_matchings, enumerate_matchings, xor_weight
from holant_lab.bench import format_rows, fit_slope, run_bench
from holant_lab.classifier import HARD, MATRIX, NEAR_LINEAR, classify_coloured, classify_factor, classify_uncoloured
from holant_lab.grids import (
    ColouredPattern,
    Graph,
    SignatureGrid,
    aut_count_pattern,
    enumerate_patterns,
    patterns_up_to,
    treewidth,
)
from holant_lab.holant import evaluate
from holant_lab.homcount import check_tree_decomposition, count_homs_brute, count_homs_tree, count_homs_tw2, tw2_decomposition
from holant_lab.instances import random_instance
from holant_lab.partitions import int_partitions, iter_set_partitions, mult, mult_definitional
from holant_lab.scalars import GAUSSIAN, RATIONAL, prime_field
from holant_lab.signatures import T_INF, T_OMEGA, Signature, builtin, chi_lambda, fingerprint, generate_signature
from holant_lab.verify import run_trial
from holant_lab.zeta import zeta_closed, zeta_definitional

GF2 = prime_field(2)


def _chi_oracle(d, s):
    # moment-cumulant recursion, independent of the shape-grouped sum
    t = [s(i) / s(0) for i in range(d + 1)]
    chi = {}
    for n in range(1, d + 1):
        chi[n] = t[n] - sum(comb(n - 1, j - 1) * chi[j] * t[n - j] for j in range(1, n))
    return chi[d]


# -- checks -----------------------------------------------------------------------

def check_1():
    ok = fingerprint(4, builtin("e", "even", [])) == -2
    hw2 = builtin("m", "hw_le_1", [], GF2)
    ok &= fingerprint(2, hw2) == GF2(1)
    ok &= all(fingerprint(d, hw2) == 0 for d in range(3, 9))
    const = builtin("c", "const", ["7"])
    ok &= all(fingerprint(d, const) == 0 for d in range(2, 9))
    for a, b in [(1, 0), (3, -2), (-1, 5)]:
        g = builtin("g", "geometric", [str(Fraction(2) ** b), str(Fraction(2) ** a)])  # 2^(a x + b)
        ok &= all(fingerprint(d, g) == 0 for d in range(2, 9))
    return ok, "chi(4,even)=-2; hw_le_1 over GF(2); constant and 2^(ax+b) vanish for d=2..8"


def check_2():
    cases = 0
    ok = True
    for d in range(1, 8):
        for lam in int_partitions(d):
            ok &= mult(lam) == mult_definitional(lam)
            cases += 1
    for d in range(2, 9):
        ok &= sum((-1) ** (len(s) - 1) * factorial(len(s) - 1) for s in iter_set_partitions(d)) == 0
    return ok, f"mult closed form = definition on {cases} partitions; alternating sums vanish for d=2..8"


CORPUS5 = [
    builtin("c", "const", ["3"]),
    builtin("g", "geometric", ["2", "1/2"]),
    generate_signature(T_OMEGA, 2, 8, name="w"),
    builtin("e", "even", []),
    generate_signature(T_INF, 1, 8, name="i"),
]


def check_3():
    cases = mismatches = 0
    pats = patterns_up_to(CORPUS5, 3)
    for k in range(1, 5):
        for P in pats:
            cases += 1
            if zeta_closed(P, k, CORPUS5) != zeta_definitional(P, k, CORPUS5):
                mismatches += 1
    return mismatches == 0, f"{cases} (pattern, k) cases over 5 signatures, {mismatches} mismatches"


def check_4():
    S = [CORPUS5[1], CORPUS5[2], CORPUS5[4]]  # one signature per type
    sigs = {s.name: s for s in S}
    cases = mismatches = 0
    for k in range(1, 5):
        for P in enumerate_patterns(S, k):
            expected = Fraction(1, aut_count_pattern(P))
            for v in range(P.n):
                expected *= _chi_oracle(P.graph.degree(v), sigs[P.colours[v]])
            cases += 1
            if zeta_closed(P, k, S) != expected:
                mismatches += 1
    return mismatches == 0, f"{cases} patterns with |E| = k <= 4, {mismatches} mismatches"


def check_5():
    fields = [RATIONAL, GAUSSIAN, prime_field(5)]
    instances = comparisons = 0
    for F in fields:
        for i in range(100):
            inst = random_instance(random.Random(f"accept:{F.spec()}:{i}"), F)
            expected, got = run_trial(inst)
            instances += 1
            for name, val in got:
                if val is None:
                    continue
                comparisons += 1
                if val != expected:
                    return False, f"mismatch: {F.spec()} trial {i} route {name}"
    return instances >= 300, f"{instances} instances over rational/gaussian/gf 5, {comparisons} route comparisons agree"


def check_6():
    rng = random.Random(66)
    K3 = ColouredPattern.make(3, [(0, 1), (1, 2), (0, 2)], "sss")
    ok = True
    zeros = 0
    for i in range(10):
        s1 = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        s2 = s1 ** 2 if i % 3 == 0 else Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        s = Signature("s", (1, s1, s2, Fraction(rng.randint(-9, 9))), "zero")
        z = zeta_closed(K3, 3, [s])
        ok &= z == (s2 - s1 ** 2) ** 3 / 6
        ok &= (z == 0) == (s2 == s1 ** 2)
        zeros += z == 0
    return ok, f"zeta(K3,3) = (s(2)-s(1)^2)^3/6 on 10 signatures ({zeros} with s(2)=s(1)^2)"


def check_7():
    ok = True
    a_table: dict[tuple[int, ...], set] = {}
    sigs = [generate_signature(T_OMEGA, c, 8) for c in (-3, -1, 0, 1, 2, Fraction(1, 2))]
    # geometric twists s(x) t^x keep the type and move the gap s(2)-s(1)^2 away from 1
    sigs += [Signature(f"tw{t}", tuple(s(d) * Fraction(t) ** d for d in range(9)), "undef")
             for s, t in zip(sigs[:3], (2, -3, Fraction(1, 2)))]
    for s in sigs:
        gap = s(2) - s(1) ** 2
        for n in range(1, 9):
            for lam in int_partitions(n):
                ell = len(lam)
                val = chi_lambda(lam, s)
                if n < 2 * ell - 2:
                    ok &= val == 0
                elif n == 2 * ell - 2:
                    a = val / gap ** (ell - 1)
                    ok &= a.denominator == 1 and a > 0
                    a_table.setdefault(lam.parts, set()).add(a)
    ok &= all(len(v) == 1 for v in a_table.values())
    shown = ", ".join(f"{'+'.join(map(str, k))}:{next(iter(v))}" for k, v in sorted(a_table.items())[:6])
    return ok, f"{len(sigs)} T_Omega signatures, |lambda| <= 8; a_lambda {shown}, ..."


def check_8():
    rng = random.Random(88)
    pairs = 0
    ok = True
    while pairs < 220:
        n = rng.randint(2, 6)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5])
        if not g.m or any(g.degree(v) == 0 for v in range(n)) or treewidth(g) > 2:
            continue
        hn = rng.randint(2, 7)
        host = Graph(hn, [(u, v) for u in range(hn) for v in range(u + 1, hn) if rng.random() < 0.6])
        lists = [set(x for x in range(hn) if rng.random() < 0.75) for _ in range(n)] if pairs % 2 else None
        L = [range(hn) if lists is None else sorted(lists[v]) for v in range(n)]
        naive = sum(1 for f in product(*L) if all(host.has_edge(f[u], f[v]) for u, v in g.edges))
        ok &= count_homs_brute(g, host, lists) == naive
        ok &= count_homs_tw2(g, host, lists) == naive
        if g.is_forest():
            ok &= count_homs_tree(g, host, lists) == naive
        if len(g.components()) == 1:
            check_tree_decomposition(g, tw2_decomposition(g))
        pairs += 1
    return ok, f"{pairs} pattern/host pairs (half with lists): tree and tw2 DP equal brute force"


def check_9():
    rng = random.Random(99)
    ok = True
    graphs = 0
    for _ in range(40):
        n = rng.randint(2, 9)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        g = Graph(n, rng.sample(pairs, rng.randint(0, min(12, len(pairs)))))
        graphs += 1
        for k in range(5):
            ok &= count_matchings(g, k) == enumerate_matchings(g, k)
    tri = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    ok &= xor_weight(tri, 3) == 1 and xor_weight(tri, 2) == 0
    K4 = Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    res = evaluate(SignatureGrid(K4, [builtin("h", "hw_eq_1", [])] * 4), 2)
    ok &= res.value == 3 and res.route == "interpolation"
    return ok, f"matchings on {graphs} graphs (k<=4), xor triangle (1, 0), K4 perfect matchings = 3"


def check_10():
    ok = classify_coloured([builtin("m", "hw_le_1", [])], 6, p=2).regime == MATRIX
    even = [builtin("e", "even", [])]
    ok &= classify_coloured(even, 6).regime == HARD and classify_uncoloured(even, 6).regime == HARD
    for s in (builtin("c", "const", ["2"]), builtin("g", "geometric", ["8", "4"])):
        ok &= classify_coloured([s], 6).regime == NEAR_LINEAR == classify_uncoloured([s], 6).regime
    specs = {"0,1": True, "0,2..": True, "even": True, "0..": False, "0": False, "1": False, "odd": False,
             "0,1,2": True, "1..": False}
    for a, b in product(specs, repeat=2):
        B = [builtin(a, "indicator", [a]), builtin(b, "indicator", [b])]
        for coloured in (False, True):
            ok &= (classify_factor(B, coloured).regime == HARD) == (specs[a] or specs[b])
    return ok, "hw_le_1 mod 2, even, constant, 2^(ax+b) and the factor criterion on 81 set pairs"


def check_11():
    rows = run_bench("acyclic", [1000, 3000, 10000, 30000, 100000], timeout=120.0)
    slope = fit_slope(rows)
    table = format_rows(rows, "tsv")
    print(table, end="")
    ok = slope is not None and slope <= 1.2
    return ok, f"acyclic family slope {slope:.3f} (target <= 1.2, informational)", table


CRITERIA = {
    1: (check_1, 1.0, True),
    2: (check_2, 10.0, True),
    3: (check_3, 300.0, True),
    4: (check_4, 60.0, True),
    5: (check_5, 600.0, True),
    6: (check_6, 1.0, True),
    7: (check_7, 60.0, True),
    8: (check_8, 300.0, True),
    9: (check_9, 60.0, True),
    10: (check_10, 1.0, True),
    11: (check_11, 600.0, False),
}


def run_criterion(n: int):
    fn, budget, gating = CRITERIA[n]
    t0 = time.perf_counter()
    result = fn()
    dt = time.perf_counter() - t0
    ok, summary = result[0], result[1]
    passed = bool(ok) and dt < budget
    over = "" if dt < budget else f" over budget {budget:g}s"
    print(f"criterion {n}: {'PASS' if passed else 'FAIL'} ({dt:.2f}s{over}) {summary}")
    return passed, gating, result


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    passed, gating, result = run_criterion(n)
    if gating:
        assert passed
    else:
        # informational: the timing table must exist, the slope itself is hardware-dependent
        assert result[2].startswith("family")


if __name__ == "__main__":
    failed = [n for n in sorted(CRITERIA) if not run_criterion(n)[0] and CRITERIA[n][2]]
    sys.exit(1 if failed else 0)
