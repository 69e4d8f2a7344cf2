"""Acceptance criteria, each run at its stated box and tolerance.

Every test checks the library and, where one exists, a naive reference from
tests/oracles.py.  Each prints a single PASS/FAIL line, collected again in
the terminal summary.
"""
import itertools
import math
import time
from fractions import Fraction

import oracles as ref
from pcg import finite_field as ff
from pcg.analysis import empirical_density, exact_losing_count
from pcg.chain_rsa import ChainSpec, compression_check
from pcg.collapse import alignment_hypothesis_scan
from pcg.game_core import FieldPCG, NumericPCG
from pcg.number_theory import is_prime
from pcg.suites import (
    collapse_suite,
    normalization_suite,
    periodicity_suite,
    repair_blocking_suite,
    sg_suite,
    threshold_suite,
)

BOX_MS = (3, 4, 5, 6)
FIELD_POLYS = {4: 0b111, 8: 0b1011, 16: 0b10011}


def test_criterion_1_compression(record):
    t0 = time.perf_counter()
    spec = ChainSpec(15, 2)
    rep = compression_check(spec, 8, 3)
    elapsed = time.perf_counter() - t0
    ref_bad = [h for h in itertools.product(range(1, 9), repeat=3)
               if (ref.chain_value(15, 2, h) == 2) != (h[0] * h[1] * h[2] % 4 == 1)]
    examples = all(ref.chain_value(15, 2, h) == 2 and h in compression_check(spec, 5, 2).losing
                   for h in [(1, 1), (3, 3), (5, 1)])
    ok = (spec.k == ref.order(2, 15) == 4 and rep.total == 512 and not rep.counterexamples
          and not ref_bad and examples and elapsed < 1.0)
    record("1 compression N=15 g=2 on [1,8]^3", ok,
           f"{rep.total} vectors, {len(rep.counterexamples)} counterexamples, {elapsed:.3f}s")


def test_criterion_2_threshold_outcome(record):
    t0 = time.perf_counter()
    res = threshold_suite(BOX_MS, (2, 3), 3)
    elapsed = time.perf_counter() - t0
    ref_bad = {m: 0 for m in BOX_MS}
    for m in BOX_MS:
        for n in (2, 3):
            for pos in ref.numeric_box(m, n, 3 * m):
                if max(pos) >= m and ref.numeric_is_p(m, pos) != (math.prod(pos) % m == 1):
                    ref_bad[m] += 1
    agree = res.notes["disagreements_by_m"] == ref_bad
    ok = res.passed and agree and elapsed < 30.0
    record("2 threshold predicate == game tree, m in {3,4,5,6}, n in {2,3}, heaps <= 3m", ok,
           f"{res.checked} positions, disagreements by m {res.notes['disagreements_by_m']} "
           f"(reference oracle {ref_bad}), {elapsed:.2f}s")


def test_criterion_3_repair_and_blocking(record):
    res = repair_blocking_suite(BOX_MS, (2, 3), 3)
    ref_bad = 0
    for m in BOX_MS:
        for n in (2, 3):
            for pos in ref.numeric_box(m, n, 3 * m):
                if max(pos) < m:
                    continue
                losing = math.prod(pos) % m == 1
                if (1 in ref.numeric_option_products(m, pos)) == losing:
                    ref_bad += 1
    record("3 repair lands in R, losing positions have no losing option", res.passed and not ref_bad,
           f"{res.notes['repaired']} repaired, {res.notes['blocked']} blocked, "
           f"{len(res.violations)} violations (reference {ref_bad})")


def test_criterion_4_normalization(record):
    res = normalization_suite(BOX_MS, (4, 8, 16), (1, 2, 3))
    record("4 normalize preserves invariant/predicate, normalize+repair in one move", res.passed,
           f"{res.checked} positions, {res.notes['normalize_then_repair']} one-move repairs, "
           f"{len(res.violations)} violations")


def _ref_single_hole_failures():
    bad = 0
    for m in BOX_MS:
        group = set(ref.numeric_group(m))
        for n in (1, 2, 3):
            for pos in ref.numeric_box(m, n, 3 * m):
                if max(pos) >= m:
                    own = math.prod(pos) % m
                    bad += ref.numeric_option_products(m, pos) != group - {own}
    for q, poly in FIELD_POLYS.items():
        group = set(range(1, q))
        for n in (1, 2, 3):
            for pos in itertools.product(range(1, q), repeat=n):
                if q - 1 in pos:
                    bad += ref.field_option_products(poly, pos) != group - {ref.field_product(poly, pos)}
    return bad


def test_criterion_5_single_hole_and_multiplicativity(record):
    res = sg_suite(BOX_MS, (4, 8, 16), (1, 2, 3), (1, 2))
    ref_bad = _ref_single_hole_failures()
    n = res.notes
    record("5 single hole on T, SG multiplicativity on T x T (numeric m<=6, GF(4/8/16))",
           res.passed and not ref_bad,
           f"{res.checked} checks, {n['pairs']} pairs, interior violations {n['interior_violations']}, "
           f"boundary-flagged: {n['boundary_flagged_positions']} positions / {n['boundary_flagged_pairs']} pairs "
           f"with {n['boundary_violations']} violations, reference single-hole failures {ref_bad}")


def test_criterion_6_densities(record):
    found = {}
    ok = True
    for q, (lose, total) in {8: (7, 49), 16: (15, 225), 256: (255, 65025)}.items():
        rep = exact_losing_count(FieldPCG(ff.small_field(q)), 2)
        poly = ff.small_field(q).irreducible
        mask = sum(c << i for i, c in enumerate(poly))
        ref_count = sum(1 for a in range(1, q) for b in range(1, q) if ref.gf2_mul(a, b, mask) == 1)
        found[q] = f"{rep.losing}/{rep.total}"
        ok &= (rep.losing, rep.total) == (lose, total) == (ref_count, (q - 1) ** 2)
        ok &= rep.ratio == Fraction(1, q - 1)
    emp = empirical_density(NumericPCG(4), 2, 400)
    brute = Fraction(sum(1 for a in range(1, 401, 2) for b in range(1, 401, 2) if a * b % 4 == 1), 200 * 200)
    close = abs(emp.ratio - Fraction(1, 2)) <= Fraction(5, 100) * Fraction(1, 2)
    ok &= close and emp.ratio == brute
    record("6 exact densities |G|^(n-1) and m=4 density within 5% of 1/2 at bound 400", ok,
           f"{found}, PCG(4) ratio {emp.ratio} = {float(emp.ratio):.4f}")


def test_criterion_7_periodicity(record):
    res = periodicity_suite((2, 3, 4, 5, 6), 3, 4)
    ref_bad = 0
    for m in (2, 3, 4, 5, 6):
        labels = [v for v in range(1, m) if math.gcd(v, m) == 1]
        for k in range(3):
            for ctx in itertools.product(labels, repeat=k):
                for x in range(m, 4 * m + 1):
                    if math.gcd(x, m) == 1:
                        ref_bad += ref.numeric_is_p(m, ctx + (x,)) != ref.numeric_is_p(m, ctx + (x + m,))
    record("7 ultimate periodicity f(x+m) = f(x), x in [m,4m], m<=6, n<=3", res.passed and not ref_bad,
           f"{res.checked} comparisons, {len(res.violations)} violations (reference {ref_bad})")


def test_criterion_8_collapse(record):
    res = collapse_suite()
    scan = alignment_hypothesis_scan(4, 2, 100)
    primes = [t for t in range(2, 101) if is_prime(t) and t % 4 == 1]
    ok = res.passed and set(primes) <= set(scan.failures)
    record("8 additive coverage, divisor transitivity iff generation, m=4 scan has failures", ok,
           f"{res.checked} checks, {len(res.violations)} violations, m=4 failures {scan.failures[:8]}...")


def test_criterion_9_aes_field(record):
    f = ff.aes_field()
    round_trip = all(ff.c_map(f, ff.s_map(f, h)) == h for h in range(1, 256))
    a, b = ff.s_map(f, 0x53), ff.s_map(f, 0xCA)
    inv_ok = ff.finv(f, a) == b and ref.gf2_inv(0x53, 0x11B) == 0xCA
    mul_ok = ff.fmul(f, a, b) == ff.one(f) and ref.gf2_mul(0x53, 0xCA, 0x11B) == 1
    pow_ok = all(ff.fpow(f, ff.s_map(f, h), 255) == ff.one(f) for h in range(1, 256))
    ref_mul = all(ff.fmul(f, ff.s_map(f, x), ff.s_map(f, y)).index == ref.gf2_mul(x, y, 0x11B)
                  for x in range(1, 256, 7) for y in range(1, 256, 5))
    record("9 AES field: round trip, {53}^-1 = {CA}, a^255 = 1",
           round_trip and inv_ok and mul_ok and pow_ok and ref_mul,
           f"round trip {round_trip}, inverse {inv_ok}, product {mul_ok}, a^255 {pow_ok}")
