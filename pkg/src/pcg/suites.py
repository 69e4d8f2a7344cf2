"""Exhaustive verification suites over desk-scale boxes.

Every suite returns a :class:`SuiteResult` whose ``box`` says exactly what
was covered and whose ``violations`` list is empty on success.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import finite_field as ff
from .analysis import empirical_density, exact_losing_count, periodicity_check
from .chain_rsa import ChainSpec, compression_check
from .collapse import (
    AdditiveGameSpec,
    DivisorGameSpec,
    additive_alignment_instance,
    additive_reach_check,
    alignment_hypothesis_scan,
    alignment_principle_check,
    divisor_collapse_check,
    divisor_move_units,
    generates_group,
)
from .game_core import (
    FieldPCG,
    GameSpec,
    NumericPCG,
    RegionTag,
    apply_move,
    invariant_label,
    is_label,
    is_legal,
    is_losing_predicate,
    legal_moves,
    normalize,
    outcome_bruteforce,
    positions,
    region,
    repair_move,
    threshold_classify,
)
from .grundy import sg_multiplicativity_check, single_hole_check
from .number_theory import gcd, is_prime

NUMERIC_MS = (3, 4, 5, 6)
FIELD_QS = (4, 8, 16)


@dataclass
class SuiteResult:
    name: str
    box: dict
    checked: int = 0
    violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self, max_violations: int = 50) -> dict:
        return {
            "suite": self.name,
            "box": self.box,
            "checked": self.checked,
            "violation_count": len(self.violations),
            "violations": [str(v) for v in self.violations[:max_violations]],
            "notes": {k: str(v) if isinstance(v, Fraction) else v for k, v in self.notes.items()},
            "elapsed_s": round(self.elapsed, 3),
            "passed": self.passed,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.checked} checks, {len(self.violations)} violations, box={self.box}"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.elapsed = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _threshold_box(spec: GameSpec, n: int, max_heap: int):
    return [p for p in positions(spec, n, max_heap) if region(spec, p) is RegionTag.THRESHOLD]


@_timed
def compression_suite(N: int = 15, g: int = 2, bound: int = 8, n: int = 3) -> SuiteResult:
    spec = ChainSpec(N, g)
    rep = compression_check(spec, bound, n)
    res = SuiteResult("compression", {"N": N, "g": g, "k": spec.k, "bound": bound, "n": n})
    res.checked = rep.total
    res.violations = list(rep.counterexamples)
    res.notes = {"total": rep.total, "losing_count": rep.losing_count}
    if (N, g) == (15, 2):
        pairs = compression_check(spec, max(bound, 5), 2)
        losing = set(pairs.losing)
        for ex in [(1, 1), (3, 3), (5, 1)]:
            res.checked += 1
            if ex not in losing:
                res.violations.append(("example not losing", ex))
    return res


@_timed
def threshold_suite(ms=NUMERIC_MS, ns=(2, 3), factor: int = 3, bounded_decrement: bool = False) -> SuiteResult:
    """Predicate classifier against the game-tree oracle on Threshold positions."""
    res = SuiteResult("threshold", {"m": list(ms), "n": list(ns), "max_heap": f"{factor}m",
                                    "unit_mode": True, "R": [1], "bounded_decrement": bounded_decrement})
    per_m = {}
    for m in ms:
        spec = NumericPCG(m, bounded_decrement=bounded_decrement)
        bad = 0
        for n in ns:
            for pos in _threshold_box(spec, n, factor * m):
                res.checked += 1
                fast, truth = threshold_classify(spec, pos), outcome_bruteforce(spec, pos)
                if fast is not truth:
                    bad += 1
                    res.violations.append((m, pos, f"predicate {fast}", f"oracle {truth}"))
        per_m[m] = bad
    res.notes["disagreements_by_m"] = per_m
    return res


@_timed
def repair_blocking_suite(ms=NUMERIC_MS, ns=(2, 3), factor: int = 3) -> SuiteResult:
    res = SuiteResult("repair_blocking", {"m": list(ms), "n": list(ns), "max_heap": f"{factor}m",
                                          "unit_mode": True, "R": [1]})
    repaired = blocked = 0
    for m in ms:
        spec = NumericPCG(m)
        for n in ns:
            for pos in _threshold_box(spec, n, factor * m):
                res.checked += 1
                if is_losing_predicate(spec, pos):
                    blocked += 1
                    bad = [mv for mv in legal_moves(spec, pos)
                           if is_losing_predicate(spec, apply_move(spec, pos, mv))]
                    if bad:
                        res.violations.append((m, pos, "losing option", bad[0]))
                else:
                    repaired += 1
                    mv = repair_move(spec, pos)
                    if not is_legal(spec, pos, mv) or not pos[mv.heap_index] >= m:
                        res.violations.append((m, pos, "bad repair", mv))
                    elif not is_losing_predicate(spec, apply_move(spec, pos, mv)):
                        res.violations.append((m, pos, "repair misses R", mv))
    res.notes = {"repaired": repaired, "blocked": blocked}
    return res


def _normalization_specs(ms, qs):
    for m in ms:
        yield NumericPCG(m), 3 * m
    for q in qs:
        yield FieldPCG(ff.small_field(q)), q - 1


@_timed
def normalization_suite(ms=NUMERIC_MS, qs=FIELD_QS, ns=(1, 2, 3)) -> SuiteResult:
    res = SuiteResult("normalization", {"m": list(ms), "q": list(qs), "n": list(ns),
                                        "max_heap": "3m (numeric) / q-1 (field)"})
    one_move = 0
    for spec, top in _normalization_specs(ms, qs):
        for n in ns:
            for pos in positions(spec, n, top):
                res.checked += 1
                norm = normalize(spec, pos)
                if len(norm) != 1 or not is_label(spec, norm[0]):
                    res.violations.append((str(spec), pos, "normal form not a single legal heap", norm))
                    continue
                if invariant_label(spec, norm) != invariant_label(spec, pos):
                    res.violations.append((str(spec), pos, "invariant changed", norm))
                if is_losing_predicate(spec, norm) != is_losing_predicate(spec, pos):
                    res.violations.append((str(spec), pos, "predicate changed", norm))
                if region(spec, pos) is RegionTag.INDETERMINACY and not is_losing_predicate(spec, pos):
                    mv = repair_move(spec, norm)
                    after = apply_move(spec, norm, mv)
                    if is_losing_predicate(spec, after):
                        one_move += 1
                    else:
                        res.violations.append((str(spec), pos, "normalize+repair missed", after))
    res.notes = {"normalize_then_repair": one_move}
    return res


def _sg_specs(ms, qs):
    for m in ms:
        yield NumericPCG(m), 3 * m
    for q in qs:
        yield FieldPCG(ff.small_field(q)), q - 1


@_timed
def sg_suite(ms=NUMERIC_MS, qs=FIELD_QS, hole_ns=(1, 2, 3), pair_ns=(1, 2)) -> SuiteResult:
    """Single-hole on every Threshold position and multiplicativity on every
    Threshold pair, options valued by invariant even when they fall into I."""
    res = SuiteResult("single_hole_sg", {"m": list(ms), "q": list(qs), "single_hole_n": list(hole_ns),
                                         "pair_summand_n": list(pair_ns),
                                         "max_heap": "3m (numeric) / q-1 (field)"})
    hole_boundary = pairs = pair_boundary = 0
    boundary_violations = 0
    for spec, top in _sg_specs(ms, qs):
        for n in hole_ns:
            for pos in _threshold_box(spec, n, top):
                res.checked += 1
                sh = single_hole_check(spec, pos)
                hole_boundary += sh.boundary
                if not sh.holds:
                    res.violations.append((str(spec), pos, "single hole fails", sorted(sh.missing)))
                    boundary_violations += sh.boundary
        summands = [p for n in pair_ns for p in _threshold_box(spec, n, top)]
        rep = sg_multiplicativity_check(spec, itertools.product(summands, repeat=2))
        pairs += len(rep.rows)
        res.checked += len(rep.rows)
        pair_boundary += sum(r.boundary_flag for r in rep.rows)
        boundary_violations += len(rep.boundary_violations)
        res.violations += [(str(spec), r.to_dict()) for r in rep.violations]
    res.notes = {"pairs": pairs, "boundary_flagged_positions": hole_boundary,
                 "boundary_flagged_pairs": pair_boundary, "boundary_violations": boundary_violations,
                 "interior_violations": len(res.violations) - boundary_violations}
    return res


@_timed
def density_suite(bound: int = 400, tolerance: float = 0.05) -> SuiteResult:
    res = SuiteResult("density", {"exact": ["GF(8) n=2", "GF(16) n=2", "GF(256)/0x11B n=2"],
                                  "empirical": f"PCG(4,{{1}}) unit_mode n=2 bound={bound}",
                                  "tolerance": tolerance})
    expected = {8: (7, 49), 16: (15, 225), 256: (255, 65025)}
    for q, (lose, total) in expected.items():
        spec = FieldPCG(ff.small_field(q))
        rep = exact_losing_count(spec, 2)
        res.checked += 1
        res.notes[f"GF({q})"] = f"{rep.losing}/{rep.total}"
        if (rep.losing, rep.total) != (lose, total) or rep.constructive != lose or rep.ratio != Fraction(1, q - 1):
            res.violations.append((q, rep))
    emp = empirical_density(NumericPCG(4), 2, bound)
    res.checked += 1
    res.notes["PCG(4) unit ratio"] = emp.ratio
    if abs(emp.ratio - emp.predicted) > tolerance * emp.predicted:
        res.violations.append(("empirical", emp))
    return res


@_timed
def periodicity_suite(ms=NUMERIC_MS, max_n: int = 3, x_factor: int = 4) -> SuiteResult:
    """Oracle outcomes f(x) vs f(x+m) for x in [m, 4m], every context of labels < m."""
    res = SuiteResult("periodicity", {"m": list(ms), "n": f"<= {max_n}", "x": "[m, 4m]",
                                      "contexts": "all label tuples < m", "outcomes": "game-tree oracle"})
    for m in ms:
        spec = NumericPCG(m)
        labels = [v for v in range(1, m) if is_label(spec, v)]
        for k in range(max_n):
            for ctx in itertools.product(labels, repeat=k):
                for j in range(k + 1):
                    rep = periodicity_check(spec, ctx, j, x_factor * m)
                    res.checked += len(rep.rows)
                    res.violations += [(m, ctx, j, x) for x in rep.violations]
    return res


@_timed
def collapse_suite(ms=(2, 3, 4, 5, 6), max_n: int = 3, divisor_ms=tuple(range(2, 13)),
                   divisor_bound: int = 200, scan_bound: int = 100) -> SuiteResult:
    res = SuiteResult("collapse", {"additive_m": list(ms), "n": f"<= {max_n}", "max_heap": "3m",
                                   "divisor_m": list(divisor_ms), "divisor_t": f"[2, {divisor_bound}]",
                                   "scan": f"m=4, t in [2, {scan_bound}]"})
    for m in ms:
        spec = AdditiveGameSpec(m, 0)
        for n in range(1, max_n + 1):
            for pos in itertools.product(range(1, 3 * m + 1), repeat=n):
                for j, t in enumerate(pos):
                    if t >= m:
                        res.checked += 1
                        if not additive_reach_check(spec, pos, j).covers_all:
                            res.violations.append(("additive", m, pos, j))
        table, images = additive_alignment_instance(m, 3 * m)
        res.checked += 1
        if not alignment_principle_check(table, images, kernel=range(1, m)):
            res.violations.append(("additive alignment", m))

    direct_gap = 0
    for m in divisor_ms:
        spec = DivisorGameSpec(m)
        for t in range(2, divisor_bound + 1):
            if gcd(t, m) != 1:
                continue
            gen = generates_group(divisor_move_units(t, m), m)
            for other in (1, m - 1):
                res.checked += 1
                dc = divisor_collapse_check(spec, (t, other), 0)
                if dc.transitive != gen:
                    res.violations.append(("divisor", m, t, other, gen, dc.transitive))
                direct_gap += gen and not dc.direct_transitive

    scan = alignment_hypothesis_scan(4, 2, scan_bound)
    primes_1mod4 = [t for t in range(2, scan_bound + 1) if is_prime(t) and t % 4 == 1]
    res.checked += 1
    if not scan.failures or not set(primes_1mod4) <= set(scan.failures):
        res.violations.append(("scan m=4 lacks failures at primes 1 mod 4", scan.failures[:10]))
    res.notes = {"m4_scan_failures": len(scan.failures), "m4_primes_1mod4": len(primes_1mod4),
                 "generating_heaps_not_one_move_transitive": direct_gap}
    return res


@_timed
def field_suite() -> SuiteResult:
    """AES field: s/C round trip, {53}^-1 = {CA}, a^255 = 1."""
    f = ff.aes_field()
    res = SuiteResult("aes_field", {"field": "GF(2^8) mod 0x11B", "labels": "1..255"})
    for h in range(1, 256):
        res.checked += 1
        if ff.c_map(f, ff.s_map(f, h)) != h:
            res.violations.append(("round trip", h))
        res.checked += 1
        if ff.fpow(f, ff.s_map(f, h), 255) != ff.one(f):
            res.violations.append(("a^255", h))
    a, b = ff.s_map(f, 0x53), ff.s_map(f, 0xCA)
    res.checked += 2
    if ff.finv(f, a) != b:
        res.violations.append(("finv(0x53)", ff.finv(f, a).index))
    if ff.fmul(f, a, b) != ff.one(f):
        res.violations.append(("0x53*0xCA", ff.fmul(f, a, b).index))
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "compression": compression_suite,
    "threshold": threshold_suite,
    "repair": repair_blocking_suite,
    "normalize": normalization_suite,
    "sg": sg_suite,
    "density": density_suite,
    "period": periodicity_suite,
    "collapse": collapse_suite,
    "field": field_suite,
}
