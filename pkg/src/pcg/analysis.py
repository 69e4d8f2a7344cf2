"""Losing densities, ultimate periodicity and the side-by-side comparison table."""
from __future__ import annotations

import csv
import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TextIO

from . import finite_field as ff
from .errors import InvalidSpec, TooLarge
from .finite_field import FieldSpec
from .game_core import (
    ChainRSA,
    FieldPCG,
    GameSpec,
    NumericPCG,
    Outcome,
    _engine_spec,
    is_label,
    losing_set,
    modulus,
    mul_values,
    outcome,
    outcome_bruteforce,
)
from .grundy import sg_multiplicativity_check
from .number_theory import carmichael_lambda, crt_split, euler_phi, is_prime, mod_inverse, units

EXACT_LIMIT = 10**7
GAME_TREE_LIMIT = 5_000


@dataclass
class DensityReport:
    spec: str
    n: int
    total: int
    losing: int
    predicted: Fraction
    bound: int | None = None
    constructive: int | None = None  # count from solving for the last heap
    game_tree_losing: int | None = None  # oracle P-positions in the same box

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.losing, self.total)

    def row(self) -> list:
        return [self.spec, self.n, self.bound if self.bound is not None else "",
                self.total, self.losing, str(self.ratio), str(self.predicted)]


DENSITY_HEADER = ["spec", "n", "bound", "total", "losing", "ratio", "predicted"]


def write_density_csv(reports: list[DensityReport], fh: TextIO):
    w = csv.writer(fh)
    w.writerow(DENSITY_HEADER)
    for r in reports:
        w.writerow(r.row())


def group_labels(spec: GameSpec) -> list[int]:
    """One period of heap labels, i.e. one label per group element."""
    eng = _engine_spec(spec)
    if isinstance(eng, FieldPCG):
        return list(range(1, eng.field.q))
    if not eng.unit_mode:
        raise InvalidSpec("exact counts need a finite group; use unit mode")
    return units(eng.m)


def _inverse(spec: GameSpec, a: int) -> int:
    if isinstance(spec, FieldPCG):
        return ff.inv_label(spec.field, a)
    return mod_inverse(a, modulus(spec))


def exact_losing_count(spec: GameSpec, n: int, game_tree_limit: int = GAME_TREE_LIMIT) -> DensityReport:
    """Count predicate-losing positions among all |G|^n label vectors.

    The enumeration is cross-checked by a constructive count that fixes the
    first n-1 heaps and solves for the last one.  When the box is small the
    game-tree P count is attached too (it differs inside I).
    """
    labels = group_labels(spec)
    G = len(labels)
    if G**n > EXACT_LIMIT:
        raise TooLarge(f"|G|^n = {G}^{n} exceeds {EXACT_LIMIT}")
    R = losing_set(spec)
    label_set = set(labels)

    prefix_values = Counter({1: 1})
    for _ in range(n - 1):
        nxt: Counter = Counter()
        for val, cnt in prefix_values.items():
            for h in labels:
                nxt[mul_values(spec, val, h)] += cnt
        prefix_values = nxt

    losing = 0
    for val, cnt in prefix_values.items():
        for h in labels:
            if mul_values(spec, val, h) in R:
                losing += cnt

    constructive = 0
    for prefix in itertools.product(labels, repeat=n - 1):
        c = 1
        for h in prefix:
            c = mul_values(spec, c, h)
        c_inv = _inverse(spec, c)
        constructive += sum(1 for r in R if mul_values(spec, c_inv, r) in label_set)

    game_tree = None
    if G**n <= game_tree_limit and _engine_spec(spec).game_tree_consistent:
        game_tree = sum(1 for pos in itertools.product(labels, repeat=n) if outcome_bruteforce(spec, pos) is Outcome.P)

    return DensityReport(str(spec), n, G**n, losing, Fraction(len(R), G),
                         constructive=constructive, game_tree_losing=game_tree)


def empirical_density(spec: NumericPCG, n: int, bound: int) -> DensityReport:
    """Exact predicate density over all legal labels <= bound.

    Labels are grouped by residue, so the count is exact without touching each
    of the bound^n vectors.  Predicted limit: |R|/phi(m) in unit mode,
    |R|/m otherwise.
    """
    eng = _engine_spec(spec)
    if not isinstance(eng, NumericPCG):
        raise InvalidSpec("empirical density is for the unbounded numeric game")
    m = eng.m
    per_residue = Counter(h % m for h in range(1, bound + 1) if is_label(eng, h))
    dist = Counter({1 % m: 1})
    for _ in range(n):
        nxt: Counter = Counter()
        for a, ca in dist.items():
            for b, cb in per_residue.items():
                nxt[a * b % m] += ca * cb
        dist = nxt
    total = sum(per_residue.values()) ** n
    losing = sum(dist[r] for r in eng.losing)
    predicted = Fraction(len(eng.losing), euler_phi(m) if eng.unit_mode else m)
    return DensityReport(str(spec), n, total, losing, predicted, bound=bound)


def density_series(spec: NumericPCG, n: int, bounds) -> list[DensityReport]:
    return [empirical_density(spec, n, b) for b in bounds]


@dataclass
class PeriodicityRow:
    x: int
    outcome_x: Outcome
    outcome_x_plus_m: Outcome

    @property
    def equal(self) -> bool:
        return self.outcome_x is self.outcome_x_plus_m


@dataclass
class PeriodicityReport:
    spec: str
    context: tuple[int, ...]
    j: int
    x_range: tuple[int, int]
    rows: list[PeriodicityRow] = field(default_factory=list)

    @property
    def violations(self) -> list[int]:
        return [r.x for r in self.rows if not r.equal]


PERIODICITY_HEADER = ["context", "j", "x", "outcome_x", "outcome_x_plus_m", "equal"]


def write_periodicity_csv(reports: list[PeriodicityReport], fh: TextIO):
    w = csv.writer(fh)
    w.writerow(PERIODICITY_HEADER)
    for rep in reports:
        for r in rep.rows:
            w.writerow([" ".join(map(str, rep.context)), rep.j, r.x, r.outcome_x, r.outcome_x_plus_m, r.equal])


def periodicity_check(spec: GameSpec, context, j: int, x_max: int, use_fast_path: bool = False) -> PeriodicityReport:
    """Compare the outcome with heap x inserted at index j against x + m, x in [m, x_max].

    Outcomes come from the game-tree oracle unless ``use_fast_path`` is set,
    in which case Threshold positions are classified by predicate.
    """
    if isinstance(_engine_spec(spec), FieldPCG):
        raise InvalidSpec("periodicity is a property of the numeric game")
    m = modulus(spec)
    context = tuple(context)
    if not 0 <= j <= len(context):
        raise InvalidSpec(f"insertion index {j} out of range for context {context}")
    classify = outcome if use_fast_path else outcome_bruteforce
    report = PeriodicityReport(str(spec), context, j, (m, x_max))
    for x in range(m, x_max + 1):
        if not is_label(spec, x):
            continue
        f = lambda y: classify(spec, context[:j] + (y,) + context[j:])
        report.rows.append(PeriodicityRow(x, f(x), f(x + m)))
    return report


@dataclass
class ComparisonTable:
    columns: list[str]
    rows: list[tuple[str, list]]

    def to_dict(self) -> dict:
        return {"columns": self.columns,
                "rows": [{"feature": f, "values": [str(v) for v in vals]} for f, vals in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_markdown(self) -> str:
        lines = ["| Feature | " + " | ".join(self.columns) + " |",
                 "|" + "---|" * (len(self.columns) + 1)]
        for feat, vals in self.rows:
            lines.append(f"| {feat} | " + " | ".join(str(v) for v in vals) + " |")
        return "\n".join(lines)


def _crt_text(k: int) -> str:
    parts = crt_split(k) if k >= 2 else []
    if len(parts) <= 1:
        return f"single prime power {parts}" if parts else "trivial"
    return "CRT over " + " x ".join(map(str, parts))


def _sg_spot_check(spec: GameSpec, top: int) -> str:
    singles = [(h,) for h in range(modulus(spec), top + 1) if is_label(spec, h)]
    rep = sg_multiplicativity_check(spec, [(a, b) for a in singles for b in singles])
    status = "holds" if not rep.violations else f"{len(rep.violations)} violations"
    return f"{status} in T ({len(rep.rows)} pairs checked)"


def comparison_table(chain: ChainRSA, field_spec: FieldSpec, mum_m: int) -> ComparisonTable:
    """Every cell is computed from the three live instances."""
    k, q, m = chain.k, field_spec.q, mum_m
    chain_game, field_game = ChainRSA(chain.N, chain.g), FieldPCG(field_spec)
    mum_game = NumericPCG(m)
    if carmichael_lambda(chain.N) % k:
        raise AssertionError("order must divide lambda(N)")
    gen = ff.log_tables(field_spec).generator

    def density(spec, mod):
        unit = exact_losing_count(spec, 2, game_tree_limit=0).ratio
        full = Fraction(sum(1 for h in range(1, mod + 1) if h % mod == 1 % mod), mod)
        return f"{full} (units: {unit})"

    field_density = exact_losing_count(field_game, 2, game_tree_limit=0).ratio
    rows = [
        ("Ambient structure",
         [f"(Z/{chain.N}Z)^x, order {euler_phi(chain.N)}, {_crt_text(chain.N)}",
          f"GF({q})^x, cyclic of order {q - 1} (generator label {gen})",
          f"(Z/{m}Z)^x, order {euler_phi(m)}"]),
        ("Aggregation", ["product of exponents", "field product of s(h_i)", "integer product"]),
        ("Compression modulus", [k, q - 1, m]),
        ("Decomposition", [_crt_text(k), "none (group cyclic)", _crt_text(m) if not is_prime(m) else "none (m prime)"]),
        ("Losing predicate", [f"prod h_i = 1 mod {k}", f"prod s(h_i) = 1 in GF({q})^x", f"prod t_i = 1 mod {m}"]),
        ("Threshold / Indeterminacy",
         [f"T_{k}, I_{k} = [1,{k - 1}]^n", f"T_{q}, I_{q} = [1,{q - 2}]^n", f"T_{m}, I_{m} = [1,{m - 1}]^n"]),
        ("SG multiplicativity",
         [_sg_spot_check(chain_game, 3 * k), _sg_spot_check(field_game, q - 1), _sg_spot_check(mum_game, 3 * m)]),
        ("Normalisation", [f"prod h_i mod {k}", "C(prod s(h_i))", f"prod t_i mod {m}"]),
        ("Density", [density(chain_game, k), str(field_density), density(mum_game, m)]),
    ]
    return ComparisonTable(["Exponent chain (RSA)", "poly-MuM (AES)", "Core MuM"], rows)
