"""Toy games whose move operation is aligned with the invariant.

* the additive sum-congruence game (subtract from a heap, invariant is the
  sum mod m), where one large heap reaches every residue in one move;
* the divisor-move product game (replace a heap by a proper divisor,
  invariant is the product mod m), which collapses when the divisor ratios
  of a large heap generate (Z/mZ)^x;
* a generic checker for the alignment condition over an abstract finite
  monoid given by its multiplication table.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, NamedTuple, TextIO

from .errors import InvalidSpec, MalformedTable, NotAUnit, OutOfRange, PreconditionViolated, SearchBudgetExceeded
from .game_core import Outcome
from .number_theory import divisors, gcd, mod_inverse, units

ADDITIVE_SEARCH_CAP = 400


@dataclass(frozen=True)
class AdditiveGameSpec:
    m: int
    s: int = 0

    def __post_init__(self):
        if self.m < 2 or not 0 <= self.s < self.m:
            raise InvalidSpec(f"need m >= 2 and 0 <= s < m, got m={self.m}, s={self.s}")


@dataclass(frozen=True)
class DivisorGameSpec:
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise InvalidSpec(f"need m >= 2, got {self.m}")


class Reach(NamedTuple):
    reachable: set[int]
    covers_all: bool


def additive_reach_check(spec: AdditiveGameSpec, pos, j: int) -> Reach:
    """Sum residues reachable by one move on heap j.

    ``covers_all`` counts the current residue as reached (the d = 0 case of
    the coverage argument), so it asks whether reachable | {current} is
    all of Z/mZ.
    """
    m = spec.m
    t = pos[j]
    if t < m:
        raise PreconditionViolated(f"heap {j} = {t} is below m = {m}")
    total = sum(pos)
    reachable = {(total - t + v) % m for v in range(1, t)}
    return Reach(reachable, reachable | {total % m} == set(range(m)))


def additive_predicate(spec: AdditiveGameSpec, pos) -> bool:
    return sum(pos) % spec.m == spec.s


def additive_terminal_consistent(spec: AdditiveGameSpec, n: int) -> bool:
    """Whether the all-ones terminal of an n-heap game satisfies the predicate."""
    return n % spec.m == spec.s


@lru_cache(maxsize=None)
def _additive_is_p(key: tuple[int, ...]) -> bool:
    for j, h in enumerate(key):
        if j and key[j - 1] == h:
            continue
        rest = key[:j] + key[j + 1 :]
        for v in range(1, h):
            if _additive_is_p(tuple(sorted(rest + (v,)))):
                return False
    return True


def additive_game_tree_outcome(pos) -> Outcome:
    """Plain normal-play outcome of the subtraction game (no predicate)."""
    if sum(pos) > ADDITIVE_SEARCH_CAP:
        raise SearchBudgetExceeded(f"heap total {sum(pos)} above {ADDITIVE_SEARCH_CAP}")
    return Outcome.P if _additive_is_p(tuple(sorted(pos))) else Outcome.N


def additive_outcome(spec: AdditiveGameSpec, pos) -> Outcome:
    """Game-tree outcome when the terminal agrees with the predicate;
    otherwise the game is analysed by predicate only."""
    if additive_terminal_consistent(spec, len(pos)):
        return additive_game_tree_outcome(pos)
    return Outcome.P if additive_predicate(spec, pos) else Outcome.N


def divisor_move_units(t: int, m: int) -> set[int]:
    """{d * t^-1 mod m : d | t, d < t}.

    Divisors sharing a factor with m would be dropped, but a divisor of a
    unit is always a unit, so in practice nothing is.
    """
    if gcd(t, m) != 1:
        raise NotAUnit(f"{t} is not a unit modulo {m}")
    if t < 1:
        raise OutOfRange(f"heap must be positive, got {t}")
    t_inv = mod_inverse(t, m)
    return {d * t_inv % m for d in divisors(t)[:-1] if gcd(d, m) == 1}


def generated_subgroup(subset: Iterable[int], m: int) -> set[int]:
    gens = {x % m for x in subset}
    for x in gens:
        if gcd(x, m) != 1:
            raise NotAUnit(f"{x} is not a unit modulo {m}")
    seen = {1 % m}
    frontier = [1 % m]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g % m
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def generates_group(subset: Iterable[int], m: int) -> bool:
    return generated_subgroup(subset, m) == {u % m for u in units(m)}


@dataclass
class ScanRow:
    t: int
    coprime: bool
    generated_subgroup_order: int | None
    generates: bool | None


@dataclass
class ScanReport:
    m: int
    M: int
    bound: int
    rows: list[ScanRow] = field(default_factory=list)

    @property
    def failures(self) -> list[int]:
        return [r.t for r in self.rows if r.coprime and not r.generates]

    def write_csv(self, fh: TextIO):
        w = csv.writer(fh)
        w.writerow(["t", "coprime", "generated_subgroup_order", "generates"])
        for r in self.rows:
            w.writerow([r.t, r.coprime, "" if r.generated_subgroup_order is None else r.generated_subgroup_order,
                        "" if r.generates is None else r.generates])


def alignment_hypothesis_scan(m: int, M: int, bound: int) -> ScanReport:
    """Tabulate, for t in [M, bound], whether t's divisor ratios generate (Z/mZ)^x."""
    if bound < M:
        raise OutOfRange(f"bound {bound} < M {M}")
    report = ScanReport(m, M, bound)
    group_order = len(units(m))
    for t in range(max(M, 1), bound + 1):
        if gcd(t, m) != 1:
            report.rows.append(ScanRow(t, False, None, None))
            continue
        sub = generated_subgroup(divisor_move_units(t, m), m)
        report.rows.append(ScanRow(t, True, len(sub), len(sub) == group_order))
    return report


class DivisorCollapse(NamedTuple):
    reachable_units: set[int]
    transitive: bool
    direct_units: set[int]  # products actually reachable by divisor moves on heap j
    direct_transitive: bool


def divisor_collapse_check(spec: DivisorGameSpec, pos, j: int) -> DivisorCollapse:
    """Aggregate products reachable by working heap j alone.

    ``reachable_units`` closes the aggregate under repeated application of
    heap j's divisor ratios (one or more steps).  ``direct_units`` is what the
    heap can really produce: any chain of divisor moves ends on a divisor of
    the starting value, so it equals the one-move set.
    """
    m = spec.m
    t = pos[j]
    if gcd(t, m) != 1:
        raise NotAUnit(f"heap {t} is not a unit modulo {m}")
    P = math.prod(pos) % m
    ratios = divisor_move_units(t, m)
    reach: set[int] = set()
    frontier = [P * r % m for r in ratios]
    while frontier:
        x = frontier.pop()
        if x in reach:
            continue
        reach.add(x)
        frontier.extend(x * r % m for r in ratios)
    direct = {P * r % m for r in ratios}
    group = {u % m for u in units(m)}
    trivial = len(group) == 1
    return DivisorCollapse(reach, trivial or reach == group, direct, trivial or direct == group)


def _check_table(table) -> int:
    size = len(table)
    if size == 0:
        raise MalformedTable("empty table")
    for row in table:
        if len(row) != size or any(not (0 <= x < size) for x in row):
            raise MalformedTable("table must be square with entries in range")
    for a in range(size):
        for b in range(size):
            for c in range(size):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise MalformedTable(f"not associative at ({a}, {b}, {c})")
    ids = [e for e in range(size) if all(table[e][x] == x == table[x][e] for x in range(size))]
    if not ids:
        raise MalformedTable("no identity element")
    return ids[0]


def submonoid_generated(table, subset: Iterable[int]) -> set[int]:
    identity = _check_table(table)
    gens = set(subset)
    seen = {identity}
    frontier = [identity]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = table[x][g]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def alignment_failures(table, move_image: Mapping[Hashable, Iterable[int]], kernel=()) -> list:
    """Elements outside the kernel whose move images do not generate Q."""
    size = len(table)
    _check_table(table)
    kernel = set(kernel)
    return [
        x
        for x, image in move_image.items()
        if x not in kernel and len(submonoid_generated(table, image)) != size
    ]


def alignment_principle_check(table, move_image: Mapping[Hashable, Iterable[int]], kernel=()) -> bool:
    return not alignment_failures(table, move_image, kernel)


def additive_alignment_instance(m: int, x_max: int):
    """(Z/mZ, +) with each heap x mapped to the shifts -d, 1 <= d < x."""
    table = [[(a + b) % m for b in range(m)] for a in range(m)]
    images = {x: {-d % m for d in range(1, x)} for x in range(1, x_max + 1)}
    return table, images


def divisor_alignment_instance(m: int, x_max: int):
    """(Z/mZ)^x, indexed ascending, with each unit heap t mapped to its divisor ratios.

    Returns (table, images, elements) where images use table indices.
    """
    elems = [u % m for u in units(m)]
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[a * b % m] for b in elems] for a in elems]
    images = {
        t: {index[u] for u in divisor_move_units(t, m)}
        for t in range(1, x_max + 1)
        if gcd(t, m) == 1
    }
    return table, images, elems
