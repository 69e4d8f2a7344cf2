"""Sprague-Grundy machinery for product-congruence games.

In the Threshold Region the value carried by a position is its invariant,
an element of the group G = (Z/mZ)^x or GF(q)^x.  A fixed indexing of G
(identity first) turns that element into a "product-SG" number so that mex
and multiplicativity can be checked mechanically.  Inside the Indeterminacy
Region only classical Grundy numbers are computed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import DomainExhausted, InvalidSpec, SpecMismatch, UnsupportedLosingSet, WrongRegion
from .game_core import (
    FieldPCG,
    GameSpec,
    Position,
    RegionTag,
    heap_moves,
    is_label,
    invariant_label,
    losing_set,
    mul_values,
    oracle_for,
    region,
    validate_position,
    _engine_spec,
)
from .number_theory import units


class SgValue(NamedTuple):
    idx: int
    element: int


@dataclass(frozen=True)
class SgIndexing:
    """Ascending bijection G -> {0, ..., |G|-1}; the identity 1 maps to 0."""

    elements: tuple[int, ...]
    _index: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise InvalidSpec("indexing must be a bijection")
        if not self.elements or self.elements[0] != 1:
            raise InvalidSpec("the identity must be indexed 0")
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def value(self, element: int) -> SgValue:
        return SgValue(self._index[element], element)

    def at(self, idx: int) -> SgValue:
        return SgValue(idx, self.elements[idx])

    def domain(self) -> set[SgValue]:
        return {SgValue(i, e) for i, e in enumerate(self.elements)}


def canonical_indexing(spec: GameSpec) -> SgIndexing:
    eng = _engine_spec(spec)
    if isinstance(eng, FieldPCG):
        return SgIndexing(tuple(range(1, eng.field.q)))
    if not eng.unit_mode:
        raise InvalidSpec("product-SG is only defined on unit-mode games")
    return SgIndexing(tuple(units(eng.m)))


def _require_scope(spec: GameSpec, pos: Position):
    if losing_set(spec) != frozenset({1}):
        raise UnsupportedLosingSet("product-SG needs the losing set {1}")
    if region(spec, pos) is not RegionTag.THRESHOLD:
        raise WrongRegion(f"{pos} is not in the Threshold Region")


def product_sg(spec: GameSpec, pos: Position, indexing: SgIndexing | None = None) -> SgValue:
    _require_scope(spec, pos)
    indexing = indexing or canonical_indexing(spec)
    return indexing.value(invariant_label(spec, pos))


def _option_values(spec: GameSpec, pos: Position) -> dict[int, bool]:
    """Invariant label of every option -> whether some option with it lies in I."""
    out: dict[int, bool] = {}
    for j, h in enumerate(pos):
        rest = pos[:j] + pos[j + 1 :]
        cofactor = invariant_label(spec, rest) if rest else 1
        rest_in_t = region(spec, rest) is RegionTag.THRESHOLD if rest else False
        for v in heap_moves(spec, h):
            val = mul_values(spec, cofactor, v)
            in_i = not rest_in_t and region(spec, (v,)) is RegionTag.INDETERMINACY
            out[val] = out.get(val, False) or in_i
    return out


def option_value_set(spec: GameSpec, pos: Position, indexing: SgIndexing | None = None) -> set[SgValue]:
    """Product-SG values of all options.

    Options that drop into the Indeterminacy Region are valued by their
    invariant as well; ``single_hole_check`` reports how many did.
    """
    _require_scope(spec, pos)
    indexing = indexing or canonical_indexing(spec)
    return {indexing.value(v) for v in _option_values(spec, pos)}


class SingleHole(NamedTuple):
    holds: bool
    missing: set[SgValue]
    boundary: bool  # some option was valued while lying in I


def single_hole_check(spec: GameSpec, pos: Position, indexing: SgIndexing | None = None) -> SingleHole:
    _require_scope(spec, pos)
    indexing = indexing or canonical_indexing(spec)
    opts = _option_values(spec, pos)
    missing = indexing.domain() - {indexing.value(v) for v in opts}
    own = product_sg(spec, pos, indexing)
    return SingleHole(missing == {own}, missing, any(opts.values()))


def indexed_mex(values: Iterable[SgValue], indexing: SgIndexing) -> SgValue:
    present = {v.idx for v in values}
    for i in range(len(indexing)):
        if i not in present:
            return indexing.at(i)
    raise DomainExhausted("every value of the SG domain is present")


def grundy_standard(spec: GameSpec, pos: Position) -> int:
    """Classical mex-over-naturals Grundy number (terminal = 0)."""
    return oracle_for(spec).grundy(pos)


def grundy_table(spec: GameSpec, max_heap: int) -> dict[int, int]:
    """Single-heap Grundy numbers for every legal label up to max_heap."""
    return {h: grundy_standard(spec, (h,)) for h in range(1, max_heap + 1) if is_label(spec, h)}


def sum_positions(spec: GameSpec, pos1: Position, pos2: Position, *, other_spec: GameSpec | None = None) -> Position:
    """Disjunctive sum: a PCG sum is again a PCG position (heap concatenation)."""
    if other_spec is not None and other_spec != spec:
        raise SpecMismatch(f"cannot add positions of {spec} and {other_spec}")
    return validate_position(spec, pos1) + validate_position(spec, pos2)


@dataclass
class PairResult:
    pair: tuple[Position, Position]
    summand_values: tuple[int, int]
    expected_product: int
    observed_mex: int
    summands_single_hole: bool
    sum_hole_exact: bool
    boundary_flag: bool

    @property
    def holds(self) -> bool:
        return self.summands_single_hole and self.sum_hole_exact and self.observed_mex == self.expected_product

    def to_dict(self) -> dict:
        return {
            "pair": [list(self.pair[0]), list(self.pair[1])],
            "summand_values": list(self.summand_values),
            "expected_product": self.expected_product,
            "observed_mex": self.observed_mex,
            "holds": self.holds,
            "boundary_flag": self.boundary_flag,
        }


@dataclass
class MultiplicativityReport:
    rows: list[PairResult]
    skipped: list[tuple[Position, Position]]

    @property
    def violations(self) -> list[PairResult]:
        return [r for r in self.rows if not r.holds]

    @property
    def boundary_violations(self) -> list[PairResult]:
        return [r for r in self.violations if r.boundary_flag]

    def to_json(self) -> list[dict]:
        return [r.to_dict() for r in sorted(self.rows, key=lambda r: r.pair)]


def sg_multiplicativity_check(
    spec: GameSpec, sample: Iterable[tuple[Position, Position]], indexing: SgIndexing | None = None
) -> MultiplicativityReport:
    """For each Threshold pair verify single-hole on both summands, that the
    sum's options miss exactly the product value, and that mex returns it.

    Element values in the report are group elements (residues / field labels).
    """
    indexing = indexing or canonical_indexing(spec)
    rows, skipped = [], []
    holes: dict[Position, SingleHole] = {}

    def hole(p):
        if p not in holes:
            holes[p] = single_hole_check(spec, p, indexing)
        return holes[p]

    for p1, p2 in sample:
        if region(spec, p1) is not RegionTag.THRESHOLD or region(spec, p2) is not RegionTag.THRESHOLD:
            skipped.append((p1, p2))
            continue
        h1, h2 = hole(p1), hole(p2)
        a = product_sg(spec, p1, indexing).element
        b = product_sg(spec, p2, indexing).element
        ab = mul_values(spec, a, b)
        s = sum_positions(spec, p1, p2)
        sum_opts = _option_values(spec, s)
        opt_vals = {indexing.value(v) for v in sum_opts}
        missing = indexing.domain() - opt_vals
        mex = indexed_mex(opt_vals, indexing)
        rows.append(
            PairResult(
                pair=(p1, p2),
                summand_values=(a, b),
                expected_product=ab,
                observed_mex=mex.element,
                summands_single_hole=h1.holds and h2.holds,
                sum_hole_exact=missing == {indexing.value(ab)},
                boundary_flag=h1.boundary or h2.boundary or any(sum_opts.values()),
            )
        )
    return MultiplicativityReport(rows, skipped)
