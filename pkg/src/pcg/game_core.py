"""Positions, moves, regions, repair, normalization and outcomes.

Three game variants share one engine:

* ``NumericPCG(m, R)``: heaps are positive integers (coprime to m in unit
  mode), a position is losing iff the heap product mod m lies in R.
* ``FieldPCG(field)``: heaps are labels 1..q-1 of GF(q)^x, losing iff the
  field product of the heaps is 1.
* ``ChainRSA(N, g)``: the exponent-chain game, played on its compressed form
  ``NumericPCG(ord_N(g), {1})``.

Positions are plain tuples of ints. A move replaces one heap by a strictly
smaller legal label whose residue differs (the null-move ban).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cache
from typing import NamedTuple, Union

from . import finite_field as ff
from .errors import (
    DegenerateOrder,
    IllegalMove,
    InvalidPosition,
    InvalidSpec,
    PreconditionViolated,
    SearchBudgetExceeded,
    WrongRegion,
    ZeroInvariant,
)
from .finite_field import FieldElement, FieldSpec
from .number_theory import gcd, mod_inverse, multiplicative_order

Position = tuple[int, ...]


class Outcome(str, Enum):
    P = "P"  # mover loses
    N = "N"  # mover wins

    def __str__(self):
        return self.value


class RegionTag(str, Enum):
    THRESHOLD = "Threshold"
    INDETERMINACY = "Indeterminacy"

    def __str__(self):
        return self.value


class Move(NamedTuple):
    heap_index: int
    new_value: int


@dataclass(frozen=True)
class NumericPCG:
    m: int
    losing: frozenset[int] = frozenset({1})
    unit_mode: bool = True
    # cap every decrement at m - 1 (the exponent-chain rule) on top of the null-move ban
    bounded_decrement: bool = False

    def __post_init__(self):
        object.__setattr__(self, "losing", frozenset(self.losing))
        if self.m < 2:
            raise InvalidSpec(f"modulus must be >= 2, got {self.m}")
        if not self.losing:
            raise InvalidSpec("losing set must be nonempty")
        for r in self.losing:
            if not (1 <= r <= max(self.m - 1, 1)) or gcd(r, self.m) != 1:
                raise InvalidSpec(f"losing residue {r} is not a unit mod {self.m}")

    @property
    def game_tree_consistent(self) -> bool:
        """True when the all-ones terminal is predicate-losing (1 in R)."""
        return 1 in self.losing

    def __str__(self):
        rs = ",".join(map(str, sorted(self.losing)))
        mode = "" if self.unit_mode else ", permissive"
        return f"PCG({self.m}, {{{rs}}}{mode})"


@dataclass(frozen=True)
class FieldPCG:
    field: FieldSpec

    losing = frozenset({1})
    game_tree_consistent = True

    def __str__(self):
        return f"poly-MuM over {self.field}"


@dataclass(frozen=True)
class ChainRSA:
    N: int
    g: int
    k: int = field(init=False)

    def __post_init__(self):
        if self.N < 2:
            raise InvalidSpec(f"N must be >= 2, got {self.N}")
        object.__setattr__(self, "g", self.g % self.N)
        object.__setattr__(self, "k", multiplicative_order(self.g, self.N))

    def __str__(self):
        return f"chain(N={self.N}, g={self.g}, k={self.k})"


GameSpec = Union[NumericPCG, FieldPCG, ChainRSA]


@cache
def compressed(spec: ChainRSA) -> NumericPCG:
    """The MuM game a chain spec is played on."""
    if spec.k < 2:
        raise DegenerateOrder(f"ord_{spec.N}({spec.g}) = {spec.k} gives no game")
    return NumericPCG(spec.k, frozenset({1}))


def _engine_spec(spec: GameSpec) -> NumericPCG | FieldPCG:
    return compressed(spec) if isinstance(spec, ChainRSA) else spec


def modulus(spec: GameSpec) -> int:
    """m, k, or q - 1: the size of the residue window and the region threshold."""
    spec = _engine_spec(spec)
    if isinstance(spec, FieldPCG):
        return spec.field.q - 1
    return spec.m


def losing_set(spec: GameSpec) -> frozenset[int]:
    return _engine_spec(spec).losing


def is_label(spec: GameSpec, v: int) -> bool:
    spec = _engine_spec(spec)
    if v < 1:
        return False
    if isinstance(spec, FieldPCG):
        return v <= spec.field.q - 1
    return not spec.unit_mode or gcd(v, spec.m) == 1


def validate_position(spec: GameSpec, heaps) -> Position:
    pos = tuple(int(h) for h in heaps)
    if not pos:
        raise InvalidPosition("a position needs at least one heap")
    for h in pos:
        if not is_label(spec, h):
            raise InvalidPosition(f"heap {h} is not a legal label for {spec}")
    return pos


def invariant(spec: GameSpec, pos: Position) -> int | FieldElement:
    """Residue of the heap product (numeric) or field product of s(h_i)."""
    if isinstance(spec, FieldPCG):
        f = spec.field
        acc = ff.one(f)
        for h in pos:
            acc = ff.fmul(f, acc, ff.s_map(f, h))
        return acc
    return math.prod(pos) % modulus(spec)


def invariant_label(spec: GameSpec, pos: Position) -> int:
    """Invariant as an int: the residue, or the c_map label of the field product."""
    if isinstance(spec, FieldPCG):
        acc = 1
        for h in pos:
            acc = ff.mul_labels(spec.field, acc, h)
        return acc
    return math.prod(pos) % modulus(spec)


def mul_values(spec: GameSpec, a: int, b: int) -> int:
    """Group product of two invariant labels."""
    if isinstance(spec, FieldPCG):
        return ff.mul_labels(spec.field, a, b)
    return a * b % modulus(spec)


def is_losing_predicate(spec: GameSpec, pos: Position) -> bool:
    return invariant_label(spec, pos) in losing_set(spec)


def region(spec: GameSpec, pos: Position) -> RegionTag:
    if isinstance(spec, FieldPCG):
        hit = any(h == spec.field.q - 1 for h in pos)
    else:
        hit = any(h >= modulus(spec) for h in pos)
    return RegionTag.THRESHOLD if hit else RegionTag.INDETERMINACY


def heap_moves(spec: GameSpec, h: int) -> list[int]:
    """Legal replacement values for a single heap currently at h, descending."""
    spec = _engine_spec(spec)
    if isinstance(spec, FieldPCG):
        return list(range(h - 1, 0, -1))
    m = spec.m
    lo = max(1, h - (m - 1)) if spec.bounded_decrement else 1
    return [v for v in range(h - 1, lo - 1, -1) if (h - v) % m and is_label(spec, v)]


def legal_moves(spec: GameSpec, pos: Position) -> list[Move]:
    return [Move(j, v) for j, h in enumerate(pos) for v in heap_moves(spec, h)]


def is_legal(spec: GameSpec, pos: Position, move: Move) -> bool:
    j, v = move
    if not 0 <= j < len(pos):
        return False
    h = pos[j]
    if not (1 <= v < h and is_label(spec, v)):
        return False
    eng = _engine_spec(spec)
    if isinstance(eng, FieldPCG):
        return True
    if (h - v) % eng.m == 0:
        return False
    return not eng.bounded_decrement or h - v <= eng.m - 1


def apply_move(spec: GameSpec, pos: Position, move: Move) -> Position:
    if not is_legal(spec, pos, move):
        raise IllegalMove(f"{tuple(move)} is not legal from {pos} in {spec}")
    j, v = move
    return pos[:j] + (v,) + pos[j + 1 :]


def _numeric_repair(spec: NumericPCG, pos: Position) -> Move:
    m = spec.m
    candidates = []
    if region(spec, pos) is RegionTag.THRESHOLD:
        for j, t in enumerate(pos):
            if t < m:
                continue
            C = math.prod(pos[:j] + pos[j + 1 :]) % m
            for r in spec.losing:
                if gcd(C, m) == 1:
                    d = (t - mod_inverse(C, m) * r) % m
                    ds = [d] if d else []
                else:
                    ds = [d for d in range(1, m) if C * (t - d) % m == r]
                candidates += [(d, j) for d in ds if is_label(spec, t - d)]
    elif len(pos) == 1:
        # the normalized one-heap form: take the smallest decrement landing in R
        t = pos[0]
        candidates = [(t - v, 0) for v in heap_moves(spec, t) if v % m in spec.losing][:1]
    else:
        raise PreconditionViolated(f"{pos} is neither in the Threshold Region nor a single heap")
    if not candidates:
        raise PreconditionViolated(f"no one-move repair exists from {pos}")
    d, j = min(candidates)
    return Move(j, pos[j] - d)


def repair_move(spec: GameSpec, pos: Position) -> Move:
    """A legal move from a non-losing position to a predicate-losing one.

    Applies to Threshold positions and to single-heap (normalized) positions.
    Numeric ties break by smallest decrement, then lowest heap index.
    """
    if is_losing_predicate(spec, pos):
        raise PreconditionViolated(f"{pos} is already predicate-losing")
    if isinstance(spec, FieldPCG):
        f = spec.field
        top = [j for j, h in enumerate(pos) if h == f.q - 1]
        if top:
            j = top[0]
        elif len(pos) == 1:
            j = 0
        else:
            raise PreconditionViolated(f"{pos} has no heap equal to q-1 and is not a single heap")
        phi = invariant(spec, pos)
        target = ff.fmul(f, ff.s_map(f, pos[j]), ff.finv(f, phi))
        move = Move(j, ff.c_map(f, target))
    else:
        move = _numeric_repair(_engine_spec(spec), pos)
    assert is_legal(spec, pos, move)
    return move


def normalize(spec: GameSpec, pos: Position) -> Position:
    """Compress all heaps to one heap carrying the same invariant."""
    a = invariant_label(spec, pos)
    if not isinstance(spec, FieldPCG) and gcd(a, modulus(spec)) != 1:
        raise ZeroInvariant(f"heap product of {pos} is {a}, not a unit mod {modulus(spec)}")
    return (a,)


def positions(spec: GameSpec, n: int, max_heap: int):
    """All n-heap positions with every heap a legal label <= max_heap."""
    labels = [v for v in range(1, max_heap + 1) if is_label(spec, v)]
    return itertools.product(labels, repeat=n)


def threshold_classify(spec: GameSpec, pos: Position) -> Outcome:
    """Predicate-only classifier for Threshold positions (no search)."""
    if region(spec, pos) is not RegionTag.THRESHOLD:
        raise WrongRegion(f"{pos} is not in the Threshold Region")
    return Outcome.P if is_losing_predicate(spec, pos) else Outcome.N


class GameOracle:
    """Memoized normal-play evaluator for one spec.

    Positions are canonicalized by sorting (outcome and Grundy value do not
    depend on heap order). The memo belongs to this object only.
    """

    def __init__(self, spec: GameSpec, max_heap: int = 10_000, max_nodes: int = 5_000_000):
        eng = _engine_spec(spec)
        if not eng.game_tree_consistent:
            raise PreconditionViolated(
                f"{spec}: the all-ones terminal is not predicate-losing; predicate-only analysis"
            )
        self.spec = spec
        self.max_heap = max_heap
        self.max_nodes = max_nodes
        self._p: dict[Position, bool] = {}
        self._grundy: dict[Position, int] = {}
        self._heap_moves: dict[int, list[int]] = {}

    def _moves(self, h: int) -> list[int]:
        mv = self._heap_moves.get(h)
        if mv is None:
            mv = self._heap_moves[h] = heap_moves(self.spec, h)
        return mv

    def options(self, key: Position) -> list[Position]:
        out = []
        prev = None
        for j, h in enumerate(key):
            if h == prev:
                continue
            prev = h
            rest = key[:j] + key[j + 1 :]
            for v in self._moves(h):
                out.append(tuple(sorted(rest + (v,))))
        return out

    def _key(self, pos: Position) -> Position:
        if max(pos) > self.max_heap:
            raise SearchBudgetExceeded(f"heap above cap {self.max_heap}: {pos}")
        return tuple(sorted(pos))

    def _guard(self, memo):
        if len(memo) > self.max_nodes:
            raise SearchBudgetExceeded(f"more than {self.max_nodes} positions explored")

    def is_p(self, pos: Position) -> bool:
        memo = self._p
        root = self._key(pos)
        stack = [root]
        while stack:
            node = stack[-1]
            if node in memo:
                stack.pop()
                continue
            opts = self.options(node)
            if any(memo.get(o) is True for o in opts):
                memo[node] = False
                stack.pop()
                continue
            pending = [o for o in opts if o not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[node] = True
            stack.pop()
            self._guard(memo)
        return memo[root]

    def outcome(self, pos: Position) -> Outcome:
        return Outcome.P if self.is_p(pos) else Outcome.N

    def grundy(self, pos: Position) -> int:
        memo = self._grundy
        root = self._key(pos)
        stack = [root]
        while stack:
            node = stack[-1]
            if node in memo:
                stack.pop()
                continue
            opts = self.options(node)
            pending = [o for o in opts if o not in memo]
            if pending:
                stack.extend(pending)
                continue
            seen = {memo[o] for o in opts}
            g = 0
            while g in seen:
                g += 1
            memo[node] = g
            stack.pop()
            self._guard(memo)
        return memo[root]

    def winning_moves(self, pos: Position) -> list[Move]:
        """Moves to P positions (empty iff pos is P)."""
        return [mv for mv in legal_moves(self.spec, pos) if self.is_p(apply_move(self.spec, pos, mv))]


@cache
def oracle_for(spec: GameSpec) -> GameOracle:
    return GameOracle(spec)


def outcome_bruteforce(spec: GameSpec, pos: Position) -> Outcome:
    return oracle_for(spec).outcome(pos)


def outcome(spec: GameSpec, pos: Position) -> Outcome:
    """Predicate fast path on Threshold positions with a singleton losing set,
    game-tree search everywhere else."""
    if len(losing_set(spec)) == 1 and region(spec, pos) is RegionTag.THRESHOLD:
        return threshold_classify(spec, pos)
    return outcome_bruteforce(spec, pos)
