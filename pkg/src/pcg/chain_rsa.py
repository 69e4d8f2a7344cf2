"""The uncompressed exponent-chain game and its compression to MuM.

``evaluate_chain`` computes the left-associated tower one exponent at a time,
without ever forming the product of the heaps, so it serves as the
independent side when the tower is compared with the flattened exponent.
Play itself happens on ``chain_to_pcg``'s output.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DegenerateOrder, OutOfRange
from .game_core import ChainRSA, NumericPCG, compressed
from .number_theory import crt_check_unity, mod_pow

ChainSpec = ChainRSA


def evaluate_chain(spec: ChainSpec, heaps) -> int:
    """(((g^h1)^h2)...)^hn mod N, one mod_pow per heap."""
    if not heaps:
        raise OutOfRange("a chain needs at least one exponent")
    x = spec.g
    for h in heaps:
        x = mod_pow(x, h, spec.N)
    return x


class FlatExponent(NamedTuple):
    value: int
    reduced: bool


def flatten_exponent(heaps, k: int | None = None) -> FlatExponent:
    """H = prod(heaps); with k given, H mod k where a zero residue becomes k
    so that g^value equals g^H exactly."""
    H = math.prod(heaps)
    if k is None:
        return FlatExponent(H, False)
    r = H % k
    return FlatExponent(r or k, True)


@dataclass
class CompressionReport:
    spec: ChainSpec
    bound: int
    n: int
    total: int = 0
    losing_count: int = 0
    counterexamples: list[tuple[int, ...]] = field(default_factory=list)
    losing: list[tuple[int, ...]] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "spec": {"N": self.spec.N, "g": self.spec.g, "k": self.spec.k},
            "bound": self.bound,
            "n": self.n,
            "total": self.total,
            "losing_count": self.losing_count,
            "counterexamples": [list(c) for c in self.counterexamples],
        }


def compression_check(spec: ChainSpec, bound: int, n: int) -> CompressionReport:
    """Exhaustively compare E(h) == g against prod(h) == 1 (mod k) on [1, bound]^n."""
    report = CompressionReport(spec, bound, n)
    for heaps in itertools.product(range(1, bound + 1), repeat=n):
        report.total += 1
        tower = evaluate_chain(spec, heaps) == spec.g
        flat = math.prod(heaps) % spec.k == 1 % spec.k
        if tower:
            report.losing_count += 1
            report.losing.append(heaps)
        if tower != flat:
            report.counterexamples.append(heaps)
    return report


def chain_to_pcg(spec: ChainSpec) -> NumericPCG:
    """MuM at modulus k = ord_N(g), with the null-move ban."""
    if spec.k < 2:
        raise DegenerateOrder(f"g = {spec.g} has order {spec.k} mod {spec.N}")
    return compressed(spec)


def crt_losing_check(spec: ChainSpec, heaps) -> tuple[bool, list[bool]]:
    if spec.k < 2:
        raise DegenerateOrder(f"g = {spec.g} has order {spec.k} mod {spec.N}")
    return crt_check_unity(math.prod(heaps), spec.k)
