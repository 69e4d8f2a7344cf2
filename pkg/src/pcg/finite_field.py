"""Arithmetic in GF(p^n) = F_p[x]/(I(x)) for a fixed irreducible I.

Polynomials are little-endian coefficient tuples.  The integer label of an
element is the base-p value of its coefficient string, so for p = 2 the label
is the usual byte/bit pattern (0x53 <-> x^6 + x^4 + x + 1).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cache
from typing import Sequence

from .errors import NotIrreducible, NotPrime, OutOfRange, TooLarge, ZeroElement, ZeroToZero
from .number_theory import is_prime, mod_inverse

MAX_FIELD_ORDER = 2**16

Poly = tuple[int, ...]


def _trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_sub(a: Poly, b: Poly, p: int) -> Poly:
    size = max(len(a), len(b))
    a = tuple(a) + (0,) * (size - len(a))
    b = tuple(b) + (0,) * (size - len(b))
    return _trim((x - y) % p for x, y in zip(a, b))


def _poly_divmod(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(_trim(a))
    inv_lead = mod_inverse(b[-1], p)
    q = [0] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv_lead % p
        q[shift] = c
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bi) % p
        r = list(_trim(r))
    return _trim(q), tuple(r)


def parse_polynomial(spec: int | str | Sequence[int], p: int = 2) -> Poly:
    """Accept a bitmask (int or hex string, p = 2 only) or a coefficient list."""
    if isinstance(spec, str):
        spec = int(spec, 0)
    if isinstance(spec, int):
        if p != 2:
            raise OutOfRange("bitmask polynomials are only meaningful for p = 2")
        return tuple(int(b) for b in reversed(bin(spec)[2:]))
    return _trim(int(c) % p for c in spec)


def poly_to_str(coeffs: Sequence[int]) -> str:
    terms = []
    for i in reversed(range(len(coeffs))):
        c = coeffs[i]
        if not c:
            continue
        mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if c != 1:
            mono = f"{c}" if i == 0 else f"{c}*{mono}"
        terms.append(mono)
    return " + ".join(terms) if terms else "0"


def _monic_polys(p: int, degree: int):
    for low in itertools.product(range(p), repeat=degree):
        yield tuple(low) + (1,)


def is_irreducible(poly: Poly, p: int) -> bool:
    """Brute-force divisor search over every monic polynomial of degree <= n/2."""
    poly = _trim(poly)
    n = len(poly) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for cand in _monic_polys(p, d):
            if not _poly_divmod(poly, cand, p)[1]:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    irreducible: Poly
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.n)

    def __str__(self):
        return f"GF({self.p}^{self.n}) mod {poly_to_str(self.irreducible)}"

    @property
    def hex(self) -> str | None:
        if self.p != 2:
            return None
        return hex(sum(c << i for i, c in enumerate(self.irreducible)))


@dataclass(frozen=True)
class FieldElement:
    coeffs: Poly
    p: int

    @property
    def index(self) -> int:
        return sum(c * self.p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        return poly_to_str(self.coeffs)


def field_new(p: int, n: int, irreducible: int | str | Sequence[int]) -> FieldSpec:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1:
        raise OutOfRange("extension degree must be >= 1")
    if p**n > MAX_FIELD_ORDER:
        raise TooLarge(f"q = {p}^{n} exceeds the brute-force limit {MAX_FIELD_ORDER}")
    poly = parse_polynomial(irreducible, p)
    if len(poly) - 1 != n or poly[-1] != 1:
        raise NotIrreducible(f"{poly_to_str(poly)} is not monic of degree {n}")
    if not is_irreducible(poly, p):
        raise NotIrreducible(f"{poly_to_str(poly)} is reducible over GF({p})")
    return FieldSpec(p, n, poly)


def field_from_hex(mask: int | str) -> FieldSpec:
    """Binary field from a bitmask such as 0x11B."""
    poly = parse_polynomial(mask, 2)
    return field_new(2, len(poly) - 1, poly)


AES_POLY = 0x11B


@cache
def aes_field() -> FieldSpec:
    return field_from_hex(AES_POLY)


@cache
def small_field(q: int) -> FieldSpec:
    """Conventional binary fields used by the test boxes."""
    masks = {4: 0b111, 8: 0b1011, 16: 0b10011, 256: AES_POLY}
    if q not in masks:
        raise OutOfRange(f"no preset field of order {q}")
    return field_from_hex(masks[q])


def element(spec: FieldSpec, index: int) -> FieldElement:
    """Element with the given integer label (0 allowed)."""
    if not 0 <= index < spec.q:
        raise OutOfRange(f"label {index} outside [0, {spec.q - 1}]")
    digits = []
    for _ in range(spec.n):
        index, d = divmod(index, spec.p)
        digits.append(d)
    return FieldElement(tuple(digits), spec.p)


def _wrap(spec: FieldSpec, poly: Poly) -> FieldElement:
    return FieldElement(tuple(poly) + (0,) * (spec.n - len(poly)), spec.p)


def one(spec: FieldSpec) -> FieldElement:
    return element(spec, 1)


def s_map(spec: FieldSpec, h: int) -> FieldElement:
    if not 1 <= h <= spec.q - 1:
        raise OutOfRange(f"heap label {h} outside [1, {spec.q - 1}]")
    return element(spec, h)


def c_map(spec: FieldSpec, e: FieldElement) -> int:
    if e.is_zero():
        raise ZeroElement("the zero element has no heap label")
    return e.index


def fmul(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    prod = _poly_mul(_trim(a.coeffs), _trim(b.coeffs), spec.p)
    return _wrap(spec, _poly_divmod(prod, spec.irreducible, spec.p)[1])


def finv(spec: FieldSpec, a: FieldElement) -> FieldElement:
    """Inverse by the extended Euclidean algorithm on polynomials."""
    if a.is_zero():
        raise ZeroElement("zero has no inverse")
    p = spec.p
    r0, r1 = spec.irreducible, _trim(a.coeffs)
    t0, t1 = (), (1,)
    while r1:
        quot, rem = _poly_divmod(r0, r1, p)
        r0, r1 = r1, rem
        t0, t1 = t1, _poly_sub(t0, _poly_mul(quot, t1, p), p)
    # r0 is a nonzero constant since I is irreducible
    scale = (mod_inverse(r0[0], p),)
    return _wrap(spec, _poly_divmod(_poly_mul(t0, scale, p), spec.irreducible, p)[1])


def fpow(spec: FieldSpec, a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        return fpow(spec, finv(spec, a), -e)
    if e == 0:
        if a.is_zero():
            raise ZeroToZero("0^0 is undefined")
        return one(spec)
    result, base = one(spec), a
    while e:
        if e & 1:
            result = fmul(spec, result, base)
        base = fmul(spec, base, base)
        e >>= 1
    return result


@dataclass(frozen=True)
class LogTables:
    generator: int
    exp: tuple[int, ...]
    log: dict[int, int]


@cache
def log_tables(spec: FieldSpec) -> LogTables:
    """Discrete log / antilog tables over the labels 1..q-1.

    Built once per field from polynomial multiplication; used for fast label
    arithmetic in exhaustive sweeps.
    """
    order = spec.q - 1
    for g in range(1, spec.q):
        ge = element(spec, g)
        powers = [1]
        x = one(spec)
        for _ in range(order - 1):
            x = fmul(spec, x, ge)
            if x.index == 1:
                break
            powers.append(x.index)
        if len(powers) == order:
            return LogTables(g, tuple(powers), {v: i for i, v in enumerate(powers)})
    raise AssertionError("multiplicative group of a field is cyclic")  # pragma: no cover


def mul_labels(spec: FieldSpec, a: int, b: int) -> int:
    """Product of two nonzero labels, via the log tables."""
    t = log_tables(spec)
    return t.exp[(t.log[a] + t.log[b]) % (spec.q - 1)]


def inv_label(spec: FieldSpec, a: int) -> int:
    t = log_tables(spec)
    return t.exp[-t.log[a] % (spec.q - 1)]
