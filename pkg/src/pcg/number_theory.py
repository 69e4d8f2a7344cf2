"""Elementary modular arithmetic at desk scale.

Factorization is plain trial division with a hard input bound; nothing here
is meant for cryptographic-size integers.
"""
from __future__ import annotations

from math import isqrt, lcm

from .errors import NotAUnit, OutOfRange

FACTOR_BOUND = 10**12

Factorization = list[tuple[int, int]]


def gcd(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise OutOfRange("gcd takes naturals")
    if a == 0 and b == 0:
        raise OutOfRange("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """Right-to-left square-and-multiply."""
    if modulus < 2:
        raise OutOfRange(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise OutOfRange("negative exponents are not supported")
    result = 1
    base %= modulus
    while exp:
        if exp & 1:
            result = result * base % modulus
        base = base * base % modulus
        exp >>= 1
    return result


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def mod_inverse(a: int, m: int) -> int:
    if m < 1:
        raise OutOfRange(f"modulus must be positive, got {m}")
    g, x, _ = extended_gcd(a % m, m)
    if g != 1:
        raise NotAUnit(f"{a} is not invertible modulo {m}")
    return x % m


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


def factorize(n: int, bound: int = FACTOR_BOUND) -> Factorization:
    """Prime-power factorization by trial division, primes ascending."""
    if n < 2:
        raise OutOfRange(f"factorize needs n >= 2, got {n}")
    if n > bound:
        raise OutOfRange(f"{n} exceeds the trial-division bound {bound}")
    factors: Factorization = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return factors


def divisors(n: int) -> list[int]:
    """All positive divisors of n in ascending order."""
    if n < 1:
        raise OutOfRange(f"divisors needs n >= 1, got {n}")
    if n == 1:
        return [1]
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    if n < 1:
        raise OutOfRange(f"euler_phi needs n >= 1, got {n}")
    if n == 1:
        return 1
    result = 1
    for p, e in factorize(n):
        result *= (p - 1) * p ** (e - 1)
    return result


def carmichael_lambda(n: int) -> int:
    """Exponent of the unit group mod n."""
    if n < 1:
        raise OutOfRange(f"carmichael_lambda needs n >= 1, got {n}")
    if n == 1:
        return 1
    parts = []
    for p, e in factorize(n):
        if p == 2 and e >= 3:
            parts.append(2 ** (e - 2))
        else:
            parts.append((p - 1) * p ** (e - 1))
    return lcm(*parts)


def multiplicative_order(g: int, N: int) -> int:
    """Smallest k >= 1 with g**k == 1 (mod N).

    Only divisors of lambda(N) are tried, smallest first.
    """
    if N < 2:
        raise OutOfRange(f"modulus must be >= 2, got {N}")
    if gcd(g % N, N) != 1:
        raise NotAUnit(f"{g} is not a unit modulo {N}")
    for k in divisors(carmichael_lambda(N)):
        if mod_pow(g, k, N) == 1:
            return k
    raise AssertionError("order must divide lambda(N)")  # pragma: no cover


def units(m: int) -> list[int]:
    """Residues in [1, m-1] coprime to m (just [1] when m == 1 or 2)."""
    if m <= 2:
        return [1]
    return [r for r in range(1, m) if gcd(r, m) == 1]


def crt_split(k: int) -> list[int]:
    """Pairwise-coprime prime-power moduli whose product is k."""
    return [p**e for p, e in factorize(k)]


def crt_check_unity(H: int, k: int) -> tuple[bool, list[bool]]:
    """Decide H == 1 (mod k) both directly and per prime-power component."""
    if k < 2:
        raise OutOfRange(f"k must be >= 2, got {k}")
    components = [H % q == 1 % q for q in crt_split(k)]
    overall = H % k == 1
    assert overall == all(components)
    return overall, components


def crt_combine(residues: list[int], moduli: list[int]) -> int:
    """Inverse of the CRT split: the unique x mod prod(moduli)."""
    x, M = 0, 1
    for r, q in zip(residues, moduli):
        t = (r - x) * mod_inverse(M, q) % q
        x += M * t
        M *= q
    return x % M
