import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as ref
from pcg.errors import NotAUnit, OutOfRange
from pcg.number_theory import (
    carmichael_lambda,
    crt_check_unity,
    crt_combine,
    crt_split,
    divisors,
    euler_phi,
    extended_gcd,
    factorize,
    gcd,
    mod_inverse,
    mod_pow,
    multiplicative_order,
    units,
)


@pytest.mark.parametrize("a,b,expected", [(4, 15, 1), (0, 7, 7), (12, 18, 6)])
def test_gcd(a, b, expected):
    assert gcd(a, b) == expected


def test_gcd_rejects_zero_pair():
    with pytest.raises(OutOfRange):
        gcd(0, 0)


@pytest.mark.parametrize("args,expected", [((2, 4, 15), 1), ((7, 0, 15), 1), ((2, 9, 15), 2)])
def test_mod_pow(args, expected):
    assert mod_pow(*args) == expected


@pytest.mark.parametrize("a,m,expected", [(3, 4, 3), (1, 9, 1), (7, 15, 13)])
def test_mod_inverse(a, m, expected):
    assert mod_inverse(a, m) == expected


def test_mod_inverse_non_unit():
    with pytest.raises(NotAUnit):
        mod_inverse(6, 15)


@pytest.mark.parametrize("n,expected", [(4, [(2, 2)]), (12, [(2, 2), (3, 1)]), (7, [(7, 1)])])
def test_factorize(n, expected):
    assert list(factorize(n)) == expected


def test_factorize_bound():
    with pytest.raises(OutOfRange):
        factorize(10**13)


@pytest.mark.parametrize("n,phi,lam", [(4, 2, 2), (15, 8, 4), (1, 1, 1), (8, 4, 2), (13, 12, 12)])
def test_phi_and_lambda(n, phi, lam):
    assert euler_phi(n) == phi
    assert carmichael_lambda(n) == lam


@pytest.mark.parametrize("g,N,k", [(2, 15, 4), (1, 15, 1), (2, 7, 3)])
def test_multiplicative_order(g, N, k):
    assert multiplicative_order(g, N) == k


def test_order_of_non_unit():
    with pytest.raises(NotAUnit):
        multiplicative_order(3, 15)


@pytest.mark.parametrize("k,parts", [(12, [4, 3]), (4, [4]), (30, [2, 3, 5])])
def test_crt_split(k, parts):
    assert crt_split(k) == parts


@pytest.mark.parametrize("H,k,expected", [
    (1, 12, (True, [True, True])),
    (9, 12, (False, [True, False])),
    (25, 12, (True, [True, True])),
])
def test_crt_check_unity(H, k, expected):
    assert crt_check_unity(H, k) == expected


def test_units():
    assert units(8) == [1, 3, 5, 7]
    assert units(2) == [1]


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_extended_gcd_bezout(a, b):
    g, x, y = extended_gcd(a, b)
    assert g == math.gcd(a, b) == a * x + b * y


@given(st.integers(0, 10**9), st.integers(0, 500), st.integers(2, 10**6))
def test_mod_pow_matches_builtin(b, e, m):
    assert mod_pow(b, e, m) == pow(b, e, m)


@given(st.integers(2, 3000))
def test_phi_counts_units(n):
    assert euler_phi(n) == len(units(n)) == sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


@given(st.integers(2, 400))
def test_lambda_is_group_exponent(n):
    lam = carmichael_lambda(n)
    assert all(pow(u, lam, n) == 1 for u in units(n))
    assert lam == math.lcm(*(ref.order(u, n) for u in units(n)))


@given(st.integers(3, 500), st.data())
def test_order_matches_naive(N, data):
    g = data.draw(st.sampled_from(units(N)))
    k = multiplicative_order(g, N)
    assert k == ref.order(g, N)
    assert carmichael_lambda(N) % k == 0


@given(st.integers(2, 10**5))
def test_factorize_roundtrip(n):
    assert math.prod(p**e for p, e in factorize(n)) == n


@given(st.integers(1, 3000))
def test_divisors_naive(n):
    assert sorted(divisors(n)) == [d for d in range(1, n + 1) if n % d == 0]


@given(st.integers(0, 10**6), st.integers(2, 2000))
def test_crt_components_agree_with_direct_reduction(H, k):
    overall, parts = crt_check_unity(H, k)
    assert overall == (H % k == 1)
    assert parts == [H % q == 1 for q in crt_split(k)]
    assert crt_combine([H % q for q in crt_split(k)], crt_split(k)) == H % k
