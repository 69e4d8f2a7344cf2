import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as ref
from pcg import finite_field as ff
from pcg.errors import NotIrreducible, NotPrime, OutOfRange, TooLarge, ZeroElement, ZeroToZero

GF8 = ff.field_new(2, 3, [1, 1, 0, 1])  # x^3 + x + 1
AES = ff.aes_field()


def el(f, label):
    return ff.element(f, label)


def test_field_new_examples():
    assert GF8.q == 8
    assert AES.q == 256 and AES.hex == "0x11b"
    with pytest.raises(NotIrreducible):
        ff.field_new(2, 2, [1, 0, 1])
    with pytest.raises(NotPrime):
        ff.field_new(4, 2, [1, 1, 1])
    with pytest.raises(TooLarge):
        ff.field_new(2, 17, [1] + [0] * 16 + [1])


def test_odd_characteristic_field():
    f = ff.field_new(3, 2, [1, 0, 1])  # x^2 + 1 is irreducible over GF(3)
    assert f.q == 9
    for h in range(1, 9):
        assert ff.fmul(f, el(f, h), ff.finv(f, el(f, h))) == ff.one(f)


def test_s_and_c_maps():
    assert ff.s_map(GF8, 1) == ff.one(GF8)
    assert ff.s_map(GF8, 2).coeffs[:2] == (0, 1)
    assert ff.c_map(GF8, ff.s_map(GF8, 2)) == 2
    assert str(ff.s_map(AES, 0x53)) == "x^6 + x^4 + x + 1"
    with pytest.raises(OutOfRange):
        ff.s_map(GF8, 8)
    with pytest.raises(ZeroElement):
        ff.c_map(GF8, el(GF8, 0))


def test_gf8_products_and_inverse():
    x, x2 = el(GF8, 2), el(GF8, 4)
    assert ff.fmul(GF8, x, x2).index == 0b011  # x^3 = x + 1
    assert ff.finv(GF8, x).index == 0b101  # x^2 + 1
    assert ff.fpow(GF8, x, 7) == ff.one(GF8)
    assert ff.finv(GF8, ff.one(GF8)) == ff.one(GF8)


def test_aes_inverse_pair():
    a = ff.s_map(AES, 0x53)
    assert ff.finv(AES, a).index == 0xCA
    assert ff.fmul(AES, a, ff.s_map(AES, 0xCA)) == ff.one(AES)


def test_zero_edge_cases():
    with pytest.raises(ZeroElement):
        ff.finv(GF8, el(GF8, 0))
    with pytest.raises(ZeroToZero):
        ff.fpow(GF8, el(GF8, 0), 0)
    assert ff.fpow(GF8, el(GF8, 3), 0) == ff.one(GF8)


@pytest.mark.parametrize("q,mask", [(4, 0b111), (8, 0b1011), (16, 0b10011), (256, 0x11B)])
def test_presets_match_bitwise_oracle(q, mask):
    f = ff.small_field(q)
    for a in range(1, q, max(1, q // 32)):
        for b in range(1, q, max(1, q // 16)):
            assert ff.fmul(f, el(f, a), el(f, b)).index == ref.gf2_mul(a, b, mask)
            assert ff.mul_labels(f, a, b) == ref.gf2_mul(a, b, mask)


def test_log_tables_cover_group():
    t = ff.log_tables(AES)
    assert sorted(t.exp[:255]) == list(range(1, 256))
    assert all(ff.inv_label(AES, h) == ref.gf2_inv(h, 0x11B) for h in range(1, 256, 3))


def test_parse_polynomial_forms():
    assert ff.parse_polynomial(0x11B) == ff.parse_polynomial("0x11B")
    assert ff.parse_polynomial([1, 2, 1], p=3) == (1, 2, 1)


@given(st.integers(1, 255), st.integers(1, 255), st.integers(1, 255))
def test_aes_group_laws(a, b, c):
    A, B, C = (ff.s_map(AES, h) for h in (a, b, c))
    assert ff.fmul(AES, A, B) == ff.fmul(AES, B, A)
    assert ff.fmul(AES, ff.fmul(AES, A, B), C) == ff.fmul(AES, A, ff.fmul(AES, B, C))
    assert ff.fmul(AES, A, ff.finv(AES, A)) == ff.one(AES)
    assert ff.fmul(AES, A, B).index == ref.gf2_mul(a, b, 0x11B)


@given(st.integers(1, 255), st.integers(0, 600))
def test_fpow_reduces_mod_group_order(a, e):
    A = ff.s_map(AES, a)
    assert ff.fpow(AES, A, e) == ff.fpow(AES, A, e % 255)
