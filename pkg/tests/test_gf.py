"""Field and truncated-ring arithmetic."""

import math

import pytest

from igusa_zeta.errors import ConstraintViolated, ParseError, ZeroAngular
from igusa_zeta.gf import FieldConfig, TruncElem, default_modulus, embedding_root, embed_code

F2 = FieldConfig(2)
F3 = FieldConfig(3)
F4 = FieldConfig(2, 2)
F9 = FieldConfig(3, 2)


def test_default_moduli():
    assert default_modulus(2, 2) == (1, 1, 1)      # a^2 + a + 1
    assert default_modulus(3, 2) == (1, 0, 1)      # a^2 + 1
    assert default_modulus(2, 3) == (1, 1, 0, 1)   # a^3 + a + 1


def test_reducible_modulus_rejected():
    with pytest.raises(ConstraintViolated):
        FieldConfig(3, 2, modulus=(0, 0, 1))  # a^2


def test_generator_has_full_order():
    for field in (F2, F3, F4, F9, FieldConfig(7), FieldConfig(2, 3)):
        seen = set()
        acc = 1
        for _ in range(field.q - 1):
            seen.add(acc)
            acc = field.mul(acc, field.generator)
        assert seen == set(range(1, field.q))


def test_parse_field_config():
    f = FieldConfig.parse("p=3 r=2 modulus=a^2+1")
    assert (f.p, f.r, f.modulus) == (3, 2, (1, 0, 1))
    assert FieldConfig.parse("p=5").q == 5
    with pytest.raises(ParseError):
        FieldConfig.parse("p=3 oops=1")


def test_ord_examples():
    # pi^m embedded at prec > m
    for m in range(3):
        assert TruncElem.pi(F3, 4, m).ord() == m
    assert TruncElem.zero(F3, 4).ord() == math.inf
    assert TruncElem.from_pi_poly(F3, [1, 1], 3).ord() == 0


def test_ac_examples():
    assert TruncElem.pi(F3, 4, 2).ac() == TruncElem.one(F3, 2)
    u = TruncElem.from_pi_poly(F3, [2, 1, 1], 3)
    assert u.ac() == u
    x = TruncElem.from_pi_poly(F3, [0, 2, 1], 3)  # 2 pi + pi^2
    assert x.ac() == TruncElem.from_pi_poly(F3, [2, 1], 2)
    with pytest.raises(ZeroAngular):
        TruncElem.zero(F3, 2).ac()


def test_ac_multiplicative():
    for ax in range(3**3):
        codes_a = (ax % 3, (ax // 3) % 3, (ax // 9) % 3)
        a = TruncElem(F3, 3, codes_a)
        for bx in range(3**3):
            b = TruncElem(F3, 3, (bx % 3, (bx // 3) % 3, (bx // 9) % 3))
            if a.ord() is math.inf or b.ord() is math.inf:
                continue
            prod = a * b
            if prod.ord() is math.inf:
                continue
            prec = min(a.ac().prec, b.ac().prec, prod.ac().prec)
            assert prod.ac().truncate(prec) == (a.ac().truncate(prec) * b.ac().truncate(prec)).truncate(prec)


def test_ord_additive():
    for a_ord in range(3):
        for b_ord in range(3):
            a, b = TruncElem.pi(F3, 4, a_ord) * 2, TruncElem.pi(F3, 4, b_ord)
            if a_ord + b_ord < 4:
                assert (a * b).ord() == a_ord + b_ord


def test_frobenius_examples():
    # prime field is fixed
    for c in range(3):
        assert F3.frobenius(c) == c
    # F9 = F3[a]/(a^2+1): a^3 = -a = 2a
    a = F9.gen()
    assert a.frobenius() == a * 2
    # (1 + pi)^3 = 1 + pi^3
    x = TruncElem.from_pi_poly(F3, [1, 1], 4)
    assert x.frobenius() == TruncElem.from_pi_poly(F3, [1, 0, 0, 1], 4)
    assert x.frobenius() == x**3


def test_frobenius_is_ring_hom():
    for field in (F2, F3, F4, F9):
        for a in field.elements():
            for b in field.elements():
                fa, fb = field.frobenius(a), field.frobenius(b)
                assert field.frobenius(field.add(a, b)) == field.add(fa, fb)
                assert field.frobenius(field.mul(a, b)) == field.mul(fa, fb)


def test_frobenius_ring_hom_truncated():
    import itertools

    for codes_a in itertools.product(range(3), repeat=3):
        a = TruncElem(F3, 3, codes_a)
        b = TruncElem.from_pi_poly(F3, [2, 1], 3)
        assert (a + b).frobenius() == a.frobenius() + b.frobenius()
        assert (a * b).frobenius() == a.frobenius() * b.frobenius()


def test_pth_root():
    assert F3.pth_root(1) == 1
    assert F3.pth_root(2) == 2  # 2^3 = 8 = 2 mod 3
    for field in (F2, F3, F4, F9, FieldConfig(3, 3)):
        for c in field.elements():
            assert field.pth_root(field.frobenius(c)) == c
            assert field.frobenius(field.pth_root(c)) == c


def test_is_pth_power():
    assert not TruncElem.from_pi_poly(F3, [1, 1], 2).is_pth_power()
    assert TruncElem.from_pi_poly(F3, [1, 0, 0, 2], 4).is_pth_power()
    assert TruncElem.zero(F3, 3).is_pth_power()


def test_unit_shift():
    # x = pi^m x1: ord(x) >= m gives x1 in O_K, ord(x) = m gives a unit
    x = TruncElem.from_pi_poly(F3, [0, 0, 2, 1], 4)
    x1 = x.unit_shift(2)
    assert x1.prec == 2 and x1.ord() == 0
    assert x.unit_shift(1).ord() == 1
    with pytest.raises(ConstraintViolated):
        TruncElem.from_pi_poly(F3, [1, 0], 2).unit_shift(1)


def test_mixed_precision_truncates_to_min():
    a = TruncElem.from_pi_poly(F3, [1, 2, 1], 3)
    b = TruncElem.from_pi_poly(F3, [2, 1], 2)
    assert (a + b).prec == 2
    assert (a * b).prec == 2


def test_embedding():
    root = embedding_root(F3, F9)
    # the image of a under F3 -> F9 composed through the root map is a root
    # of the modulus; for the identity-degree case the root is trivial
    assert embedding_root(F3, F3) == 0
    img2 = embed_code(F3, F9, root, 2)
    assert img2 == 2
    # F4 inside F16
    F16 = FieldConfig(2, 4)
    r = embedding_root(F4, F16)
    one = embed_code(F4, F16, r, 1)
    assert one == 1
    # embedding is multiplicative
    for a in F4.elements():
        for b in F4.elements():
            assert embed_code(F4, F16, r, F4.mul(a, b)) == F16.mul(
                embed_code(F4, F16, r, a), embed_code(F4, F16, r, b)
            )
