"""Polynomial calculus: substitutions, extraction, parsing."""

import random

import pytest

from igusa_zeta.errors import NotUnimodular, ParseError, PrecisionMismatch, ZeroPolynomial
from igusa_zeta.gf import FieldConfig, TruncElem
from igusa_zeta.mvpoly import MultiPoly, parse_fq_const, parse_poly

F3 = FieldConfig(3)
F9 = FieldConfig(3, 2)


def P(text, field=F3, nvars=None):
    return parse_poly(text, field, nvars)


def test_parser_basics():
    f = P("x^3 + y^4*z^2 + z^6")
    assert f.nvars == 3 and len(f.terms) == 3
    g = P("pi^2*x^3 + (a+1)*y^2", F9)
    assert g.terms[(3, 0)] == (0, 0, 1)
    assert g.terms[(0, 2)] == (F9.add(F9.p, 1),)
    assert P("2", nvars=None).is_constant()
    assert P("x - y") == P("x + 2*y")


def test_parser_rejects():
    with pytest.raises(ParseError):
        P("x/y")
    with pytest.raises(ParseError):
        P("x^-2")
    with pytest.raises(ParseError):
        P("x +")
    with pytest.raises(ParseError):
        P("w^2")


def test_parse_fq_const():
    assert parse_fq_const("2", F3).code == 2
    assert parse_fq_const("a+1", F9).code == F9.add(F9.p, 1)
    with pytest.raises(ParseError):
        parse_fq_const("x", F3)
    with pytest.raises(ParseError):
        parse_fq_const("pi", F3)


def test_evaluate_examples():
    f = P("x^3 + y^4*z^2 + z^6")
    one = TruncElem.one(F3, 1)
    assert f.evaluate([one, one, one], 1).is_zero()
    x = P("x")
    assert x.evaluate([TruncElem.pi(F3, 2)], 2) == TruncElem.pi(F3, 2)
    pt = [TruncElem.one(F3, 2), TruncElem.one(F3, 2), TruncElem.pi(F3, 2)]
    assert f.evaluate(pt, 2) == TruncElem.one(F3, 2)
    with pytest.raises(PrecisionMismatch):
        f.evaluate(pt, 3)
    with pytest.raises(PrecisionMismatch):
        f.evaluate(pt[:2], 2)


def test_reduce_mod_pi():
    assert P("pi^3*x^3 + y^4*z^2").reduce_mod_pi() == P("y^4*z^2")
    assert P("x^3 + 2*pi^4*y^4*z^2 + z^6").reduce_mod_pi() == P("x^3 + z^6")
    assert MultiPoly.zero(F3, 2).reduce_mod_pi().is_zero()


def test_partial_derivative():
    assert P("x^3").partial_derivative(0).is_zero()  # char 3 kills the exponent
    assert P("2*y^4*z^2", nvars=3).partial_derivative(1) == P("2*y^3*z^2", nvars=3)
    assert P("y^4*z^2", nvars=3).partial_derivative(1) == P("y^3*z^2", nvars=3)


def test_leibniz_rule_randomized():
    rng = random.Random(20240801)
    for _ in range(25):
        nvars = rng.choice((1, 2, 3))
        def rand_poly():
            terms = {}
            for _ in range(rng.randint(1, 4)):
                exps = tuple(rng.randint(0, 3) for _ in range(nvars))
                terms[exps] = (rng.randint(0, 2), rng.randint(0, 2))
            return MultiPoly(F3, nvars, terms)
        f, g = rand_poly(), rand_poly()
        for var in range(nvars):
            lhs = (f * g).partial_derivative(var)
            rhs = f.partial_derivative(var) * g + f * g.partial_derivative(var)
            assert lhs == rhs


def test_substitute_monomial():
    f = P("x^3 + y^4*z^2 + z^6")
    g, jac = f.substitute_monomial((2, 1, 1))
    assert jac == 4
    assert g == P("pi^6*x^3 + pi^6*y^4*z^2 + pi^6*z^6")
    same, jac0 = f.substitute_monomial((0, 0, 0))
    assert same == f and jac0 == 0
    x, jac1 = P("x").substitute_monomial((1,))
    assert x == P("pi*x") and jac1 == 1


def test_extract_pi_power():
    m, g = P("pi^6*x^3 + pi^6*y^4*z^2 + pi^6*z^6").extract_pi_power()
    assert m == 6 and g == P("x^3 + y^4*z^2 + z^6")
    m, g = P("x + pi*y").extract_pi_power()
    assert m == 0
    m, g = P("pi^2*x^2").extract_pi_power()
    assert m == 2 and g == P("x^2")
    with pytest.raises(ZeroPolynomial):
        MultiPoly.zero(F3, 1).extract_pi_power()


def test_self_similarity_of_diagonal_form():
    # the rescaling by (omega, 1, 1) reproduces the polynomial after
    # extracting pi^(n+l)
    f = P("x^3 + y^4*z^2 + z^6")
    g, jac = f.substitute_monomial((2, 1, 1))
    m, h = g.extract_pi_power()
    assert (m, h) == (6, f) and jac == 4


def test_substitute_affine():
    assert P("x^2").substitute_affine([0]) == P("pi^2*x^2")
    assert P("x").substitute_affine([2], scale_pi=True) == P("2 + pi*x")
    # recentering u at -beta^(1/p) with v untouched collapses by Frobenius
    g = P("x^3 + 2*pi^4*y^4 + 1", nvars=2)
    shifted = g.substitute_affine([2, None])  # -1 = 2 in F_3
    assert shifted == P("pi^3*x^3 + 2*pi^4*y^4", nvars=2)


def test_substitute_affine_matches_evaluation():
    rng = random.Random(77)
    for _ in range(20):
        nvars = rng.choice((1, 2, 3))
        terms = {}
        for _ in range(rng.randint(1, 4)):
            exps = tuple(rng.randint(0, 3) for _ in range(nvars))
            terms[exps] = (rng.randint(0, 2), rng.randint(0, 2))
        f = MultiPoly(F3, nvars, terms)
        center = [rng.randint(0, 2) for _ in range(nvars)]
        g = f.substitute_affine(center)
        for prec in (1, 2, 3):
            pt = [TruncElem.from_pi_poly(F3, [rng.randint(0, 2) for _ in range(prec)], prec)
                  for _ in range(nvars)]
            shifted = [TruncElem.constant(F3, c, prec) + TruncElem.pi(F3, prec) * x
                       for c, x in zip(center, pt)]
            assert g.evaluate(pt, prec) == f.evaluate(shifted, prec)


def test_substitute_linear_shear():
    # y -> t z + y diagonalizes the k = 3, l = 2, t = 1 family member
    g = P("x^3 + y*z^5 + y^3*z^3 + 2*y^4*z^2")
    sheared = g.substitute_linear([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    assert sheared == P("x^3 + z^6 + 2*y^4*z^2")
    assert P("x").substitute_linear([[1]]) == P("x")
    # shear then inverse shear
    back = sheared.substitute_linear([[1, 0, 0], [0, 1, 2], [0, 0, 1]])
    assert back == g


def test_substitute_linear_rejects_singular():
    with pytest.raises(NotUnimodular):
        P("x + y").substitute_linear([[1, 1], [1, 1]])
    with pytest.raises(NotUnimodular):
        P("x").substitute_linear([[(0, 1)]])  # x -> pi x is not unimodular


def test_binomial_closure_identity():
    # sum_{i=1}^{k+1} C(k+1,i) (tz+y)^i (-y)^(k+1-i) = t^(k+1) z^(k+1) - (-1)^(k+1) y^(k+1)
    from math import comb

    for q, field in ((3, F3), (9, F9)):
        for k in range(1, 9):
            for t in field.units():
                y = MultiPoly.variable(field, 2, 0)
                z = MultiPoly.variable(field, 2, 1)
                tz_y = z.scale(t) + y
                acc = MultiPoly.zero(field, 2)
                for i in range(1, k + 2):
                    c = comb(k + 1, i) % field.p
                    if c:
                        acc = acc + (tz_y**i * (-y) ** (k + 1 - i)).scale(field.from_int(c))
                sign = field.pow(field.neg(1), k + 1)
                want = (z ** (k + 1)).scale(field.pow(t, k + 1)) - (y ** (k + 1)).scale(sign)
                assert acc == want


def test_renders_round_trip_through_parser():
    for text in ("x^3 + y^4*z^2 + z^6", "pi^2*x^3 + (a+1)*y^2", "x + 2"):
        field = F9 if "a" in text else F3
        f = parse_poly(text, field)
        assert parse_poly(str(f), field, f.nvars) == f
