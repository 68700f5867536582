"""Newton polyhedra, candidate poles, non-degeneracy."""

from fractions import Fraction
from itertools import product
from math import gcd

import pytest

from igusa_zeta.errors import TooManyVariables
from igusa_zeta.gf import FieldConfig
from igusa_zeta.mvpoly import parse_poly
from igusa_zeta.newton import (
    build_polyhedron,
    candidate_poles,
    gnd_check,
)

F3 = FieldConfig(3)
F5 = FieldConfig(5)


def test_two_term_staircase():
    nd = build_polyhedron([(2, 0), (0, 3)])
    assert dict(nd.facets) == {(1, 0): 0, (0, 1): 0, (3, 2): 6}


def test_symmetric_staircase():
    nd = build_polyhedron([(1, 0), (0, 1)])
    assert ((1, 1), 1) in nd.facets


def test_single_point_support():
    nd = build_polyhedron([(2, 1)])
    assert dict(nd.facets) == {(1, 0): 2, (0, 1): 1}


def test_facets_support_inequality():
    # every facet normal supports the polyhedron: <a, l> >= m on all of the
    # support, with equality on an (n-1)-dimensional face
    supports = [
        [(3, 0, 0), (0, 4, 2), (0, 0, 6)],
        [(2, 0, 0), (0, 3, 0), (0, 0, 5), (1, 1, 1)],
        [(4, 0), (1, 2), (0, 5)],
    ]
    for sup in supports:
        nd = build_polyhedron(sup)
        for a, m in nd.facets:
            assert gcd(*[*a, 0]) == 1 or sum(a) == 1
            vals = [sum(x * y for x, y in zip(a, s)) for s in sup]
            assert min(vals) == m


def _facets_brute(support, n, bound):
    """Independent oracle: scan all small primitive nonneg normals and keep
    those whose equality set spans an (n-1)-dimensional face."""
    from igusa_zeta.newton import _rank

    out = {}
    for a in product(range(bound + 1), repeat=n):
        if not any(a):
            continue
        g = 0
        for v in a:
            g = gcd(g, v)
        if g != 1:
            continue
        m = min(sum(x * y for x, y in zip(a, s)) for s in support)
        touching = [s for s in support if sum(x * y for x, y in zip(a, s)) == m]
        base = touching[0]
        spanning = [tuple(x - y for x, y in zip(s, base)) for s in touching[1:]]
        spanning += [tuple(1 if k == i else 0 for k in range(n)) for i in range(n) if a[i] == 0]
        if spanning and _rank(spanning) == n - 1:
            out[a] = m
    return out


def test_facets_match_brute_force_scan():
    cases = [
        ([(3, 0, 0), (0, 4, 2), (0, 0, 6)], 3),
        ([(3, 0), (0, 2), (1, 1)], 2),
        ([(2, 0, 0), (0, 2, 0), (0, 0, 2)], 3),
        ([(5, 0), (0, 7)], 2),
    ]
    for support, n in cases:
        nd = build_polyhedron(support, n)
        bound = max(max(s) for s in support) ** 2 + 1
        assert dict(nd.facets) == _facets_brute(support, n, bound)


def test_too_many_variables():
    with pytest.raises(TooManyVariables):
        build_polyhedron([(1, 0, 0, 0)], 4)


def test_candidate_poles_two_term():
    poles = candidate_poles(build_polyhedron([(2, 0), (0, 3)]))
    assert {(c.real_part, c.period_denominator) for c in poles} == {
        (Fraction(-1), 1),
        (Fraction(-5, 6), 6),
    }


def test_candidate_poles_lemma_closed_form():
    for i0 in range(2, 13):
        for j0 in range(2, 13):
            poles = candidate_poles(build_polyhedron([(i0, 0), (0, j0)]))
            reals = {c.real_part for c in poles}
            assert reals == {Fraction(-1), Fraction(-(i0 + j0), i0 * j0)}


def test_candidate_poles_unit_case():
    poles = candidate_poles(build_polyhedron([(1, 0), (0, 1)]))
    assert {(c.real_part, c.period_denominator) for c in poles} == {
        (Fraction(-1), 1),
        (Fraction(-2), 1),
    }


def test_pole_rescaling_relation():
    # scaling the support by c: normals unchanged, m scales by c,
    # |a|/m scales by 1/c
    base = [(3, 0, 0), (0, 4, 2), (0, 0, 6)]
    nd1 = build_polyhedron(base)
    for c in (2, 3):
        ndc = build_polyhedron([tuple(c * v for v in s) for s in base])
        assert [a for a, _ in nd1.facets] == [a for a, _ in ndc.facets]
        for (a1, m1), (a2, m2) in zip(nd1.facets, ndc.facets):
            assert m2 == c * m1
            if m1:
                assert Fraction(sum(a2), m2) == Fraction(sum(a1), m1) / c


def test_gnd_accepts_displayed_kernel():
    # pi^n u^p + alpha v^l + beta pi^n v^(n+l) with (p, n, l) = (3, 4, 2)
    g = parse_poly("pi^4*x^3 + y^2 + pi^4*y^6", F3, 2)
    assert gnd_check(g, 2).is_non_degenerate()


def test_gnd_rejects_planted_degenerate():
    f = parse_poly("x^2 + 3*x*y + y^2 + x^3", F5, 2)  # (x - y)^2 + x^3
    res = gnd_check(f, 1)
    assert res.status == "degenerate"
    assert res.witness is not None
    x, y = res.witness
    assert x == y != 0  # on the line x = y inside the torus
    assert (1, 1) in res.face


def test_gnd_origin_nonsingular():
    res = gnd_check(parse_poly("x + y", F3, 2), 1)
    assert res.status == "origin_nonsingular"


def test_gnd_searches_extensions():
    # (x^2 + xy + y^2)^2 = x^4 + x^2 y^2 + y^4 over F_2: every zero is
    # singular (squared, char 2) but the torus zeros live in F_4 only
    f = parse_poly("x^4 + x^2*y^2 + y^4", FieldConfig(2), 2)
    assert gnd_check(f, 1).is_non_degenerate()
    res = gnd_check(f, 2)
    assert res.status == "degenerate" and res.extension == 2
