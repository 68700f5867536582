"""The three-variable family pipeline."""

from fractions import Fraction
from itertools import product

import pytest

from igusa_zeta.count import CountJob, count_ni
from igusa_zeta.errors import ConstraintViolated
from igusa_zeta.gf import FieldConfig
from igusa_zeta.hybrid import (
    DiagonalParams,
    HybridParams,
    classify_ord_triple,
    diagonal_poly,
    diagonalize,
    make_hybrid_g,
    theorem_denominator,
    theorem_poles,
    zeta_hybrid,
    zeta_hybrid_pieces,
)
from igusa_zeta.mvpoly import parse_poly
from igusa_zeta.symb import CharClass, RatFun, ni_from_poincare, poincare_from_zeta

F3 = FieldConfig(3)
F5 = FieldConfig(5)


def triv(field):
    return CharClass(field, 0)


def one_minus_u(q):
    return RatFun.monomial(q, 1, 0, 0) - RatFun.monomial(q, 1, 1, 0)


def test_params_validation():
    HybridParams(F3, 3, 2, 1)
    with pytest.raises(ConstraintViolated):
        HybridParams(F3, 2, 2, 1)  # p does not divide 1 + l + k
    with pytest.raises(ConstraintViolated):
        HybridParams(F3, 1, 1, 1)  # l = 1 is outside this pipeline
    with pytest.raises(ConstraintViolated):
        HybridParams(F3, 3, 3, 1)  # p | l
    with pytest.raises(ConstraintViolated):
        HybridParams(F3, 3, 2, 0)  # t must be a unit
    with pytest.raises(ConstraintViolated):
        DiagonalParams(F3, 4, 3, 1, 1)  # p | l
    with pytest.raises(ConstraintViolated):
        DiagonalParams(F3, 5, 2, 1, 1)  # p does not divide n + l


def test_make_hybrid_g_expansion():
    g = make_hybrid_g(HybridParams(F3, 3, 2, 1))
    assert g == parse_poly("x^3 + y*z^5 + y^3*z^3 + 2*y^4*z^2", F3)


def test_diagonalize():
    params = HybridParams(F3, 3, 2, 1)
    sheared, dp = diagonalize(make_hybrid_g(params), params)
    assert sheared == parse_poly("x^3 + z^6 + 2*y^4*z^2", F3)
    assert (dp.n, dp.l, dp.alpha, dp.beta) == (4, 2, 2, 1)
    # k = 1 branch: alpha = -1
    params = HybridParams(F3, 1, 4, 2)
    _, dp = diagonalize(make_hybrid_g(params), params)
    assert dp.alpha == F3.neg(1)
    assert dp.beta == F3.pow(2, 2)


def test_diagonalize_preserves_counts():
    for k, l, t in [(3, 2, 1), (3, 2, 2), (6, 2, 1), (1, 4, 1)]:
        params = HybridParams(F3, k, l, t)
        g = make_hybrid_g(params)
        sheared, _ = diagonalize(g, params)
        for i in (1, 2):
            assert count_ni(CountJob(g, i)) == count_ni(CountJob(sheared, i))


def test_partition_covers_exactly_once():
    seen = []
    for x_ge, y_pos, z_pos in product((False, True), repeat=3):
        seen.append(classify_ord_triple(x_ge, y_pos, z_pos))
    assert sorted(seen) == ["A", "A1", "A2", "A3", "A4", "A5", "A6", "A7"]


def test_pieces_match_displayed_constants():
    dp = DiagonalParams(F3, 4, 2, 1, 1)
    pieces = zeta_hybrid_pieces(dp, triv(F3))
    u = lambda a, b=0: RatFun.monomial(3, 1, a, b)
    omu = one_minus_u(3)
    assert pieces["A2"] == u(3) * omu
    assert pieces["A3"] == u(2) * omu * omu
    assert pieces["A4"] == omu * (u(2) + u(3, 3))
    assert pieces["A5"] == omu * omu * (u(3, 3) + u(2, 2) - u(3, 2) + u(1))


def test_pieces_t1_measure_identity():
    # at t = 1 each piece is the Haar measure of its box
    uq = Fraction(1, 3)
    ge, lt = uq**2, 1 - uq**2
    pos, unit = uq, 1 - uq
    measure = {
        "A1": ge * unit * pos, "A2": ge * pos * unit, "A3": ge * unit * unit,
        "A4": lt * pos * pos, "A5": lt * unit * pos, "A6": lt * pos * unit,
        "A7": lt * unit * unit,
    }
    for alpha in (1, 2):
        pieces = zeta_hybrid_pieces(DiagonalParams(F3, 4, 2, alpha, 1), triv(F3))
        for label, piece in pieces.items():
            assert piece.eval_at(Fraction(1)) == measure[label], (alpha, label)


def test_zeta_matches_counts():
    dp = DiagonalParams(F3, 4, 2, 2, 1)
    z = zeta_hybrid(dp, triv(F3))
    p = poincare_from_zeta(z)
    f = diagonal_poly(dp)
    for i in (1, 2, 3):
        assert ni_from_poincare(p, 3, i) == count_ni(CountJob(f, i))


def test_alpha_sign_gives_same_zeta():
    # the two diagonalization signs produce the same zeta function here
    z1 = zeta_hybrid(DiagonalParams(F3, 4, 2, 1, 1), triv(F3))
    z2 = zeta_hybrid(DiagonalParams(F3, 4, 2, 2, 1), triv(F3))
    assert z1 == z2


def test_theorem_denominator_factors():
    dp = DiagonalParams(F3, 4, 2, 1, 1)
    assert theorem_denominator(dp) == [(1, 1), (4, 6), (7, 12), (5, 6)]


def test_theorem_poles():
    poles = theorem_poles(HybridParams(F3, 3, 2, 1))
    assert [(c.real_part, c.period_denominator) for c in poles] == [
        (Fraction(-1), 1),
        (Fraction(-2, 3), 6),
        (Fraction(-7, 12), 12),
        (Fraction(-5, 6), 6),
    ]


def test_denominator_divisibility_small():
    for p, n, l in [(3, 4, 2), (5, 3, 2)]:
        field = FieldConfig(p)
        dp = DiagonalParams(field, n, l, 1, 1)
        z = zeta_hybrid(dp, triv(field)).reduce()
        assert set(z.den) <= set(theorem_denominator(dp))


def test_character_dichotomy():
    # chi^(n+l) nontrivial kills the A1 piece
    dp = DiagonalParams(F5, 3, 2, 1, 1)
    chi = CharClass(F5, 1)  # order 4, chi^5 = chi nontrivial
    pieces = zeta_hybrid_pieces(dp, chi)
    assert pieces["A1"].is_zero()
    # and a chi with chi^(n+l) trivial keeps it
    chi2 = CharClass(F5, 2)  # order 2; chi2^10... n+l = 5: chi2^5 = chi2, still nontrivial
    dp2 = DiagonalParams(F5, 8, 2, 1, 1)  # n + l = 10, chi2^10 trivial
    pieces2 = zeta_hybrid_pieces(dp2, CharClass(F5, 2))
    assert not pieces2["A1"].is_zero()


def test_nontrivial_character_denominators():
    dp = DiagonalParams(F5, 8, 2, 1, 1)
    z = zeta_hybrid(dp, CharClass(F5, 2)).reduce()
    assert set(z.den) <= set(theorem_denominator(dp))
