"""End-to-end pipeline for the three-variable hybrid family.

The family is g(x, y, z) = x^p + y z^l * sum_i C(k+1, i+1) y^i (t z - y)^(k-i)
with p not dividing l, l > 1, p dividing 1 + l + k, and t a unit constant.
The shear y -> t z + y diagonalizes g to x^p + alpha y^n z^l + beta z^(n+l)
with n = k + 1, alpha = (-1)^k, beta = t^(k+1); the shear is unimodular, so
the two polynomials have the same zeta function and the same solution counts.

The zeta function of the diagonal form is computed by cutting O_K^3 along
the residue classification (ord x against omega = (n+l)/p, ord y and ord z
against 0) into the self-similar head piece plus seven boxes A1..A7, driving
each box through monomial rescalings, unit-variable splits, and the generic
SPF solver, and closing the head piece as the geometric series
1/(1 - u^(omega+2) t^(n+l)).  The seven boxes are computed by the generic
machinery, never transcribed from closed-form answers, so the worked-example
reference values stay an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ConstraintViolated, IdentityFailed
from .gf import FieldConfig, FqElem
from .mvpoly import MultiPoly
from .newton import CandidatePole
from .spf import Domain, spf_solve, split_unit_variable
from .symb import CharClass, RatFun


@dataclass(frozen=True)
class HybridParams:
    """Parameters of the undiagonalized family (k, l, unit constant t)."""

    field: FieldConfig
    k: int
    l: int
    t: int  # field code of a unit constant

    def __post_init__(self):
        p = self.field.p
        if self.k < 1:
            raise ConstraintViolated("k must be a positive integer")
        if self.l <= 1:
            raise ConstraintViolated("l must exceed 1 (l = 1 is outside this pipeline)")
        if self.l % p == 0:
            raise ConstraintViolated(f"p = {p} must not divide l = {self.l}")
        if (1 + self.l + self.k) % p:
            raise ConstraintViolated(
                f"p = {p} must divide 1 + l + k = {1 + self.l + self.k}"
            )
        if not 0 < self.t < self.field.q:
            raise ConstraintViolated("t must be a unit constant of F_q")


@dataclass(frozen=True)
class DiagonalParams:
    """Parameters of the diagonal form x^p + alpha y^n z^l + beta z^(n+l).

    beta is a unit constant; every unit of F_q is automatically a p-th
    power (Frobenius is bijective), which is the hypothesis the x-recentering
    steps rely on."""

    field: FieldConfig
    n: int
    l: int
    alpha: int
    beta: int

    def __post_init__(self):
        p = self.field.p
        if self.n < 1:
            raise ConstraintViolated("n must be a positive integer")
        if self.l <= 1:
            raise ConstraintViolated("l must exceed 1")
        if self.l % p == 0:
            raise ConstraintViolated(f"p = {p} must not divide l = {self.l}")
        if (self.n + self.l) % p:
            raise ConstraintViolated(f"p = {p} must divide n + l = {self.n + self.l}")
        if not 0 < self.alpha < self.field.q:
            raise ConstraintViolated("alpha must be a unit")
        if not 0 < self.beta < self.field.q:
            raise ConstraintViolated("beta must be a unit")

    @property
    def omega(self) -> int:
        return (self.n + self.l) // self.field.p


def make_hybrid_g(params: HybridParams) -> MultiPoly:
    """The family polynomial, expanded exactly over F_p binomials."""
    field, k, l, t = params.field, params.k, params.l, params.t
    x = MultiPoly.variable(field, 3, 0)
    y = MultiPoly.variable(field, 3, 1)
    z = MultiPoly.variable(field, 3, 2)
    tz_minus_y = z.scale(t) - y
    acc = MultiPoly.zero(field, 3)
    for i in range(k + 1):
        c = comb(k + 1, i + 1) % field.p
        if not c:
            continue
        acc = acc + (y**i * tz_minus_y ** (k - i)).scale(field.from_int(c))
    return x**params.field.p + y * z**l * acc


def diagonalize(g: MultiPoly, params: HybridParams) -> tuple[MultiPoly, DiagonalParams]:
    """Apply the shear y -> t z + y and assert the diagonal identity."""
    field, k, l, t = params.field, params.k, params.l, params.t
    sheared = g.substitute_linear([[1, 0, 0], [0, 1, t], [0, 0, 1]])
    alpha = field.pow(field.neg(1), k)
    beta = field.pow(t, k + 1)
    dp = DiagonalParams(field, k + 1, l, alpha, beta)
    if sheared != diagonal_poly(dp):
        raise IdentityFailed(
            "shear did not produce x^p + alpha y^(k+1) z^l + beta z^(k+1+l)"
        )
    return sheared, dp


def diagonal_poly(dp: DiagonalParams) -> MultiPoly:
    field = dp.field
    return (
        MultiPoly.variable(field, 3, 0) ** field.p
        + (MultiPoly.variable(field, 3, 1) ** dp.n
           * MultiPoly.variable(field, 3, 2) ** dp.l).scale(dp.alpha)
        + (MultiPoly.variable(field, 3, 2) ** (dp.n + dp.l)).scale(dp.beta)
    )


# -- the seven-box decomposition -------------------------------------------------


def classify_ord_triple(x_ge_omega: bool, y_positive: bool, z_positive: bool) -> str:
    """Which piece of the decomposition a point belongs to, by the residue
    data (ord x >= omega?, ord y >= 1?, ord z >= 1?)."""
    if x_ge_omega:
        if y_positive and z_positive:
            return "A"
        if not y_positive and z_positive:
            return "A1"
        if y_positive and not z_positive:
            return "A2"
        return "A3"
    if y_positive and z_positive:
        return "A4"
    if not y_positive and z_positive:
        return "A5"
    if y_positive and not z_positive:
        return "A6"
    return "A7"


def _monomial_piece(f, exps, domain_tokens, char, split=None) -> RatFun:
    """One T-rescaled piece: substitute x_i -> pi^(e_i) x_i, extract the pi
    power, optionally split a unit variable, then run the SPF solver."""
    field = f.field
    poly, jac = f.substitute_monomial(exps)
    m, poly = poly.extract_pi_power()
    domain = Domain.from_tokens(field, domain_tokens)
    if split is None:
        value = spf_solve(poly, domain, char)
    else:
        var, weights = split
        kernel, kdomain, _, multiplier = split_unit_variable(
            poly, domain, var, weights, char
        )
        value = multiplier * spf_solve(kernel, kdomain, char)
    return value.mul_monomial(jac, m)


def zeta_hybrid_pieces(dp: DiagonalParams, char: CharClass) -> dict[str, RatFun]:
    """The seven box integrals, keyed A1..A7."""
    f = diagonal_poly(dp)
    w = dp.omega
    pieces: dict[str, RatFun] = {}
    q = dp.field.q

    pieces["A1"] = _monomial_piece(
        f, (w, 0, 1), "any,unit,any", char, split=(1, (w, 1, 1))
    )
    pieces["A2"] = _monomial_piece(f, (w, 1, 0), "any,any,unit", char)
    pieces["A3"] = _monomial_piece(f, (w, 0, 0), "any,unit,unit", char)

    for label, tail in (("A4", (1, 1)), ("A5", (0, 1)), ("A6", (1, 0)), ("A7", (0, 0))):
        total = RatFun.zero(q)
        for a in range(w):
            exps = (a,) + tail
            tokens = ",".join(
                ["unit"]
                + ["any" if e else "unit" for e in tail]
            )
            if label == "A6" and a == 0:
                total = total + _monomial_piece(
                    f, exps, tokens, char, split=(2, (w, 1, 1))
                )
            else:
                total = total + _monomial_piece(f, exps, tokens, char)
        pieces[label] = total
    return pieces


def zeta_hybrid(dp: DiagonalParams, char: CharClass) -> RatFun:
    """Z(f, s, chi) over O_K^3 for the diagonal form, via the seven boxes and
    the self-similarity closure 1/(1 - u^(omega+2) t^(n+l))."""
    total = RatFun.zero(dp.field.q)
    for piece in zeta_hybrid_pieces(dp, char).values():
        total = total + piece
    return total.geometric_closure(dp.omega + 2, dp.n + dp.l)


def zeta_hybrid_from_form(params: HybridParams, char: CharClass) -> RatFun:
    """Zeta of the undiagonalized family, via the measure-preserving shear."""
    _, dp = diagonalize(make_hybrid_g(params), params)
    return zeta_hybrid(dp, char)


# -- predicted denominators and poles ------------------------------------------------


def theorem_denominator(dp: DiagonalParams) -> list[tuple[int, int]]:
    """(u-exponent, t-exponent) of the four predicted denominator factors."""
    p, n, l = dp.field.p, dp.n, dp.l
    return [(1, 1), (dp.omega + 2, n + l), (p + n, n * p), (p + l, p * l)]


def theorem_poles(params: HybridParams | DiagonalParams) -> list[CandidatePole]:
    """Real parts and periods of the predicted pole families."""
    if isinstance(params, HybridParams):
        p, n, l = params.field.p, params.k + 1, params.l
    else:
        p, n, l = params.field.p, params.n, params.l
    omega = (n + l) // p
    data = [
        (Fraction(-1), 1),
        (Fraction(-(omega + 2), n + l), n + l),
        (Fraction(-(p + n), n * p), n * p),
        (Fraction(-(p + l), p * l), p * l),
    ]
    return [
        CandidatePole(real, period, "predicted factor")
        for real, period in data
    ]
