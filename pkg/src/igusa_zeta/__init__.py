"""Exact Igusa local zeta functions over equal-characteristic local fields.

The pieces: finite-field and truncated-ring arithmetic (:mod:`gf`),
multivariate polynomials over F_q[pi] (:mod:`mvpoly`), exact characters and
rational functions in (u, t) = (q^-1, q^-s) (:mod:`symb`), Newton polyhedra
and candidate poles (:mod:`newton`), the stationary phase formula engine
(:mod:`spf`), the three-variable hybrid pipeline (:mod:`hybrid`), and a
brute-force point-counting oracle with a compiled kernel (:mod:`count`).
"""

from .gf import FieldConfig, FqElem, TruncElem
from .mvpoly import MultiPoly, parse_poly
from .newton import CandidatePole, NewtonData, build_polyhedron, candidate_poles, gnd_check
from .spf import Domain, ZetaTask, spf_solve, spf_step, split_unit_variable, unit_power_integral
from .symb import CharClass, CycInt, RatFun, ni_from_poincare, poincare_from_zeta
from .hybrid import (
    DiagonalParams,
    HybridParams,
    diagonalize,
    make_hybrid_g,
    theorem_denominator,
    theorem_poles,
    zeta_hybrid,
    zeta_hybrid_pieces,
)
from .count import CountJob, count_ni, count_ni_structured, poincare_truncated

__version__ = "0.1.0"

__all__ = [
    "FieldConfig",
    "FqElem",
    "TruncElem",
    "MultiPoly",
    "parse_poly",
    "NewtonData",
    "CandidatePole",
    "build_polyhedron",
    "candidate_poles",
    "gnd_check",
    "Domain",
    "ZetaTask",
    "spf_solve",
    "spf_step",
    "split_unit_variable",
    "unit_power_integral",
    "CharClass",
    "CycInt",
    "RatFun",
    "poincare_from_zeta",
    "ni_from_poincare",
    "HybridParams",
    "DiagonalParams",
    "make_hybrid_g",
    "diagonalize",
    "zeta_hybrid",
    "zeta_hybrid_pieces",
    "theorem_denominator",
    "theorem_poles",
    "CountJob",
    "count_ni",
    "count_ni_structured",
    "poincare_truncated",
]
