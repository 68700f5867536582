"""Reference values for the worked example: q = 3, trivial character,
f = x^3 + y^4 z^2 + z^6 (the k = 3, l = 2, t = 1 family member, with the
y-term sign taken as +1; see the check-example command for the sign story).

These closed forms are test vectors.  The pipeline never consults them;
check-example compares its computed pieces against them and lets the
counting oracle arbitrate any mismatch.
"""

from __future__ import annotations

from .symb import RatFun

Q = 3


def _m(coeff: int, eu: int = 0, et: int = 0) -> RatFun:
    return RatFun.monomial(Q, coeff, eu, et)


def _poly(*terms) -> RatFun:
    out = RatFun.zero(Q)
    for coeff, eu, et in terms:
        out = out + _m(coeff, eu, et)
    return out


def reference_pieces() -> dict[str, RatFun]:
    one_minus_u = _poly((1, 0, 0), (-1, 1, 0))

    n1 = _poly(
        (-1, 6, 8), (1, 6, 7), (1, 4, 6), (-1, 5, 6), (-1, 4, 5),
        (1, 2, 4), (-1, 2, 3), (1, 1, 2), (-1, 1, 1), (1, 0, 0),
    )
    a1 = (_m(1, 3, 2) * one_minus_u * one_minus_u * n1).geometric_closure(
        5, 6
    ).geometric_closure(1, 1)

    a2 = _m(1, 3) * one_minus_u

    a3 = _m(1, 2) * one_minus_u * one_minus_u

    a4 = one_minus_u * _poly((1, 2, 0), (1, 3, 3))

    a5 = one_minus_u * one_minus_u * _poly((1, 3, 3), (1, 2, 2), (-1, 3, 2), (1, 1, 0))

    n6 = _poly(
        (-1, 7, 13), (1, 8, 13), (1, 5, 12), (-1, 7, 12), (-1, 5, 10),
        (1, 3, 8), (-1, 3, 7), (1, 2, 6), (-1, 2, 5), (1, 0, 3),
        (-1, 1, 1), (1, 0, 0),
    )
    a6 = (_m(1, 2) * one_minus_u * one_minus_u * n6).geometric_closure(
        1, 1
    ).geometric_closure(7, 12)

    a7 = (
        one_minus_u * one_minus_u * _poly((1, 3, 1), (1, 0, 0), (-1, 1, 0), (-1, 2, 0))
    ).geometric_closure(1, 1)

    return {"A1": a1, "A2": a2, "A3": a3, "A4": a4, "A5": a5, "A6": a6, "A7": a7}


def reference_json() -> dict:
    return {label: piece.to_json() for label, piece in reference_pieces().items()}
