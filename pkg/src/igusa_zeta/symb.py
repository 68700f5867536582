"""Exact symbolic coefficients: characters, cyclotomic integers, and
rational functions in u = q^-1 and t = q^-s.

Character values live in Z[zeta_m] reduced mod the m-th cyclotomic
polynomial, with m the exact character order, so character sums have
decidable zero tests.  Mixed orders lift to the lcm.

A :class:`RatFun` keeps its numerator as a bivariate polynomial in (u, t)
over Z[zeta_m] and its denominator as a multiset of factors (1 - u^a t^b)
that is never expanded; cancellation happens only on exact division.  The
coefficient ring identifies q*u with 1 (u literally is q^-1), so numerators
are normalized to base-q digits: the coefficient of u^e for e >= 1 lies in
[0, q) coordinate-wise, and only the u^0 coefficient is unconstrained.  In
that normal form "(q-1)*u" and "1 - u" are the same element, which is what
makes measure identities such as the unit-ball volume hold exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import (
    ConstraintViolated,
    DivisionByZeroFactor,
    NontrivialCharacter,
    ParseError,
)
from .gf import FieldConfig

# -- cyclotomic integers ----------------------------------------------------


def _int_poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials, den monic."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("division was not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    if m == 1:
        return (-1, 1)
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly = _int_poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce_mod_cyclotomic(coeffs: list[int], m: int) -> tuple[int, ...]:
    phi_m = cyclotomic_polynomial(m)
    deg = len(phi_m) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            for j, d in enumerate(phi_m):
                coeffs[i - deg + j] -= c * d
        coeffs.pop()
    coeffs += [0] * (deg - len(coeffs))
    return tuple(coeffs)


class CycInt:
    """Element of Z[zeta_m] in the power basis 1, zeta, ..., zeta^(phi(m)-1)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        self.order = order
        coeffs = tuple(coeffs)
        if len(coeffs) != _phi(order):
            raise ConstraintViolated("coefficient vector length must be phi(order)")
        self.coeffs = coeffs

    @classmethod
    def from_int(cls, n: int) -> "CycInt":
        return cls(1, (n,))

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CycInt":
        coeffs = [0] * (power % order + 1)
        coeffs[power % order] = 1
        return cls(order, _reduce_mod_cyclotomic(coeffs, order))

    def lift(self, m: int) -> "CycInt":
        if m == self.order:
            return self
        if m % self.order:
            raise ConstraintViolated("can only lift to a multiple order")
        step = m // self.order
        out = [0] * ((len(self.coeffs) - 1) * step + 1) if self.coeffs else [0]
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return CycInt(m, _reduce_mod_cyclotomic(out, m))

    def _pair(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other)
        m = self.order * other.order // math.gcd(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._pair(other)
        return CycInt(a.order, (x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.order, (-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.order, (c * other for c in self.coeffs))
        a, b = self._pair(other)
        out = [0] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        out[i + j] += x * y
        return CycInt(a.order, _reduce_mod_cyclotomic(out, a.order))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise NontrivialCharacter("coefficient carries a root of unity")
        return self.coeffs[0]

    def divmod_int(self, n: int):
        """Coordinate-wise (self - r)/n with remainder coordinates in [0, n)."""
        quot, rem = [], []
        for c in self.coeffs:
            r = c % n
            rem.append(r)
            quot.append((c - r) // n)
        return CycInt(self.order, quot), CycInt(self.order, rem)

    def __eq__(self, other):
        if isinstance(other, (int, CycInt)):
            a, b = self._pair(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"CycInt({self})"

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        sym = f"z{self.order}"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                parts.append(f"{head}{sym}" + (f"^{i}" if i > 1 else ""))
        return "(" + " + ".join(parts).replace("+ -", "- ") + ")"


# -- multiplicative characters of conductor 1 ---------------------------------


class CharClass:
    """Conductor-1 multiplicative character of O_K^x, determined by the
    exponent e on the fixed generator g of F_q^x: chi(g^j) = zeta_m^(e' j)
    with m = (q-1)/gcd(e, q-1) and e' = e/gcd(e, q-1)."""

    __slots__ = ("field", "exponent")

    def __init__(self, field: FieldConfig, exponent: int = 0):
        self.field = field
        self.exponent = exponent % (field.q - 1) if field.q > 2 else 0

    @property
    def order(self) -> int:
        qm1 = self.field.q - 1
        if qm1 == 0 or self.exponent == 0:
            return 1
        return qm1 // math.gcd(self.exponent, qm1)

    def is_trivial(self) -> bool:
        return self.exponent == 0 or self.field.q == 2

    def value(self, code: int) -> CycInt:
        """chi at a unit residue; chi(0) is 0 by convention and must be
        filtered by the caller."""
        if code == 0:
            raise ConstraintViolated("chi(0) = 0; filter zeros before summing")
        if self.is_trivial():
            return CycInt.from_int(1)
        j = self.field.dlog(code)
        d = math.gcd(self.exponent, self.field.q - 1)
        m = (self.field.q - 1) // d
        return CycInt.zeta(m, (self.exponent // d) * j % m)

    def pow_is_trivial(self, m: int) -> bool:
        return (self.exponent * m) % (self.field.q - 1) == 0 if self.field.q > 2 else True

    def __eq__(self, other):
        if not isinstance(other, CharClass):
            return NotImplemented
        return self.field == other.field and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.exponent, self.field.key()))

    def __repr__(self):
        return f"CharClass(q={self.field.q}, e={self.exponent})"


def char_pow_is_trivial(char: CharClass, m: int) -> bool:
    return char.pow_is_trivial(m)


# -- rational functions in (u, t) --------------------------------------------


def _num_canonical(num: dict, q: int) -> dict:
    """Base-q digit form: carry multiples of q at u^e (e >= 1) down to u^(e-1)."""
    out: dict = {}
    for key, c in num.items():
        if isinstance(c, int):
            c = CycInt.from_int(c)
        if not c.is_zero():
            out[key] = out[key] + c if key in out else c
    if not out:
        return {}
    max_eu = max(k[0] for k in out)
    for eu in range(max_eu, 0, -1):
        for key in [k for k in out if k[0] == eu]:
            c = out[key]
            quot, rem = c.divmod_int(q)
            if quot.is_zero():
                continue
            if rem.is_zero():
                del out[key]
            else:
                out[key] = rem
            down = (eu - 1, key[1])
            merged = out.get(down, CycInt.from_int(0)) + quot
            if merged.is_zero():
                out.pop(down, None)
            else:
                out[down] = merged
    return {k: c for k, c in out.items() if not c.is_zero()}


class RatFun:
    """num / prod (1 - u^a t^b)^mult over Z[zeta][u, t] with q u = 1."""

    __slots__ = ("qval", "num", "den")

    def __init__(self, qval: int, num: dict | None = None, den: dict | None = None):
        self.qval = qval
        self.num = _num_canonical(num or {}, qval)
        self.den = {}
        for (a, b), mult in (den or {}).items():
            if (a, b) == (0, 0):
                raise DivisionByZeroFactor("factor (1 - u^0 t^0) is zero")
            if mult < 0:
                raise ConstraintViolated("negative factor multiplicity")
            if mult:
                self.den[(a, b)] = mult

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, qval: int) -> "RatFun":
        return cls(qval)

    @classmethod
    def one(cls, qval: int) -> "RatFun":
        return cls(qval, {(0, 0): CycInt.from_int(1)})

    @classmethod
    def monomial(cls, qval: int, coeff, eu: int = 0, et: int = 0) -> "RatFun":
        if isinstance(coeff, int):
            coeff = CycInt.from_int(coeff)
        return cls(qval, {(eu, et): coeff})

    def is_zero(self) -> bool:
        return not self.num

    # -- ring operations ----------------------------------------------------------

    def _check(self, other):
        if self.qval != other.qval:
            raise ConstraintViolated("mixed coefficient rings (different q)")

    def __add__(self, other):
        if isinstance(other, int):
            other = RatFun.monomial(self.qval, other)
        self._check(other)
        common = dict(self.den)
        for f, m in other.den.items():
            common[f] = max(common.get(f, 0), m)
        a = _num_mul(self.num, _den_poly(common, self.den))
        b = _num_mul(other.num, _den_poly(common, other.den))
        out = dict(a)
        for k, c in b.items():
            out[k] = out[k] + c if k in out else c
        return RatFun(self.qval, out, common)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(self.qval, {k: -c for k, c in self.num.items()}, self.den)

    def __sub__(self, other):
        if isinstance(other, int):
            other = RatFun.monomial(self.qval, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, CycInt)):
            return RatFun(
                self.qval, {k: c * other for k, c in self.num.items()}, self.den
            )
        self._check(other)
        den = dict(self.den)
        for f, m in other.den.items():
            den[f] = den.get(f, 0) + m
        return RatFun(self.qval, _num_mul(self.num, other.num), den)

    __rmul__ = __mul__

    def mul_monomial(self, eu: int, et: int, coeff=1) -> "RatFun":
        if isinstance(coeff, int):
            coeff = CycInt.from_int(coeff)
        num = {(k[0] + eu, k[1] + et): c * coeff for k, c in self.num.items()}
        return RatFun(self.qval, num, self.den)

    def geometric_closure(self, a: int, b: int) -> "RatFun":
        """Solve Z = self + u^a t^b Z, i.e. divide by (1 - u^a t^b)."""
        if (a, b) == (0, 0):
            raise DivisionByZeroFactor("closure ratio (0, 0)")
        den = dict(self.den)
        den[(a, b)] = den.get((a, b), 0) + 1
        return RatFun(self.qval, self.num, den)

    # -- equality -------------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFun.monomial(self.qval, other)
        if not isinstance(other, RatFun):
            return NotImplemented
        self._check(other)
        left = _num_mul(self.num, _den_poly(other.den, {}))
        right = _num_mul(other.num, _den_poly(self.den, {}))
        return _num_canonical(left, self.qval) == _num_canonical(right, self.qval)

    def __hash__(self):
        return hash((self.qval, tuple(sorted((k, c.coeffs) for k, c in self.num.items()))))

    # -- reduction --------------------------------------------------------------------

    def reduce(self) -> "RatFun":
        """Cancel denominator factors that divide the numerator exactly."""
        num = self.num
        den = dict(self.den)
        for factor in sorted(den):
            while den.get(factor, 0) > 0:
                quot = _divide_once(num, factor, self.qval)
                if quot is None:
                    break
                num = quot
                den[factor] -= 1
                if not den[factor]:
                    del den[factor]
        return RatFun(self.qval, num, den)

    # -- series expansion ----------------------------------------------------------------

    def expand_series(self, order: int) -> list[Fraction]:
        """Exact t-series coefficients at u = 1/q, up to t^order inclusive."""
        q = self.qval
        series = [Fraction(0)] * (order + 1)
        for (eu, et), c in self.num.items():
            if not c.is_rational():
                raise NontrivialCharacter(
                    "series expansion needs trivial-character coefficients"
                )
            if et <= order:
                series[et] += Fraction(c.rational_value(), q**eu)
        for (a, b), mult in self.den.items():
            for _ in range(mult):
                if b == 0:
                    scale = 1 / (1 - Fraction(1, q**a))
                    series = [c * scale for c in series]
                else:
                    out = list(series)
                    # multiply by sum_k (u^a t^b)^k
                    for et in range(order + 1):
                        k = 1
                        while et - k * b >= 0:
                            out[et] += series[et - k * b] * Fraction(1, q ** (a * k))
                            k += 1
                    series = out
        return series

    def eval_at(self, t_value: Fraction) -> Fraction:
        """Exact value at u = 1/q and the given rational t; coefficients must
        be rational and no denominator factor may vanish there."""
        q = self.qval
        total = Fraction(0)
        for (eu, et), c in self.num.items():
            total += Fraction(c.rational_value(), q**eu) * t_value**et
        for (a, b), mult in self.den.items():
            factor = 1 - Fraction(1, q**a) * t_value**b
            if factor == 0:
                raise ZeroDivisionError(f"denominator factor (1-u^{a}t^{b}) vanishes")
            total /= factor**mult
        return total

    # -- serialization ----------------------------------------------------------------------

    def to_json(self) -> dict:
        orders = [c.order for c in self.num.values()] or [1]
        m = 1
        for o in orders:
            m = m * o // math.gcd(m, o)
        num = [
            [eu, et, list(c.lift(m).coeffs)]
            for (eu, et), c in sorted(self.num.items())
        ]
        den = [[a, b, mult] for (a, b), mult in sorted(self.den.items())]
        return {"num": num, "den": den, "char_order": m, "q": self.qval}

    @classmethod
    def from_json(cls, doc: dict) -> "RatFun":
        m = doc["char_order"]
        num = {(eu, et): CycInt(m, coeffs) for eu, et, coeffs in doc["num"]}
        den = {(a, b): mult for a, b, mult in doc["den"]}
        return cls(doc["q"], num, den)

    # -- rendering ----------------------------------------------------------------------------

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        return render_ratfun(self, "ut")


def _num_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (e1, f1), c1 in a.items():
        for (e2, f2), c2 in b.items():
            key = (e1 + e2, f1 + f2)
            prod = c1 * c2
            out[key] = out[key] + prod if key in out else prod
    return out


def _den_poly(target: dict, have: dict) -> dict:
    """Expanded product of factors in target minus those in have."""
    out = {(0, 0): CycInt.from_int(1)}
    for (a, b), mult in target.items():
        missing = mult - have.get((a, b), 0)
        for _ in range(missing):
            out = _num_mul(out, {(0, 0): CycInt.from_int(1), (a, b): CycInt.from_int(-1)})
    return out


# -- exact division by (1 - u^a t^b) in Z[zeta][1/q][t] -----------------------


def _upoly_canonical(c: dict, q: int) -> dict:
    out = {k: v for k, v in c.items() if not v.is_zero()}
    if not out:
        return {}
    for eu in range(max(out), 0, -1):
        if eu not in out:
            continue
        quot, rem = out[eu].divmod_int(q)
        if quot.is_zero():
            continue
        if rem.is_zero():
            del out[eu]
        else:
            out[eu] = rem
        merged = out.get(eu - 1, CycInt.from_int(0)) + quot
        if merged.is_zero():
            out.pop(eu - 1, None)
        else:
            out[eu - 1] = merged
    return out


def _upoly_qmul(c: dict, k: int, q: int) -> dict:
    """Multiply a u-polynomial by q^k using u^-1 = q."""
    out: dict = {}
    for e, coeff in c.items():
        if e >= k:
            key, val = e - k, coeff
        else:
            key, val = 0, coeff * (q ** (k - e))
        out[key] = out[key] + val if key in out else val
    return _upoly_canonical(out, q)


def _divide_once(num: dict, factor: tuple[int, int], q: int) -> dict | None:
    """num / (1 - u^a t^b) if exact, else None.  Division runs t-degree
    descending; u-polynomials are units up to q-powers so each leading
    coefficient divides exactly."""
    a, b = factor
    work: dict = {}
    for (eu, et), c in num.items():
        col = work.setdefault(et, {})
        col[eu] = col[eu] + c if eu in col else c
    work = {et: _upoly_canonical(col, q) for et, col in work.items()}
    work = {et: col for et, col in work.items() if col}
    quot: dict = {}
    while work:
        j = max(work)
        if j < b:
            return None
        lead = work.pop(j)
        qc = _upoly_qmul(lead, a, q)  # lead / u^a
        qc = {e: -c for e, c in qc.items()}  # lead / (-u^a)
        target = j - b
        quot[target] = qc
        # cancel the qc * t^target part of qc * t^target * (1 - u^a t^b)
        col = dict(work.get(target, {}))
        for e, c in qc.items():
            col[e] = col[e] - c if e in col else -c
        col = _upoly_canonical(col, q)
        if col:
            work[target] = col
        else:
            work.pop(target, None)
    out: dict = {}
    for et, col in quot.items():
        for eu, c in col.items():
            out[(eu, et)] = c
    return out


# -- the Poincare series bridge -------------------------------------------------


def poincare_from_zeta(zeta: RatFun) -> RatFun:
    """P with P(t) = (1 - t Z)/(1 - t)."""
    p = RatFun.one(zeta.qval) - zeta.mul_monomial(0, 1)
    return p.geometric_closure(0, 1)


def ni_from_poincare(poincare: RatFun, nvars: int, i: int) -> int:
    """Solution count at level i recovered from the Poincare series."""
    coeff = poincare.expand_series(i)[i] * poincare.qval ** (nvars * i)
    if coeff.denominator != 1 or coeff < 0:
        raise ConstraintViolated(f"P coefficient {coeff} is not a solution count")
    return int(coeff)


# -- rendering / parsing -----------------------------------------------------------


def _coeff_prefix(c: CycInt) -> str:
    if c.is_rational():
        v = c.rational_value()
        if v == 1:
            return ""
        if v == -1:
            return "-"
        return f"{v}*"
    return f"{c}*"


def _monomial_str(eu: int, et: int, style: str) -> str:
    if style == "ut":
        parts = []
        if eu:
            parts.append("u" + (f"^{eu}" if eu > 1 else ""))
        if et:
            parts.append("t" + (f"^{et}" if et > 1 else ""))
        return "*".join(parts)
    # q^-s notation: u^a t^b = q^{-a-bs}
    if eu == 0 and et == 0:
        return ""
    exp = ""
    if eu:
        exp += str(-eu)
    if et:
        exp += "-s" if et == 1 else f"-{et}s"
    return "q^{" + exp + "}"


def render_ratfun(rf: RatFun, style: str = "ut") -> str:
    """Deterministic text form; styles "ut" and "q-s"."""
    if style not in ("ut", "q-s"):
        raise ConstraintViolated(f"unknown style {style!r}")
    if not rf.num:
        return "0"
    parts = []
    for (eu, et) in sorted(rf.num, key=lambda k: (k[1], k[0])):
        c = rf.num[(eu, et)]
        mono = _monomial_str(eu, et, style)
        prefix = _coeff_prefix(c)
        if not mono:
            body = str(c)
        elif prefix in ("", "-"):
            body = prefix + mono
        else:
            body = prefix + mono
        parts.append(body)
    num = " + ".join(parts).replace("+ -", "- ")
    if not rf.den:
        return num
    factors = []
    for (a, b), mult in sorted(rf.den.items()):
        base = "(1 - " + (_monomial_str(a, b, style) or "1") + ")"
        factors.append(base + (f"^{mult}" if mult > 1 else ""))
    den = "*".join(factors)
    if len(rf.num) > 1:
        num = f"({num})"
    return f"{num}/({den})" if len(rf.den) > 1 or list(rf.den.values())[0] > 1 else f"{num}/{den}"


def parse_ratfun(text: str, qval: int) -> RatFun:
    """Parse the "ut"-style renderer output (integer coefficients)."""
    text = text.strip()
    num_text, slash, den_text = text.partition("/")
    rf = _parse_ut_poly(num_text.strip(), qval)
    if slash:
        den_text = den_text.strip()
        if den_text.startswith("(") and den_text.endswith(")"):
            inner = den_text[1:-1]
        else:
            inner = den_text
        for factor_text in inner.replace(")*(", ")|(").split("|"):
            factor_text = factor_text.strip()
            mult = 1
            if ")^" in factor_text:
                factor_text, _, m = factor_text.rpartition("^")
                mult = int(m)
            factor_text = factor_text.strip("()")
            body = factor_text.replace(" ", "")
            if not body.startswith("1-"):
                raise ParseError(f"bad denominator factor {factor_text!r}")
            a, b = _parse_ut_monomial(body[2:])
            for _ in range(mult):
                rf = rf.geometric_closure(a, b)
    return rf


def _parse_ut_monomial(body: str) -> tuple[int, int]:
    a = b = 0
    for piece in body.split("*"):
        if not piece:
            continue
        var = piece[0]
        exp = int(piece[2:]) if "^" in piece else 1
        if var == "u":
            a = exp
        elif var == "t":
            b = exp
        elif piece == "1":
            pass
        else:
            raise ParseError(f"bad monomial piece {piece!r}")
    return a, b


def _parse_ut_poly(text: str, qval: int) -> RatFun:
    if text.startswith("(") and text.endswith(")"):
        depth = 0
        balanced = True
        for i, ch in enumerate(text):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and i < len(text) - 1:
                balanced = False
                break
        if balanced:
            text = text[1:-1]
    out = RatFun.zero(qval)
    text = text.replace("- ", "+ -").replace(" ", "")
    for term in text.split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        coeff, eu, et = 1, 0, 0
        for piece in term.split("*"):
            if piece.isdigit():
                coeff *= int(piece)
            else:
                var = piece[0]
                exp = int(piece[2:]) if "^" in piece else 1
                if var == "u":
                    eu = exp
                elif var == "t":
                    et = exp
                else:
                    raise ParseError(f"bad term piece {piece!r}")
        out = out + RatFun.monomial(qval, sign * coeff, eu, et)
    return out
