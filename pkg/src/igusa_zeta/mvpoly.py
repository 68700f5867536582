"""Multivariate polynomials over F_q[pi] with the substitution calculus.

Coefficients are exact polynomials in the uniformizer pi, stored as trimmed
tuples of field codes (index = pi-power); they are never truncated inside
this module, only at evaluation.  Terms live in a sparse map from exponent
vectors to coefficients, with no stored zero coefficient.

Variable count is capped at 8; the text grammar accepts x, y, z or x1..x8,
the constant symbols 'a' (power-basis generator of F_q) and 'pi', integer
literals, and the operators + - * ^ with parentheses.  Division and negative
exponents are rejected.
"""

from __future__ import annotations

import re

from .errors import (
    ConstraintViolated,
    NotUnimodular,
    ParseError,
    PrecisionMismatch,
    TooManyVariables,
    ZeroPolynomial,
)
from .gf import FieldConfig, FqElem, TruncElem

MAX_VARS = 8

# -- pi-polynomial coefficients (tuples of field codes) ------------------------


def c_trim(codes) -> tuple[int, ...]:
    codes = list(codes)
    while codes and codes[-1] == 0:
        codes.pop()
    return tuple(codes)


def c_add(field, a, b) -> tuple[int, ...]:
    n = max(len(a), len(b))
    out = []
    for j in range(n):
        x = a[j] if j < len(a) else 0
        y = b[j] if j < len(b) else 0
        out.append(field.add(x, y))
    return c_trim(out)


def c_neg(field, a) -> tuple[int, ...]:
    return tuple(field.neg(x) for x in a)


def c_mul(field, a, b) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = field.add(out[i + j], field.mul(x, y))
    return c_trim(out)


def c_scale(field, a, code: int) -> tuple[int, ...]:
    if code == 0:
        return ()
    return c_trim(field.mul(x, code) for x in a)


def c_shift(a, k: int) -> tuple[int, ...]:
    return ((0,) * k + tuple(a)) if a else ()


def c_order(a) -> int:
    for j, x in enumerate(a):
        if x:
            return j
    raise ZeroPolynomial("pi-order of the zero coefficient")


class MultiPoly:
    """Element of F_q[pi][x_1..x_n], immutable."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldConfig, nvars: int, terms: dict):
        if nvars < 0 or nvars > MAX_VARS:
            raise TooManyVariables(f"nvars = {nvars} outside 0..{MAX_VARS}")
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ConstraintViolated(f"bad exponent vector {exps}")
            coeff = c_trim(coeff)
            if coeff:
                clean[exps] = coeff
        self.field = field
        self.nvars = nvars
        self.terms = clean

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {})

    @classmethod
    def constant(cls, field, nvars, value):
        if isinstance(value, tuple):
            coeff = value
        else:
            code = value.code if isinstance(value, FqElem) else field.e(value).code
            coeff = (code,)
        return cls(field, nvars, {(0,) * nvars: coeff})

    @classmethod
    def variable(cls, field, nvars, index):
        exps = [0] * nvars
        exps[index] = 1
        return cls(field, nvars, {tuple(exps): (1,)})

    @classmethod
    def monomial(cls, field, nvars, exps, coeff=(1,)):
        if not isinstance(coeff, tuple):
            coeff = (field.e(coeff).code,)
        return cls(field, nvars, {tuple(exps): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def support(self) -> list[tuple[int, ...]]:
        """Exponent vectors whose coefficient has pi-order 0 (unit terms)."""
        return sorted(e for e, c in self.terms.items() if c[0] != 0)

    def full_support(self) -> list[tuple[int, ...]]:
        return sorted(self.terms)

    # -- ring operations ---------------------------------------------------------

    def _check(self, other):
        if self.field != other.field or self.nvars != other.nvars:
            raise ConstraintViolated("mixed polynomial rings")

    def __add__(self, other):
        if isinstance(other, (int, FqElem)):
            other = MultiPoly.constant(self.field, self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            merged = c_add(self.field, out.get(exps, ()), coeff)
            if merged:
                out[exps] = merged
            else:
                out.pop(exps, None)
        return MultiPoly(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(
            self.field,
            self.nvars,
            {e: c_neg(self.field, c) for e, c in self.terms.items()},
        )

    def __sub__(self, other):
        if isinstance(other, (int, FqElem)):
            other = MultiPoly.constant(self.field, self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, FqElem)):
            return self.scale(self.field.e(other).code)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                prod = c_mul(self.field, c1, c2)
                merged = c_add(self.field, out.get(exps, ()), prod)
                if merged:
                    out[exps] = merged
                else:
                    out.pop(exps, None)
        return MultiPoly(self.field, self.nvars, out)

    __rmul__ = __mul__

    def scale(self, code: int):
        return MultiPoly(
            self.field,
            self.nvars,
            {e: c_scale(self.field, c, code) for e, c in self.terms.items()},
        )

    def scale_pi(self, k: int):
        return MultiPoly(
            self.field, self.nvars, {e: c_shift(c, k) for e, c in self.terms.items()}
        )

    def __pow__(self, e: int):
        out = MultiPoly.constant(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.key()))

    def key(self):
        return tuple(sorted(self.terms.items()))

    # -- evaluation ---------------------------------------------------------------

    def evaluate(self, point, prec: int) -> TruncElem:
        """f(point) in O_K/pi^prec; every entry must carry precision >= prec."""
        if len(point) != self.nvars:
            raise PrecisionMismatch(
                f"point has {len(point)} entries, polynomial has {self.nvars} variables"
            )
        for x in point:
            if x.prec < prec:
                raise PrecisionMismatch(
                    f"point entry at precision {x.prec} < requested {prec}"
                )
        acc = TruncElem.zero(self.field, prec)
        for exps, coeff in self.terms.items():
            val = TruncElem.from_pi_poly(self.field, coeff, prec)
            for x, e in zip(point, exps):
                if e:
                    val = val * (x.truncate(prec) ** e)
            acc = acc + val
        return acc

    def residue_eval(self, codes) -> int:
        """Evaluate over F_q assuming all coefficients are constants."""
        f = self.field
        acc = 0
        for exps, coeff in self.terms.items():
            val = coeff[0]
            for c, e in zip(codes, exps):
                if e:
                    val = f.mul(val, f.pow(c, e))
            acc = f.add(acc, val)
        return acc

    # -- the substitution calculus ---------------------------------------------------

    def reduce_mod_pi(self) -> "MultiPoly":
        """Keep the pi^0 coefficient of each term."""
        return MultiPoly(
            self.field,
            self.nvars,
            {e: (c[0],) for e, c in self.terms.items() if c[0] != 0},
        )

    def partial_derivative(self, var: int) -> "MultiPoly":
        out = {}
        for exps, coeff in self.terms.items():
            e = exps[var]
            if e == 0 or e % self.field.p == 0:
                continue
            new = list(exps)
            new[var] -= 1
            scaled = c_scale(self.field, coeff, self.field.from_int(e))
            out[tuple(new)] = c_add(self.field, out.get(tuple(new), ()), scaled)
        return MultiPoly(self.field, self.nvars, out)

    def substitute_monomial(self, exps) -> tuple["MultiPoly", int]:
        """f(pi^e1 x1, ..., pi^en xn) with exact pi bookkeeping.

        Returns the transformed polynomial and the Jacobian exponent sum(e)."""
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ConstraintViolated("weight vector length mismatch")
        out = {}
        for term_exps, coeff in self.terms.items():
            shift = sum(a * e for a, e in zip(term_exps, exps))
            out[term_exps] = c_shift(coeff, shift)
        return MultiPoly(self.field, self.nvars, out), sum(exps)

    def extract_pi_power(self) -> tuple[int, "MultiPoly"]:
        """Write f = pi^m g with g having a pi-order-0 term."""
        if not self.terms:
            raise ZeroPolynomial("cannot extract a pi power from 0")
        m = min(c_order(c) for c in self.terms.values())
        if m == 0:
            return 0, self
        return m, MultiPoly(
            self.field, self.nvars, {e: c[m:] for e, c in self.terms.items()}
        )

    def substitute_affine(self, center, scale_pi: bool = True) -> "MultiPoly":
        """f at x_i -> c_i + pi*x_i (or c_i + x_i when scale_pi is false).

        ``center`` entries are F_q constants; an entry of None leaves that
        coordinate untouched, which is how a singular locus that is free in
        some coordinates gets recentered only where it is constant.
        """
        if len(center) != self.nvars:
            raise ConstraintViolated("center length mismatch")
        subs = []
        for i, c in enumerate(center):
            var = MultiPoly.variable(self.field, self.nvars, i)
            if c is None:
                subs.append(var)
                continue
            code = c.code if isinstance(c, FqElem) else self.field.e(c).code
            shifted = var.scale_pi(1) if scale_pi else var
            subs.append(shifted + MultiPoly.constant(self.field, self.nvars, code))
        return self._substitute(subs)

    def substitute_linear(self, matrix, translation=None) -> "MultiPoly":
        """f at x -> M x + b for M over F_q[pi] with unit determinant.

        Entries of M and b may be field codes, FqElem, or pi-poly tuples.
        Measure-preserving, hence zeta-invariant.
        """
        n = self.nvars
        rows = [[self._as_coeff(v) for v in row] for row in matrix]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ConstraintViolated("matrix shape mismatch")
        det = _det(self.field, rows)
        if not det or det[0] == 0:
            raise NotUnimodular("determinant is not a unit of O_K")
        if translation is None:
            translation = [()] * n
        subs = []
        for i in range(n):
            s = MultiPoly.constant(self.field, n, self._as_coeff(translation[i]))
            for j in range(n):
                if rows[i][j]:
                    s = s + MultiPoly(
                        self.field,
                        n,
                        {tuple(1 if k == j else 0 for k in range(n)): rows[i][j]},
                    )
            subs.append(s)
        return self._substitute(subs)

    def _as_coeff(self, v) -> tuple[int, ...]:
        if isinstance(v, tuple):
            return c_trim(v)
        if isinstance(v, FqElem):
            return c_trim((v.code,))
        if isinstance(v, int):
            return c_trim((self.field.e(v).code,))
        raise ConstraintViolated(f"bad coefficient {v!r}")

    def _substitute(self, subs) -> "MultiPoly":
        cache: dict = {}

        def power(i, e):
            if (i, e) not in cache:
                cache[(i, e)] = subs[i] ** e
            return cache[(i, e)]

        acc = MultiPoly.zero(self.field, self.nvars)
        for exps, coeff in self.terms.items():
            part = MultiPoly.constant(self.field, self.nvars, coeff)
            for i, e in enumerate(exps):
                if e:
                    part = part * power(i, e)
            acc = acc + part
        return acc

    def drop_variable(self, var: int) -> "MultiPoly":
        """Remove a variable no term uses."""
        out = {}
        for exps, coeff in self.terms.items():
            if exps[var]:
                raise ConstraintViolated("variable still occurs")
            out[exps[:var] + exps[var + 1 :]] = coeff
        return MultiPoly(self.field, self.nvars - 1, out)

    # -- rendering -----------------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = _var_names(self.nvars)
        parts = []
        for exps, coeff in sorted(self.terms.items(), reverse=True):
            factors = []
            const = _coeff_str(self.field, coeff)
            if const != "1" or not any(exps):
                factors.append(const)
            for name, e in zip(names, exps):
                if e:
                    factors.append(name + (f"^{e}" if e > 1 else ""))
            parts.append("*".join(factors))
        return " + ".join(parts)


def _coeff_str(field, coeff) -> str:
    from .gf import poly_str_fp

    parts = []
    for j, code in enumerate(coeff):
        if not code:
            continue
        cs = poly_str_fp(field._digits(code), "a")
        if "+" in cs or "*" in cs:
            cs = f"({cs})"
        if j == 0:
            parts.append(cs)
        else:
            pi = "pi" + (f"^{j}" if j > 1 else "")
            parts.append(pi if cs == "1" else f"{cs}*{pi}")
    if not parts:
        return "0"
    if len(parts) == 1:
        return parts[0]
    return "(" + " + ".join(parts) + ")"


def _var_names(nvars: int):
    if nvars <= 3:
        return ("x", "y", "z")[:nvars]
    return tuple(f"x{i + 1}" for i in range(nvars))


def _det(field, rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = ()
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        sub = c_mul(field, rows[0][j], _det(field, minor))
        if j % 2:
            sub = c_neg(field, sub)
        acc = c_add(field, acc, sub)
    return acc


# -- parser ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(x[1-8]|pi|[xyza]|\d+|[-+*^()])")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    out.append(None)
    return out


def _var_index(tok: str) -> int:
    if tok in ("x", "y", "z"):
        return "xyz".index(tok)
    return int(tok[1:]) - 1


def parse_poly(text: str, field: FieldConfig, nvars: int | None = None) -> MultiPoly:
    """Parse the polynomial grammar, e.g. "x^3 + y^4*z^2 + z^6" or
    "pi^2*x^3 + (a+1)*y^2"."""
    if "/" in text:
        raise ParseError("division is not part of the polynomial grammar")
    tokens = _tokenize(text)
    if nvars is None:
        used = [-1]
        for tok in tokens:
            if tok and (tok in ("x", "y", "z") or re.fullmatch(r"x[1-8]", tok)):
                used.append(_var_index(tok))
        nvars = max(max(used) + 1, 1)

    state = {"i": 0}

    def peek():
        return tokens[state["i"]]

    def take():
        tok = tokens[state["i"]]
        state["i"] += 1
        return tok

    def parse_expr():
        negate = False
        if peek() in ("+", "-"):
            negate = take() == "-"
        acc = parse_term()
        if negate:
            acc = -acc
        while peek() in ("+", "-"):
            if take() == "-":
                acc = acc - parse_term()
            else:
                acc = acc + parse_term()
        return acc

    def parse_term():
        acc = parse_factor()
        while peek() == "*":
            take()
            acc = acc * parse_factor()
        return acc

    def parse_factor():
        base = parse_atom()
        if peek() == "^":
            take()
            tok = take()
            if tok == "-":
                raise ParseError("negative exponents are not allowed")
            if tok is None or not tok.isdigit():
                raise ParseError("exponent must be a nonnegative integer")
            base = base ** int(tok)
        return base

    def parse_atom():
        tok = take()
        if tok is None:
            raise ParseError("unexpected end of input")
        if tok == "(":
            inner = parse_expr()
            if take() != ")":
                raise ParseError("unbalanced parenthesis")
            return inner
        if tok.isdigit():
            return MultiPoly.constant(field, nvars, int(tok))
        if tok == "pi":
            return MultiPoly.constant(field, nvars, (0, 1))
        if tok == "a":
            return MultiPoly.constant(field, nvars, field.gen())
        if tok in ("x", "y", "z") or re.fullmatch(r"x[1-8]", tok):
            idx = _var_index(tok)
            if idx >= nvars:
                raise ParseError(f"variable {tok} outside the first {nvars}")
            return MultiPoly.variable(field, nvars, idx)
        raise ParseError(f"unexpected token {tok!r}")

    poly = parse_expr()
    if peek() is not None:
        raise ParseError(f"trailing input at token {peek()!r}")
    return poly


def parse_fq_const(text: str, field: FieldConfig) -> FqElem:
    """Parse a constant F_q expression such as "2" or "a+1"."""
    poly = parse_poly(text, field, nvars=1)
    if not poly.is_constant():
        raise ParseError(f"{text!r} is not a constant")
    coeff = poly.terms.get((0,), ())
    if len(coeff) > 1:
        raise ParseError(f"{text!r} involves pi; expected an F_q constant")
    return FqElem(field, coeff[0] if coeff else 0)
