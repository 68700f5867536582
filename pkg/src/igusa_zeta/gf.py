"""Exact arithmetic in F_q (q = p^r) and in truncated local rings F_q[pi]/(pi^i).

An element of F_q = F_p[a]/(modulus) is encoded by the integer
``sum(c_j * p**j)`` where ``(c_0, ..., c_{r-1})`` are its coordinates in the
power basis ``1, a, ..., a^{r-1}``.  The encoding is a bijection between
``range(q)`` and F_q, with the prime subfield sitting at codes ``0..p-1``.

A :class:`TruncElem` is a class of O_K / pi^i for the equal-characteristic
local field K = F_q((pi)): it stores its precision ``i`` and a length-``i``
tuple of field codes, coefficient of pi^j at index j.  Ring operations
truncate beyond pi^(i-1); mixed-precision operands truncate to the minimum.
The valuation of the zero vector is reported as ``math.inf`` ("at least the
precision"), never as a number.

Because the characteristic is positive, the residue field lifts into O_K by
the constant embedding; no Teichmueller machinery is involved.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache

from .errors import ConstraintViolated, ParseError, ZeroAngular

INF = math.inf


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _factorize(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense F_p[x] helpers (coefficient lists, index = degree) ---------------


def _px_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _px_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _px_trim(out)


def _px_mod(a, m, p):
    """a mod m for monic m."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        shift = len(a) - 1 - dm
        if lead:
            for j, mj in enumerate(m):
                a[shift + j] = (a[shift + j] - lead * mj) % p
        a.pop()
    return _px_trim(a)


def _px_irreducible(m, p) -> bool:
    """Trial division by every monic polynomial of degree <= deg(m)//2."""
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for code in range(p**d):
            div = _divisor_from_code(code, d, p)
            if not _px_mod(m, div, p):
                return False
    return True


def _divisor_from_code(code, d, p):
    coeffs = []
    for _ in range(d):
        coeffs.append(code % p)
        code //= p
    coeffs.append(1)
    return coeffs


@lru_cache(maxsize=None)
def default_modulus(p: int, r: int) -> tuple[int, ...]:
    """First monic irreducible of degree r over F_p, in code order.

    Candidates x^r + c_{r-1} x^{r-1} + ... + c_0 are scanned by the integer
    encoding sum(c_j p^j) of the non-leading part, ascending.
    """
    if r == 1:
        return (0, 1)
    for code in range(p**r):
        cand = _divisor_from_code(code, r, p)
        if _px_irreducible(cand, p):
            return tuple(cand)
    raise ConstraintViolated(f"no irreducible of degree {r} over F_{p}")


class FieldConfig:
    """The residue field F_q, q = p^r, with a fixed multiplicative generator.

    Arithmetic is explicit polynomial arithmetic modulo the configured
    irreducible, so moderate q works without precomputed log tables; the
    generator is stored for character evaluation (a discrete-log table is
    built lazily on first use).
    """

    def __init__(self, p: int, r: int = 1, modulus=None, generator: int | None = None):
        if not _is_prime(p):
            raise ConstraintViolated(f"p = {p} is not prime")
        if r < 1:
            raise ConstraintViolated(f"r = {r} must be positive")
        self.p = p
        self.r = r
        self.q = p**r
        if modulus is None:
            modulus = default_modulus(p, r)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise ConstraintViolated("modulus must be monic of degree r")
        if not _px_irreducible(list(modulus), p):
            raise ConstraintViolated(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        if generator is None:
            generator = self._find_generator()
        else:
            if not self._has_full_order(generator):
                raise ConstraintViolated(f"{generator} does not generate F_{self.q}^x")
        self.generator = generator
        self._dlog: dict[int, int] | None = None

    # -- code-level arithmetic ----------------------------------------------

    def _digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.r):
            out.append(code % self.p)
            code //= self.p
        return out

    def _code(self, digits) -> int:
        out = 0
        for c in reversed(list(digits)):
            out = out * self.p + (c % self.p)
        return out

    def add(self, a: int, b: int) -> int:
        p = self.p
        da, db = self._digits(a), self._digits(b)
        return self._code((x + y) % p for x, y in zip(da, db))

    def neg(self, a: int) -> int:
        return self._code((-x) % self.p for x in self._digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        prod = _px_mul(_px_trim(self._digits(a)), _px_trim(self._digits(b)), self.p)
        red = _px_mod(prod, list(self.modulus), self.p)
        return self._code(red + [0] * (self.r - len(red)))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 is not invertible in F_q")
        return self.pow(a, self.q - 2)

    def from_int(self, n: int) -> int:
        return n % self.p

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def pth_root(self, a: int) -> int:
        # Frobenius has order r on F_q, so x -> x^(p^(r-1)) inverts it.
        return self.pow(a, self.p ** (self.r - 1))

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def _has_full_order(self, g: int) -> bool:
        if g == 0:
            return False
        for ell in _factorize(self.q - 1):
            if self.pow(g, (self.q - 1) // ell) == 1:
                return False
        return True

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        for g in self.units():
            if self._has_full_order(g):
                return g
        raise AssertionError("no generator found")  # unreachable

    def dlog(self, code: int) -> int:
        """Discrete log base the configured generator; code must be a unit."""
        if code == 0:
            raise ZeroAngular("dlog of 0")
        if self._dlog is None:
            table, acc = {}, 1
            for j in range(self.q - 1):
                table[acc] = j
                acc = self.mul(acc, self.generator)
            self._dlog = table
        return self._dlog[code]

    # -- element factories ---------------------------------------------------

    def e(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            return value
        if isinstance(value, int):
            if 0 <= value < self.q:
                return FqElem(self, value)
            return FqElem(self, self.from_int(value))
        return FqElem(self, self._code(value))

    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    def one(self) -> "FqElem":
        return FqElem(self, 1)

    def gen(self) -> "FqElem":
        """The power-basis generator a (root of the modulus), not the
        multiplicative generator."""
        return FqElem(self, self.p if self.r > 1 else 0)

    # -- misc -----------------------------------------------------------------

    def key(self):
        return (self.p, self.r, self.modulus, self.generator)

    def __eq__(self, other):
        return isinstance(other, FieldConfig) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.r == 1:
            return f"FieldConfig(p={self.p})"
        return f"FieldConfig(p={self.p}, r={self.r}, modulus={self.modulus_str()})"

    def modulus_str(self) -> str:
        return poly_str_fp(self.modulus, "a")

    @classmethod
    def parse(cls, text: str) -> "FieldConfig":
        """Parse "p=3 r=2 modulus=a^2+1"; r and modulus are optional."""
        p = r = None
        modulus_text = None
        for tok in text.split():
            if "=" not in tok:
                raise ParseError(f"expected key=value, got {tok!r}")
            key, _, val = tok.partition("=")
            if key == "p":
                p = int(val)
            elif key == "r":
                r = int(val)
            elif key == "modulus":
                modulus_text = val
            else:
                raise ParseError(f"unknown field key {key!r}")
        if p is None:
            raise ParseError("field spec needs p=<prime>")
        r = 1 if r is None else r
        modulus = None
        if modulus_text is not None:
            modulus = parse_modulus(modulus_text, p, r)
        return cls(p, r, modulus)


def poly_str_fp(coeffs, var: str) -> str:
    parts = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if not c:
            continue
        if d == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            parts.append(f"{head}{var}" + (f"^{d}" if d > 1 else ""))
    return " + ".join(parts) if parts else "0"


_MOD_TERM = re.compile(r"^(?:(\d+)\*?)?(?:a(?:\^(\d+))?)?$")


def parse_modulus(text: str, p: int, r: int) -> tuple[int, ...]:
    coeffs = [0] * (r + 1)
    for raw in text.replace("-", "+-").split("+"):
        raw = raw.strip()
        if not raw:
            continue
        neg = raw.startswith("-")
        if neg:
            raw = raw[1:]
        m = _MOD_TERM.match(raw.replace(" ", ""))
        if not m or (m.group(1) is None and "a" not in raw):
            raise ParseError(f"bad modulus term {raw!r}")
        coef = int(m.group(1)) if m.group(1) else 1
        deg = 0
        if "a" in raw:
            deg = int(m.group(2)) if m.group(2) else 1
        if deg > r:
            raise ParseError(f"modulus degree {deg} exceeds r={r}")
        coeffs[deg] = (coeffs[deg] + (-coef if neg else coef)) % p
    return tuple(coeffs)


class FqElem:
    """An element of the configured F_q.  Immutable."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldConfig, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field._digits(self.code))

    def _coerce(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise ConstraintViolated("mixed fields")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FqElem(self.field, self.field.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FqElem(self.field, self.field.sub(self.code, c))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FqElem(self.field, self.field.mul(self.code, c))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return FqElem(self.field, self.field.pow(self.code, e))

    def inv(self):
        return FqElem(self.field, self.field.inv(self.code))

    def frobenius(self):
        return FqElem(self.field, self.field.frobenius(self.code))

    def pth_root(self):
        return FqElem(self.field, self.field.pth_root(self.code))

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.code, self.field.key()))

    def __repr__(self):
        return f"Fq({poly_str_fp(self.coeffs, 'a')})"


class TruncElem:
    """A class of O_K/pi^prec, coefficients of pi^j stored at index j."""

    __slots__ = ("field", "prec", "codes")

    def __init__(self, field: FieldConfig, prec: int, codes):
        if prec < 1:
            raise ConstraintViolated("precision must be positive")
        codes = tuple(codes)
        if len(codes) != prec:
            raise ConstraintViolated("coefficient vector length must equal precision")
        self.field = field
        self.prec = prec
        self.codes = codes

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, field, value, prec: int) -> "TruncElem":
        code = value.code if isinstance(value, FqElem) else field.e(value).code
        return cls(field, prec, (code,) + (0,) * (prec - 1))

    @classmethod
    def pi(cls, field, prec: int, power: int = 1) -> "TruncElem":
        codes = [0] * prec
        if power < prec:
            codes[power] = 1
        return cls(field, prec, codes)

    @classmethod
    def from_pi_poly(cls, field, codes, prec: int) -> "TruncElem":
        codes = list(codes)[:prec]
        return cls(field, prec, codes + [0] * (prec - len(codes)))

    @classmethod
    def zero(cls, field, prec: int) -> "TruncElem":
        return cls(field, prec, (0,) * prec)

    @classmethod
    def one(cls, field, prec: int) -> "TruncElem":
        return cls.constant(field, 1, prec)

    @property
    def coeffs(self) -> tuple[FqElem, ...]:
        return tuple(FqElem(self.field, c) for c in self.codes)

    # -- ring structure ---------------------------------------------------------

    def _common(self, other) -> int:
        if isinstance(other, TruncElem):
            if other.field != self.field:
                raise ConstraintViolated("mixed fields")
            return min(self.prec, other.prec)
        raise TypeError("expected TruncElem")

    def truncate(self, prec: int) -> "TruncElem":
        return TruncElem(self.field, prec, self.codes[:prec])

    def __add__(self, other):
        if isinstance(other, (int, FqElem)):
            other = TruncElem.constant(self.field, other, self.prec)
        n = self._common(other)
        f = self.field
        return TruncElem(f, n, (f.add(a, b) for a, b in zip(self.codes, other.codes)))

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return TruncElem(f, self.prec, (f.neg(c) for c in self.codes))

    def __sub__(self, other):
        if isinstance(other, (int, FqElem)):
            other = TruncElem.constant(self.field, other, self.prec)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, FqElem)):
            other = TruncElem.constant(self.field, other, self.prec)
        n = self._common(other)
        f = self.field
        out = [0] * n
        for i, a in enumerate(self.codes[:n]):
            if not a:
                continue
            for j, b in enumerate(other.codes[: n - i]):
                if b:
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return TruncElem(f, n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = TruncElem.one(self.field, self.prec)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncElem):
            return NotImplemented
        return (
            self.field == other.field
            and self.prec == other.prec
            and self.codes == other.codes
        )

    def __hash__(self):
        return hash((self.prec, self.codes, self.field.key()))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.codes)

    # -- valuation, angular component, Frobenius ----------------------------------

    def ord(self):
        """Smallest j with a nonzero pi^j coefficient, math.inf if none stored.

        ``math.inf`` means "valuation >= prec", which is all the truncation
        can certify; it is deliberately distinct from any exact value.
        """
        for j, c in enumerate(self.codes):
            if c:
                return j
        return INF

    def ac(self) -> "TruncElem":
        """Unit part x * pi^(-ord x), known to precision prec - ord."""
        m = self.ord()
        if m is INF:
            raise ZeroAngular("ac undefined at valuation >= precision")
        return TruncElem(self.field, self.prec - m, self.codes[m:])

    def unit_shift(self, m: int) -> "TruncElem":
        """x1 with x = pi^m * x1, defined at precision prec - m; needs ord >= m."""
        if m < 0 or m >= self.prec:
            raise ConstraintViolated("shift outside stored precision")
        if any(self.codes[:m]):
            raise ConstraintViolated("valuation below requested shift")
        return TruncElem(self.field, self.prec - m, self.codes[m:])

    def frobenius(self) -> "TruncElem":
        """x^p computed via the additive identity (sum a_j pi^j)^p = sum a_j^p pi^(jp)."""
        f = self.field
        out = [0] * self.prec
        for j, c in enumerate(self.codes):
            if c and j * f.p < self.prec:
                out[j * f.p] = f.frobenius(c)
        return TruncElem(f, self.prec, out)

    def is_pth_power(self) -> bool:
        """True iff all nonzero coefficients sit at indices divisible by p.

        Each coefficient is automatically a p-th power in F_q (Frobenius is
        bijective), so within the stored precision this is the full test.
        """
        return all(c == 0 for j, c in enumerate(self.codes) if j % self.field.p)

    def __repr__(self):
        f = self.field
        parts = []
        for j, c in enumerate(self.codes):
            if not c:
                continue
            cs = poly_str_fp(f._digits(c), "a")
            if "+" in cs:
                cs = f"({cs})"
            if j == 0:
                parts.append(cs)
            else:
                head = "" if cs == "1" else f"{cs}*"
                parts.append(f"{head}pi" + (f"^{j}" if j > 1 else ""))
        body = " + ".join(parts) if parts else "0"
        return f"TruncElem({body} ; prec {self.prec})"


def embedding_root(base: FieldConfig, ext: FieldConfig) -> int:
    """Code in ext of a root of base's modulus, fixing an embedding F_q -> F_{q^e}."""
    if ext.p != base.p or ext.r % base.r:
        raise ConstraintViolated("no embedding: degree mismatch")
    if base.r == 1:
        return 0
    mod = base.modulus
    for cand in ext.elements():
        acc, power = 0, 1
        for c in mod:
            if c:
                acc = ext.add(acc, ext.mul(ext.from_int(c), power))
            power = ext.mul(power, cand)
        if acc == 0:
            return cand
    raise AssertionError("modulus has no root in the extension")  # unreachable


def embed_code(base: FieldConfig, ext: FieldConfig, root: int, code: int) -> int:
    """Image in ext of the base element with the given code."""
    acc, power = 0, 1
    for digit in base._digits(code):
        if digit:
            acc = ext.add(acc, ext.mul(ext.from_int(digit), power))
        power = ext.mul(power, root)
    return acc
