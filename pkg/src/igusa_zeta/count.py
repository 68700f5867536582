"""High-throughput brute-force oracle for solution counts N_i.

Counts solutions of f = 0 over (F_q[pi]/pi^i)^n by exhaustive evaluation,
independent of all symbolic machinery.  Ring elements are encoded as
integers sum(digit_j * q^j) with digit_j the field code of the pi^j
coefficient; evaluation is pure table lookup (Q x Q add/mul tables plus
per-term power tables), so the hot loop compiles well.

A compiled Cython kernel is selected at import when available, with a
pure-Python fallback; set IGUSA_ZETA_PURE=1 to force the fallback.  Work is
partitioned into blocks of the outermost coordinate; workers share nothing
and the reduction is exact integer addition, so results do not depend on
the thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import _countpure
from .errors import BudgetExceeded, ConstraintViolated, WrongShape
from .mvpoly import MultiPoly

try:  # pragma: no cover - depends on the build environment
    if os.environ.get("IGUSA_ZETA_PURE"):
        raise ImportError
    from . import _countcore

    BACKEND = "compiled"
except ImportError:  # pragma: no cover
    _countcore = None
    BACKEND = "pure"

DEFAULT_BUDGET = 10**9


def default_budget() -> int:
    env = os.environ.get("IGUSA_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class CountJob:
    """One N_i computation: polynomial, truncation level, limits."""

    def __init__(self, poly: MultiPoly, level: int, budget: int | None = None,
                 threads: int = 1, structured: bool = False):
        if level < 1:
            raise ConstraintViolated("level must be positive")
        self.poly = poly
        self.level = level
        self.budget = default_budget() if budget is None else budget
        self.threads = max(1, threads)
        self.structured = structured

    @property
    def evaluations(self) -> int:
        return self.poly.field.q ** (self.level * self.poly.nvars)

    def check_budget(self):
        if self.evaluations > self.budget:
            raise BudgetExceeded(
                f"{self.evaluations} evaluations exceed budget {self.budget}",
                required=self.evaluations,
                budget=self.budget,
            )


# -- ring tables ------------------------------------------------------------------

_TABLES: dict = {}


def _ring_tables(field, level: int):
    key = (field.key(), level)
    if key in _TABLES:
        return _TABLES[key]
    q, Q = field.q, field.q**level
    fq_add = [[field.add(a, b) for b in range(q)] for a in range(q)]
    fq_mul = [[field.mul(a, b) for b in range(q)] for a in range(q)]

    def digits(code):
        out = []
        for _ in range(level):
            out.append(code % q)
            code //= q
        return out

    def code(ds):
        out = 0
        for d in reversed(list(ds)):
            out = out * q + d
        return out

    add = [[0] * Q for _ in range(Q)]
    mul = [[0] * Q for _ in range(Q)]
    all_digits = [digits(a) for a in range(Q)]
    for a in range(Q):
        da = all_digits[a]
        for b in range(a, Q):
            db = all_digits[b]
            s = code(fq_add[x][y] for x, y in zip(da, db))
            add[a][b] = add[b][a] = s
            prod = [0] * level
            for i, x in enumerate(da):
                if x:
                    row = fq_mul[x]
                    for j in range(level - i):
                        y = db[j]
                        if y:
                            prod[i + j] = fq_add[prod[i + j]][row[y]]
            m = code(prod)
            mul[a][b] = mul[b][a] = m
    _TABLES[key] = (Q, add, mul, digits, code)
    return _TABLES[key]


def _coeff_ring_code(field, coeff, level: int) -> int:
    out = 0
    for d in reversed(coeff[:level]):
        out = out * field.q + d
    return out


def _power_tables(poly: MultiPoly, level: int):
    """pows[j][t][v] = v^(exponent of var j in term t), coefficient folded
    into variable 0."""
    field = poly.field
    Q, add, mul, _, _ = _ring_tables(field, level)
    terms = sorted(poly.terms.items())
    if not terms:
        raise ConstraintViolated("cannot count zeros of the zero polynomial")
    pows = []
    for j in range(poly.nvars):
        tables = []
        for exps, _ in terms:
            e = exps[j]
            tab = [0] * Q
            for v in range(Q):
                acc, base, k = 1, v, e
                while k:
                    if k & 1:
                        acc = mul[acc][base]
                    base = mul[base][base]
                    k >>= 1
                tab[v] = acc
            tables.append(tab)
        pows.append(tables)
    for t, (_, coeff) in enumerate(terms):
        c = _coeff_ring_code(field, coeff, level)
        pows[0][t] = [mul[c][v] for v in pows[0][t]]
    return Q, add, mul, pows


def _as_numpy(Q, add, mul, pows):
    import numpy as np

    add_a = np.array(add, dtype=np.int32)
    mul_a = np.array(mul, dtype=np.int32)
    pows_a = [np.array(p, dtype=np.int32) for p in pows]
    return add_a, mul_a, pows_a


def count_ni(job: CountJob) -> int:
    """Exact N_i by exhaustive evaluation."""
    job.check_budget()
    poly = job.poly
    if poly.nvars == 0:
        return 1 if all(c == 0 for c in poly.terms.get((), ())[: job.level]) else 0
    Q, add, mul, pows = _power_tables(poly, job.level)
    nterms = len(pows[0])
    use_compiled = (
        _countcore is not None and poly.nvars <= 3 and nterms <= 64
    )
    if use_compiled:
        add_k, mul_k, pows_k = _as_numpy(Q, add, mul, pows)
        kernel = _countcore.count_range
    else:
        add_k, mul_k, pows_k = add, mul, pows
        kernel = _countpure.count_range
    if job.threads == 1 or Q < 2 * job.threads:
        return int(kernel(add_k, mul_k, pows_k, 0, Q))
    bounds = [Q * w // job.threads for w in range(job.threads + 1)]
    with ThreadPoolExecutor(max_workers=job.threads) as pool:
        futures = [
            pool.submit(kernel, add_k, mul_k, pows_k, bounds[w], bounds[w + 1])
            for w in range(job.threads)
        ]
        return sum(int(f.result()) for f in futures)


def count_ni_structured(job: CountJob) -> int:
    """Fast path for f = c x^p + h(other variables), c a unit constant.

    In characteristic p the map x -> x^p is an additive homomorphism of
    F_q[pi]/pi^i whose image is the set of elements supported on pi-indices
    divisible by p, each fiber of size q^(i - ceil(i/p)); the count is the
    fiber size summed over the points where -h/c lands in the image.
    """
    poly, level = job.poly, job.level
    field = poly.field
    p = field.p
    occurring = sorted({j for exps in poly.terms for j, e in enumerate(exps) if e})
    if not occurring:
        raise WrongShape("constant polynomial has no p-th power variable")
    pvar = occurring[0]
    pcoeff = None
    for exps, coeff in poly.terms.items():
        if exps[pvar] == 0:
            continue
        pure = all(e == 0 for j, e in enumerate(exps) if j != pvar)
        if pcoeff is None and pure and exps[pvar] == p and coeff[0] != 0:
            pcoeff = coeff
        else:
            raise WrongShape(
                "expected c*x^p + h(other variables) with unit constant c"
            )
    if pcoeff is None:
        raise WrongShape("expected c*x^p + h(other variables) with unit constant c")
    if field.q ** (level * (poly.nvars - 1)) > job.budget:
        raise BudgetExceeded("structured enumeration exceeds budget")

    Q, add, mul, digits, code = _ring_tables(field, level)
    c_code = _coeff_ring_code(field, pcoeff, level)
    c_inv = next(x for x in range(Q) if mul[c_code][x] == 1)
    neg = [0] * Q
    for v in range(Q):
        neg[v] = code(field.neg(d) for d in digits(v))
    fiber = field.q ** (level - (level + p - 1) // p)

    h = MultiPoly(
        field,
        poly.nvars,
        {e: c for e, c in poly.terms.items() if not e[pvar]},
    )
    rest_vars = [j for j in range(poly.nvars) if j != pvar]
    if rest_vars and h.is_zero():
        return fiber * Q ** len(rest_vars)
    if rest_vars:
        sub = MultiPoly(
            field,
            len(rest_vars),
            {
                tuple(e[j] for j in rest_vars): c
                for e, c in h.terms.items()
            },
        )
        _, _, _, pows = _power_tables(sub, level)
    else:
        sub = None

    def in_image(w: int) -> bool:
        return all(d == 0 for i, d in enumerate(digits(w)) if i % p)

    total = 0
    if sub is None:
        w = 0
        return fiber if in_image(w) else 0
    from itertools import product as iproduct

    nt = len(pows[0])
    for point in iproduct(range(Q), repeat=len(rest_vars)):
        acc = None
        for t in range(nt):
            val = pows[0][t][point[0]]
            for jj in range(1, len(rest_vars)):
                val = mul[val][pows[jj][t][point[jj]]]
            acc = val if acc is None else add[acc][val]
        w = mul[c_inv][neg[acc]]
        if in_image(w):
            total += fiber
    return total


def poincare_truncated(poly: MultiPoly, order: int, budget: int | None = None,
                       threads: int = 1) -> list[Fraction]:
    """[N_i / q^(n i)] for i = 0..order, with N_0 = 1."""
    q, n = poly.field.q, poly.nvars
    out = [Fraction(1)]
    for i in range(1, order + 1):
        ni = count_ni(CountJob(poly, i, budget=budget, threads=threads))
        out.append(Fraction(ni, q ** (n * i)))
    return out
