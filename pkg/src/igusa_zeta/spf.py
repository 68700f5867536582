"""The stationary phase formula engine.

One SPF step splits an integral over a residue box D into the non-vanishing
part v, the nonsingular-zero part sigma * (1-u)t/(1-ut), and one child task
per singular residue locus.  The recursive solver runs the step depth-first,
detecting self-similarity: when a normalized child state equals an open
ancestor state, the accumulated prefactor ratio closes the loop as a
geometric series.

Two refinements of the basic step keep the recursion exactly self-similar
(both are measure identities, not approximations):

* Singular loci are processed as coordinate boxes.  A coordinate is free
  when every fiber of the singular set over it is the full residue set of
  the domain; only the fixed coordinates get the affine pi-rescaling, free
  coordinates keep their constraint.  Substituting free coordinates too
  would fragment a singular line into q cosets whose states drift forever.

* Dominated terms are absorbed.  If tau2 = c2 pi^b2 x^E2 and
  tau1 = c1 pi^b1 x^E1 satisfy E2 >= E1 componentwise and b2 > b1, and some
  variable v has exponent e in tau1 with p not dividing e and occurs in no
  other term, then v -> v * s(x) with s^e + (tau2/tau1) s^(e2) = 1 (Hensel,
  solvable since p does not divide e, with s a unit congruent to 1 mod pi)
  removes tau2 without changing the integral: the substitution preserves
  every residue class and has unit Jacobian.  Without this, relic terms
  like beta pi^b v^(n+l) drift in pi-order and no state ever repeats.

Values are exact RatFuns; a state that neither closes nor exhausts raises
NonTerminating with the offending chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import (
    ConstraintViolated,
    NonTerminating,
    NotHomogenizable,
    ParseError,
)
from .gf import FieldConfig
from .mvpoly import MultiPoly, c_add, c_order
from .symb import CharClass, CycInt, RatFun

# -- domains ------------------------------------------------------------------


class Domain:
    """Per-coordinate allowed residues mod pi: the full set is O_K, the
    nonzero set O_K^x, {0} is pi O_K, and {c} is the coset c + pi O_K."""

    __slots__ = ("field", "sets")

    def __init__(self, field: FieldConfig, sets):
        sets = tuple(frozenset(s) for s in sets)
        for s in sets:
            if not s:
                raise ConstraintViolated("empty residue set")
            if any(c < 0 or c >= field.q for c in s):
                raise ConstraintViolated("residue code out of range")
        self.field = field
        self.sets = sets

    @classmethod
    def full(cls, field, nvars: int) -> "Domain":
        return cls(field, (frozenset(range(field.q)),) * nvars)

    @classmethod
    def from_tokens(cls, field, text: str) -> "Domain":
        sets = []
        for tok in text.split(","):
            tok = tok.strip()
            if tok == "any":
                sets.append(frozenset(range(field.q)))
            elif tok == "unit":
                sets.append(frozenset(range(1, field.q)))
            elif tok == "zero":
                sets.append(frozenset((0,)))
            elif tok.lstrip("-").isdigit():
                sets.append(frozenset((field.from_int(int(tok)),)))
            else:
                raise ParseError(f"bad domain token {tok!r}")
        return cls(field, sets)

    @property
    def nvars(self) -> int:
        return len(self.sets)

    def points(self):
        return product(*(sorted(s) for s in self.sets))

    def size(self) -> int:
        n = 1
        for s in self.sets:
            n *= len(s)
        return n

    def replace(self, index: int, new_set) -> "Domain":
        sets = list(self.sets)
        sets[index] = frozenset(new_set)
        return Domain(self.field, sets)

    def drop(self, index: int) -> "Domain":
        return Domain(self.field, self.sets[:index] + self.sets[index + 1 :])

    def is_full(self, index: int) -> bool:
        return len(self.sets[index]) == self.field.q

    def is_units(self, index: int) -> bool:
        return self.sets[index] == frozenset(range(1, self.field.q))

    def key(self):
        return tuple(tuple(sorted(s)) for s in self.sets)

    def __eq__(self, other):
        return isinstance(other, Domain) and self.field == other.field and self.sets == other.sets

    def __hash__(self):
        return hash((self.field.key(), self.key()))

    def __repr__(self):
        toks = []
        for s in self.sets:
            if len(s) == self.field.q:
                toks.append("any")
            elif s == frozenset(range(1, self.field.q)):
                toks.append("unit")
            elif s == {0}:
                toks.append("zero")
            else:
                toks.append("{" + ",".join(map(str, sorted(s))) + "}")
        return "Domain(" + ",".join(toks) + ")"


@dataclass
class ZetaTask:
    """One node of the SPF recursion; the polynomial is extraction-normalized
    and the prefactor is the accumulated monomial u^a t^b."""

    poly: MultiPoly
    domain: Domain
    char: CharClass
    prefactor: tuple[int, int] = (0, 0)
    depth: int = 0

    def key(self):
        return (self.poly.key(), self.domain.key())


# -- the three SPF buckets -----------------------------------------------------


def _sigma_factor(q: int) -> RatFun:
    #  (1 - q^-1) q^-s / (1 - q^-1-s)  ==  (1-u) t / (1-u t)
    return RatFun(q, {(0, 1): CycInt.from_int(1), (1, 1): CycInt.from_int(-1)},
                  {(1, 1): 1})


def _classify(poly: MultiPoly, domain: Domain, char: CharClass):
    fbar = poly.reduce_mod_pi()
    parts = [fbar.partial_derivative(i) for i in range(poly.nvars)]
    vsum = CycInt.from_int(0)
    nonsingular = 0
    singular = []
    for point in domain.points():
        val = fbar.residue_eval(point)
        if val:
            vsum = vsum + char.value(val)
        elif any(d.residue_eval(point) for d in parts):
            nonsingular += 1
        else:
            singular.append(point)
    return vsum, nonsingular, singular


def v_term(poly: MultiPoly, domain: Domain, char: CharClass) -> RatFun:
    """u^n times the character sum of fbar over the non-vanishing points."""
    vsum, _, _ = _classify(poly, domain, char)
    return RatFun.monomial(poly.field.q, vsum, domain.nvars, 0)


def sigma_term(poly: MultiPoly, domain: Domain, char: CharClass) -> RatFun:
    """Nonsingular-zero contribution; identically 0 for nontrivial chi."""
    if not char.is_trivial():
        return RatFun.zero(poly.field.q)
    _, nonsingular, _ = _classify(poly, domain, char)
    q = poly.field.q
    return RatFun.monomial(q, nonsingular, domain.nvars, 0) * _sigma_factor(q)


def singular_set(poly: MultiPoly, domain: Domain) -> list[tuple[int, ...]]:
    """Residue points of the domain where fbar and all partials vanish."""
    _, _, singular = _classify(poly, domain, CharClass(poly.field, 0))
    return singular


# -- normalization ----------------------------------------------------------------


def absorb_dominated(poly: MultiPoly) -> MultiPoly:
    """Drop terms that are everywhere dominated and removable by a unit
    substitution (see the module docstring for the exact conditions)."""
    p = poly.field.p
    terms = dict(poly.terms)
    changed = True
    while changed:
        changed = False
        items = list(terms.items())
        for e2, c2 in items:
            if e2 not in terms:
                continue
            for e1, c1 in items:
                if e1 == e2 or e1 not in terms or e2 not in terms:
                    continue
                if not all(a2 >= a1 for a1, a2 in zip(e1, e2)):
                    continue
                if c_order(c2) <= c_order(c1):
                    continue
                ok_var = any(
                    e1[v] >= 1
                    and e1[v] % p
                    and all(
                        eo[v] == 0
                        for eo in terms
                        if eo != e1 and eo != e2
                    )
                    for v in range(poly.nvars)
                )
                if ok_var:
                    del terms[e2]
                    changed = True
                    break
    if len(terms) == len(poly.terms):
        return poly
    return MultiPoly(poly.field, poly.nvars, terms)


def _normalize(poly: MultiPoly) -> tuple[int, MultiPoly]:
    m, extracted = poly.extract_pi_power()
    return m, absorb_dominated(extracted)


# -- one SPF step -------------------------------------------------------------------


def _free_coordinates(singular, domain: Domain):
    """Coordinates along which the singular set is a full product with the
    domain's residue set.  Singleton residue sets always count as fixed so
    that cosets are actually recentered and the recursion makes progress."""
    sing = set(singular)
    free = []
    for j in range(domain.nvars):
        res = domain.sets[j]
        if len(res) < 2:
            continue
        fibers: dict = {}
        for pt in sing:
            fibers.setdefault(pt[:j] + pt[j + 1 :], set()).add(pt[j])
        if all(vals == res for vals in fibers.values()):
            free.append(j)
    return free


def _step(poly: MultiPoly, domain: Domain, char: CharClass):
    """Closed part plus normalized children with their prefactor ratios.

    Children are one per box of the singular locus: the locus decomposes as
    (fixed-coordinate tuples) x (full residue sets of the free coordinates),
    and only fixed coordinates are recentered and pi-rescaled.
    """
    q = poly.field.q
    vsum, nonsingular, singular = _classify(poly, domain, char)
    closed = RatFun.monomial(q, vsum, domain.nvars, 0)
    if nonsingular and char.is_trivial():
        closed = closed + (
            RatFun.monomial(q, nonsingular, domain.nvars, 0) * _sigma_factor(q)
        )
    if not singular:
        return closed, {}
    free = _free_coordinates(singular, domain)
    fixed = [j for j in range(domain.nvars) if j not in free]
    if not fixed:
        raise NonTerminating(
            f"singular locus fills the whole box for {poly}; no progress possible",
            chain=[(str(poly), repr(domain))],
        )
    taus = sorted({tuple(pt[j] for j in fixed) for pt in singular})
    children: dict = {}
    full = frozenset(range(q))
    for tau in taus:
        center = [None] * domain.nvars
        for idx, j in enumerate(fixed):
            center[j] = tau[idx]
        shifted = poly.substitute_affine(center, scale_pi=True)
        m, child_poly = _normalize(shifted)
        child_domain = domain
        for j in fixed:
            child_domain = child_domain.replace(j, full)
        ratio = RatFun.monomial(q, 1, len(fixed), m)
        ckey = (child_poly.key(), child_domain.key())
        if ckey in children:
            prev_ratio, cpoly, cdom = children[ckey]
            children[ckey] = (prev_ratio + ratio, cpoly, cdom)
        else:
            children[ckey] = (ratio, child_poly, child_domain)
    return closed, children


def spf_step(task: ZetaTask) -> tuple[RatFun, list[ZetaTask]]:
    """One application of the stationary phase formula.

    Returns the closed part (prefactor applied) and the child tasks; summing
    closed parts over the full recursion tree telescopes to the zeta value.
    """
    closed, children = _step(task.poly, task.domain, task.char)
    a, b = task.prefactor
    out_children = []
    for ratio, cpoly, cdom in children.values():
        mono = _ratio_monomial(ratio)
        if mono is None:
            raise NonTerminating("child multiplicity is not a q-power monomial")
        da, db = mono
        out_children.append(
            ZetaTask(cpoly, cdom, task.char, (a + da, b + db), task.depth + 1)
        )
    return closed.mul_monomial(a, b), out_children


def _ratio_monomial(ratio: RatFun):
    """(a, b) when the ratio is exactly one monomial u^a t^b (the base-q
    normal form already folds q-power coefficients into u-powers)."""
    if ratio.den or len(ratio.num) != 1:
        return None
    (key, coeff), = ratio.num.items()
    if coeff != CycInt.from_int(1):
        return None
    return key


# -- the recursive solver --------------------------------------------------------------


class _Form:
    """const + sum(coeff[k] * Z_k) over open ancestor states k."""

    __slots__ = ("const", "refs")

    def __init__(self, const: RatFun, refs: dict | None = None):
        self.const = const
        self.refs = refs or {}


class _Solver:
    def __init__(self, char: CharClass, max_depth: int, node_limit: int):
        self.char = char
        self.max_depth = max_depth
        self.node_limit = node_limit
        self.memo: dict = {}
        self.steps = 0

    def solve(self, poly: MultiPoly, domain: Domain) -> RatFun:
        m, normalized = _normalize(poly)
        form = self._solve(normalized, domain, ())
        if form.refs:
            raise AssertionError("unresolved loop references at the root")
        return form.const.mul_monomial(0, m)

    def _solve(self, poly: MultiPoly, domain: Domain, stack) -> _Form:
        key = (poly.key(), domain.key())
        if key in self.memo:
            return _Form(self.memo[key])
        if key in stack:
            return _Form(RatFun.zero(poly.field.q), {key: RatFun.one(poly.field.q)})
        if len(stack) >= self.max_depth:
            raise NonTerminating(
                f"no closure within depth {self.max_depth}",
                chain=[str(k) for k in stack],
            )
        self.steps += 1
        if self.steps > self.node_limit:
            raise NonTerminating(f"node limit {self.node_limit} exhausted")
        closed, children = _step(poly, domain, self.char)
        const = closed
        refs: dict = {}
        child_stack = stack + (key,)
        for ratio, cpoly, cdom in children.values():
            form = self._solve(cpoly, cdom, child_stack)
            const = const + ratio * form.const
            for rkey, coeff in form.refs.items():
                acc = refs.get(rkey)
                refs[rkey] = coeff * ratio if acc is None else acc + coeff * ratio
        if key in refs:
            self_coeff = refs.pop(key)
            mono = _ratio_monomial(self_coeff)
            if mono is None:
                raise NonTerminating(
                    f"loop ratio {self_coeff} is not a single monomial",
                    chain=[str(k) for k in child_stack],
                )
            const = const.geometric_closure(*mono)
            refs = {k: v.geometric_closure(*mono) for k, v in refs.items()}
        if not refs:
            self.memo[key] = const
        return _Form(const, refs)


def spf_solve(
    poly: MultiPoly,
    domain: Domain | None = None,
    char: CharClass | None = None,
    max_depth: int = 64,
    node_limit: int = 200_000,
) -> RatFun:
    """Z(f, s, chi, D) as an exact rational function of (u, t).

    Depth-first SPF recursion with memoized states and geometric closure of
    self-similar loops; raises NonTerminating with the offending chain when
    the tree neither closes nor exhausts.
    """
    if domain is None:
        domain = Domain.full(poly.field, poly.nvars)
    if char is None:
        char = CharClass(poly.field, 0)
    if domain.nvars != poly.nvars:
        raise ConstraintViolated("domain arity does not match the polynomial")
    solver = _Solver(char, max_depth, node_limit)
    return solver.solve(poly, domain)


# -- unit integrals and variable splitting -------------------------------------------


def unit_power_integral(field: FieldConfig, m: int, char: CharClass) -> RatFun:
    """Integral of chi(ac(x^m)) over O_K^x, computed as the finite sum
    u * sum over unit residues of chi(c^m); equals 1-u when chi^m is trivial
    and 0 otherwise."""
    if m < 1:
        raise ConstraintViolated("m must be positive")
    total = CycInt.from_int(0)
    for c in field.units():
        total = total + char.value(field.pow(c, m))
    return RatFun.monomial(field.q, total, 1, 0)


def split_unit_variable(
    poly: MultiPoly,
    domain: Domain,
    var: int,
    weights,
    char: CharClass,
) -> tuple[MultiPoly, Domain, int, RatFun]:
    """Factor out a unit-constrained variable w via x_j -> x_j w^(weight_j).

    The substitution has unit Jacobian (|w| = 1), so when every term picks up
    the same total w-degree M the integral factors into the unit-power
    integral of w^M times a task in one fewer variable.  Returns the reduced
    polynomial, its domain, M, and the multiplier.
    """
    field = poly.field
    if not domain.is_units(var):
        raise ConstraintViolated("split variable must be constrained to units")
    weights = list(weights)
    if len(weights) != poly.nvars:
        raise ConstraintViolated("weight vector length mismatch")
    degrees = set()
    for exps in poly.terms:
        deg = exps[var] + sum(
            e * weights[j] for j, e in enumerate(exps) if j != var
        )
        degrees.add(deg)
    if len(degrees) != 1:
        raise NotHomogenizable(
            f"w-degrees {sorted(degrees)} are not constant under weights {weights}"
        )
    M = degrees.pop()
    for j in range(poly.nvars):
        if j == var:
            continue
        s = domain.sets[j]
        if not (domain.is_full(j) or domain.is_units(j) or s == {0}):
            raise ConstraintViolated(
                "non-split coordinates need unit-scaling-closed residue sets"
            )
    reduced_terms: dict = {}
    for exps, coeff in poly.terms.items():
        new = exps[:var] + exps[var + 1 :]
        if new in reduced_terms:
            reduced_terms[new] = c_add(field, reduced_terms[new], coeff)
        else:
            reduced_terms[new] = coeff
    kernel = MultiPoly(field, poly.nvars - 1, reduced_terms)
    return kernel, domain.drop(var), M, unit_power_integral(field, M, char)
