"""Newton polyhedra in R_+^n (n <= 3), facet data, candidate poles, and the
global non-degeneracy check.

The polyhedron of a support set S is conv(union of s + R_+^n); its facets
carry a primitive nonnegative integer normal ``a`` and the value
``m = min <a, S>``.  Candidate pole real parts are -|a|/m for facets with
m != 0, plus the -1 family when some facet has m = 0.

Facet normals are enumerated from the support combinatorics (cross products
of support-point differences and coordinate rays), which is complete at this
dimension; a bounded brute-force half-space scan is kept in the test suite
as the independent oracle.

Non-degeneracy is checked torus-point by torus-point over F_{q^e} for
e = 1..bound.  The check is a bounded search and is reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import TooManyVariables
from .gf import FieldConfig, embed_code, embedding_root
from .mvpoly import MultiPoly


@dataclass(frozen=True)
class NewtonData:
    nvars: int
    generators: tuple[tuple[int, ...], ...]
    facets: tuple[tuple[tuple[int, ...], int], ...]  # (primitive normal, m)


@dataclass(frozen=True)
class CandidatePole:
    real_part: Fraction
    period_denominator: int
    source: str


def _primitive(vec):
    g = 0
    for v in vec:
        g = gcd(g, v)
    if g == 0:
        return None
    return tuple(v // g for v in vec)


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _rank(vectors) -> int:
    """Rank over Q by fraction-free elimination."""
    rows = [list(map(Fraction, v)) for v in vectors if any(v)]
    rank, col, ncols = 0, 0, (len(rows[0]) if rows else 0)
    while rank < len(rows) and col < ncols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                factor = rows[i][col] / rows[rank][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def _facet_candidates(support, n):
    cands = set()
    axes = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    cands.update(axes)
    if n == 1:
        return cands
    points = list(support)
    diffs = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = tuple(a - b for a, b in zip(points[i], points[j]))
            if any(d):
                diffs.append(d)
    if n == 2:
        for d in diffs:
            for normal in ((d[1], -d[0]), (-d[1], d[0])):
                prim = _primitive(normal)
                if prim and all(c >= 0 for c in prim):
                    cands.add(prim)
        return cands
    # n == 3: normals orthogonal to two directions drawn from the
    # difference vectors and the recession rays.
    dirs = diffs + axes
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            c = _cross(dirs[i], dirs[j])
            prim = _primitive(c)
            if prim is None:
                continue
            for sign in (1, -1):
                vec = tuple(sign * v for v in prim)
                if all(v >= 0 for v in vec):
                    cands.add(vec)
    return cands


def build_polyhedron(support, nvars: int | None = None) -> NewtonData:
    """Facet enumeration of conv(union of (s + R_+^n)) for n <= 3."""
    support = sorted({tuple(s) for s in support})
    if not support:
        raise ValueError("empty support")
    n = nvars if nvars is not None else len(support[0])
    if n > 3:
        raise TooManyVariables("Newton polyhedra supported for n <= 3 only")
    if any(len(s) != n or min(s) < 0 for s in support):
        raise ValueError("support vectors must be nonnegative of matching length")
    facets = []
    seen = set()
    for a in sorted(_facet_candidates(support, n)):
        m = min(sum(x * y for x, y in zip(a, s)) for s in support)
        touching = [s for s in support if sum(x * y for x, y in zip(a, s)) == m]
        base = touching[0]
        spanning = [tuple(x - y for x, y in zip(s, base)) for s in touching[1:]]
        spanning += [
            tuple(1 if k == i else 0 for k in range(n)) for i in range(n) if a[i] == 0
        ]
        dim = _rank(spanning) if spanning else 0
        if dim == n - 1 and a not in seen:
            seen.add(a)
            facets.append((a, m))
    return NewtonData(n, tuple(support), tuple(sorted(facets)))


def candidate_poles(nd: NewtonData) -> list[CandidatePole]:
    """Real parts -|a|/m(a) per facet with m != 0; the -1 family (period 1)
    appears when some facet has m = 0."""
    out = []
    seen = set()
    if any(m == 0 for _, m in nd.facets):
        out.append(CandidatePole(Fraction(-1), 1, "trivial -1 branch"))
        seen.add((Fraction(-1), 1))
    for a, m in nd.facets:
        if m == 0:
            continue
        real = Fraction(-sum(a), m)
        if (real, m) not in seen:
            seen.add((real, m))
            out.append(CandidatePole(real, m, f"facet {a}"))
    return sorted(out, key=lambda c: (c.real_part, c.period_denominator))


def poles_from_support(support, nvars=None) -> list[CandidatePole]:
    return candidate_poles(build_polyhedron(support, nvars))


# -- global non-degeneracy ------------------------------------------------------


@dataclass(frozen=True)
class GndResult:
    status: str  # "non_degenerate" | "degenerate" | "origin_nonsingular"
    extension_bound: int
    face: tuple[tuple[int, ...], ...] | None = None
    witness: tuple[int, ...] | None = None
    extension: int | None = None

    def is_non_degenerate(self) -> bool:
        return self.status == "non_degenerate"


def _faces(nd: NewtonData):
    """All faces as support subsets: every proper face of a polyhedron is an
    intersection of facets, and the polyhedron itself counts as a face."""
    facet_sets = [
        frozenset(s for s in nd.generators if sum(x * y for x, y in zip(a, s)) == m)
        for a, m in nd.facets
    ]
    faces = {frozenset(nd.generators)}
    for k in range(1, len(facet_sets) + 1):
        for combo in combinations(facet_sets, k):
            inter = frozenset.intersection(*combo)
            if inter:
                faces.add(inter)
    return faces


def _origin_singular(f: MultiPoly) -> bool:
    zero = (0,) * f.nvars
    if zero in f.terms:
        return False
    for i in range(f.nvars):
        if zero in f.partial_derivative(i).terms:
            return False
    return True


def _eval_exact_ext(f: MultiPoly, ext: FieldConfig, root: int, point) -> bool:
    """True iff f(point) = 0 exactly in F_{q^e}[pi] (point entries constant)."""
    base = f.field
    pi_coeffs: dict[int, int] = {}
    for exps, coeff in f.terms.items():
        mono = 1
        for c, e in zip(point, exps):
            if e:
                mono = ext.mul(mono, ext.pow(c, e))
        if mono == 0:
            continue
        for j, code in enumerate(coeff):
            if code:
                val = ext.mul(embed_code(base, ext, root, code), mono)
                pi_coeffs[j] = ext.add(pi_coeffs.get(j, 0), val)
    return all(v == 0 for v in pi_coeffs.values())


def gnd_check(f: MultiPoly, extension_bound: int = 3) -> GndResult:
    """Global non-degeneracy with respect to the Newton polyhedron.

    First property: the origin is a singular point of f (checked exactly).
    Second property: no face polynomial f_gamma has a singular point with
    all coordinates nonzero, searched over F_{q^e} for e = 1..bound.  The
    polyhedron is built on the full support (all nonzero terms, whatever
    their pi-order); face polynomials keep their exact coefficients and are
    tested in F_{q^e}[pi], so pi-weighted terms are not spuriously zero.
    """
    if not _origin_singular(f):
        return GndResult("origin_nonsingular", extension_bound)
    nd = build_polyhedron(f.full_support(), f.nvars)
    base = f.field
    for e in range(1, extension_bound + 1):
        ext = base if e == 1 and base.r == 1 else FieldConfig(base.p, base.r * e)
        root = embedding_root(base, ext)
        for face in sorted(_faces(nd), key=lambda s: (len(s), sorted(s))):
            face_poly = MultiPoly(
                f.field, f.nvars, {ex: c for ex, c in f.terms.items() if ex in face}
            )
            parts = [face_poly.partial_derivative(i) for i in range(f.nvars)]
            for point in _torus_points(ext, f.nvars):
                if _eval_exact_ext(face_poly, ext, root, point) and all(
                    _eval_exact_ext(d, ext, root, point) for d in parts
                ):
                    return GndResult(
                        "degenerate",
                        extension_bound,
                        face=tuple(sorted(face)),
                        witness=point,
                        extension=e,
                    )
    return GndResult("non_degenerate", extension_bound)


def _torus_points(ext: FieldConfig, n: int):
    if n == 0:
        yield ()
        return
    for rest in _torus_points(ext, n - 1):
        for c in ext.units():
            yield rest + (c,)
