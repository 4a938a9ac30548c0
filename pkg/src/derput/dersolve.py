"""Solution spaces of the derivation-type laws as exact nullspaces.

A single map is a vector of length dim**2 (coordinate ``j*dim + k`` is the
coefficient of b_k in the image of b_j); a pair (f, d) is the concatenation
of f and d, of length 2*dim**2.

The algebras are graded (arrow counts modulo the relations), and every law
here is homogeneous, so the unknowns split into blocks by degree shift
``deg(b_k) - deg(b_j)`` and each block is solved independently.  The union
of the block bases is already the reduced echelon basis of the whole space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import AlgebraTable, center, commutator
from .field import Field
from .linalg import Echelon, nullspace, rref
from .linmap import LinMap

Vec = dict

KINDS = ("der", "antider", "jordan", "inner", "gen", "jgen", "genjordan", "center")
PAIR_KINDS = ("gen", "jgen", "genjordan")

# (sign, term, map, first, second), map 0 = f / Theta, 1 = d
#   img: X(b_a b_b);  R: X(b_a) b_b;  L: b_a X(b_b)
LAWS = {
    "der": (False, [(1, "img", 0, "i", "j"), (-1, "R", 0, "i", "j"), (-1, "L", 0, "i", "j")]),
    "antider": (False, [(1, "img", 0, "i", "j"), (-1, "R", 0, "j", "i"), (-1, "L", 0, "j", "i")]),
    "jordan": (True, [(1, "img", 0, "i", "j"), (1, "img", 0, "j", "i"),
                      (-1, "R", 0, "i", "j"), (-1, "L", 0, "j", "i"),
                      (-1, "L", 0, "i", "j"), (-1, "R", 0, "j", "i")]),
    "gen": (False, [(1, "img", 0, "i", "j"), (-1, "R", 0, "i", "j"), (-1, "L", 1, "i", "j")]),
    # the Jordan-generalized law is not symmetric in (x, y): ordered pairs
    "jgen": (False, [(1, "img", 0, "i", "j"), (1, "img", 0, "j", "i"),
                     (-1, "R", 0, "i", "j"), (-1, "L", 0, "j", "i"),
                     (-1, "L", 1, "i", "j"), (-1, "R", 1, "j", "i")]),
    "genjordan": (True, [(1, "img", 0, "i", "j"), (1, "img", 0, "j", "i"),
                         (-1, "R", 0, "i", "j"), (-1, "R", 0, "j", "i"),
                         (-1, "L", 1, "i", "j"), (-1, "L", 1, "j", "i")]),
}


class SubspaceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Subspace:
    """Canonical (reduced echelon, leading entry first) basis of a subspace of
    ``field ** ambient``."""

    kind: str
    ambient: int
    field: Field
    basis: tuple    # tuple of Vec

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return subspace_equal(self, other)

    def __hash__(self):
        return hash((self.ambient, tuple(tuple(sorted(v.items())) for v in self.basis)))

    def maps(self, table: AlgebraTable) -> list:
        """Basis as LinMaps, or (f, d) pairs for pair spaces."""
        n2 = table.dim ** 2
        if self.ambient == n2:
            return [LinMap.from_vector(table, v) for v in self.basis]
        if self.ambient == 2 * n2:
            return [(LinMap.from_vector(table, v), LinMap.from_vector(table, v, n2))
                    for v in self.basis]
        raise SubspaceError("ambient dimension is not dim**2 or 2*dim**2")

    def contains_vector(self, v: Vec) -> bool:
        ech = Echelon(self.field)
        ech.rows = {min(b): b for b in self.basis}
        return ech.contains(v)


def make_subspace(kind: str, ambient: int, field: Field, vectors) -> Subspace:
    return Subspace(kind, ambient, field, tuple(rref(vectors, field)))


def _same_ambient(u: Subspace, v: Subspace):
    if u.ambient != v.ambient:
        raise SubspaceError(f"ambient mismatch: {u.ambient} vs {v.ambient}")
    if u.field != v.field:
        raise SubspaceError("field mismatch")


def subspace_sum(u: Subspace, v: Subspace, kind: str = "sum") -> Subspace:
    _same_ambient(u, v)
    return make_subspace(kind, u.ambient, u.field, list(u.basis) + list(v.basis))


def subspace_intersect(u: Subspace, v: Subspace, kind: str = "intersection") -> Subspace:
    """Zassenhaus: echelonize rows (x | x) for x in U and (y | 0) for y in V;
    rows with vanishing left half span U cap V in the right half."""
    _same_ambient(u, v)
    n = u.ambient
    ech = Echelon(u.field)
    for x in u.basis:
        row = dict(x)
        row.update({n + k: c for k, c in x.items()})
        ech.insert(row)
    for y in v.basis:
        ech.insert(y)
    vecs = [{k - n: c for k, c in row.items()} for piv, row in ech.rows.items() if piv >= n]
    return make_subspace(kind, n, u.field, vecs)


def subspace_contains(u: Subspace, v: Subspace) -> bool:
    """True iff v is a subspace of u."""
    _same_ambient(u, v)
    return all(u.contains_vector(x) for x in v.basis)


def subspace_equal(u: Subspace, v: Subspace) -> bool:
    _same_ambient(u, v)
    return u.basis == v.basis


def project(s: Subspace, start: int, stop: int, kind: str | None = None) -> Subspace:
    """Image of s under the coordinate projection onto [start, stop)."""
    vecs = [{k - start: c for k, c in v.items() if start <= k < stop} for v in s.basis]
    return make_subspace(kind or s.kind + "_proj", stop - start, s.field, vecs)


# --------------------------------------------------------------------------
# constraint assembly


@lru_cache(maxsize=64)
def _degree_classes(t: AlgebraTable):
    """Class id of each basis element's degree, and the shift id of every
    (class, class) pair."""
    den = 1
    for d in t.degrees:
        for x in d:
            den = math.lcm(den, Fraction(x).denominator)
    classes: dict = {}
    cls = [classes.setdefault(tuple(int(x * den) for x in d), len(classes))
           for d in t.degrees]
    reps = list(classes)
    shift_id: dict = {}
    shift_of = [[shift_id.setdefault(tuple(y - x for x, y in zip(da, db)), len(shift_id))
                 for db in reps] for da in reps]
    return cls, shift_of


def _int_tables(t: AlgebraTable):
    """Structure constants as ints when every one is integral (the common
    case over Q); integer rows keep assembly away from Fraction overhead."""
    if t.field.p:
        return t.mult, t.left, t.right
    if any(c.denominator != 1 for v in t.mult.values() for c in v.values()):
        return t.mult, t.left, t.right

    def conv(v):
        return {k: int(c) for k, c in v.items()}

    mult = {key: conv(v) for key, v in t.mult.items()}
    left = tuple(tuple((l, conv(v)) for l, v in row) for row in t.left)
    right = tuple(tuple((l, conv(v)) for l, v in row) for row in t.right)
    return mult, left, right


def law_rows(t: AlgebraTable, kind: str):
    """Yield constraint rows {unknown: coefficient} for a law, one per
    (basis pair, output coordinate), with trivially zero rows dropped."""
    unordered, terms = LAWS[kind]
    n = t.dim
    norm = t.field.norm
    mult, left, right = _int_tables(t)
    offs = (0, n * n)
    for i in range(n):
        for j in range(i if unordered else 0, n):
            acc: dict = {}
            ij = {"i": i, "j": j}
            for s, term, which, x, y in terms:
                a, b = ij[x], ij[y]
                off = offs[which]
                if term == "img":
                    prod = mult.get((a, b))
                    if not prod:
                        continue
                    for m, c in prod.items():
                        base = off + m * n
                        c = s * c
                        for k in range(n):
                            row = acc.setdefault(k, {})
                            u = base + k
                            row[u] = row.get(u, 0) + c
                elif term == "R":
                    base = off + a * n
                    for l, vec in right[b]:
                        u = base + l
                        for k, c in vec.items():
                            row = acc.setdefault(k, {})
                            row[u] = row.get(u, 0) + s * c
                else:
                    base = off + b * n
                    for l, vec in left[a]:
                        u = base + l
                        for k, c in vec.items():
                            row = acc.setdefault(k, {})
                            row[u] = row.get(u, 0) + s * c
            for row in acc.values():
                row = {u: norm(c) for u, c in row.items() if norm(c)}
                if row:
                    yield row


def _solve_law(t: AlgebraTable, kind: str, method: str = "auto") -> list[Vec]:
    n = t.dim
    pair = kind in PAIR_KINDS
    nmaps = 2 if pair else 1
    cls, shift_of = _degree_classes(t)

    def block_of(u: int) -> int:
        j, k = divmod(u % (n * n), n)
        return shift_of[cls[j]][cls[k]]

    cols: dict = {}
    for u in range(nmaps * n * n):
        cols.setdefault(block_of(u), []).append(u)
    rows: dict = {}
    for row in law_rows(t, kind):
        rows.setdefault(block_of(next(iter(row))), []).append(row)
    out: list = []
    for blk, bcols in cols.items():
        out.extend(nullspace(_dedupe(rows.get(blk, ())), bcols, t.field, method))
    out.sort(key=min)
    if not t.field.p:
        out = [{k: Fraction(x) for k, x in v.items()} for v in out]
    return out


def _dedupe(rows):
    seen = set()
    out = []
    for r in rows:
        key = tuple(sorted(r.items()))
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


@lru_cache(maxsize=512)
def solve(t: AlgebraTable, kind: str, method: str = "auto") -> Subspace:
    """Canonical solution space of the named law on ``t``."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    n = t.dim
    if kind == "center":
        return Subspace("center", n, t.field, tuple(center(t)))
    if kind == "inner":
        vecs = [LinMap(t, [commutator(t, {i: t.field.one}, {j: t.field.one})
                           for j in range(n)]).to_vector() for i in range(n)]
        return make_subspace("inner", n * n, t.field, vecs)
    amb = (2 if kind in PAIR_KINDS else 1) * n * n
    tag = kind + "_pair" if kind in PAIR_KINDS else kind
    return Subspace(tag, amb, t.field, tuple(_solve_law(t, kind, method)))


def solve_derivations(t):
    return solve(t, "der")


def solve_anti_derivations(t):
    return solve(t, "antider")


def solve_jordan_derivations(t):
    return solve(t, "jordan")


def solve_inner_derivations(t):
    return solve(t, "inner")


def solve_generalized_derivations(t):
    return solve(t, "gen")


def solve_jordan_generalized(t):
    return solve(t, "jgen")


def solve_generalized_jordan(t):
    return solve(t, "genjordan")


# --------------------------------------------------------------------------
# decomposition


class NotDecomposable(ValueError):
    def __init__(self, theta: LinMap):
        self.theta = theta
        super().__init__("map is not a sum of a derivation and an anti-derivation")


@dataclass(frozen=True)
class Decomposition:
    derivation: LinMap
    anti_derivation: LinMap
    ambiguity: int       # dim(Der cap AntiDer)


def decompose_jordan(t: AlgebraTable, theta: LinMap) -> Decomposition:
    """Write theta = D + F with D a derivation and F an anti-derivation.

    Echelonizes the derivation basis followed by the anti-derivation basis,
    each row carrying its origin, then reduces theta; the accumulated
    coefficients give the split.  The answer is deterministic; the family
    of all answers is this one shifted by Der cap AntiDer.
    """
    F = t.field
    der, anti = solve(t, "der"), solve(t, "antider")
    n2 = t.dim ** 2
    gens = list(der.basis) + list(anti.basis)
    # tag coordinates live past n2 and never become pivots before them
    ech = Echelon(F)
    for idx, v in enumerate(gens):
        row = dict(v)
        row[n2 + idx] = F.one
        ech.insert(row)
    rem = ech.reduce(theta.to_vector())
    if any(k < n2 for k in rem):
        raise NotDecomposable(theta)
    # rem = theta - sum c_g g restricted to tags: tag coefficient -c_g
    d_vec: dict = {}
    for idx, c in rem.items():
        g = gens[idx - n2]
        if idx - n2 < len(der.basis):
            for k, x in g.items():
                d_vec[k] = F.norm(d_vec.get(k, 0) - c * x)
    D = LinMap.from_vector(t, {k: x for k, x in d_vec.items() if x})
    Fm = theta - D
    ambiguity = der.dim + anti.dim - len([r for r in ech.rows if r < n2])
    return Decomposition(D, Fm, ambiguity)
