"""Finite-dimensional quotients K(Gamma, rho) of path algebras as explicit
structure-constant tables, plus the center and Peirce decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .field import QQ, Field
from .linalg import Echelon, rref
from .quiver import (Path, QuiverError, QuiverWithRelations, dual_extension_quiver,
                     is_acyclic, one_point_extension_quiver, trivial)

Vec = dict

DEFAULT_PATH_CAP = 100_000


class AlgebraError(ValueError):
    pass


class NotFiniteDimensional(AlgebraError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebraTable:
    source: QuiverWithRelations
    field: Field
    basis: tuple[Path, ...]
    mult: Mapping[tuple[int, int], Vec]
    degrees: tuple[tuple, ...]
    index: Mapping[Path, int] = field(repr=False)
    vertex_idempotents: Mapping[int, int] = field(repr=False)
    # left[i] = [(l, b_i b_l)], right[j] = [(l, b_l b_j)], nonzero products only
    left: tuple = field(repr=False)
    right: tuple = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def unit(self) -> Vec:
        return {i: self.field.one for i in self.vertex_idempotents.values()}

    def product(self, i: int, j: int) -> Vec:
        return self.mult.get((i, j), {})

    def element(self, coords) -> Vec:
        """Sparse element from a dense coordinate sequence or a mapping."""
        F = self.field
        if isinstance(coords, Mapping):
            items = coords.items()
        else:
            if len(coords) != self.dim:
                raise AlgebraError(f"expected {self.dim} coordinates, got {len(coords)}")
            items = enumerate(coords)
        out = {}
        for i, x in items:
            if not 0 <= i < self.dim:
                raise AlgebraError(f"coordinate index {i} out of range")
            x = F(x)
            if x:
                out[i] = x
        return out

    def dense(self, x: Vec) -> list:
        v = [self.field.zero] * self.dim
        for i, c in x.items():
            v[i] = c
        return v

    def path_element(self, p: Path) -> Vec:
        return {self.index[p]: self.field.one}

    def label(self, i: int) -> str:
        return self.basis[i].text()


def multiply(t: AlgebraTable, x: Vec, y: Vec) -> Vec:
    for v in (x, y):
        if v and (min(v) < 0 or max(v) >= t.dim):
            raise AlgebraError("element does not match algebra dimension")
    F = t.field
    out: dict = {}
    mult = t.mult
    for i, a in x.items():
        for j, b in y.items():
            prod = mult.get((i, j))
            if prod:
                ab = a * b
                for k, c in prod.items():
                    out[k] = out.get(k, 0) + ab * c
    return {k: F.norm(v) for k, v in out.items() if F.norm(v)}


def add(t: AlgebraTable, *terms) -> Vec:
    """Linear combination: add(t, (c1, x1), (c2, x2), ...)."""
    F = t.field
    out: dict = {}
    for c, x in terms:
        for k, v in x.items():
            out[k] = out.get(k, 0) + c * v
    return {k: F.norm(v) for k, v in out.items() if F.norm(v)}


def commutator(t: AlgebraTable, x: Vec, y: Vec) -> Vec:
    F = t.field
    return add(t, (F.one, multiply(t, x, y)), (-F.one, multiply(t, y, x)))


# --------------------------------------------------------------------------
# construction


def _order_key(qr: QuiverWithRelations):
    vpos = {v: i for i, v in enumerate(qr.quiver.vertices)}
    apos = {a.name: i for i, a in enumerate(qr.quiver.arrows)}

    def key(p: Path):
        if not p.arrows:
            return (0, vpos[p.start], ())
        return (len(p.arrows), 0, tuple(apos[a] for a in p.arrows))
    return key


def _enumerate_paths(qr: QuiverWithRelations, forbidden: set, cap: int) -> list[Path]:
    q = qr.quiver
    lengths = sorted({len(w) for w in forbidden})
    out_of: dict[int, list] = {}
    for a in q.arrows:
        out_of.setdefault(a.source, []).append(a)
    bound = None if is_acyclic(q) else 2 * (len(q.vertices) - 1)
    level = [trivial(v) for v in q.vertices]
    paths = list(level)
    while level:
        nxt = []
        for p in level:
            for a in out_of.get(p.end, ()):
                w = (a.name,) + p.arrows
                if any(w[:L] in forbidden for L in lengths if L <= len(w)):
                    continue
                nxt.append(Path(p.start, a.target, w))
        if nxt and bound is not None and len(nxt[0].arrows) > bound:
            raise NotFiniteDimensional(
                f"surviving path of length {len(nxt[0].arrows)} exceeds the bound {bound}")
        paths.extend(nxt)
        if len(paths) > cap:
            raise NotFiniteDimensional(f"path enumeration exceeded the cap of {cap}")
        level = nxt
    return paths


def _survives(word: tuple, forbidden: set, lengths) -> bool:
    n = len(word)
    for L in lengths:
        for s in range(n - L + 1):
            if word[s:s + L] in forbidden:
                return False
    return True


def build_algebra(qr: QuiverWithRelations, field: Field = QQ,
                  cap: int = DEFAULT_PATH_CAP, check: bool = True) -> AlgebraTable:
    """Basis and structure constants of KGamma / <rho>.

    Monomial relations are used as forbidden factors during path
    enumeration; the remaining relations generate the ideal as the span of
    ``q * sigma * r`` over paths q, r, which is echelonized with the largest
    path (length, then lex) as pivot.  The non-pivot paths form the basis.
    """
    F = field
    forbidden = {r.terms[0][1].arrows for r in qr.relations if r.is_monomial}
    lengths = sorted({len(w) for w in forbidden})
    paths = _enumerate_paths(qr, forbidden, cap)
    key = _order_key(qr)
    paths.sort(key=key)
    pidx = {p.arrows if p.arrows else ("#", p.start): i for i, p in enumerate(paths)}

    def word_index(start, word):
        return pidx[word] if word else pidx[("#", start)]

    ideal = Echelon(F, leading="max")
    by_end: dict[int, list] = {}
    by_start: dict[int, list] = {}
    for p in paths:
        by_end.setdefault(p.end, []).append(p)
        by_start.setdefault(p.start, []).append(p)
    for rel in qr.relations:
        if rel.is_monomial:
            continue
        terms = [(F(c), p.arrows) for c, p in rel.terms]
        for qp in by_start.get(rel.end, ()):
            for rp in by_end.get(rel.start, ()):
                vec: dict = {}
                for c, w in terms:
                    word = qp.arrows + w + rp.arrows
                    if _survives(word, forbidden, lengths):
                        k = pidx[word]
                        vec[k] = F.norm(vec.get(k, 0) + c)
                vec = {k: v for k, v in vec.items() if v}
                if vec:
                    ideal.insert(vec)

    basis = [p for i, p in enumerate(paths) if i not in ideal.rows]
    bidx = {p: i for i, p in enumerate(basis)}
    path_to_basis = {i: bidx[p] for i, p in enumerate(paths) if i not in ideal.rows}

    def normal_form(i: int) -> Vec:
        if i in path_to_basis:
            return {path_to_basis[i]: F.one}
        return {path_to_basis[c]: F.neg(x) for c, x in ideal.rows[i].items() if c != i}

    mult: dict = {}
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            if bj.end != bi.start:
                continue
            word = bi.arrows + bj.arrows
            if not _survives(word, forbidden, lengths):
                continue
            nf = normal_form(word_index(bj.start, word))
            if nf:
                mult[(i, j)] = nf

    left = [[] for _ in basis]
    right = [[] for _ in basis]
    for (i, j), v in sorted(mult.items()):
        left[i].append((j, v))
        right[j].append((i, v))

    t = AlgebraTable(
        source=qr,
        field=F,
        basis=tuple(basis),
        mult=mult,
        degrees=_degrees(qr, basis),
        index=bidx,
        vertex_idempotents={v: bidx[trivial(v)] for v in qr.quiver.vertices},
        left=tuple(tuple(x) for x in left),
        right=tuple(tuple(x) for x in right),
    )
    if check:
        check_structure(t)
    return t


def _degrees(qr: QuiverWithRelations, basis) -> tuple:
    """Grading of each basis path by arrow counts modulo the differences of
    arrow counts inside each relation (every relation is homogeneous)."""
    apos = {a.name: i for i, a in enumerate(qr.quiver.arrows)}

    def counts(p: Path) -> dict:
        c: dict = {}
        for a in p.arrows:
            c[apos[a]] = c.get(apos[a], Fraction(0)) + 1
        return c

    lat = Echelon(QQ)
    for rel in qr.relations:
        first = counts(rel.terms[0][1])
        for _, p in rel.terms[1:]:
            d = counts(p)
            diff = {k: d.get(k, 0) - first.get(k, 0) for k in set(d) | set(first)}
            lat.insert({k: v for k, v in diff.items() if v})
    out = []
    n = len(apos)
    for p in basis:
        r = lat.reduce(counts(p))
        out.append(tuple(r.get(k, Fraction(0)) for k in range(n)))
    return tuple(out)


def check_structure(t: AlgebraTable) -> None:
    """Raise AlgebraError unless associativity, unit and idempotent laws hold."""
    F = t.field
    n = t.dim
    one = t.unit
    for i in range(n):
        x = {i: F.one}
        if multiply(t, one, x) != x or multiply(t, x, one) != x:
            raise AlgebraError(f"unit law fails at {t.label(i)}")
    for u, i in t.vertex_idempotents.items():
        for v, j in t.vertex_idempotents.items():
            want = {i: F.one} if i == j else {}
            if t.product(i, j) != want:
                raise AlgebraError(f"idempotents e{u}, e{v} are not orthogonal")
    # (b_i b_j) b_k and b_i (b_j b_k) can only be nonzero for k with b_m b_k
    # nonzero (m in the support of b_i b_j) or b_j b_k nonzero; every other
    # triple has both sides zero, so this covers all dim**3 triples
    left_k = [[l for l, _ in t.left[m]] for m in range(n)]
    for i in range(n):
        for j in range(n):
            ks = set(left_k[j])
            for m in t.mult.get((i, j), ()):
                ks.update(left_k[m])
            for k in sorted(ks):
                if not associative_at(t, i, j, k):
                    raise AlgebraError(
                        f"associativity fails at ({t.label(i)}, {t.label(j)}, {t.label(k)})")


def associative_at(t: AlgebraTable, i: int, j: int, k: int) -> bool:
    F = t.field
    bi, bj, bk = {i: F.one}, {j: F.one}, {k: F.one}
    return multiply(t, multiply(t, bi, bj), bk) == multiply(t, bi, multiply(t, bj, bk))


@lru_cache(maxsize=256)
def dual_extension_algebra(qr: QuiverWithRelations, field: Field = QQ) -> AlgebraTable:
    return build_algebra(dual_extension_quiver(qr), field)


@lru_cache(maxsize=256)
def one_point_extension_algebra(qr: QuiverWithRelations, field: Field = QQ) -> AlgebraTable:
    return build_algebra(one_point_extension_quiver(qr), field)


# --------------------------------------------------------------------------
# center


def center(t: AlgebraTable) -> list[Vec]:
    """RREF basis of the center."""
    from .linalg import nullspace
    F = t.field
    rows: dict = {}
    # coefficient of b_k in z b_i - b_i z, as a linear form in z's coordinates
    for i in range(t.dim):
        acc: dict = {}
        for m, v in t.right[i]:
            for k, c in v.items():
                acc.setdefault(k, {})[m] = acc.get(k, {}).get(m, 0) + c
        for m, v in t.left[i]:
            for k, c in v.items():
                acc.setdefault(k, {})[m] = acc.get(k, {}).get(m, 0) - c
        for k, row in acc.items():
            row = {m: F.norm(c) for m, c in row.items() if F.norm(c)}
            if row:
                rows[(i, k)] = row
    return nullspace(list(rows.values()), list(range(t.dim)), F, method="exact")


def is_central(t: AlgebraTable, z: Vec) -> bool:
    return all(not commutator(t, z, {i: t.field.one}) for i in range(t.dim))


# --------------------------------------------------------------------------
# Peirce decomposition

CORNERS = ("A", "M", "N", "B")


@dataclass(frozen=True, eq=False)
class PeirceDecomposition:
    """Corners A = eXe, M = eX(1-e), N = (1-e)Xe, B = (1-e)X(1-e)."""

    table: AlgebraTable
    e: Vec
    corners: Mapping[str, tuple]   # corner -> RREF basis (tuple of Vec)

    def project(self, corner: str, x: Vec) -> Vec:
        t, e = self.table, self.e
        F = t.field
        one = t.unit
        f = add(t, (F.one, one), (-F.one, e))
        left = e if corner in "AM" else f
        right = e if corner in "AN" else f
        return multiply(t, multiply(t, left, x), right)

    def split(self, x: Vec) -> dict:
        return {c: self.project(c, x) for c in CORNERS}

    def dims(self) -> dict:
        return {c: len(self.corners[c]) for c in CORNERS}

    @property
    def idempotent_complement(self) -> Vec:
        t = self.table
        return add(t, (t.field.one, t.unit), (-t.field.one, self.e))


def peirce(t: AlgebraTable, e: Vec) -> PeirceDecomposition:
    F = t.field
    if multiply(t, e, e) != e:
        raise AlgebraError("e is not idempotent")
    if not e or e == t.unit:
        raise AlgebraError("trivial idempotent")
    pd = PeirceDecomposition(t, dict(e), {})
    corners = {}
    for c in CORNERS:
        corners[c] = tuple(rref((pd.project(c, {i: F.one}) for i in range(t.dim)), F))
    object.__setattr__(pd, "corners", corners)
    if sum(len(b) for b in corners.values()) != t.dim:
        raise AlgebraError("corner dimensions do not add up")
    return pd


def vertex_idempotent(t: AlgebraTable, vertices: Iterable[int]) -> Vec:
    return {t.vertex_idempotents[v]: t.field.one for v in vertices}


def pairing_is_zero(pd: PeirceDecomposition, which: str) -> bool:
    """``MN``: m n = 0 for all m in M, n in N; ``NM``: n m = 0."""
    if which not in ("MN", "NM"):
        raise ValueError("which must be 'MN' or 'NM'")
    t = pd.table
    first, second = pd.corners[which[0]], pd.corners[which[1]]
    return all(not multiply(t, x, y) for x in first for y in second)
