"""Linear maps on an algebra, the derivation-type laws, and Peirce block forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import (AlgebraError, AlgebraTable, PeirceDecomposition, add, commutator,
                      multiply)
from .quiver import Path, QuiverError, format_combination, parse_combination

Vec = dict


class LinMap:
    """Square matrix over the basis of ``table``; ``images[j]`` is the image
    of basis element j as a sparse vector."""

    __slots__ = ("table", "images")

    def __init__(self, table: AlgebraTable, images: Sequence[Vec]):
        if len(images) != table.dim:
            raise AlgebraError(f"map has {len(images)} columns, algebra has dim {table.dim}")
        self.table = table
        self.images = tuple({k: v for k, v in img.items() if v} for img in images)

    @classmethod
    def zero(cls, t: AlgebraTable) -> "LinMap":
        return cls(t, [{}] * t.dim)

    @classmethod
    def identity(cls, t: AlgebraTable) -> "LinMap":
        return cls(t, [{j: t.field.one} for j in range(t.dim)])

    @classmethod
    def from_vector(cls, t: AlgebraTable, vec: Vec, offset: int = 0) -> "LinMap":
        """Inverse of :meth:`to_vector`: coordinate ``offset + j*dim + k`` is
        the coefficient of b_k in the image of b_j."""
        n = t.dim
        images = [dict() for _ in range(n)]
        for idx, x in vec.items():
            idx -= offset
            if 0 <= idx < n * n:
                images[idx // n][idx % n] = x
        return cls(t, images)

    @classmethod
    def from_dense(cls, t: AlgebraTable, matrix) -> "LinMap":
        n = t.dim
        return cls(t, [{k: t.field(matrix[k][j]) for k in range(n) if matrix[k][j]}
                       for j in range(n)])

    def to_vector(self, offset: int = 0) -> Vec:
        n = self.table.dim
        return {offset + j * n + k: x for j, img in enumerate(self.images)
                for k, x in img.items()}

    def matrix(self) -> list[list]:
        t = self.table
        m = [[t.field.zero] * t.dim for _ in range(t.dim)]
        for j, img in enumerate(self.images):
            for k, x in img.items():
                m[k][j] = x
        return m

    def __call__(self, x: Vec) -> Vec:
        t = self.table
        terms = [(c, self.images[j]) for j, c in x.items()]
        return add(t, *terms) if terms else {}

    def _combine(self, other: "LinMap", s) -> "LinMap":
        t = self.table
        return LinMap(t, [add(t, (t.field.one, a), (s, b))
                          for a, b in zip(self.images, other.images)])

    def __add__(self, other):
        return self._combine(other, self.table.field.one)

    def __sub__(self, other):
        return self._combine(other, -self.table.field.one)

    def scale(self, c) -> "LinMap":
        t = self.table
        return LinMap(t, [add(t, (t.field(c), img)) for img in self.images])

    def is_zero(self) -> bool:
        return not any(self.images)

    def __eq__(self, other):
        return (isinstance(other, LinMap) and other.table.dim == self.table.dim
                and self.images == other.images)

    def __hash__(self):
        return hash(tuple(tuple(sorted(i.items())) for i in self.images))

    def __repr__(self):
        return f"LinMap(dim={self.table.dim}, nnz={sum(map(len, self.images))})"


def _check(t: AlgebraTable, *maps: LinMap):
    for m in maps:
        if m.table.dim != t.dim:
            raise AlgebraError("map size does not match the algebra")


def _unit(t, i):
    return {i: t.field.one}


def _pairs(n, unordered):
    for i in range(n):
        for j in range(i if unordered else 0, n):
            yield i, j


def law_defects(t: AlgebraTable, law: str, f: LinMap, d: LinMap | None = None,
                first_only: bool = False) -> list[tuple[int, int]]:
    """Basis pairs (i, j) where the named law fails.

    ``der``, ``antider``, ``jordan`` take one map; ``gen``, ``jgen`` and
    ``genjordan`` take the pair (f, d).
    """
    _check(t, f, *(m for m in (d,) if m is not None))
    F = t.field
    one = F.one
    mul = lambda x, y: multiply(t, x, y)
    jor = lambda x, y: add(t, (one, mul(x, y)), (one, mul(y, x)))
    if law in ("gen", "jgen", "genjordan") and d is None:
        raise ValueError(f"law {law!r} needs an associated map d")
    unordered = law in ("jordan", "genjordan")
    bad = []
    for i, j in _pairs(t.dim, unordered):
        x, y = _unit(t, i), _unit(t, j)
        fx, fy = f.images[i], f.images[j]
        if law == "der":
            lhs = f(mul(x, y))
            rhs = add(t, (one, mul(fx, y)), (one, mul(x, fy)))
        elif law == "antider":
            lhs = f(mul(x, y))
            rhs = add(t, (one, mul(fy, x)), (one, mul(y, fx)))
        elif law == "jordan":
            lhs = f(jor(x, y))
            rhs = add(t, (one, jor(fx, y)), (one, jor(x, fy)))
        elif law == "gen":
            lhs = f(mul(x, y))
            rhs = add(t, (one, mul(fx, y)), (one, mul(x, d.images[j])))
        elif law == "jgen":
            lhs = f(jor(x, y))
            rhs = add(t, (one, jor(fx, y)), (one, jor(x, d.images[j])))
        elif law == "genjordan":
            lhs = f(jor(x, y))
            rhs = add(t, (one, mul(fx, y)), (one, mul(fy, x)),
                      (one, mul(x, d.images[j])), (one, mul(y, d.images[i])))
        else:
            raise ValueError(f"unknown law {law!r}")
        if lhs != rhs:
            bad.append((i, j))
            if first_only:
                break
    return bad


def is_derivation(t: AlgebraTable, th: LinMap) -> bool:
    return not law_defects(t, "der", th, first_only=True)


def is_anti_derivation(t: AlgebraTable, th: LinMap) -> bool:
    return not law_defects(t, "antider", th, first_only=True)


def is_jordan_derivation(t: AlgebraTable, th: LinMap) -> bool:
    return not law_defects(t, "jordan", th, first_only=True)


def is_generalized_derivation(t, f: LinMap, d: LinMap) -> bool:
    return not law_defects(t, "gen", f, d, first_only=True)


def is_jordan_generalized_derivation(t, f: LinMap, d: LinMap) -> bool:
    return not law_defects(t, "jgen", f, d, first_only=True)


def is_generalized_jordan_derivation(t, f: LinMap, d: LinMap) -> bool:
    return not law_defects(t, "genjordan", f, d, first_only=True)


def inner_derivation(t: AlgebraTable, x: Vec) -> LinMap:
    """ad_x : y -> xy - yx."""
    if x and (min(x) < 0 or max(x) >= t.dim):
        raise AlgebraError("element does not match algebra dimension")
    return LinMap(t, [commutator(t, x, _unit(t, j)) for j in range(t.dim)])


# --------------------------------------------------------------------------
# Peirce block forms


class BlockFormError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("map does not have the Peirce block shape: " + "; ".join(violations))


BLOCKS = {
    # name: (source corner, target corner)
    "delta1": ("A", "A"), "tau2": ("M", "M"), "tau3": ("N", "M"),
    "nu2": ("M", "N"), "nu3": ("N", "N"), "mu4": ("B", "B"),
}


@dataclass(frozen=True, eq=False)
class PeirceBlockForm:
    """Blocks of a map relative to a Peirce decomposition.  ``blocks[name]``
    holds the images of the source corner's basis vectors."""

    pd: PeirceDecomposition
    blocks: dict
    m0: Vec
    n0: Vec

    def apply(self, name: str, x: Vec) -> Vec:
        src = BLOCKS[name][0]
        t = self.pd.table
        terms = []
        for v, img in zip(self.pd.corners[src], self.blocks[name]):
            c = x.get(min(v), 0)       # RREF basis: coordinate = entry at pivot
            if c:
                terms.append((c, img))
        return add(t, *terms) if terms else {}

    def is_zero_block(self, name: str) -> bool:
        return not any(self.blocks[name])


def block_form(pd: PeirceDecomposition, th: LinMap) -> PeirceBlockForm:
    """Split ``th`` into the six corner blocks plus (m0, n0).

    Raises :class:`BlockFormError` listing every place where ``th`` leaves
    the block pattern shared by all Jordan derivations.
    """
    t = pd.table
    _check(t, th)
    F = t.field
    one, neg = F.one, -F.one
    mul = lambda x, y: multiply(t, x, y)
    te = th(pd.e)
    m0, n0 = pd.project("M", te), pd.project("N", te)
    blocks = {name: [] for name in BLOCKS}
    bad = []

    def expect(corner, got, want, what):
        if got != want:
            bad.append(f"{what}: {corner}-component")

    for a in pd.corners["A"]:
        s = pd.split(th(a))
        blocks["delta1"].append(s["A"])
        expect("M", s["M"], mul(a, m0), "Theta(a) != delta1(a) + a m0 + n0 a")
        expect("N", s["N"], mul(n0, a), "Theta(a) != delta1(a) + a m0 + n0 a")
        expect("B", s["B"], {}, "Theta(A) meets B")
    for m in pd.corners["M"]:
        s = pd.split(th(m))
        blocks["tau2"].append(s["M"])
        blocks["nu2"].append(s["N"])
        expect("A", s["A"], add(t, (neg, mul(m, n0))), "Theta(m) A-part != -m n0")
        expect("B", s["B"], mul(n0, m), "Theta(m) B-part != n0 m")
    for n in pd.corners["N"]:
        s = pd.split(th(n))
        blocks["tau3"].append(s["M"])
        blocks["nu3"].append(s["N"])
        expect("A", s["A"], add(t, (neg, mul(m0, n))), "Theta(n) A-part != -m0 n")
        expect("B", s["B"], mul(n, m0), "Theta(n) B-part != n m0")
    for b in pd.corners["B"]:
        s = pd.split(th(b))
        blocks["mu4"].append(s["B"])
        expect("A", s["A"], {}, "Theta(B) meets A")
        expect("M", s["M"], add(t, (neg, mul(m0, b))), "Theta(b) M-part != -m0 b")
        expect("N", s["N"], add(t, (neg, mul(b, n0))), "Theta(b) N-part != -b n0")
    if bad:
        raise BlockFormError(sorted(set(bad)))
    return PeirceBlockForm(pd, {k: tuple(v) for k, v in blocks.items()}, m0, n0)


def reassemble(form: PeirceBlockForm) -> LinMap:
    """The map [[a, m], [n, b]] -> the general Jordan block shape."""
    pd = form.pd
    t = pd.table
    one, neg = t.field.one, -t.field.one
    mul = lambda x, y: multiply(t, x, y)
    m0, n0 = form.m0, form.n0
    images = []
    for j in range(t.dim):
        s = pd.split({j: one})
        a, m, n, b = s["A"], s["M"], s["N"], s["B"]
        images.append(add(
            t,
            (one, form.apply("delta1", a)), (neg, mul(m, n0)), (neg, mul(m0, n)),
            (one, mul(a, m0)), (neg, mul(m0, b)), (one, form.apply("tau2", m)),
            (one, form.apply("tau3", n)),
            (one, mul(n0, a)), (neg, mul(b, n0)), (one, form.apply("nu2", m)),
            (one, form.apply("nu3", n)),
            (one, mul(n0, m)), (one, mul(n, m0)), (one, form.apply("mu4", b)),
        ))
    return LinMap(t, images)


CONDITION_SETS = ("star1", "star2", "star3", "dia1", "dia2")


def check_block_conditions(pd: PeirceDecomposition, form: PeirceBlockForm,
                           which: str) -> list[str]:
    """Evaluate the identities characterizing derivations (``star1``),
    Jordan derivations (``star2``), Jordan derivations of a dual extension
    (``star3``), Jordan derivations of a generalized one-point extension
    (``dia1``) and anti-derivations (``dia2``) on all corner basis tuples.
    Returns the violated identities; empty means all hold."""
    if which not in CONDITION_SETS:
        raise ValueError(f"unknown condition set {which!r}")
    t = pd.table
    one, neg = t.field.one, -t.field.one
    mul = lambda x, y: multiply(t, x, y)
    ap = form.apply
    A, M, N, B = (pd.corners[c] for c in ("A", "M", "N", "B"))
    m0, n0 = form.m0, form.n0
    out: list[str] = []

    def lin(*terms):
        return add(t, *terms) if terms else {}

    def need(label: str, cases: Iterable, lhs: Callable, rhs: Callable = lambda *a: {}):
        for args in cases:
            if lhs(*args) != rhs(*args):
                out.append(label)
                return

    def pairs(X, Y):
        return [(x, y) for x in X for y in Y]

    def upairs(X):
        return [(X[i], X[j]) for i in range(len(X)) for j in range(i, len(X))]

    def derivation_on(name, X, label):
        need(label, pairs(X, X), lambda x, y: ap(name, mul(x, y)),
             lambda x, y: lin((one, mul(ap(name, x), y)), (one, mul(x, ap(name, y)))))

    def jordan_on(name, X, label):
        jor = lambda x, y: lin((one, mul(x, y)), (one, mul(y, x)))
        need(label, upairs(X), lambda x, y: ap(name, jor(x, y)),
             lambda x, y: lin((one, jor(ap(name, x), y)), (one, jor(x, ap(name, y)))))

    def anti_on(name, X, label):
        need(label, pairs(X, X), lambda x, y: ap(name, mul(x, y)),
             lambda x, y: lin((one, mul(ap(name, y), x)), (one, mul(y, ap(name, x)))))

    def zero_block(name):
        if not form.is_zero_block(name):
            out.append(f"{name} = 0")

    def delta_mn(k):
        need(f"({k}) delta1(mn) = tau2(m)n + m nu3(n)", pairs(M, N),
             lambda m, n: ap("delta1", mul(m, n)),
             lambda m, n: lin((one, mul(ap("tau2", m), n)), (one, mul(m, ap("nu3", n)))))

    def mu_nm(k):
        need(f"({k}) mu4(nm) = n tau2(m) + nu3(n)m", pairs(N, M),
             lambda n, m: ap("mu4", mul(n, m)),
             lambda n, m: lin((one, mul(n, ap("tau2", m))), (one, mul(ap("nu3", n), m))))

    def tau2_am(k):
        need(f"({k}) tau2(am) = a tau2(m) + delta1(a)m", pairs(A, M),
             lambda a, m: ap("tau2", mul(a, m)),
             lambda a, m: lin((one, mul(a, ap("tau2", m))), (one, mul(ap("delta1", a), m))))

    def tau2_mb(k, with_mu=True):
        label = f"({k}) tau2(mb) = tau2(m)b" + (" + m mu4(b)" if with_mu else "")
        need(label, pairs(M, B), lambda m, b: ap("tau2", mul(m, b)),
             lambda m, b: lin((one, mul(ap("tau2", m), b)),
                              *(((one, mul(m, ap("mu4", b))),) if with_mu else ())))

    def nu3_na(k):
        need(f"({k}) nu3(na) = nu3(n)a + n delta1(a)", pairs(N, A),
             lambda n, a: ap("nu3", mul(n, a)),
             lambda n, a: lin((one, mul(ap("nu3", n), a)), (one, mul(n, ap("delta1", a)))))

    def nu3_bn(k, with_mu=True):
        label = f"({k}) nu3(bn) = b nu3(n)" + (" + mu4(b)n" if with_mu else "")
        need(label, pairs(B, N), lambda b, n: ap("nu3", mul(b, n)),
             lambda b, n: lin((one, mul(b, ap("nu3", n))),
                              *(((one, mul(ap("mu4", b), n)),) if with_mu else ())))

    def tau3_linear(k):
        need(f"({k}) tau3(na) = a tau3(n)", pairs(N, A),
             lambda n, a: ap("tau3", mul(n, a)), lambda n, a: mul(a, ap("tau3", n)))
        need(f"({k}) tau3(bn) = tau3(n)b", pairs(B, N),
             lambda b, n: ap("tau3", mul(b, n)), lambda b, n: mul(ap("tau3", n), b))

    def nu2_linear(k):
        need(f"({k}) nu2(am) = nu2(m)a", pairs(A, M),
             lambda a, m: ap("nu2", mul(a, m)), lambda a, m: mul(ap("nu2", m), a))
        need(f"({k}) nu2(mb) = b nu2(m)", pairs(M, B),
             lambda m, b: ap("nu2", mul(m, b)), lambda m, b: mul(b, ap("nu2", m)))

    def annihilate_quadratic(k):
        # n tau3(n) = 0 for all n, polarized over basis pairs
        need(f"({k}) n tau3(n) = 0", upairs(N),
             lambda n, n2: lin((one, mul(n, ap("tau3", n2))), (one, mul(n2, ap("tau3", n)))))
        need(f"({k}) tau3(n)n = 0", upairs(N),
             lambda n, n2: lin((one, mul(ap("tau3", n), n2)), (one, mul(ap("tau3", n2), n))))
        need(f"({k + 1}) m nu2(m) = 0", upairs(M),
             lambda m, m2: lin((one, mul(m, ap("nu2", m2))), (one, mul(m2, ap("nu2", m)))))
        need(f"({k + 1}) nu2(m)m = 0", upairs(M),
             lambda m, m2: lin((one, mul(ap("nu2", m), m2)), (one, mul(ap("nu2", m2), m))))

    def no_pairing_terms(prefix):
        need(f"{prefix}m n0 = 0", [(m,) for m in M], lambda m: mul(m, n0))
        need(f"{prefix}m0 n = 0", [(n,) for n in N], lambda n: mul(m0, n))

    if which == "star1":
        zero_block("tau3")
        zero_block("nu2")
        derivation_on("delta1", A, "(1) delta1 is a derivation of A")
        delta_mn(1)
        derivation_on("mu4", B, "(2) mu4 is a derivation of B")
        mu_nm(2)
        tau2_am(3)
        tau2_mb(3)
        nu3_na(4)
        nu3_bn(4)
    elif which == "star2":
        jordan_on("delta1", A, "(1) delta1 is a Jordan derivation on A")
        delta_mn(1)
        jordan_on("mu4", B, "(2) mu4 is a Jordan derivation on B")
        mu_nm(2)
        tau2_am(3)
        tau2_mb(3)
        nu3_bn(4)
        nu3_na(4)
        tau3_linear(5)
        nu2_linear(6)
        annihilate_quadratic(5)
    elif which == "star3":
        zero_block("tau3")
        zero_block("nu2")
        no_pairing_terms("")
        jordan_on("delta1", A, "(1) delta1 is a Jordan derivation on A")
        derivation_on("mu4", B, "(2) mu4 is a derivation on B")
        mu_nm(2)
        tau2_am(3)
        tau2_mb(3)
        nu3_bn(4)
        nu3_na(4)
    elif which == "dia1":
        no_pairing_terms("")
        zero_block("mu4")
        need("n0 m = 0", [(m,) for m in M], lambda m: mul(n0, m))
        need("n m0 = 0", [(n,) for n in N], lambda n: mul(n, m0))
        jordan_on("delta1", A, "(1) delta1 is a Jordan derivation on A")
        tau2_am(2)
        tau2_mb(2, with_mu=False)
        nu3_bn(3, with_mu=False)
        nu3_na(3)
        tau3_linear(4)
        nu2_linear(5)
    else:  # dia2
        zero_block("tau2")
        zero_block("nu3")
        comm = lambda x, y: commutator(t, x, y)
        need("(1) [a,a']m0 = 0", pairs(A, A), lambda a, a2: mul(comm(a, a2), m0))
        need("(1) m0[b,b'] = 0", pairs(B, B), lambda b, b2: mul(m0, comm(b, b2)))
        need("(1) n0[a,a'] = 0", pairs(A, A), lambda a, a2: mul(n0, comm(a, a2)))
        need("(1) [b,b']n0 = 0", pairs(B, B), lambda b, b2: mul(comm(b, b2), n0))
        need("(2) m0 n = 0", [(n,) for n in N], lambda n: mul(m0, n))
        need("(2) n m0 = 0", [(n,) for n in N], lambda n: mul(n, m0))
        need("(2) m n0 = 0", [(m,) for m in M], lambda m: mul(m, n0))
        need("(2) n0 m = 0", [(m,) for m in M], lambda m: mul(n0, m))
        anti_on("delta1", A, "(3) delta1 is an anti-derivation on A")
        need("(3) delta1(mn) = 0", pairs(M, N), lambda m, n: ap("delta1", mul(m, n)))
        need("(3) delta1(a)m = 0", pairs(A, M), lambda a, m: mul(ap("delta1", a), m))
        need("(3) n delta1(a) = 0", pairs(N, A), lambda n, a: mul(n, ap("delta1", a)))
        anti_on("mu4", B, "(4) mu4 is an anti-derivation on B")
        need("(4) mu4(nm) = 0", pairs(N, M), lambda n, m: ap("mu4", mul(n, m)))
        need("(4) m mu4(b) = 0", pairs(M, B), lambda m, b: mul(m, ap("mu4", b)))
        need("(4) mu4(b)n = 0", pairs(B, N), lambda b, n: mul(ap("mu4", b), n))
        tau3_linear(5)
        need("(5) n tau3(n') = 0", pairs(N, N), lambda n, n2: mul(n, ap("tau3", n2)))
        need("(5) tau3(n)n' = 0", pairs(N, N), lambda n, n2: mul(ap("tau3", n), n2))
        nu2_linear(6)
        need("(6) m nu2(m') = 0", pairs(M, M), lambda m, m2: mul(m, ap("nu2", m2)))
        need("(6) nu2(m)m' = 0", pairs(M, M), lambda m, m2: mul(ap("nu2", m), m2))
    return out


# --------------------------------------------------------------------------
# map file format


class MapSyntaxError(QuiverError):
    pass


def path_vector(t: AlgebraTable, p: Path) -> Vec:
    """The element of ``t`` represented by the path ``p``."""
    if p.is_trivial:
        return {t.vertex_idempotents[p.start]: t.field.one}
    q = t.source.quiver
    x = None
    for name in p.arrows:
        a = q.arrow(name)
        y = {t.index[Path(a.source, a.target, (name,))]: t.field.one}
        x = y if x is None else multiply(t, x, y)
    return x


def parse_map(t: AlgebraTable, text: str) -> LinMap:
    q = t.source.quiver
    images: list[Vec] = [{} for _ in range(t.dim)]
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise MapSyntaxError(f"line {lineno}: expected 'PATH -> images'")
        src = parse_combination(q, lhs, lineno, 0)
        if len(src) != 1 or src[0][0] != 1:
            raise MapSyntaxError(f"line {lineno}: left side must be a single basis path")
        p = src[0][1]
        if p not in t.index:
            raise MapSyntaxError(f"line {lineno}: {p} is not a basis path")
        j = t.index[p]
        if j in seen:
            raise MapSyntaxError(f"line {lineno}: image of {p} given twice")
        seen.add(j)
        if rhs.strip() in ("0", ""):
            continue
        terms = parse_combination(q, rhs, lineno, len(lhs) + 2)
        images[j] = add(t, *((t.field(c), path_vector(t, path)) for c, path in terms))
    return LinMap(t, images)


def format_vector(t: AlgebraTable, x: Vec, ascii_names: bool = False) -> str:
    F = t.field
    terms = [(Fraction(F.to_signed(x[k])), t.basis[k]) for k in sorted(x)]
    return format_combination(terms, ascii_names)


def format_map(th: LinMap, ascii_names: bool = False) -> str:
    t = th.table
    lines = []
    for j, img in enumerate(th.images):
        if img:
            lines.append(f"{t.basis[j].text(ascii_names)} -> {format_vector(t, img, ascii_names)}")
    return "\n".join(lines) + ("\n" if lines else "")
