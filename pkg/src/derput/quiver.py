"""Finite quivers with relations, their text format, and the doubled quivers
used by dual extensions and generalized one-point extensions.

Paths are written the usual way for right-to-left composition: the path
``b.a`` means "first ``a``, then ``b``".  A :class:`Path` stores its arrow
names in that written order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Sequence

STAR = "*"
STAR_ASCII = "_star"


class QuiverError(ValueError):
    """Invalid quiver data (bad arrow, bad relation, cyclic input ...)."""


class QuiverSyntaxError(QuiverError):
    def __init__(self, msg: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + msg)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Path:
    start: int
    end: int
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __len__(self):
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def text(self, ascii_names: bool = False) -> str:
        if not self.arrows:
            return f"e[{self.start}]"
        names = self.arrows
        if ascii_names:
            names = tuple(encode_name(a) for a in names)
        return ".".join(names)

    def __str__(self):
        return self.text()


def trivial(v: int) -> Path:
    return Path(v, v, ())


@dataclass(frozen=True)
class Relation:
    terms: tuple[tuple[Fraction, Path], ...]

    @property
    def start(self) -> int:
        return self.terms[0][1].start

    @property
    def end(self) -> int:
        return self.terms[0][1].end

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1


def encode_name(name: str) -> str:
    """Internal ``a*`` -> file-safe ``a_star``."""
    base = name.rstrip(STAR)
    return base + STAR_ASCII * (len(name) - len(base))


def decode_name(name: str) -> str:
    """File-safe ``a_star`` (or ``a*``) -> internal ``a*``."""
    stars = 0
    while name.endswith(STAR):
        name, stars = name[:-1], stars + 1
    while name.endswith(STAR_ASCII) and len(name) > len(STAR_ASCII):
        name, stars = name[: -len(STAR_ASCII)], stars + 1
    return name + STAR * stars


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[int, ...]
    arrows: tuple[Arrow, ...] = ()
    _by_name: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not self.vertices:
            raise QuiverError("vertex set is empty")
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        vs = set(self.vertices)
        by_name = {}
        for a in self.arrows:
            if a.name in by_name:
                raise QuiverError(f"duplicate arrow name {a.name!r}")
            if a.source not in vs or a.target not in vs:
                raise QuiverError(f"arrow {a.name!r}: endpoint not declared")
            by_name[a.name] = a
        object.__setattr__(self, "_by_name", by_name)

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise QuiverError(f"unknown arrow {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def path(self, names: Sequence[str]) -> Path:
        """Path from written-order arrow names (leftmost acts last)."""
        names = tuple(names)
        if not names:
            raise QuiverError("empty arrow sequence; use trivial(v)")
        arrows = [self.arrow(n) for n in names]
        for later, earlier in zip(arrows, arrows[1:]):
            if earlier.target != later.source:
                raise QuiverError(
                    f"path {'.'.join(names)} is not composable at {later.name}.{earlier.name}"
                )
        return Path(arrows[-1].source, arrows[0].target, names)

    def sources(self) -> list[int]:
        has_in = {a.target for a in self.arrows}
        return [v for v in self.vertices if v not in has_in]

    def is_acyclic(self) -> bool:
        return is_acyclic(self)

    def has_composable_arrows(self) -> bool:
        """True iff some path of length two exists."""
        targets = {a.target for a in self.arrows}
        return any(a.source in targets for a in self.arrows)


def is_acyclic(q: Quiver) -> bool:
    ts = TopologicalSorter({v: set() for v in q.vertices})
    for a in q.arrows:
        if a.source == a.target:
            return False
        ts.add(a.target, a.source)
    try:
        ts.prepare()
    except CycleError:
        return False
    return True


@dataclass(frozen=True)
class QuiverWithRelations:
    quiver: Quiver
    relations: tuple[Relation, ...] = ()

    def __post_init__(self):
        for rel in self.relations:
            validate_relation(self.quiver, rel)


def validate_relation(q: Quiver, rel: Relation) -> None:
    if not rel.terms:
        raise QuiverError("empty relation")
    s, e = rel.terms[0][1].start, rel.terms[0][1].end
    for c, p in rel.terms:
        if c == 0:
            raise QuiverError("zero coefficient in relation")
        if p.length < 2:
            raise QuiverError(f"relation term {p} has length < 2")
        if q.path(p.arrows) != p:
            raise QuiverError(f"relation term {p} has wrong endpoints")
        if (p.start, p.end) != (s, e):
            raise QuiverError("relation paths not parallel")


# --------------------------------------------------------------------------
# text format

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<triv>e\[\s*-?\d+\s*\])
      | (?P<num>\d+(?:/\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*\**)
      | (?P<op>[.*+\-])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str, line: int, col0: int):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise QuiverSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                                    line, col0 + pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip())))
        kind = m.lastgroup
        val = m.group(kind)
        out.append((kind, val, col0 + m.start(kind) + 1))
        pos = m.end()
    return out


def parse_combination(q: Quiver, text: str, line: int = 0, col0: int = 0,
                      ) -> list[tuple[Fraction, Path]]:
    """Parse ``c1*p1 + c2*p2 - ...``; a missing coefficient means 1."""
    toks = _tokenize(text, line, col0)
    if not toks:
        raise QuiverSyntaxError("empty expression", line, col0 + 1)
    terms = []
    i = 0

    def err(msg, k):
        col = toks[k][2] if k < len(toks) else col0 + len(text) + 1
        raise QuiverSyntaxError(msg, line, col)

    while i < len(toks):
        sign = 1
        if toks[i][0] == "op" and toks[i][1] in "+-":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif terms:
            err("expected '+' or '-'", i)
        coef = Fraction(1)
        if i < len(toks) and toks[i][0] == "num":
            coef = Fraction(toks[i][1])
            i += 1
            if i >= len(toks) or toks[i] [:2] != ("op", "*"):
                err("expected '*' after coefficient", i)
            i += 1
        if i >= len(toks):
            err("expected a path", i)
        kind, val, col = toks[i]
        if kind == "triv":
            v = int(val[2:-1])
            if v not in q.vertices:
                raise QuiverSyntaxError(f"vertex {v} not declared", line, col)
            path = trivial(v)
            i += 1
        elif kind == "name":
            names = [decode_name(val)]
            i += 1
            while i < len(toks) and toks[i][:2] == ("op", "."):
                i += 1
                if i >= len(toks) or toks[i][0] != "name":
                    err("expected arrow name after '.'", i)
                names.append(decode_name(toks[i][1]))
                i += 1
            try:
                path = q.path(names)
            except QuiverError as exc:
                raise QuiverSyntaxError(str(exc), line, col) from None
        else:
            err("expected a path", i)
        terms.append((sign * coef, path))
    return terms


def parse_quiver(text: str) -> QuiverWithRelations:
    vertices = None
    arrows: list[Arrow] = []
    rel_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head, sep, rest = line.partition(":")
        key = head.strip()
        col_rest = len(head) + 1
        if not sep:
            raise QuiverSyntaxError("expected 'keyword:'", lineno, 1)
        if key == "vertices":
            if vertices is not None:
                raise QuiverSyntaxError("'vertices:' given twice", lineno, 1)
            if arrows or rel_lines:
                raise QuiverSyntaxError("'vertices:' must come first", lineno, 1)
            vertices = []
            for m in re.finditer(r"\S+", rest):
                if not re.fullmatch(r"-?\d+", m.group()):
                    raise QuiverSyntaxError(f"bad vertex id {m.group()!r}",
                                            lineno, col_rest + m.start() + 1)
                v = int(m.group())
                if v in vertices:
                    raise QuiverSyntaxError(f"duplicate vertex {v}", lineno,
                                            col_rest + m.start() + 1)
                vertices.append(v)
            if not vertices:
                raise QuiverSyntaxError("no vertices", lineno, col_rest + 1)
            continue
        if vertices is None:
            raise QuiverSyntaxError("'vertices:' must come first", lineno, 1)
        m = re.fullmatch(r"\s*arrow\s+([A-Za-z_][A-Za-z0-9_]*\**)\s*", head)
        if m:
            name = decode_name(m.group(1))
            am = re.fullmatch(r"\s*(-?\d+)\s*->\s*(-?\d+)\s*", rest)
            if not am:
                raise QuiverSyntaxError("expected 'SRC -> DST'", lineno, col_rest + 1)
            src, dst = int(am.group(1)), int(am.group(2))
            if any(a.name == name for a in arrows):
                raise QuiverSyntaxError(f"duplicate arrow name {name!r}", lineno,
                                        m.start(1) + 1)
            for v, g in ((src, 1), (dst, 2)):
                if v not in vertices:
                    raise QuiverSyntaxError(f"endpoint {v} not declared", lineno,
                                            col_rest + am.start(g) + 1)
            arrows.append(Arrow(name, src, dst))
        elif key == "relation":
            rel_lines.append((lineno, rest, col_rest))
        else:
            raise QuiverSyntaxError(f"unknown keyword {key!r}", lineno, 1)
    if vertices is None:
        raise QuiverSyntaxError("missing 'vertices:' line")
    q = Quiver(tuple(vertices), tuple(arrows))
    rels = []
    for lineno, rest, col0 in rel_lines:
        terms = parse_combination(q, rest, lineno, col0)
        rel = Relation(tuple(terms))
        try:
            validate_relation(q, rel)
        except QuiverError as exc:
            raise QuiverSyntaxError(str(exc), lineno, col0 + 1) from None
        rels.append(rel)
    return QuiverWithRelations(q, tuple(rels))


def format_combination(terms: Iterable[tuple], ascii_names: bool = True) -> str:
    out = []
    for c, p in terms:
        c = Fraction(c)
        txt = f"{abs(c)}*{p.text(ascii_names)}"
        if not out:
            out.append(txt if c > 0 else "-" + txt)
        else:
            out.append(("+ " if c > 0 else "- ") + txt)
    return " ".join(out) if out else "0"


def serialize_quiver(qr: QuiverWithRelations) -> str:
    q = qr.quiver
    lines = ["vertices: " + " ".join(str(v) for v in q.vertices)]
    for a in q.arrows:
        lines.append(f"arrow {encode_name(a.name)}: {a.source} -> {a.target}")
    for rel in qr.relations:
        lines.append("relation: " + format_combination(rel.terms))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# constructions

def _star_path(p: Path) -> Path:
    return Path(p.end, p.start, tuple(a + STAR for a in reversed(p.arrows)))


def star_quiver(qr: QuiverWithRelations) -> QuiverWithRelations:
    q = qr.quiver
    arrows = []
    for a in q.arrows:
        name = a.name + STAR
        if q.has_arrow(name):
            raise QuiverError(f"starred name {name!r} collides with a declared arrow")
        arrows.append(Arrow(name, a.target, a.source))
    rels = tuple(Relation(tuple((c, _star_path(p)) for c, p in r.terms))
                 for r in qr.relations)
    return QuiverWithRelations(Quiver(q.vertices, tuple(arrows)), rels)


def _require_acyclic(q: Quiver):
    if not is_acyclic(q):
        raise QuiverError("input quiver has an oriented cycle")


def _double(qr: QuiverWithRelations, also_star_first: bool) -> QuiverWithRelations:
    _require_acyclic(qr.quiver)
    st = star_quiver(qr)
    q = qr.quiver
    doubled = Quiver(q.vertices, q.arrows + st.quiver.arrows)
    one = Fraction(1)
    extra = []
    for a in q.arrows:
        for b in q.arrows:
            # a.b*: b* runs e(b) -> s(b), then a leaves s(a)
            if a.source == b.source:
                extra.append(Relation(((one, Path(b.target, a.target, (a.name, b.name + STAR))),)))
    if also_star_first:
        for a in q.arrows:
            for b in q.arrows:
                # a*.b: b runs to e(b), then a* leaves e(a)
                if a.target == b.target:
                    extra.append(Relation(((one, Path(b.source, a.source, (a.name + STAR, b.name))),)))
    return QuiverWithRelations(doubled, qr.relations + st.relations + tuple(extra))


def dual_extension_quiver(qr: QuiverWithRelations) -> QuiverWithRelations:
    return _double(qr, also_star_first=False)


def one_point_extension_quiver(qr: QuiverWithRelations) -> QuiverWithRelations:
    if len(qr.quiver.vertices) < 2:
        raise QuiverError("one-point extension needs at least 2 vertices")
    return _double(qr, also_star_first=True)


def relabel(qr: QuiverWithRelations, mapping: dict[int, int]) -> QuiverWithRelations:
    """Rename vertices (mapping must be a bijection on the vertex set)."""
    q = qr.quiver
    if sorted(mapping) != sorted(q.vertices) or len(set(mapping.values())) != len(mapping):
        raise QuiverError("relabeling is not a bijection of the vertex set")
    nq = Quiver(tuple(mapping[v] for v in q.vertices),
                tuple(Arrow(a.name, mapping[a.source], mapping[a.target]) for a in q.arrows))
    rels = tuple(Relation(tuple((c, Path(mapping[p.start], mapping[p.end], p.arrows))
                                for c, p in r.terms)) for r in qr.relations)
    return QuiverWithRelations(nq, rels)
