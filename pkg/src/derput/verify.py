"""Theorem-level checks, a seeded instance generator and corpus runs.

Every check takes the underlying quiver with relations, builds the relevant
extension algebra itself and returns a :class:`Verdict`.  Checks compare
subspaces, never dimensions alone.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algebra import (AlgebraError, AlgebraTable, build_algebra, center, commutator,
                      dual_extension_algebra, is_central, one_point_extension_algebra,
                      pairing_is_zero, peirce, vertex_idempotent)
from .dersolve import project, solve, subspace_contains, subspace_equal, subspace_sum
from .field import QQ, Field
from .linmap import (LinMap, format_map, format_vector, is_anti_derivation, is_derivation,
                     is_jordan_derivation)
from .quiver import Arrow, Path, Quiver, QuiverWithRelations, Relation

PASS, FAIL, NA = "PASS", "FAIL", "N/A"

CONSTRUCTIONS = ("plain", "dual_extension", "one_point_extension")
SHAPES = ("any", "nocompose")
CHECKS = ("structure", "3.4", "4.6", "3.10", "3.11", "3.6", "4.2")
DEFAULT_CHECKS = {
    "plain": ("structure",),
    "dual_extension": ("structure", "3.4", "3.10", "3.11", "3.6"),
    "one_point_extension": ("structure", "4.6", "4.2"),
}


@dataclass(frozen=True)
class Verdict:
    name: str
    status: str
    dims: tuple = ()               # ((label, value), ...) in report order
    witness: LinMap | None = None
    conditions: tuple = ()
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def summary(self) -> str:
        parts = [self.status]
        if self.note:
            parts.append(self.note)
        parts.extend(f"{k}={v}" for k, v in self.dims)
        return " ".join(parts)

    def details(self) -> list[str]:
        out = [f"  condition: {c}" for c in self.conditions]
        if self.witness is not None:
            out.append("  witness:")
            out.extend("    " + ln for ln in format_map(self.witness).splitlines())
        return out


def _fail(name, dims, witness=None, conditions=(), note=""):
    if witness is None and not conditions:
        raise AssertionError(f"{name}: failure without a witness")
    return Verdict(name, FAIL, tuple(dims), witness, tuple(conditions), note)


def _outside(space, sub):
    """First basis vector of ``sub`` not in ``space``."""
    for v in sub.basis:
        if not space.contains_vector(v):
            return v
    return None


# --------------------------------------------------------------------------
# theorem checks


def check_theorem_3_4(q: QuiverWithRelations, field_: Field = QQ) -> Verdict:
    """Jordan derivations of the dual extension are derivations."""
    t = dual_extension_algebra(q, field_)
    der, jor = solve(t, "der"), solve(t, "jordan")
    if subspace_equal(der, jor):
        return Verdict("3.4", PASS, note=f"dim(Jordan)=dim(Der)={der.dim}")
    dims = [("dim(Jordan)", jor.dim), ("dim(Der)", der.dim)]
    v = _outside(der, jor)
    if v is None:
        v = _outside(jor, der)
        w = LinMap.from_vector(t, v)
        assert not is_jordan_derivation(t, w)
        return _fail("3.4", dims, w, ["derivation outside the Jordan space"])
    w = LinMap.from_vector(t, v)
    assert is_jordan_derivation(t, w) and not is_derivation(t, w)
    return _fail("3.4", dims, w, ["Jordan derivation that is not a derivation"])


def composable_pair(q: Quiver):
    for a in q.arrows:
        for b in q.arrows:
            if a.target == b.source:
                return a, b
    return None


def check_theorem_4_6(q: QuiverWithRelations, field_: Field = QQ) -> Verdict:
    """Without composable arrows, Jordan = Der + AntiDer on the one-point
    extension."""
    if len(q.quiver.vertices) < 2:
        return Verdict("4.6", NA, note="hypothesis not met: fewer than 2 vertices")
    t = one_point_extension_algebra(q, field_)
    der, anti, jor = solve(t, "der"), solve(t, "antider"), solve(t, "jordan")
    s = subspace_sum(der, anti)
    contained = subspace_contains(jor, s)
    dims = [("dim(Der)", der.dim), ("dim(AntiDer)", anti.dim), ("dim(Jordan)", jor.dim)]
    pair = composable_pair(q.quiver)
    if pair is not None:
        a, b = pair
        note = (f"hypothesis not met: {b.name}.{a.name} composable;"
                f" Der+AntiDer<=Jordan {'holds' if contained else 'FAILS'}")
        if not contained:
            w = LinMap.from_vector(t, _outside(jor, s))
            return _fail("4.6", dims, w, ["sum element outside the Jordan space"], note)
        return Verdict("4.6", NA, tuple(dims), note=note)
    if contained and subspace_equal(jor, s):
        return Verdict("4.6", PASS, tuple(dims),
                       note=f"dim(Jordan)=dim(Der+AntiDer)={s.dim}")
    if not contained:
        w = LinMap.from_vector(t, _outside(jor, s))
        assert not is_jordan_derivation(t, w)
        return _fail("4.6", dims, w, ["sum element outside the Jordan space"])
    w = LinMap.from_vector(t, _outside(s, jor))
    assert is_jordan_derivation(t, w)
    return _fail("4.6", dims, w, ["Jordan derivation outside Der+AntiDer"])


def check_lemma_3_10(q: QuiverWithRelations, field_: Field = QQ) -> Verdict:
    """f(1) is central for every Jordan generalized derivation (f, d) of the
    dual extension."""
    t = dual_extension_algebra(q, field_)
    jg = solve(t, "jgen")
    for f, _ in jg.maps(t):
        z = f(t.unit)
        if not is_central(t, z):
            bad = next(i for i in range(t.dim) if commutator(t, z, {i: t.field.one}))
            return _fail("3.10", [("dim(JGen)", jg.dim)], f,
                         [f"f(1) = {format_vector(t, z)} does not commute with {t.label(bad)}"])
    return Verdict("3.10", PASS, (("dim(JGen)", jg.dim), ("dim(Z)", len(center(t)))),
                   note="f(1) central for every basis pair")


def _projection_check(name: str, kind: str, q, field_) -> Verdict:
    t = dual_extension_algebra(q, field_)
    n2 = t.dim ** 2
    big = project(solve(t, kind), 0, n2, kind + "_f")
    gen = project(solve(t, "gen"), 0, n2, "gen_f")
    dims = [(f"dim(pi {kind})", big.dim), ("dim(pi gen)", gen.dim)]
    v = _outside(gen, big)
    if v is None:
        return Verdict(name, PASS, tuple(dims), note=f"pi({kind})<=pi(gen)")
    return _fail(name, dims, LinMap.from_vector(t, v),
                 [f"first component of a {kind} pair is not the first component of any "
                  "generalized derivation"])


def check_prop_3_11(q: QuiverWithRelations, field_: Field = QQ) -> Verdict:
    return _projection_check("3.11", "jgen", q, field_)


def check_cor_3_6(q: QuiverWithRelations, field_: Field = QQ) -> Verdict:
    return _projection_check("3.6", "genjordan", q, field_)


def lemma_4_2_violations(t: AlgebraTable, th: LinMap) -> list[str]:
    """Support conditions for an anti-derivation of a one-point extension:
    trivial paths map into nontrivial paths through their vertex, an arrow
    r -> t maps into paths t -> r, longer paths map to 0."""
    out = []
    for j, p in enumerate(t.basis):
        img = th.images[j]
        if not img:
            continue
        if p.length >= 2:
            out.append(f"{p} has length >= 2 but maps to {format_vector(t, img)}")
            continue
        for k in img:
            b = t.basis[k]
            if p.is_trivial:
                ok = not b.is_trivial and p.start in (b.start, b.end)
            else:
                ok = b.start == p.end and b.end == p.start
            if not ok:
                out.append(f"image of {p} involves {b}, outside the allowed support")
    return out


def continuation_violations(t: AlgebraTable, th: LinMap) -> list[str]:
    """Arrows that compose nontrivially with some nontrivial path yet have a
    nonzero image.  Binomial relations can make such anti-derivations exist,
    so this is reported next to the verdict rather than folded into it."""
    out = []
    for j, p in enumerate(t.basis):
        if p.length != 1 or not th.images[j]:
            continue
        for i, b in enumerate(t.basis):
            if not b.is_trivial and (t.product(i, j) or t.product(j, i)):
                out.append(f"{p} composes with {b} yet maps to "
                           f"{format_vector(t, th.images[j])}")
                break
    return out


def check_lemma_4_2(q: QuiverWithRelations, field_: Field = QQ) -> Verdict:
    if len(q.quiver.vertices) < 2:
        return Verdict("4.2", NA, note="hypothesis not met: fewer than 2 vertices")
    t = one_point_extension_algebra(q, field_)
    anti = solve(t, "antider")
    cont = []
    for th in anti.maps(t):
        bad = lemma_4_2_violations(t, th)
        if bad:
            assert is_anti_derivation(t, th)
            return _fail("4.2", [("dim(AntiDer)", anti.dim)], th, bad)
        cont.extend(continuation_violations(t, th))
    dims = (("dim(AntiDer)", anti.dim), ("continuation_exceptions", len(cont)))
    return Verdict("4.2", PASS, dims, conditions=tuple(cont),
                   note="support pattern holds for every basis anti-derivation")


def structure_algebra(q: QuiverWithRelations, construction: str, field_: Field = QQ):
    if construction == "dual_extension":
        return dual_extension_algebra(q, field_)
    if construction == "one_point_extension":
        return one_point_extension_algebra(q, field_)
    return build_algebra(q, field_)


def check_structure_invariants(q: QuiverWithRelations, construction: str = "plain",
                               field_: Field = QQ) -> Verdict:
    """Associativity, unit, idempotents, solver containments, the inner
    derivation dimension identity and the vanishing pairings."""
    # the builders run the associativity, unit and idempotent checks
    try:
        t = structure_algebra(q, construction, field_)
    except AlgebraError as exc:
        return _fail("structure", [], conditions=[str(exc)])
    bad = []
    inner, der, jor, anti = (solve(t, k) for k in ("inner", "der", "jordan", "antider"))
    z = len(center(t))
    if not subspace_contains(der, inner):
        bad.append("Inner is not contained in Der")
    if not subspace_contains(jor, der):
        bad.append("Der is not contained in Jordan")
    if not subspace_contains(jor, anti):
        bad.append("AntiDer is not contained in Jordan")
    if inner.dim != t.dim - z:
        bad.append(f"dim Inner = {inner.dim} but dim A - dim Z = {t.dim - z}")
    if construction != "plain" and len(q.quiver.vertices) >= 2:
        wanted = ("MN",) if construction == "dual_extension" else ("MN", "NM")
        for s in q.quiver.sources():
            rest = [v for v in q.quiver.vertices if v != s]
            pd = peirce(t, vertex_idempotent(t, rest))
            for w in wanted:
                if not pairing_is_zero(pd, w):
                    bad.append(f"pairing {w} nonzero at e = 1 - e{s}")
    dims = [("dim", t.dim), ("dim(Z)", z), ("dim(Inner)", inner.dim), ("dim(Der)", der.dim),
            ("dim(AntiDer)", anti.dim), ("dim(Jordan)", jor.dim)]
    if bad:
        return _fail("structure", dims, conditions=bad)
    return Verdict("structure", PASS, tuple(dims))


def run_check(name: str, q: QuiverWithRelations, construction: str = "plain",
              field_: Field = QQ) -> Verdict:
    if name == "structure":
        return check_structure_invariants(q, construction, field_)
    return CHECK_FUNCS[name](q, field_)


CHECK_FUNCS = {
    "3.4": check_theorem_3_4,
    "4.6": check_theorem_4_6,
    "3.10": check_lemma_3_10,
    "3.11": check_prop_3_11,
    "3.6": check_cor_3_6,
    "4.2": check_lemma_4_2,
}


# --------------------------------------------------------------------------
# instance generation


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    seed: int
    vertices: int
    max_arrows: int
    density: Fraction = Fraction(0)
    construction: str = "dual_extension"
    shape: str = "any"

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise SpecError("seed must be a 64-bit unsigned integer")
        if self.vertices < 1:
            raise SpecError("need at least one vertex")
        if self.max_arrows < 0:
            raise SpecError("max_arrows must be non-negative")
        if self.density < 0:
            raise SpecError("density must be non-negative")
        if self.construction not in CONSTRUCTIONS:
            raise SpecError(f"construction must be one of {', '.join(CONSTRUCTIONS)}")
        if self.shape not in SHAPES:
            raise SpecError(f"shape must be one of {', '.join(SHAPES)}")

    def line(self) -> str:
        s = f"{self.seed} {self.vertices} {self.max_arrows} {self.density} {self.construction}"
        return s if self.shape == "any" else s + " " + self.shape


@dataclass(frozen=True)
class Instance:
    spec: InstanceSpec
    quiver: QuiverWithRelations
    relations_requested: int
    relations_placed: int = field(default=0)


def _paths_by_ends(arrows, vertices):
    """All paths of length >= 2, grouped by (start, end); arrows go up."""
    out: dict = {}
    by_src: dict = {}
    for a in arrows:
        by_src.setdefault(a.source, []).append(a)
    frontier = [Path(a.source, a.target, (a.name,)) for a in arrows]
    while frontier:
        nxt = []
        for p in frontier:
            for a in by_src.get(p.end, ()):
                np_ = Path(p.start, a.target, (a.name,) + p.arrows)
                nxt.append(np_)
                out.setdefault((np_.start, np_.end), []).append(np_)
        frontier = nxt
    return out


def generate(spec: InstanceSpec) -> Instance:
    rng = random.Random(spec.seed)
    n = spec.vertices
    k = rng.randint(0, spec.max_arrows) if n >= 2 else 0
    arrows = []
    if spec.shape == "nocompose" and n >= 2:
        cut = rng.randint(1, n - 1)     # arrows run from {1..cut} to {cut+1..n}
        for i in range(k):
            arrows.append(Arrow(f"a{i + 1}", rng.randint(1, cut), rng.randint(cut + 1, n)))
    else:
        for i in range(k):
            s, e = sorted(rng.sample(range(1, n + 1), 2))
            arrows.append(Arrow(f"a{i + 1}", s, e))
    q = Quiver(tuple(range(1, n + 1)), tuple(arrows))
    want = round(spec.density * len(arrows))
    rels = []
    if want:
        groups = _paths_by_ends(arrows, q.vertices)
        pairs = [pr for key in sorted(groups) for pr in combinations(groups[key], 2)]
        chosen = rng.sample(pairs, min(want, len(pairs)))
        one = Fraction(1)
        rels = [Relation(((one, p), (-one, r))) for p, r in chosen]
    qr = QuiverWithRelations(q, tuple(rels))
    return Instance(spec, qr, want, len(rels))


def generate_instance(spec: InstanceSpec) -> QuiverWithRelations:
    return generate(spec).quiver


# --------------------------------------------------------------------------
# manifests and corpus runs


def parse_manifest(text: str) -> list[InstanceSpec]:
    specs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) not in (5, 6):
            raise SpecError(f"manifest line {lineno}: expected "
                            "'seed vertices max_arrows density construction [shape]'")
        try:
            spec = InstanceSpec(int(line[0]), int(line[1]), int(line[2]), Fraction(line[3]),
                                line[4], line[5] if len(line) == 6 else "any")
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"manifest line {lineno}: {exc}") from None
        specs.append(spec)
    return specs


def format_manifest(specs) -> str:
    return "".join(s.line() + "\n" for s in specs)


@dataclass(frozen=True)
class InstanceResult:
    spec: InstanceSpec
    relations: str
    verdicts: tuple       # ((check, status, summary, detail lines), ...)

    @property
    def failed(self) -> bool:
        return any(v[1] == FAIL for v in self.verdicts)


def run_instance(spec: InstanceSpec, checks=None, field_: Field = QQ) -> InstanceResult:
    inst = generate(spec)
    out = []
    for name in checks or DEFAULT_CHECKS[spec.construction]:
        v = run_check(name, inst.quiver, spec.construction, field_)
        out.append((name, v.status, v.summary(), tuple(v.details())))
    return InstanceResult(spec, f"{inst.relations_placed}/{inst.relations_requested}",
                          tuple(out))


def _run_star(args):
    return run_instance(*args)


def run_corpus(specs, checks=None, threads: int = 1, field_: Field = QQ) -> list[InstanceResult]:
    """Results in manifest order regardless of the worker count."""
    jobs = [(s, tuple(checks) if checks else None, field_) for s in specs]
    if threads <= 1 or len(jobs) <= 1:
        return [_run_star(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_run_star, jobs))


def standard_corpus(count: int, construction: str, shape: str = "any",
                    max_vertices: int = 6, max_arrows: int = 8, first_seed: int = 0,
                    densities=(Fraction(0), Fraction(1, 2))) -> list[InstanceSpec]:
    """A reproducible manifest: vertex counts cycle through 2..max_vertices and
    densities alternate."""
    out = []
    for i in range(count):
        out.append(InstanceSpec(first_seed + i, 2 + i % (max_vertices - 1), max_arrows,
                                densities[i % len(densities)], construction, shape))
    return out
