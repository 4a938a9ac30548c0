from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import COMMUTING, load, quiver
from derput.algebra import one_point_extension_algebra
from derput.dersolve import solve
from derput.linmap import LinMap, is_anti_derivation, is_derivation, is_jordan_derivation
from derput.quiver import is_acyclic, relabel
from derput.verify import (FAIL, NA, PASS, InstanceSpec, SpecError, check_cor_3_6,
                           check_lemma_3_10, check_lemma_4_2, check_prop_3_11,
                           check_structure_invariants, check_theorem_3_4, check_theorem_4_6,
                           continuation_violations, format_manifest, generate,
                           generate_instance, lemma_4_2_violations, parse_manifest,
                           run_corpus, run_instance, standard_corpus)

SINGLE = "vertices: 1"


def idx(t, label):
    return next(i for i in range(t.dim) if t.label(i) == label)


# --- theorem checks on named quivers -------------------------------------------

@pytest.mark.parametrize("name", ["a2.qv", "example41.qv", "final.qv"])
def test_jordan_equals_der_on_named_dual_extensions(name):
    v = check_theorem_3_4(load(name))
    assert v.status == PASS
    assert v.summary().startswith("PASS dim(Jordan)=dim(Der)=")


def test_jordan_splits_on_final_quiver():
    v = check_theorem_4_6(load("final.qv"))
    assert v.status == PASS
    dims = dict(v.dims)
    assert dims["dim(Jordan)"] > dims["dim(Der)"]


def test_jordan_splits_on_a2():
    assert check_theorem_4_6(load("a2.qv")).status == PASS


def test_split_check_hypothesis_not_met():
    v = check_theorem_4_6(load("example41.qv"))
    assert v.status == NA and v.passed
    assert "hypothesis not met" in v.note and "b.a composable" in v.note
    assert "Der+AntiDer<=Jordan holds" in v.note
    assert check_theorem_4_6(quiver(SINGLE)).status == NA


@pytest.mark.parametrize("check", [check_lemma_3_10, check_prop_3_11, check_cor_3_6])
@pytest.mark.parametrize("name", [None, "a2.qv", "example41.qv", "final.qv"])
def test_generalized_checks_named(check, name):
    q = load(name) if name else quiver(SINGLE)
    assert check(q).status == PASS


@pytest.mark.parametrize("name", ["final.qv", "example41.qv", "a2.qv"])
def test_anti_derivation_support_named(name):
    v = check_lemma_4_2(load(name))
    assert v.status == PASS
    assert dict(v.dims)["continuation_exceptions"] == 0


def test_continuing_arrows_killed_by_anti_derivations():
    """Arrows that continue to a nonzero path are killed by every anti-derivation."""
    t = one_point_extension_algebra(load("example41.qv"))
    a, b = idx(t, "a"), idx(t, "b")
    for th in solve(t, "antider").maps(t):
        assert not th.images[a] and not th.images[b]


def test_support_violation_detected():
    t = one_point_extension_algebra(load("final.qv"))
    bad = LinMap(t, [{idx(t, "a*"): Fraction(1)} if t.basis[j].is_trivial else {}
                     for j in range(t.dim)])
    assert lemma_4_2_violations(t, bad)


# --- binomial relations break three statements -----------------------------------

def test_commuting_relation_fails_jordan_equals_der():
    v = check_theorem_3_4(quiver(COMMUTING))
    assert v.status == FAIL
    t_w = v.witness
    assert is_jordan_derivation(t_w.table, t_w) and not is_derivation(t_w.table, t_w)
    assert "witness:" in "\n".join(v.details())


def test_commuting_relation_refutes_projection_checks():
    q = quiver(COMMUTING)
    assert check_lemma_3_10(q).status == PASS
    assert check_prop_3_11(q).status == FAIL
    assert check_cor_3_6(q).status == FAIL


def test_commuting_relation_continuation_exception():
    v = check_lemma_4_2(quiver(COMMUTING))
    assert v.status == PASS
    assert dict(v.dims)["continuation_exceptions"] >= 1
    t = one_point_extension_algebra(quiver(COMMUTING))
    bad = [th for th in solve(t, "antider").maps(t) if continuation_violations(t, th)]
    assert bad and all(is_anti_derivation(t, th) for th in bad)


# --- relabeling -------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(6))
def test_verdicts_invariant_under_relabeling(seed):
    spec = standard_corpus(6, "dual_extension", max_vertices=4)[seed]
    q = generate_instance(spec)
    vs = list(q.quiver.vertices)
    perm = vs[:]
    random.Random(seed).shuffle(perm)
    r = relabel(q, dict(zip(vs, perm)))
    for check in (check_theorem_3_4, check_theorem_4_6):
        a, b = check(q), check(r)
        assert (a.status, a.dims) == (b.status, b.dims)
        if a.status == PASS:
            assert a.note == b.note


# --- structure invariants -----------------------------------------------------------

@pytest.mark.parametrize("construction", ["plain", "dual_extension", "one_point_extension"])
@pytest.mark.parametrize("name", ["a2.qv", "example41.qv", "final.qv"])
def test_structure_invariants(name, construction):
    v = check_structure_invariants(load(name), construction)
    assert v.status == PASS, v.conditions


def test_structure_invariants_with_relations():
    for construction in ("plain", "dual_extension", "one_point_extension"):
        assert check_structure_invariants(quiver(COMMUTING), construction).passed


# --- generator ------------------------------------------------------------------------

def test_generator_deterministic_and_acyclic():
    specs = standard_corpus(50, "dual_extension")
    for spec in specs:
        a, b = generate(spec), generate(spec)
        assert a == b
        assert is_acyclic(a.quiver.quiver)
        assert len(a.quiver.quiver.vertices) <= 6 and len(a.quiver.quiver.arrows) <= 8
        assert a.relations_placed <= a.relations_requested
        for rel in a.quiver.relations:
            (c1, p), (c2, r) = rel.terms
            assert (c1, c2) == (1, -1) and p != r
            assert (p.start, p.end) == (r.start, r.end) and p.length >= 2 and r.length >= 2


def test_two_vertex_single_arrow_shapes():
    shapes = set()
    for seed in range(40):
        q = generate_instance(InstanceSpec(seed, 2, 1))
        shapes.add(tuple((a.source, a.target) for a in q.quiver.arrows))
    assert shapes == {(), ((1, 2),)}


def test_nocompose_shape_has_no_composable_arrows():
    for spec in standard_corpus(50, "one_point_extension", "nocompose"):
        q = generate_instance(spec).quiver
        assert not any(a.target == b.source for a in q.arrows for b in q.arrows)


def test_relation_shortfall_is_recorded():
    # two vertices carry no paths of length 2, so nothing can be placed
    inst = generate(InstanceSpec(3, 2, 8, Fraction(1)))
    assert (inst.relations_placed, inst.relations_requested) == (0, 3)


@pytest.mark.parametrize("kwargs", [
    dict(seed=-1, vertices=2, max_arrows=1),
    dict(seed=0, vertices=0, max_arrows=1),
    dict(seed=0, vertices=2, max_arrows=-1),
    dict(seed=0, vertices=2, max_arrows=1, density=Fraction(-1)),
    dict(seed=0, vertices=2, max_arrows=1, construction="tensor"),
    dict(seed=0, vertices=2, max_arrows=1, shape="tree"),
])
def test_bad_specs(kwargs):
    with pytest.raises(SpecError):
        InstanceSpec(**kwargs)


def test_manifest_roundtrip():
    specs = standard_corpus(10, "one_point_extension") + standard_corpus(3, "dual_extension",
                                                                         "nocompose")
    assert parse_manifest(format_manifest(specs)) == specs
    assert parse_manifest("# comment\n\n5 3 4 1/2 plain\n") == [
        InstanceSpec(5, 3, 4, Fraction(1, 2), "plain")]
    for bad in ("1 2 3", "x 2 3 0 plain", "1 2 3 1/0 plain", "1 2 3 0 nope"):
        with pytest.raises(SpecError):
            parse_manifest(bad)


def test_run_corpus_order_and_threads():
    specs = standard_corpus(6, "dual_extension", max_vertices=4)
    one = run_corpus(specs, ["3.4"], threads=1)
    two = run_corpus(specs, ["3.4"], threads=2)
    assert one == two
    assert [r.spec for r in one] == specs
    assert one[0] == run_instance(specs[0], ["3.4"])
