from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from derput.algebra import (AlgebraTable, build_algebra, dual_extension_algebra,
                            one_point_extension_algebra)
from derput.field import QQ
from derput.quiver import Arrow, Path as QPath, Quiver, QuiverWithRelations, parse_quiver

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

ACCEPTANCE_LINES: list[str] = []


def sample_path(name: str) -> Path:
    return SAMPLES / name


def load(name: str) -> QuiverWithRelations:
    return parse_quiver((SAMPLES / name).read_text())


def quiver(text: str) -> QuiverWithRelations:
    return parse_quiver(text)


def matrix_algebra_2() -> AlgebraTable:
    """Full 2x2 matrices over Q with matrix units e1=E11, e2=E22, a=E21,
    b=E12, built by hand (it is not an acyclic quiver algebra)."""
    q = Quiver((1, 2), (Arrow("a", 1, 2), Arrow("b", 2, 1)))
    qr = QuiverWithRelations(q, ())
    e1, e2 = QPath(1, 1, ()), QPath(2, 2, ())
    a, b = QPath(1, 2, ("a",)), QPath(2, 1, ("b",))
    basis = (e1, e2, a, b)
    one = Fraction(1)
    mult = {(0, 0): {0: one}, (1, 1): {1: one}, (2, 0): {2: one}, (1, 2): {2: one},
            (3, 1): {3: one}, (0, 3): {3: one}, (2, 3): {1: one}, (3, 2): {0: one}}
    left = [[] for _ in basis]
    right = [[] for _ in basis]
    for (i, j), v in sorted(mult.items()):
        left[i].append((j, v))
        right[j].append((i, v))
    return AlgebraTable(qr, QQ, basis, mult, ((),) * 4, {p: i for i, p in enumerate(basis)},
                        {1: 0, 2: 1}, tuple(map(tuple, left)), tuple(map(tuple, right)))


PATH3 = "vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3"
SINK = "vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 3 -> 2"
KRONECKER = "vertices: 1 2\narrow a: 1 -> 2\narrow b: 1 -> 2"
COMMUTING = ("vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 2 -> 3\n"
             "relation: b.a - c.a")


def small_algebras():
    """(name, table) pairs of dimension at most 6."""
    a2 = load("a2.qv")
    return [
        ("K", build_algebra(quiver("vertices: 1"))),
        ("A2", build_algebra(a2)),
        ("D(A2)", dual_extension_algebra(a2)),
        ("E(A2)", one_point_extension_algebra(a2)),
        ("M2", matrix_algebra_2()),
        ("path3", build_algebra(quiver(PATH3))),
        ("sink", build_algebra(quiver(SINK))),
        ("path3/ba", build_algebra(quiver(PATH3 + "\nrelation: b.a"))),
        ("E(kronecker)", one_point_extension_algebra(quiver(KRONECKER))),
    ]


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""
    def record(number: int, passed: bool, detail: str):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
