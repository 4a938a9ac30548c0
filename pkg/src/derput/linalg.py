"""Exact sparse linear algebra over :class:`~derput.field.Field`.

Vectors are dicts ``{index: nonzero scalar}``.  Two routes compute
nullspaces:

* :class:`Echelon`, a pure-Python incremental fully reduced echelon form,
  used for small systems and as the always-correct fallback;
* a modular route (dense RREF mod a word-sized prime through
  :mod:`derput.kernels`, rational reconstruction, exact check over Q) for
  large systems.

Both return the same canonical basis: the reduced row echelon basis of the
nullspace with leading entries at the smallest index.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .field import QQ, Field

Vec = dict

# primes below 2**31 so that products fit in int64
PRIMES = (2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
          2147483543, 2147483497, 2147483489)

MODULAR_THRESHOLD = 48


class Echelon:
    """Fully reduced echelon form maintained under insertion.

    ``leading="min"`` gives the usual RREF (pivot = smallest index);
    ``leading="max"`` uses the largest index as pivot.
    """

    def __init__(self, field: Field = QQ, leading: str = "min"):
        self.field = field
        self.rows: dict[int, Vec] = {}
        self._max = leading == "max"

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Vec) -> Vec:
        v = dict(vec)
        norm = self.field.norm
        rows = self.rows
        # rows vanish on each other's pivots, so one pass suffices
        for c in [c for c in v if c in rows]:
            a = v[c]
            for k, x in rows[c].items():
                y = norm(v.get(k, 0) - a * x)
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return v

    def insert(self, vec: Vec):
        """Add ``vec`` to the span; return its new pivot or None if dependent."""
        v = self.reduce(vec)
        if not v:
            return None
        F = self.field
        piv = max(v) if self._max else min(v)
        inv = F.inv(v[piv])
        if v[piv] != F.one:
            v = {k: F.norm(x * inv) for k, x in v.items()}
        for row in self.rows.values():
            a = row.get(piv)
            if a:
                for k, x in v.items():
                    y = F.norm(row.get(k, 0) - a * x)
                    if y:
                        row[k] = y
                    else:
                        del row[k]
        self.rows[piv] = v
        return piv

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[Vec]:
        return [dict(self.rows[c]) for c in sorted(self.rows)]


def rref(vectors: Iterable[Vec], field: Field = QQ) -> list[Vec]:
    ech = Echelon(field)
    for v in vectors:
        ech.insert(v)
    return ech.basis()


# --------------------------------------------------------------------------
# nullspaces


def _nullspace_exact(rows: Sequence[Vec], cols: Sequence[int], field: Field) -> list[Vec]:
    ech = Echelon(field, leading="max")
    for r in rows:
        ech.insert(r)
    # with pivots at the largest index, e_f - sum R[piv, f] e_piv already
    # has its leading entry at the free column f
    by_col: dict[int, list] = {}
    for piv, row in ech.rows.items():
        for k, x in row.items():
            if k != piv:
                by_col.setdefault(k, []).append((piv, x))
    out = []
    for f in cols:
        if f in ech.rows:
            continue
        v = {f: field.one}
        for piv, x in by_col.get(f, ()):
            v[piv] = field.neg(x)
        out.append(v)
    return out


def rational_reconstruct(a: int, m: int):
    """Return Fraction n/d with n = a d mod m, |n|, d <= sqrt(m/2); or None."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1, s0, s1 = m, a, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _modular_rref(int_rows, local, n, p):
    """RREF mod p of integer rows (dicts of global col -> int), columns mapped
    through ``local`` (global -> dense position).  Returns (R, pivots)."""
    batch = max(2 * n, 64)
    R = np.zeros((0, n), dtype=np.int64)
    for s in range(0, len(int_rows), batch):
        chunk = int_rows[s:s + batch]
        B = np.zeros((len(chunk), n), dtype=np.int64)
        for i, row in enumerate(chunk):
            for c, x in row.items():
                B[i, local[c]] = x % p
        A = np.ascontiguousarray(np.vstack([R, B]))
        rank, _ = kernels.rref_modp(A, p)
        R = A[:rank].copy()
    if R.shape[0] == 0:
        return R, []
    pivots = [int(np.flatnonzero(R[i])[0]) for i in range(R.shape[0])]
    return R, pivots


def _scale_to_int(row: Vec) -> dict:
    den = 1
    for x in row.values():
        den = math.lcm(den, x.denominator)
    return {c: int(x * den) for c, x in row.items()}


def _nullspace_modular(rows, cols, field: Field):
    """Nullspace via dense modular RREF.  Returns None if the rational route
    could not certify a result (caller falls back to the exact route)."""
    n = len(cols)
    # dense position = reversed global order, so RREF pivots sit at the
    # largest global index (same canonical form as the exact route)
    local = {c: n - 1 - i for i, c in enumerate(cols)}
    glob = list(reversed(cols))
    if field.p:
        if field.p >= 2 ** 31:
            return None
        R, pivots = _modular_rref([{c: int(x) for c, x in r.items()} for r in rows],
                                  local, n, field.p)
        return _free_basis(R, pivots, n, glob, lambda a: (-int(a)) % field.p, 1)

    int_rows = [_scale_to_int(r) for r in rows]
    best = None
    modulus, residues = 1, None
    for p in PRIMES:
        R, pivots = _modular_rref(int_rows, local, n, p)
        if best is not None and len(pivots) < len(best):
            continue                       # unlucky prime, rank dropped
        if best is None or len(pivots) > len(best) or pivots != best:
            best, modulus, residues = pivots, 1, None
        # combine the pivot-row / free-column block across primes by CRT
        R = R % p
        if residues is None:
            residues = R.astype(object)
        else:
            inv = pow(modulus, -1, p)
            residues = residues + modulus * (((R.astype(object) - residues) * inv) % p)
        modulus *= p
        cand = _free_basis(residues, best, n, glob,
                           lambda a: rational_reconstruct(-int(a), modulus), Fraction(1))
        if cand is not None and _verify(int_rows, cand):
            return cand
    return None


def _free_basis(R, pivots, n, glob, lift, one):
    piv_set = set(pivots)
    out = []
    cols_nz = {}
    for r, pc in enumerate(pivots):
        for j in np.flatnonzero(np.asarray(R[r] != 0, dtype=bool)):
            j = int(j)
            if j != pc:
                cols_nz.setdefault(j, []).append((r, pc))
    for f in range(n - 1, -1, -1):         # ascending global index
        if f in piv_set:
            continue
        v = {glob[f]: one}
        for r, pc in cols_nz.get(f, ()):
            val = lift(R[r, f])
            if val is None:
                return None
            if val:
                v[glob[pc]] = val
        out.append(v)
    return out


def _verify(int_rows, basis) -> bool:
    col_idx: dict[int, list] = {}
    for r, row in enumerate(int_rows):
        for c, x in row.items():
            col_idx.setdefault(c, []).append((r, x))
    for v in basis:
        den = 1
        for x in v.values():
            den = math.lcm(den, x.denominator)
        acc: dict[int, int] = {}
        for c, x in v.items():
            xi = int(x * den)
            for r, a in col_idx.get(c, ()):
                acc[r] = acc.get(r, 0) + a * xi
        if any(acc.values()):
            return False
    return True


def nullspace(rows: Sequence[Vec], cols: Sequence[int], field: Field = QQ,
              method: str = "auto") -> list[Vec]:
    """Canonical RREF basis of {x supported on cols : row . x = 0 for all rows}.

    ``cols`` must be sorted and contain the support of every row.
    ``method`` is ``auto``, ``exact`` or ``modular``.
    """
    rows = [r for r in rows if r]
    if not rows:
        return [{c: field.one} for c in cols]
    if method == "exact" or (method == "auto" and len(cols) < MODULAR_THRESHOLD):
        return _nullspace_exact(rows, cols, field)
    res = _nullspace_modular(rows, cols, field)
    if res is None:
        return _nullspace_exact(rows, cols, field)
    if field.p == 0:
        return res
    return [{c: field(x) for c, x in v.items()} for v in res]
