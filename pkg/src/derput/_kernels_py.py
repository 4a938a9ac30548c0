"""Pure-Python (numpy) fallback for the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def rref_modp(a, p):
    """In-place reduced row echelon form of an int64 matrix modulo prime p.

    Entries must lie in ``range(p)`` and ``p < 2**31``.  Returns
    ``(rank, pivot_columns)``; rows ``rank:`` are left zero.
    """
    nrows, ncols = a.shape
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        sel = r + int(nz[0])
        if sel != r:
            a[[r, sel]] = a[[sel, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r, c:] = a[r, c:] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows, c:] = (a[rows, c:] - np.outer(col[rows], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return r, pivots
