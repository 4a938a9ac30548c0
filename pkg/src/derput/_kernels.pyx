# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; ``_kernels_py`` holds the reference fallback."""

cdef long long _inv(long long a, long long p):
    cdef long long t = 0, nt = 1, r = p, nr = a, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def rref_modp(long long[:, ::1] a, long long p):
    """In-place reduced row echelon form of an int64 matrix modulo prime p.

    Entries must lie in ``range(p)`` and ``p < 2**31``.  Returns
    ``(rank, pivot_columns)``; rows ``rank:`` are left zero.
    """
    cdef Py_ssize_t nrows = a.shape[0], ncols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, sel, nnz
    cdef long long inv, f, t
    cdef long long[::1] nzcols
    import numpy as np
    nzbuf = np.empty(ncols, dtype=np.int64)
    nzcols = nzbuf
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        sel = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for j in range(c, ncols):
                t = a[r, j]
                a[r, j] = a[sel, j]
                a[sel, j] = t
        inv = _inv(a[r, c], p)
        nnz = 0
        for j in range(c, ncols):
            if a[r, j] != 0:
                if inv != 1:
                    a[r, j] = a[r, j] * inv % p
                nzcols[nnz] = j
                nnz += 1
        for i in range(nrows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for k in range(nnz):
                j = nzcols[k]
                t = (a[i, j] - f * a[r, j]) % p
                if t < 0:
                    t += p
                a[i, j] = t
        pivots.append(c)
        r += 1
    return r, pivots
