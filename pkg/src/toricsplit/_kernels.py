"""Table-driven finite-field matrix kernels.

Field elements are encoded as integers ``0 <= a < q``; arithmetic goes through
the lookup tables built by :class:`toricsplit.field.GF`.  Every kernel has a
numba implementation and a vectorised numpy one.  The numba path is used
unless numba is missing or ``TORICSPLIT_PURE_NUMPY`` is set to a truthy value
before import.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("TORICSPLIT_PURE_NUMPY", "").strip().lower()
_FORCE_NUMPY = _FLAG not in ("", "0", "false", "no")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

BACKEND = "numpy" if (_FORCE_NUMPY or not HAVE_NUMBA) else "numba"


# --------------------------------------------------------------------------
# numpy reference path


def rref_numpy(M, add, mul, neg, inv):
    """Reduced row echelon form. Returns ``(R, pivots)`` with zero rows dropped."""
    A = np.array(M, dtype=np.int64, copy=True)
    nrows, ncols = A.shape
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = mul[inv[A[r, c]], A[r]]
        f = neg[A[:, c]].astype(np.int64)
        f[r] = 0
        A = add[A, mul[f[:, None], A[r][None, :]]].astype(np.int64)
        pivots.append(c)
        r += 1
    return A[:r].copy(), np.array(pivots, dtype=np.int64)


def matmul_numpy(A, B, add, mul):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    n, k = A.shape
    k2, m = B.shape
    if k != k2:
        raise ValueError("inner dimensions differ")
    out = np.zeros((n, m), dtype=np.int64)
    for t in range(k):
        out = add[out, mul[A[:, t][:, None], B[t][None, :]]].astype(np.int64)
    return out


# --------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _rref_nb(M, add, mul, neg, inv):
        A = M.copy()
        nrows, ncols = A.shape
        pivots = np.empty(min(nrows, ncols), dtype=np.int64)
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if A[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    tmp = A[r, j]
                    A[r, j] = A[piv, j]
                    A[piv, j] = tmp
            s = inv[A[r, c]]
            for j in range(c, ncols):
                A[r, j] = mul[s, A[r, j]]
            for i in range(nrows):
                if i != r and A[i, c] != 0:
                    f = neg[A[i, c]]
                    for j in range(c, ncols):
                        A[i, j] = add[A[i, j], mul[f, A[r, j]]]
            pivots[r] = c
            r += 1
        return A[:r].copy(), pivots[:r].copy()

    @numba.njit(cache=True)
    def _matmul_nb(A, B, add, mul):
        n, k = A.shape
        m = B.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            for t in range(k):
                a = A[i, t]
                if a == 0:
                    continue
                for j in range(m):
                    out[i, j] = add[out[i, j], mul[a, B[t, j]]]
        return out

    def rref_numba(M, add, mul, neg, inv):
        return _rref_nb(np.ascontiguousarray(M, dtype=np.int64), add, mul, neg, inv)

    def matmul_numba(A, B, add, mul):
        A = np.ascontiguousarray(A, dtype=np.int64)
        B = np.ascontiguousarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError("inner dimensions differ")
        return _matmul_nb(A, B, add, mul)

else:  # pragma: no cover
    rref_numba = rref_numpy
    matmul_numba = matmul_numpy


if BACKEND == "numba":
    rref = rref_numba
    matmul = matmul_numba
else:
    rref = rref_numpy
    matmul = matmul_numpy
