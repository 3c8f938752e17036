"""Subspaces of GF(q)^m stored in reduced row echelon form.

Because the echelon form is canonical, two subspaces are equal exactly when
their stored row matrices are equal.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .field import GF, FieldError, embedding


class DimensionMismatch(ValueError):
    pass


def rref(field: GF, M) -> tuple[np.ndarray, np.ndarray]:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return np.zeros((0, M.shape[1]), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return _kernels.rref(M, field.add_table, field.mul_table, field.neg_table, field.inv_table)


def matmul(field: GF, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    return _kernels.matmul(A, B, field.add_table, field.mul_table)


def mat_inverse(field: GF, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(field, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:].copy()


def mat_det(field: GF, A) -> int:
    """Determinant by Gaussian elimination."""
    A = np.array(A, dtype=np.int64)
    n = A.shape[0]
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i, c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[[c, piv]] = A[[piv, c]]
            det = field.neg(det)
        det = field.mul(det, int(A[c, c]))
        s = field.inv(int(A[c, c]))
        for i in range(c + 1, n):
            if A[i, c]:
                f = field.neg(field.mul(int(A[i, c]), s))
                A[i] = field.add_table[A[i], field.mul_table[f, A[c]]]
    return det


def nullspace(field: GF, M, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of ``{x : M x = 0}``."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1] if M.ndim == 2 and M.size else (ncols if ncols is not None else M.shape[-1])
    if M.size == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(field, M)
    pivset = set(int(c) for c in piv)
    free = [c for c in range(n) if c not in pivset]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for r, c in enumerate(piv):
            out[k, c] = field.neg(int(R[r, f]))
    return out


class Subspace:
    """A subspace of ``field ** ambient``; immutable, hashable."""

    __slots__ = ("field", "ambient", "rows", "pivots", "_key")

    def __init__(self, field: GF, ambient: int, rows: np.ndarray, pivots: np.ndarray):
        # Internal: use the classmethod constructors, which canonicalise.
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, ambient)
        rows.setflags(write=False)
        self.field = field
        self.ambient = ambient
        self.rows = rows
        self.pivots = tuple(int(c) for c in pivots)
        self._key = (field.p, field.d, ambient, rows.tobytes())

    @classmethod
    def span(cls, field: GF, vectors: Iterable[Sequence[int]] | np.ndarray, ambient: int) -> "Subspace":
        M = np.asarray(list(vectors) if not isinstance(vectors, np.ndarray) else vectors, dtype=np.int64)
        if M.size == 0:
            return cls.zero(field, ambient)
        M = M.reshape(-1, M.shape[-1]) if M.ndim > 1 else M.reshape(1, -1)
        if M.shape[1] != ambient:
            raise DimensionMismatch(f"vectors of length {M.shape[1]} in ambient dimension {ambient}")
        if M.min() < 0 or M.max() >= field.q:
            raise FieldError(f"entries outside {field!r}")
        R, piv = rref(field, M)
        return cls(field, ambient, R, piv)

    @classmethod
    def zero(cls, field: GF, ambient: int) -> "Subspace":
        return cls(field, ambient, np.zeros((0, ambient), dtype=np.int64), ())

    @classmethod
    def full(cls, field: GF, ambient: int) -> "Subspace":
        return cls(field, ambient, np.eye(ambient, dtype=np.int64), range(ambient))

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def basis(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in r) for r in self.rows]

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def _check(self, other: "Subspace"):
        if other.ambient != self.ambient:
            raise DimensionMismatch(f"ambient dimensions {self.ambient} and {other.ambient}")
        if other.field is not self.field:
            raise FieldError("subspaces over different fields")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace.span(self.field, np.vstack([self.rows, other.rows]), self.ambient)

    def __and__(self, other: "Subspace") -> "Subspace":
        """Intersection (Zassenhaus)."""
        self._check(other)
        if self.dim == 0 or other.is_full():
            return self
        if other.dim == 0 or self.is_full():
            return other
        m = self.ambient
        top = np.hstack([self.rows, self.rows])
        bottom = np.hstack([other.rows, np.zeros_like(other.rows)])
        R, piv = rref(self.field, np.vstack([top, bottom]))
        keep = [i for i, c in enumerate(piv) if c >= m]
        return Subspace.span(self.field, R[keep, m:], m) if keep else Subspace.zero(self.field, m)

    intersect = __and__

    def contains(self, v: Sequence[int]) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        if v.shape[0] != self.ambient:
            raise DimensionMismatch(f"vector of length {v.shape[0]} in ambient dimension {self.ambient}")
        return self.reduce(v) is None

    def reduce(self, v) -> np.ndarray | None:
        """Remainder of ``v`` against the echelon basis, or None if ``v`` is in the span."""
        F = self.field
        w = np.array(v, dtype=np.int64).reshape(-1)
        for r, c in enumerate(self.pivots):
            if w[c]:
                f = F.neg(int(w[c]))
                w = F.add_table[w, F.mul_table[f, self.rows[r]]].astype(np.int64)
        return None if not w.any() else w

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.reduce(r) is None for r in self.rows)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def coordinates(self, v) -> list[int]:
        """Coefficients of ``v`` w.r.t. the echelon basis; raises if ``v`` is not in the span."""
        if self.reduce(v) is not None:
            raise ValueError("vector is not in the subspace")
        v = np.asarray(v, dtype=np.int64)
        return [int(v[c]) for c in self.pivots]

    def complement_in(self, bigger: "Subspace") -> "Subspace":
        """A complement of ``self`` inside ``bigger`` built greedily from ``bigger``'s echelon rows."""
        self._check(bigger)
        if not self <= bigger:
            raise ValueError("not a subspace of the given space")
        chosen = []
        acc = self
        for row in bigger.rows:
            if acc.reduce(row) is not None:
                chosen.append(row)
                acc = acc + Subspace.span(self.field, [row], self.ambient)
        return Subspace.span(self.field, chosen, self.ambient) if chosen else Subspace.zero(self.field, self.ambient)

    def annihilator(self) -> "Subspace":
        """``{w : <w, v> = 0 for all v in self}`` under the standard dot product."""
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient)
        return Subspace.span(self.field, nullspace(self.field, self.rows), self.ambient)

    def image(self, A) -> "Subspace":
        """Image under the linear map ``v -> v @ A`` (row-vector convention)."""
        A = np.asarray(A, dtype=np.int64)
        if A.shape[0] != self.ambient:
            raise DimensionMismatch("matrix does not act on this space")
        if self.dim == 0:
            return Subspace.zero(self.field, A.shape[1])
        return Subspace.span(self.field, matmul(self.field, self.rows, A), A.shape[1])

    def extend_scalars(self, big: GF) -> "Subspace":
        """Base change along the canonical embedding into ``big``."""
        if big is self.field:
            return self
        emb = embedding(self.field, big)
        return Subspace(big, self.ambient, emb[self.rows], self.pivots)

    def __repr__(self):
        return f"Subspace({self.field!r}, dim={self.dim}/{self.ambient}, basis={self.basis()})"


def subspace_intersect(U: Subspace, V: Subspace) -> Subspace:
    return U & V


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    return U + V


def subspace_eq(U: Subspace, V: Subspace) -> bool:
    U._check(V)
    return U == V


def subspace_contains(U: Subspace, v) -> bool:
    return U.contains(v)
