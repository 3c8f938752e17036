"""Elements of symmetric powers S^m E in an explicit basis of E.

A degree-m element over r letters is a coefficient vector indexed by the
exponent tuples of :func:`sym_basis` (lexicographically descending, so
``e_1^m`` comes first).
"""

from __future__ import annotations

import functools
from typing import Sequence

import numpy as np

from .field import GF, FieldError, embedding


@functools.lru_cache(maxsize=None)
def sym_basis(r: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples ``(a_1, ..., a_r)`` with ``sum == m``, lexicographically descending."""
    if r == 0:
        return ((),) if m == 0 else ()
    out = []
    for a in range(m, -1, -1):
        for rest in sym_basis(r - 1, m - a):
            out.append((a,) + rest)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def sym_index(r: int, m: int) -> dict:
    return {e: k for k, e in enumerate(sym_basis(r, m))}


def _poly_mul(F: GF, a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = F.add(out.get(e, 0), F.mul(ca, cb))
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _linear_form(F: GF, v: Sequence[int]) -> dict:
    r = len(v)
    return {tuple(1 if k == i else 0 for k in range(r)): int(c) for i, c in enumerate(v) if c}


class SymTensor:
    """An element of S^m(F^r) with coordinates in the monomial basis."""

    __slots__ = ("field", "rank", "degree", "coeffs")

    def __init__(self, field: GF, rank: int, degree: int, coeffs):
        c = np.asarray(coeffs, dtype=np.int64).reshape(-1)
        if c.shape[0] != len(sym_basis(rank, degree)):
            raise ValueError(f"expected {len(sym_basis(rank, degree))} coefficients, got {c.shape[0]}")
        if c.size and (c.min() < 0 or c.max() >= field.q):
            raise FieldError(f"coefficients outside {field!r}")
        c.setflags(write=False)
        self.field = field
        self.rank = rank
        self.degree = degree
        self.coeffs = c

    @classmethod
    def from_dict(cls, field: GF, rank: int, degree: int, terms: dict) -> "SymTensor":
        idx = sym_index(rank, degree)
        c = np.zeros(len(idx), dtype=np.int64)
        for e, v in terms.items():
            if sum(e) != degree or len(e) != rank:
                raise ValueError(f"monomial {e} has wrong degree or arity")
            c[idx[tuple(e)]] = field.add(int(c[idx[tuple(e)]]), int(v))
        return cls(field, rank, degree, c)

    @classmethod
    def product_of_powers(cls, field: GF, vectors: Sequence[Sequence[int]], exponents: Sequence[int]) -> "SymTensor":
        """Expand ``prod_i v_i^{a_i}`` where each ``v_i`` is a vector of E in the standard basis."""
        r = len(vectors[0]) if vectors else 0
        m = int(sum(exponents))
        acc = {(0,) * r: 1}
        for v, a in zip(vectors, exponents):
            if a == 0:
                continue
            lf = _linear_form(field, v)
            for _ in range(a):
                acc = _poly_mul(field, acc, lf)
        return cls.from_dict(field, r, m, acc)

    def terms(self) -> dict:
        return {e: int(c) for e, c in zip(sym_basis(self.rank, self.degree), self.coeffs) if c}

    def coefficient(self, exponent: Sequence[int]) -> int:
        return int(self.coeffs[sym_index(self.rank, self.degree)[tuple(exponent)]])

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def scale(self, c: int) -> "SymTensor":
        return SymTensor(self.field, self.rank, self.degree, self.field.mul_table[c, self.coeffs])

    def change_basis(self, old_in_new) -> "SymTensor":
        """Rewrite in a new basis. Row k of ``old_in_new`` gives old letter ``k`` in new letters."""
        F = self.field
        M = np.asarray(old_in_new, dtype=np.int64)
        forms = [_linear_form(F, M[k]) for k in range(self.rank)]
        powers: dict = {}
        out: dict = {}
        for e, c in self.terms().items():
            acc = {(0,) * self.rank: c}
            for k, a in enumerate(e):
                if a == 0:
                    continue
                key = (k, a)
                if key not in powers:
                    pw = {(0,) * self.rank: 1}
                    for _ in range(a):
                        pw = _poly_mul(F, pw, forms[k])
                    powers[key] = pw
                acc = _poly_mul(F, acc, powers[key])
            for ee, cc in acc.items():
                v = F.add(out.get(ee, 0), cc)
                if v:
                    out[ee] = v
                else:
                    out.pop(ee, None)
        return SymTensor.from_dict(F, self.rank, self.degree, out)

    def extend_scalars(self, big: GF) -> "SymTensor":
        if big is self.field:
            return self
        return SymTensor(big, self.rank, self.degree, embedding(self.field, big)[self.coeffs])

    def __add__(self, other: "SymTensor") -> "SymTensor":
        return SymTensor(self.field, self.rank, self.degree, self.field.add_table[self.coeffs, other.coeffs])

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (self.field, self.rank, self.degree) == (other.field, other.rank, other.degree) and np.array_equal(
            self.coeffs, other.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, self.rank, self.degree, self.coeffs.tobytes()))

    def __repr__(self):
        parts = [f"{c}*e^{list(e)}" for e, c in self.terms().items()]
        return f"SymTensor[{self.field!r}, S^{self.degree}]({' + '.join(parts) or '0'})"
