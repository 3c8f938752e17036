"""Torus-weight spaces of global sections and their restrictions to affine charts."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .fan import Cone, FanError, Vector, pairing
from .klyachko import ToricBundle
from .subspace import Subspace, mat_inverse, matmul


class SectionsError(ValueError):
    pass


@dataclass(frozen=True)
class WeightSpace:
    """``H^0(X, E)_chi`` as the subspace ``cap_alpha E^alpha(<chi, alpha>)`` of E.

    ``formal`` is set when the fan is not complete, in which case the
    intersection is computed but does not claim to be a space of global sections.
    """

    character: Vector
    space: Subspace
    formal: bool = False

    @property
    def dim(self) -> int:
        return self.space.dim


def weight_space(b: ToricBundle, chi: Sequence[int]) -> WeightSpace:
    chi = tuple(int(c) for c in chi)
    if len(chi) != b.fan.rank:
        raise FanError(f"character of length {len(chi)} on a rank-{b.fan.rank} lattice")
    acc = Subspace.full(b.field, b.rank)
    for a, alpha in enumerate(b.fan.rays):
        acc = acc & b.filtration_at(a, pairing(chi, alpha))
        if acc.is_zero():
            break
    return WeightSpace(chi, acc, formal=not b.fan.complete)


def _fm_eliminate(rows: list[tuple[list[Fraction], Fraction]], j: int):
    pos, neg, keep = [], [], []
    for a, c in rows:
        (pos if a[j] > 0 else neg if a[j] < 0 else keep).append((a, c))
    for (a1, c1), (a2, c2) in itertools.product(pos, neg):
        s1, s2 = -a2[j], a1[j]
        keep.append(([s1 * x + s2 * y for x, y in zip(a1, a2)], s1 * c1 + s2 * c2))
    return keep


def lattice_box(A: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[tuple[int, int]] | None:
    """Integer bounds on each coordinate of ``{x : A x <= rhs}``; None if the polytope is empty.

    Raises :class:`SectionsError` if some coordinate is unbounded.
    """
    n = len(A[0])
    base = [([Fraction(x) for x in row], Fraction(c)) for row, c in zip(A, rhs)]
    out = []
    for k in range(n):
        rows = base
        for j in range(n):
            if j != k:
                rows = _fm_eliminate(rows, j)
        lo, hi = -math.inf, math.inf
        for a, c in rows:
            if a[k] > 0:
                hi = min(hi, c / a[k])
            elif a[k] < 0:
                lo = max(lo, c / a[k])
            elif c < 0:
                return None
        if lo == -math.inf or hi == math.inf:
            raise SectionsError("weight polytope is unbounded; the fan must be complete")
        lo_i, hi_i = math.ceil(lo), math.floor(hi)
        if lo_i > hi_i:
            return None
        out.append((lo_i, hi_i))
    return out


def weight_support(b: ToricBundle) -> list[Vector]:
    """Characters with a nonzero weight space, in lexicographic order."""
    if not b.fan.complete:
        raise SectionsError("weight support needs a complete fan")
    rays = b.fan.rays
    box = lattice_box(rays, [b.filtrations[a].n_max for a in range(len(rays))])
    if box is None:
        return []
    out = []
    for chi in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        if all(pairing(chi, alpha) <= b.filtrations[a].n_max for a, alpha in enumerate(rays)):
            if weight_space(b, chi).dim:
                out.append(tuple(chi))
    return out


def total_section_dimension(b: ToricBundle) -> int:
    return sum(weight_space(b, chi).dim for chi in weight_support(b))


@dataclass(frozen=True)
class ChartSection:
    """``v = sum_i a_i e^i_sigma`` with ``a_i = c_i u^{exponent_i}`` on the chart of ``cone``."""

    cone: Cone
    terms: tuple[tuple[int, int, tuple[int, ...]], ...]  # (eigen-index, c_i, exponent)

    def is_regular(self) -> bool:
        return all(x >= 0 for _, _, e in self.terms for x in e)


def eigen_coordinates(b: ToricBundle, cone: Cone, v) -> list[int]:
    """Coordinates of ``v`` (standard basis of E) in the cone's eigen-basis."""
    B = b.decomposition(cone).eigen_matrix()
    return [int(x) for x in matmul(b.field, np.asarray(v, dtype=np.int64).reshape(1, -1), mat_inverse(b.field, B))[0]]


def chart_restriction(b: ToricBundle, chi: Sequence[int], v, cone: Cone | Sequence[int]) -> ChartSection:
    chi = tuple(int(c) for c in chi)
    if not isinstance(cone, Cone):
        cone = b.fan.cone(cone)
    if cone.dim != b.fan.rank or not cone.smooth:
        raise FanError("chart restriction needs a smooth maximal cone")
    if not weight_space(b, chi).space.contains(v):
        raise SectionsError(f"vector is not in the weight space of {list(chi)}")
    dec = b.decomposition(cone)
    coords = eigen_coordinates(b, cone, v)
    chars = dec.eigen_characters()
    terms = []
    for i, c in enumerate(coords):
        if c:
            expo = tuple(pairing(chars[i], s) - pairing(chi, s) for s in cone.rays)
            terms.append((i, c, expo))
    return ChartSection(cone, tuple(terms))
