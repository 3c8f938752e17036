"""Lattices, cones and fans of smooth toric varieties.

Characters (elements of M) and rays (elements of N) are plain integer tuples
paired by the dot product.  A fan is given by its generating cones; all faces
are generated automatically.  Ray order inside a cone is the input order and
is treated as canonical: dual bases, eigen-bases and transition matrices
downstream all depend on it.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

Vector = tuple[int, ...]


class FanError(ValueError):
    """An invalid fan; the message names the violated invariant."""


def pairing(chi: Sequence[int], alpha: Sequence[int]) -> int:
    if len(chi) != len(alpha):
        raise ValueError(f"lattice rank mismatch: {len(chi)} vs {len(alpha)}")
    return sum(int(a) * int(b) for a, b in zip(chi, alpha))


def det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant (Bareiss, fraction free)."""
    A = [list(map(int, r)) for r in rows]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def matrix_rank(rows: Sequence[Sequence[int]]) -> int:
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return 0
    r = 0
    for c in range(len(A[0])):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def solve(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    """Solve ``sum_j x_j rows[j] = rhs`` exactly for a square, invertible system."""
    n = len(rows)
    # Column j of the system matrix is rows[j].
    A = [[Fraction(rows[j][i]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [A[i][n] / A[i][i] for i in range(n)]


def _minor_gcd(rows: Sequence[Sequence[int]]) -> int:
    k = len(rows)
    n = len(rows[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        g = math.gcd(g, det([[r[c] for c in cols] for r in rows]))
    return abs(g)


def complete_to_basis(rows: Sequence[Vector], n: int) -> list[Vector]:
    """Extend a unimodular family of lattice vectors to a Z-basis of Z^n."""
    basis = [tuple(r) for r in rows]
    bound = 1
    while len(basis) < n:
        found = None
        for cand in itertools.product(range(-bound, bound + 1), repeat=n):
            if _minor_gcd(basis + [cand]) == 1:
                found = cand
                break
        if found is None:
            bound += 1
            if bound > 4:
                raise FanError("rays do not extend to a lattice basis (cone not smooth)")
            continue
        basis.append(found)
    return basis


@dataclass(frozen=True)
class Cone:
    """A simplicial cone: ray indices into the parent fan, plus the ray vectors."""

    ray_indices: tuple[int, ...]
    rays: tuple[Vector, ...]
    rank: int  # rank of the ambient lattice

    @property
    def dim(self) -> int:
        return len(self.ray_indices)

    @cached_property
    def smooth(self) -> bool:
        if not self.rays:
            return True
        return _minor_gcd(self.rays) == 1

    def is_smooth(self) -> bool:
        return self.smooth

    def dual_basis(self) -> list[Vector]:
        """Characters ``u_i`` with ``<u_i, sigma_j> = delta_ij``; needs a smooth maximal cone."""
        if self.dim != self.rank:
            raise FanError("dual basis requires a full-dimensional cone")
        if not self.smooth:
            raise FanError("dual basis requires a smooth cone")
        return _inverse_transpose(self.rays)

    def character_basis(self) -> list[Vector]:
        """Like :meth:`dual_basis`, also for lower-dimensional smooth cones.

        For ``dim < rank`` the rays are completed to a lattice basis first, so
        the returned ``u_i`` are one choice among many.
        """
        if self.dim == self.rank:
            return self.dual_basis()
        if not self.smooth:
            raise FanError("character basis requires a smooth cone")
        full = complete_to_basis(self.rays, self.rank)
        return _inverse_transpose(full)[: self.dim]

    def character_with_values(self, values: Sequence[int]) -> Vector:
        """A character taking the given values on the cone's rays."""
        us = self.character_basis()
        out = [0] * self.rank
        for v, u in zip(values, us):
            for k in range(self.rank):
                out[k] += v * u[k]
        return tuple(out)

    def contains_interior(self, x: Sequence[int]) -> bool | None:
        """True/False for strict interior membership of a full-dimensional cone; None on the boundary."""
        lam = solve(self.rays, x)
        if lam is None:
            return False
        if any(l < 0 for l in lam):
            return False
        if any(l == 0 for l in lam):
            return None
        return True


def _inverse_transpose(rays: Sequence[Vector]) -> list[Vector]:
    n = len(rays)
    d = det(rays)
    if abs(d) != 1:
        raise FanError("rays do not form a lattice basis")
    out = []
    for i in range(n):
        e = [1 if k == i else 0 for k in range(n)]
        # u_i solves <u_i, rays[j]> = e_j, i.e. R u_i = e.
        col = solve([[rays[j][k] for j in range(n)] for k in range(n)], e)
        out.append(tuple(int(c) for c in col))
    return out


_SAMPLE_SEED = 20140408


class Fan:
    """A simplicial fan in N = Z^rank given by rays and generating cones."""

    def __init__(self, rank: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]], name: str | None = None):
        self.rank = int(rank)
        self.name = name
        rs = []
        for k, r in enumerate(rays):
            r = tuple(int(x) for x in r)
            if len(r) != self.rank:
                raise FanError(f"ray {k} has length {len(r)}, expected lattice rank {self.rank}")
            g = math.gcd(*r) if any(r) else 0
            if g != 1:
                raise FanError(f"ray primitivity violated: ray {k} = {list(r)} has gcd {g}")
            rs.append(r)
        if len(set(rs)) != len(rs):
            raise FanError("rays must be distinct")
        self.rays: tuple[Vector, ...] = tuple(rs)
        gens = []
        for c in max_cones:
            idx = tuple(int(i) for i in c)
            if not idx:
                raise FanError("empty generating cone")
            if any(i < 0 or i >= len(rs) for i in idx):
                raise FanError(f"cone {list(idx)} references a missing ray")
            if len(set(idx)) != len(idx):
                raise FanError(f"cone {list(idx)} repeats a ray")
            if matrix_rank([rs[i] for i in idx]) != len(idx):
                raise FanError(f"cone {list(idx)} is not simplicial: rays are linearly dependent")
            gens.append(idx)
        self.generating_cones: tuple[tuple[int, ...], ...] = tuple(gens)
        used = set(i for c in gens for i in c)
        if used != set(range(len(rs))):
            raise FanError("every ray must lie in some cone")
        self._check_overlaps()

    # -- structure -------------------------------------------------------------

    def cone(self, idx: Sequence[int]) -> Cone:
        idx = tuple(idx)
        return Cone(idx, tuple(self.rays[i] for i in idx), self.rank)

    @cached_property
    def cones(self) -> tuple[tuple[int, ...], ...]:
        """All cones (faces of generating cones) as sorted index tuples, including the origin."""
        faces = set()
        for c in self.generating_cones:
            for k in range(len(c) + 1):
                for sub in itertools.combinations(sorted(c), k):
                    faces.add(sub)
        return tuple(sorted(faces, key=lambda f: (len(f), f)))

    def max_cones(self) -> list[Cone]:
        return [self.cone(c) for c in self.generating_cones if len(c) == self.rank]

    def cones_containing(self, ray: int) -> list[int]:
        """Indices (into :meth:`max_cones`) of maximal cones containing ``ray``."""
        return [k for k, c in enumerate(self.max_cones()) if ray in c.ray_indices]

    @cached_property
    def smooth(self) -> bool:
        return all(self.cone(c).smooth for c in self.generating_cones)

    def is_smooth(self) -> bool:
        return self.smooth

    def _sample_directions(self, count: int, seed: int = _SAMPLE_SEED):
        rng = np.random.default_rng(seed)
        return [tuple(int(x) for x in rng.integers(-10**6, 10**6, size=self.rank)) for _ in range(count)]

    def _full_cones(self):
        return [self.cone(c) for c in self.generating_cones if len(c) == self.rank]

    def _check_overlaps(self, samples: int = 400):
        full = self._full_cones()
        if len(full) < 2:
            return
        for x in self._sample_directions(samples, seed=_SAMPLE_SEED + 1):
            hits = sum(1 for c in full if c.contains_interior(x))
            if hits > 1:
                raise FanError("cones must meet in common faces: two cone interiors overlap")

    @cached_property
    def complete(self) -> bool:
        if any(len(c) != self.rank for c in self.generating_cones):
            return False
        # Boundary matching: each facet of a maximal cone lies in exactly two maximal cones.
        count: dict = {}
        for c in self.generating_cones:
            for facet in itertools.combinations(sorted(c), self.rank - 1):
                count[facet] = count.get(facet, 0) + 1
        if any(v != 2 for v in count.values()):
            return False
        full = self._full_cones()
        for x in self._sample_directions(200):
            if not any(c.contains_interior(x) is not False for c in full):
                return False
        return True

    def is_complete(self) -> bool:
        return self.complete

    # -- io ----------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.generating_cones]}

    @classmethod
    def from_dict(cls, data: dict, name: str | None = None) -> "Fan":
        try:
            return cls(data["rank"], data["rays"], data["max_cones"], name=name)
        except KeyError as exc:
            raise FanError(f"fan JSON is missing key {exc.args[0]!r}") from None

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return (self.rank, self.rays, self.generating_cones) == (other.rank, other.rays, other.generating_cones)

    def __hash__(self):
        return hash((self.rank, self.rays, self.generating_cones))

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"Fan({label}rank={self.rank}, {len(self.rays)} rays, {len(self.generating_cones)} cones)"


# -- builtin fans ---------------------------------------------------------------


def projective_space(n: int) -> Fan:
    rays = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [tuple(c) for c in itertools.combinations(range(n + 1), n)]
    return Fan(n, rays, cones, name=f"P{n}")


def hirzebruch(a: int) -> Fan:
    return Fan(2, [(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)], name=f"F{a}")


def p1_times_p1() -> Fan:
    return Fan(2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)], name="P1xP1")


def affine_space(n: int) -> Fan:
    rays = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    return Fan(n, rays, [tuple(range(n))], name=f"A{n}")


BUILTIN_FANS = {
    "P1": lambda: projective_space(1),
    "P2": lambda: projective_space(2),
    "P3": lambda: projective_space(3),
    "P1xP1": p1_times_p1,
    "F0": lambda: hirzebruch(0),
    "F1": lambda: hirzebruch(1),
    "F2": lambda: hirzebruch(2),
    "F3": lambda: hirzebruch(3),
    "A1": lambda: affine_space(1),
    "A2": lambda: affine_space(2),
    "A3": lambda: affine_space(3),
}


@functools.lru_cache(maxsize=None)
def builtin_fan(name: str) -> Fan:
    try:
        return BUILTIN_FANS[name]()
    except KeyError:
        raise FanError(f"unknown builtin fan {name!r}; choose from {sorted(BUILTIN_FANS)}") from None


def is_smooth(c: Cone | Fan) -> bool:
    return c.smooth


def is_complete(f: Fan) -> bool:
    return f.complete


def max_cones(f: Fan) -> list[Cone]:
    return f.max_cones()


def dual_basis(c: Cone) -> list[Vector]:
    return c.dual_basis()
