"""Toric vector bundles as Klyachko data.

A bundle of rank r is a vector space E = F^r together with one decreasing
filtration ``E^alpha(i)`` per ray.  On every generating cone the filtrations
must be split simultaneously by a character grading
``E = (+)_chi E_chi`` with ``E^alpha(i) = (+)_{<chi,alpha> >= i} E_chi``;
this is checked on construction and the splitting is kept as a
:class:`ConeDecomposition`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .fan import Cone, Fan, FanError, Vector, pairing
from .field import GF
from .subspace import Subspace
from .symalg import SymTensor, sym_basis


class KlyachkoError(ValueError):
    """Invalid filtration data; the message names the violated invariant."""


class IncompatibleBundle(KlyachkoError):
    def __init__(self, certificate: "IncompatibilityCertificate"):
        self.certificate = certificate
        super().__init__(str(certificate))


@dataclass(frozen=True)
class RayFiltration:
    """Jumps ``(i, E^alpha(i))`` of one decreasing filtration, ``i`` running over the jump set.

    The first recorded space is the whole of E and the last one is nonzero;
    ``E^alpha(i)`` is constant between consecutive jumps.
    """

    field: GF
    ambient: int
    jumps: tuple[tuple[int, Subspace], ...]

    def __post_init__(self):
        if self.ambient < 1:
            raise KlyachkoError("rank must be at least 1")
        if not self.jumps:
            raise KlyachkoError("a filtration needs at least one jump")
        prev_i, prev_v = None, None
        for i, v in self.jumps:
            if v.ambient != self.ambient or v.field is not self.field:
                raise KlyachkoError("filtration step lives in the wrong space")
            if v.is_zero():
                raise KlyachkoError(f"filtration step at i={i} is zero; omit it")
            if prev_i is not None:
                if i <= prev_i:
                    raise KlyachkoError("jump indices must be strictly increasing")
                if not v < prev_v:
                    raise KlyachkoError(f"filtration must strictly decrease at each jump (i={i})")
            prev_i, prev_v = i, v
        if not self.jumps[0][1].is_full():
            raise KlyachkoError("the lowest filtration step must be the whole space")

    @classmethod
    def from_function(cls, field: GF, ambient: int, step: Callable[[int], Subspace], lo: int, hi: int) -> "RayFiltration":
        """Build from ``i -> E(i)``, given ``E(lo)`` is full and ``E(hi + 1)`` is zero."""
        if not step(lo).is_full():
            raise KlyachkoError(f"E({lo}) is not the whole space")
        if not step(hi + 1).is_zero():
            raise KlyachkoError(f"E({hi + 1}) is not zero")
        jumps = []
        for i in range(lo, hi + 1):
            cur, nxt = step(i), step(i + 1)
            if not nxt <= cur:
                raise KlyachkoError("filtration is not decreasing")
            if cur != nxt:
                jumps.append((i, cur))
        return cls(field, ambient, tuple(jumps))

    @classmethod
    def single(cls, field: GF, ambient: int, i: int) -> "RayFiltration":
        return cls(field, ambient, ((i, Subspace.full(field, ambient)),))

    def at(self, i: int) -> Subspace:
        for j, v in self.jumps:
            if i <= j:
                return v
        return Subspace.zero(self.field, self.ambient)

    __call__ = at

    @property
    def jump_set(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.jumps)

    @property
    def n_max(self) -> int:
        return self.jumps[-1][0]

    @property
    def n_min(self) -> int:
        return self.jumps[0][0]

    def drops(self) -> dict[int, int]:
        """``i -> dim E(i) - dim E(i+1)`` over the jump set."""
        return {i: v.dim - self.at(i + 1).dim for i, v in self.jumps}

    def shifted(self, k: int) -> "RayFiltration":
        return RayFiltration(self.field, self.ambient, tuple((i + k, v) for i, v in self.jumps))

    def extend_scalars(self, big: GF) -> "RayFiltration":
        return RayFiltration(big, self.ambient, tuple((i, v.extend_scalars(big)) for i, v in self.jumps))


@dataclass(frozen=True)
class ConeDecomposition:
    """Character grading of E splitting every filtration of a cone's rays.

    ``parts`` are ``(character, E_chi)`` pairs with distinct characters,
    ordered by the characters' values on the cone's rays, highest first.
    """

    cone: Cone
    parts: tuple[tuple[Vector, Subspace], ...]

    def grades(self, chi: Vector) -> tuple[int, ...]:
        return tuple(pairing(chi, a) for a in self.cone.rays)

    def eigenbasis(self) -> list[tuple[Vector, tuple[int, ...]]]:
        """``(character, vector)`` pairs; vectors are the echelon rows of each ``E_chi``."""
        out = []
        for chi, v in self.parts:
            for row in v.basis():
                out.append((chi, row))
        return out

    def eigen_matrix(self) -> np.ndarray:
        """Rows are the eigen-basis vectors in the standard coordinates of E."""
        return np.array([v for _, v in self.eigenbasis()], dtype=np.int64)

    def eigen_characters(self) -> list[Vector]:
        return [chi for chi, _ in self.eigenbasis()]

    def reproduces(self, filtrations: Sequence[RayFiltration]) -> bool:
        """Check ``E^alpha(i) = (+)_{<chi,alpha> >= i} E_chi`` for every ray of the cone."""
        if not self.parts:
            return False
        F = self.parts[0][1].field
        r = self.parts[0][1].ambient
        total = Subspace.zero(F, r)
        for _, v in self.parts:
            total = total + v
        if sum(v.dim for _, v in self.parts) != r or not total.is_full():
            return False
        for alpha, filt in zip(self.cone.rays, filtrations):
            for i in filt.jump_set + (filt.n_max + 1,):
                acc = Subspace.zero(F, r)
                for chi, v in self.parts:
                    if pairing(chi, alpha) >= i:
                        acc = acc + v
                if acc != filt.at(i):
                    return False
        return True

    def extend_scalars(self, big: GF) -> "ConeDecomposition":
        return ConeDecomposition(self.cone, tuple((chi, v.extend_scalars(big)) for chi, v in self.parts))


@dataclass(frozen=True)
class IncompatibilityCertificate:
    """Dimension count showing no simultaneous splitting exists.

    For every grade tuple ``l`` the graded piece of any splitting would have
    dimension ``dim F(l) - dim G(l)``; these add up to ``total != rank``.
    """

    cone: Cone
    rank: int
    total: int
    pieces: tuple[tuple[tuple[int, ...], int], ...]

    def __str__(self):
        return (
            f"filtrations on cone {list(self.cone.ray_indices)} admit no compatible splitting: "
            f"graded pieces have total dimension {self.total} != rank {self.rank}"
        )


def _sort_parts(cone: Cone, parts: Iterable[tuple[Vector, Subspace]]):
    return tuple(sorted(parts, key=lambda cv: tuple(-pairing(cv[0], a) for a in cone.rays) + tuple(cv[0])))


def check_compatibility(filtrations: Sequence[RayFiltration], cone: Cone) -> ConeDecomposition | IncompatibilityCertificate:
    """Decide whether the filtrations of ``cone``'s rays admit a common splitting.

    ``filtrations[j]`` belongs to ``cone.rays[j]``.  Writes
    ``F(l) = cap_j E_j(l_j)`` and ``G(l) = sum_j F(l + e_j)`` and picks
    ``E_l`` as a complement of ``G(l)`` in ``F(l)``; the sum of these is
    always all of E, so the filtrations are compatible exactly when the
    dimensions add up to the rank.
    """
    if not cone.smooth:
        raise FanError("compatibility is only defined here for smooth cones")
    if len(filtrations) != cone.dim:
        raise KlyachkoError("need one filtration per ray of the cone")
    F = filtrations[0].field
    r = filtrations[0].ambient
    cache: dict = {}

    def meet(l):
        if l not in cache:
            acc = Subspace.full(F, r)
            for filt, i in zip(filtrations, l):
                acc = acc & filt.at(i)
            cache[l] = acc
        return cache[l]

    parts = []
    pieces = []
    total = 0
    for l in itertools.product(*(f.jump_set for f in filtrations)):
        top = meet(l)
        if top.is_zero():
            continue
        deeper = Subspace.zero(F, r)
        for j in range(len(l)):
            deeper = deeper + meet(l[:j] + (l[j] + 1,) + l[j + 1 :])
        piece = deeper.complement_in(top)
        if piece.dim:
            total += piece.dim
            pieces.append((l, piece.dim))
            parts.append((cone.character_with_values(l), piece))
    if total != r:
        return IncompatibilityCertificate(cone, r, total, tuple(pieces))
    dec = ConeDecomposition(cone, _sort_parts(cone, parts))
    if not dec.reproduces(filtrations):  # pragma: no cover - guaranteed by the dimension count
        raise AssertionError("compatible splitting failed verification")
    return dec


@dataclass(frozen=True)
class ToricLineData:
    """A toric line bundle: the single filtration jump on each ray."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __add__(self, other: "ToricLineData") -> "ToricLineData":
        """Tensor product."""
        if len(other.values) != len(self.values):
            raise KlyachkoError("line data on different fans")
        return ToricLineData(tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "ToricLineData":
        return ToricLineData(tuple(-a for a in self.values))

    def power(self, k: int) -> "ToricLineData":
        return ToricLineData(tuple(k * a for a in self.values))

    def to_bundle(self, fan: Fan, field: GF) -> "ToricBundle":
        return line_bundle(fan, field, self.values)

    def __len__(self):
        return len(self.values)


def line_power(L: ToricLineData, k: int) -> ToricLineData:
    return L.power(k)


def principal_line(fan: Fan, chi: Sequence[int]) -> ToricLineData:
    """Line data ``alpha -> <chi, alpha>`` of a character (a trivial bundle with twisted action)."""
    return ToricLineData(tuple(pairing(chi, a) for a in fan.rays))


class ToricBundle:
    """A toric vector bundle on a smooth fan, validated on construction.

    ``decompositions`` may be supplied (one per generating cone, in fan
    order); they are then only verified instead of recomputed.
    """

    def __init__(
        self,
        fan: Fan,
        field: GF,
        filtrations: Sequence[RayFiltration],
        decompositions: Sequence[ConeDecomposition] | None = None,
        name: str | None = None,
    ):
        if not fan.smooth:
            raise FanError("toric bundles are only supported on smooth fans")
        if len(filtrations) != len(fan.rays):
            raise KlyachkoError(f"expected {len(fan.rays)} filtrations, got {len(filtrations)}")
        ranks = {f.ambient for f in filtrations}
        if len(ranks) != 1:
            raise KlyachkoError("all filtrations must live in the same vector space")
        if any(f.field is not field for f in filtrations):
            raise KlyachkoError("filtrations over the wrong field")
        self.fan = fan
        self.field = field
        self.rank = ranks.pop()
        self.filtrations = tuple(filtrations)
        self.name = name
        decs = []
        for k, idx in enumerate(fan.generating_cones):
            cone = fan.cone(idx)
            filts = [self.filtrations[i] for i in idx]
            if decompositions is not None:
                dec = decompositions[k]
                if dec.cone.ray_indices != idx or not dec.reproduces(filts):
                    raise KlyachkoError(f"supplied decomposition does not split the filtrations on cone {list(idx)}")
            else:
                dec = check_compatibility(filts, cone)
                if isinstance(dec, IncompatibilityCertificate):
                    raise IncompatibleBundle(dec)
            decs.append(dec)
        self.decompositions: tuple[ConeDecomposition, ...] = tuple(decs)

    # -- access ----------------------------------------------------------------

    def filtration_at(self, alpha: int, i: int) -> Subspace:
        return self.filtrations[alpha].at(i)

    def jump_data(self, alpha: int) -> tuple[tuple[int, ...], int, int]:
        f = self.filtrations[alpha]
        return f.jump_set, f.n_max, f.n_min

    def klyachko_length(self) -> int:
        return max(f.n_max - f.n_min for f in self.filtrations)

    def max_cone_decompositions(self) -> list[ConeDecomposition]:
        return [d for d in self.decompositions if d.cone.dim == self.fan.rank]

    def decomposition(self, cone: Cone | Sequence[int]) -> ConeDecomposition:
        idx = cone.ray_indices if isinstance(cone, Cone) else tuple(cone)
        for d in self.decompositions:
            if d.cone.ray_indices == idx:
                return d
        raise KeyError(f"no generating cone {list(idx)}")

    def extend_scalars(self, big: GF) -> "ToricBundle":
        if big is self.field:
            return self
        return ToricBundle(
            self.fan,
            big,
            [f.extend_scalars(big) for f in self.filtrations],
            [d.extend_scalars(big) for d in self.decompositions],
            name=self.name,
        )

    def same_data(self, other: "ToricBundle") -> bool:
        return self.fan == other.fan and self.field is other.field and self.filtrations == other.filtrations

    def __eq__(self, other):
        if not isinstance(other, ToricBundle):
            return NotImplemented
        return self.same_data(other)

    def __hash__(self):
        return hash((self.fan, self.field.q, self.filtrations))

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"ToricBundle({label}rank {self.rank} over {self.field!r} on {self.fan!r})"


def filtration_at(b: ToricBundle, alpha: int, i: int) -> Subspace:
    return b.filtration_at(alpha, i)


def jump_data(b: ToricBundle, alpha: int):
    return b.jump_data(alpha)


def klyachko_length(b: ToricBundle) -> int:
    return b.klyachko_length()


# -- constructions -------------------------------------------------------------------


def line_bundle(fan: Fan, field: GF, values: Sequence[int]) -> ToricBundle:
    if len(values) != len(fan.rays):
        raise KlyachkoError(f"line data needs {len(fan.rays)} values, got {len(values)}")
    return ToricBundle(fan, field, [RayFiltration.single(field, 1, int(v)) for v in values], name=f"line:{list(values)}")


def direct_sum(*bundles: ToricBundle) -> ToricBundle:
    if not bundles:
        raise KlyachkoError("empty direct sum")
    fan, F = bundles[0].fan, bundles[0].field
    if any(b.fan != fan or b.field is not F for b in bundles):
        raise KlyachkoError("direct summands must share fan and field")
    r = sum(b.rank for b in bundles)
    offsets = np.cumsum([0] + [b.rank for b in bundles])

    def embed(v: Subspace, k: int) -> Subspace:
        rows = np.zeros((v.dim, r), dtype=np.int64)
        rows[:, offsets[k] : offsets[k] + bundles[k].rank] = v.rows
        return Subspace.span(F, rows, r)

    def glue(pieces):
        acc = Subspace.zero(F, r)
        for k, v in pieces:
            acc = acc + embed(v, k)
        return acc

    filts = []
    for a in range(len(fan.rays)):
        lo = min(b.filtrations[a].n_min for b in bundles)
        hi = max(b.filtrations[a].n_max for b in bundles)
        filts.append(
            RayFiltration.from_function(F, r, lambda i, a=a: glue((k, b.filtration_at(a, i)) for k, b in enumerate(bundles)), lo, hi)
        )
    decs = []
    for ci, idx in enumerate(fan.generating_cones):
        merged: dict = {}
        for k, b in enumerate(bundles):
            for chi, v in b.decompositions[ci].parts:
                merged.setdefault(chi, []).append((k, v))
        cone = fan.cone(idx)
        decs.append(ConeDecomposition(cone, _sort_parts(cone, ((chi, glue(vs)) for chi, vs in merged.items()))))
    name = "sum:[" + ",".join(b.name or "?" for b in bundles) + "]"
    return ToricBundle(fan, F, filts, decs, name=name)


def sum_of_lines(fan: Fan, field: GF, lines: Sequence[Sequence[int]]) -> ToricBundle:
    return direct_sum(*(line_bundle(fan, field, v) for v in lines))


def _mod_p_vector(field: GF, v: Sequence[int]) -> list[int]:
    return [field.from_int(int(x)) for x in v]


def tangent_bundle(fan: Fan, field: GF) -> ToricBundle:
    """``E = N (x) k``; ``E^alpha(i)`` is E for ``i <= 0``, ``k alpha`` for ``i = 1``, zero above."""
    n = fan.rank

    def step(alpha):
        line = Subspace.span(field, [_mod_p_vector(field, alpha)], n)
        return lambda i: Subspace.full(field, n) if i <= 0 else (line if i == 1 else Subspace.zero(field, n))

    filts = [RayFiltration.from_function(field, n, step(a), 0, 1) for a in fan.rays]
    return ToricBundle(fan, field, filts, name="tangent")


def cotangent_bundle(fan: Fan, field: GF) -> ToricBundle:
    """``E = M (x) k``; E for ``i <= -1``, the hyperplane ``<w, alpha> = 0`` at ``i = 0``, zero above."""
    n = fan.rank

    def step(alpha):
        perp = Subspace.span(field, [_mod_p_vector(field, alpha)], n).annihilator()
        return lambda i: Subspace.full(field, n) if i <= -1 else (perp if i == 0 else Subspace.zero(field, n))

    filts = [RayFiltration.from_function(field, n, step(a), -1, 0) for a in fan.rays]
    return ToricBundle(fan, field, filts, name="cotangent")


def trivial_bundle(fan: Fan, field: GF, rank: int) -> ToricBundle:
    return sum_of_lines(fan, field, [[0] * len(fan.rays)] * rank)


def det_bundle(b: ToricBundle) -> ToricLineData:
    """Line data ``alpha -> sum_i i * (dim E(i) - dim E(i+1))``."""
    return ToricLineData(tuple(sum(i * d for i, d in f.drops().items()) for f in b.filtrations))


def canonical_line(fan: Fan) -> ToricLineData:
    """``omega_X = O(-sum D_alpha)``."""
    return ToricLineData((-1,) * len(fan.rays))


def twist(b: ToricBundle, L: ToricLineData) -> ToricBundle:
    """``E (x) L``: every jump of ray ``alpha`` moves by ``L[alpha]``."""
    if len(L.values) != len(b.fan.rays):
        raise KlyachkoError("line data does not match the fan")
    filts = [f.shifted(k) for f, k in zip(b.filtrations, L.values)]
    decs = []
    for d in b.decompositions:
        shift = d.cone.character_with_values([L.values[i] for i in d.cone.ray_indices])
        parts = ((tuple(x + y for x, y in zip(chi, shift)), v) for chi, v in d.parts)
        decs.append(ConeDecomposition(d.cone, _sort_parts(d.cone, parts)))
    return ToricBundle(b.fan, b.field, filts, decs, name=f"{b.name}(x){list(L.values)}")


def dual(b: ToricBundle) -> ToricBundle:
    """``E*`` with ``(E*)^alpha(i) = E^alpha(1 - i)^perp`` under the standard pairing."""
    F, r = b.field, b.rank
    filts = [
        RayFiltration.from_function(F, r, lambda i, f=f: f.at(1 - i).annihilator(), -f.n_max, -f.n_min)
        for f in b.filtrations
    ]
    decs = []
    for d in b.decompositions:
        parts = []
        for chi, v in d.parts:
            others = Subspace.zero(F, r)
            for chi2, w in d.parts:
                if chi2 != chi:
                    others = others + w
            parts.append((tuple(-x for x in chi), others.annihilator()))
        decs.append(ConeDecomposition(d.cone, _sort_parts(d.cone, parts)))
    return ToricBundle(b.fan, F, filts, decs, name=f"dual({b.name})")


def eigen_monomials(dec: ConeDecomposition, m: int) -> list[tuple[tuple[int, ...], Vector, SymTensor]]:
    """``(I, character, e^I)`` for the degree-m monomials in the cone's eigen-basis."""
    basis = dec.eigenbasis()
    F = dec.parts[0][1].field
    r = len(basis)
    vectors = [v for _, v in basis]
    chars = [chi for chi, _ in basis]
    n = len(chars[0])
    out = []
    for I in sym_basis(r, m):
        chi = tuple(sum(a * c[k] for a, c in zip(I, chars)) for k in range(n))
        out.append((I, chi, SymTensor.product_of_powers(F, vectors, I)))
    return out


def sym_power(b: ToricBundle, m: int) -> ToricBundle:
    """``S^m E``: on each cone the eigen-monomials ``e^I`` carry ``sum_k I_k chi_k``."""
    if m < 0:
        raise KlyachkoError("symmetric power degree must be nonnegative")
    F = b.field
    dim = len(sym_basis(b.rank, m))
    decs = []
    per_cone = []
    for d in b.decompositions:
        mons = eigen_monomials(d, m)
        per_cone.append(mons)
        groups: dict = {}
        for _, chi, t in mons:
            groups.setdefault(chi, []).append(t.coeffs)
        parts = [(chi, Subspace.span(F, np.array(vs), dim)) for chi, vs in groups.items()]
        decs.append(ConeDecomposition(d.cone, _sort_parts(d.cone, parts)))
    filts = []
    for a, alpha in enumerate(b.fan.rays):
        k = next(ci for ci, d in enumerate(b.decompositions) if a in d.cone.ray_indices)
        dec = decs[k]
        grades = sorted({pairing(chi, alpha) for chi, _ in dec.parts})

        def step(i, dec=dec, alpha=alpha):
            acc = Subspace.zero(F, dim)
            for chi, v in dec.parts:
                if pairing(chi, alpha) >= i:
                    acc = acc + v
            return acc

        filts.append(RayFiltration.from_function(F, dim, step, grades[0], grades[-1]))
    return ToricBundle(b.fan, F, filts, decs, name=f"S^{m}({b.name})")
