import itertools

import numpy as np
import pytest

from toricsplit.fan import builtin_fan, pairing
from toricsplit.field import GF
from toricsplit.fixtures import SMOOTH_COMPLETE, SURFACES, fixture, fixtures, rank2_line_filtrations
from toricsplit.klyachko import (
    IncompatibilityCertificate,
    IncompatibleBundle,
    KlyachkoError,
    RayFiltration,
    ToricBundle,
    ToricLineData,
    canonical_line,
    check_compatibility,
    cotangent_bundle,
    det_bundle,
    direct_sum,
    dual,
    filtration_at,
    jump_data,
    klyachko_length,
    line_bundle,
    line_power,
    sum_of_lines,
    sym_power,
    tangent_bundle,
    trivial_bundle,
    twist,
)
from toricsplit.subspace import Subspace
from toricsplit.symalg import SymTensor, sym_basis


def mod_vec(F, v):
    return [x % F.p for x in v]


@pytest.mark.parametrize("name", ("P2", "P1xP1", "F1", "F2", "P3"))
def test_cotangent_and_tangent_tables(name):
    fan = builtin_fan(name)
    F = GF(3)
    n = fan.rank
    om, tb = cotangent_bundle(fan, F), tangent_bundle(fan, F)
    for a, alpha in enumerate(fan.rays):
        line = Subspace.span(F, [mod_vec(F, alpha)], n)
        for i in range(-2, 3):
            want = n if i <= -1 else (n - 1 if i == 0 else 0)
            got = filtration_at(om, a, i)
            assert got.dim == want
            if i == 0:
                assert all(sum(x * y for x, y in zip(w, alpha)) % 3 == 0 for w in got.basis())
            t = filtration_at(tb, a, i)
            if i <= 0:
                assert t.is_full()
            elif i == 1:
                assert t == line
            else:
                assert t.is_zero()


def test_cotangent_p2_examples():
    b = cotangent_bundle(builtin_fan("P2"), GF(2))
    for a in range(3):
        assert filtration_at(b, a, -1).dim == 2
        assert filtration_at(b, a, 0).dim == 1
        assert filtration_at(b, a, 1).is_zero()


@pytest.mark.parametrize("name", SURFACES)
def test_klyachko_length_tangent(name):
    b = tangent_bundle(builtin_fan(name), GF(2))
    assert klyachko_length(b) == 1
    for a in range(len(b.fan.rays)):
        assert jump_data(b, a) == ((0, 1), 1, 0)


def test_klyachko_length_examples():
    p1 = builtin_fan("P1")
    assert klyachko_length(trivial_bundle(builtin_fan("P2"), GF(2), 2)) == 0
    b = fixture("P1/O+O(2D0-D1)").bundle(2)
    assert jump_data(b, 0)[0] == (0, 2)
    assert jump_data(b, 1)[0] == (-1, 0)
    assert klyachko_length(b) == 2
    assert b == sum_of_lines(p1, GF(2), [[0, 0], [2, -1]])


def test_direct_sum_eigenlines():
    b = sum_of_lines(builtin_fan("P2"), GF(3), [[1, 0, 0], [0, 2, -1]])
    for d in b.decompositions:
        vecs = sorted(tuple(v) for _, v in d.eigenbasis())
        assert vecs == [(0, 1), (1, 0)]


def test_three_lines_incompatible():
    F = GF(2)
    fan = builtin_fan("P3")
    cone = fan.cone(fan.generating_cones[0])
    lines = [(1, 0), (0, 1), (1, 1)]
    filts = [RayFiltration(F, 2, ((0, Subspace.full(F, 2)), (1, Subspace.span(F, [l], 2)))) for l in lines]
    res = check_compatibility(filts, cone)
    assert isinstance(res, IncompatibilityCertificate)
    assert res.total != res.rank
    data = [RayFiltration.single(F, 2, 0)] * len(fan.rays)
    for j, a in enumerate(cone.ray_indices):
        data[a] = filts[j]
    with pytest.raises(IncompatibleBundle):
        ToricBundle(fan, F, data)


def test_three_lines_on_a_surface_is_compatible():
    b = fixture("P2/three-lines").bundle(2)
    assert klyachko_length(b) == 2
    # On a surface only two rays meet per cone, so the bundle exists.
    assert all(d.reproduces([b.filtrations[i] for i in d.cone.ray_indices]) for d in b.decompositions)


@pytest.mark.parametrize("name", SMOOTH_COMPLETE)
def test_cotangent_characters(name):
    b = cotangent_bundle(builtin_fan(name), GF(3))
    for d in b.max_cone_decompositions():
        us = d.cone.dual_basis()
        want = sorted(tuple(-x for x in u) for u in us)
        assert sorted(chi for chi, _ in d.parts) == want
        for chi, v in d.parts:
            assert v == Subspace.span(GF(3), [mod_vec(GF(3), [-x for x in chi])], b.rank)


def test_sym_power_identity_and_characters():
    fan = builtin_fan("P2")
    b = tangent_bundle(fan, GF(3))
    assert sym_power(b, 1) == b
    s2 = sym_power(b, 2)
    for d, d2 in zip(b.decompositions, s2.decompositions):
        chis = [chi for chi, _ in d.eigenbasis()]
        want = sorted(tuple(x + y for x, y in zip(c1, c2)) for c1, c2 in itertools.combinations_with_replacement(chis, 2))
        got = sorted(chi for chi, _ in d2.eigenbasis())
        assert got == want


def brute_sym2_filtration(b, a, i):
    """Span of e_j e_k with grade_j + grade_k >= i, using an eigenbasis of a cone containing ray a."""
    F = b.field
    dec = next(d for d in b.decompositions if a in d.cone.ray_indices)
    alpha = b.fan.rays[a]
    basis = [(pairing(chi, alpha), v) for chi, v in dec.eigenbasis()]
    vecs = []
    for (g1, v1), (g2, v2) in itertools.combinations_with_replacement(basis, 2):
        if g1 + g2 >= i:
            t = SymTensor.product_of_powers(F, [v1, v2], (1, 1)) if v1 != v2 else SymTensor.product_of_powers(F, [v1], (2,))
            vecs.append(t.coeffs)
    return Subspace.span(F, np.array(vecs).reshape(len(vecs), -1) if vecs else [], len(sym_basis(b.rank, 2)))


@pytest.mark.parametrize("name", ("P1", "P2", "F1"))
def test_sym2_filtrations_brute_force(name):
    for b in (tangent_bundle(builtin_fan(name), GF(3)), cotangent_bundle(builtin_fan(name), GF(5))):
        s2 = sym_power(b, 2)
        for a in range(len(b.fan.rays)):
            for i in range(-3, 4):
                assert filtration_at(s2, a, i) == brute_sym2_filtration(b, a, i)


def test_det_examples():
    for name in SMOOTH_COMPLETE:
        fan = builtin_fan(name)
        assert det_bundle(cotangent_bundle(fan, GF(2))) == canonical_line(fan)
        assert det_bundle(tangent_bundle(fan, GF(2))) == -canonical_line(fan)
    assert canonical_line(builtin_fan("P2")).values == (-1, -1, -1)
    p1 = builtin_fan("P1")
    for a, b in itertools.product(range(-3, 4), repeat=2):
        assert det_bundle(sum_of_lines(p1, GF(3), [[a, 0], [b, 0]])).values == (a + b, 0)


@pytest.mark.parametrize("m", [2, 3])
def test_det_sym_power(m):
    for fx in fixtures():
        b = fx.bundle(3)
        if b.rank != 2 or len(b.fan.rays) > 4:
            continue
        got = det_bundle(sym_power(b, m))
        assert got == line_power(det_bundle(b), m * (m + 1) // 2)


def test_dual_involution_and_characters():
    for fx in fixtures():
        b = fx.bundle(3)
        db = dual(b)
        assert dual(db) == b
        for d, dd in zip(b.decompositions, db.decompositions):
            assert sorted(tuple(-x for x in chi) for chi, _ in d.parts) == sorted(chi for chi, _ in dd.parts)
    fan = builtin_fan("P2")
    assert dual(tangent_bundle(fan, GF(3))) == cotangent_bundle(fan, GF(3))


def test_twist_shifts_jumps_and_keeps_length(rng):
    fan = builtin_fan("F1")
    b = tangent_bundle(fan, GF(3))
    for _ in range(20):
        L = ToricLineData(tuple(int(x) for x in rng.integers(-4, 5, size=len(fan.rays))))
        t = twist(b, L)
        assert klyachko_length(t) == klyachko_length(b)
        for a in range(len(fan.rays)):
            assert jump_data(t, a)[0] == tuple(i + L.values[a] for i in jump_data(b, a)[0])
        assert det_bundle(t) == det_bundle(b) + line_power(L, 2)


def test_line_data_and_direct_sum():
    fan = builtin_fan("P1xP1")
    F = GF(2)
    L = line_bundle(fan, F, [1, 0, -2, 3])
    assert L.rank == 1 and det_bundle(L).values == (1, 0, -2, 3)
    s = direct_sum(L, tangent_bundle(fan, F))
    assert s.rank == 3
    assert det_bundle(s).values == (2, 1, -1, 4)


def test_bad_filtrations():
    F = GF(2)
    with pytest.raises(KlyachkoError):
        RayFiltration(F, 2, ())
    with pytest.raises(KlyachkoError):
        RayFiltration(F, 2, ((0, Subspace.span(F, [[1, 0]], 2)),))
    with pytest.raises(KlyachkoError):
        RayFiltration(F, 2, ((0, Subspace.full(F, 2)), (1, Subspace.full(F, 2))))


def test_rank2_line_helper():
    b = rank2_line_filtrations(builtin_fan("P1"), GF(3), [(0, 1, (1, 0)), (0, 0, None)])
    assert jump_data(b, 0) == ((0, 1), 1, 0)
    assert jump_data(b, 1) == ((0,), 0, 0)
