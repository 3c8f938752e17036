import itertools

import pytest

from toricsplit.criteria import twisted_bundle
from toricsplit.fan import Fan, builtin_fan, pairing
from toricsplit.field import GF
from toricsplit.fixtures import fixtures
from toricsplit.klyachko import (
    canonical_line,
    line_bundle,
    principal_line,
    tangent_bundle,
    trivial_bundle,
    twist,
)
from toricsplit.sections import (
    SectionsError,
    chart_restriction,
    lattice_box,
    total_section_dimension,
    weight_space,
    weight_support,
)


def brute_line_count(fan, values, box=8):
    """Lattice points chi with <chi, alpha> <= a_alpha for every ray, by direct search."""
    n = fan.rank
    return sum(
        1
        for chi in itertools.product(range(-box, box + 1), repeat=n)
        if all(pairing(chi, a) <= v for a, v in zip(fan.rays, values))
    )


@pytest.mark.parametrize("a", range(7))
def test_O_a_on_P1(a):
    b = line_bundle(builtin_fan("P1"), GF(2), [a, 0])
    assert total_section_dimension(b) == a + 1
    assert len(weight_support(b)) == a + 1
    for c in range(-2, a + 3):
        assert weight_space(b, (c,)).dim == (1 if 0 <= c <= a else 0)


def test_anticanonical_P2():
    fan = builtin_fan("P2")
    b = twisted_bundle(line_bundle(fan, GF(2), [0, 0, 0]), 2)
    assert total_section_dimension(b) == 10
    assert brute_line_count(fan, (-canonical_line(fan)).values) == 10


@pytest.mark.parametrize("name", ("P2", "P1xP1", "F1", "F2", "F3"))
def test_line_counts_against_brute_force(name, rng):
    fan = builtin_fan(name)
    for _ in range(10):
        vals = [int(x) for x in rng.integers(-1, 3, size=len(fan.rays))]
        b = line_bundle(fan, GF(3), vals)
        assert total_section_dimension(b) == brute_line_count(fan, vals)


def test_examples():
    fan = builtin_fan("P2")
    t = tangent_bundle(fan, GF(3))
    assert weight_space(t, (0, 0)).space.is_full()
    assert weight_space(t, (5, 0)).dim == 0
    assert weight_support(trivial_bundle(fan, GF(2), 1)) == [(0, 0)]
    assert len(weight_support(line_bundle(builtin_fan("P1"), GF(2), [2, 0]))) == 3


def test_unbounded_support():
    fan = Fan(2, [[1, 0], [0, 1]], [[0, 1]])
    b = trivial_bundle(fan, GF(2), 1)
    assert weight_space(b, (0, 0)).formal
    with pytest.raises(SectionsError):
        weight_support(b)


def test_lattice_box():
    assert lattice_box([[1, 0], [0, 1], [-1, -1]], [2, 2, 0]) is not None
    assert lattice_box([[1], [-1]], [-1, -1]) is None


def test_chart_exponents_nonnegative():
    for fx in fixtures():
        if fx.fan_name == "P3":
            continue
        b = fx.bundle(3)
        for chi in weight_support(b):
            for v in weight_space(b, chi).space.basis():
                for cone in b.fan.max_cones():
                    cs = chart_restriction(b, chi, v, cone)
                    assert cs.is_regular()


def test_chart_restriction_examples():
    fan = builtin_fan("P1")
    b = line_bundle(fan, GF(3), [2, 0])
    for cone in fan.max_cones():
        cs = chart_restriction(b, (1,), [1], cone)
        assert [e for _, _, e in cs.terms] == [(1,)]
    t = tangent_bundle(builtin_fan("P2"), GF(3))
    dec = t.decompositions[0]
    chi, e1 = dec.eigenbasis()[0]
    cs = chart_restriction(t, chi, e1, dec.cone)
    assert len(cs.terms) == 1 and cs.terms[0][2] == (0, 0)
    with pytest.raises(SectionsError):
        chart_restriction(b, (5,), [1], fan.max_cones()[0])


def test_canonical_twisted_section_on_charts():
    for p in (2, 3):
        fan = builtin_fan("P2")
        b = twisted_bundle(line_bundle(fan, GF(p), [0, 0, 0]), p)
        for cone in fan.max_cones():
            cs = chart_restriction(b, (0, 0), [1], cone)
            assert [e for _, _, e in cs.terms] == [(p - 1, p - 1)]


def test_twist_by_character_shifts_weights(rng):
    for fx in fixtures():
        if fx.fan_name not in ("P2", "F1", "P1"):
            continue
        b = fx.bundle(2)
        n = b.fan.rank
        chi0 = tuple(int(x) for x in rng.integers(-2, 3, size=n))
        t = twist(b, principal_line(b.fan, chi0))
        sup = weight_support(b)
        assert sorted(weight_support(t)) == sorted(tuple(x + y for x, y in zip(c, chi0)) for c in sup)
        for chi in sup:
            shifted = tuple(x + y for x, y in zip(chi, chi0))
            assert weight_space(t, shifted).space == weight_space(b, chi).space


def test_relabeling_rays():
    fan = builtin_fan("F1")
    perm = [2, 0, 3, 1]
    inv = {old: new for new, old in enumerate(perm)}
    fan2 = Fan(2, [fan.rays[i] for i in perm], [[inv[i] for i in c] for c in fan.generating_cones])
    vals = [1, 2, 0, 1]
    b1 = line_bundle(fan, GF(2), vals)
    b2 = line_bundle(fan2, GF(2), [vals[i] for i in perm])
    assert total_section_dimension(b1) == total_section_dimension(b2)
