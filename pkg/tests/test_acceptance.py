"""The ten acceptance criteria, each checked against an independent oracle.

Run with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import itertools
import time

import pytest

from toricsplit.criteria import (
    Decision,
    criterion_A_check,
    fs_detect_rank2,
    fs_vector,
    kaneyama_from_klyachko,
    pi_pushforward,
    theorem1_check,
    theorem2_check,
    twisted_bundle,
)
from toricsplit.fan import builtin_fan
from toricsplit.field import GF, embedding
from toricsplit.fixtures import SURFACES, fixture, fixtures, rank2_line_filtrations
from toricsplit.frobenius import OmegaSection, iota_eval, trace
from toricsplit.klyachko import (
    IncompatibilityCertificate,
    RayFiltration,
    check_compatibility,
    cotangent_bundle,
    filtration_at,
    klyachko_length,
    line_bundle,
    sum_of_lines,
    tangent_bundle,
)
from toricsplit.poly import Laurent
from toricsplit.sections import total_section_dimension
from toricsplit.subspace import Subspace
from toricsplit.symalg import SymTensor

RESULTS: dict[int, tuple[bool, str]] = {}
ELAPSED = [0.0]


@pytest.fixture(autouse=True)
def _timed():
    t = time.perf_counter()
    yield
    ELAPSED[0] += time.perf_counter() - t


def record(n: int, ok: bool, detail: str):
    RESULTS[n] = (ok, detail)
    assert ok, detail


def pytest_terminal_summary_lines() -> list[str]:
    lines = []
    for n in range(1, 11):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            lines.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            lines.append(f"criterion {n:2d}: NOT RUN")
    lines.append(f"time spent in acceptance tests: {ELAPSED[0]:.1f} s")
    return lines


# -- helpers shared by the oracles -------------------------------------------------------


def all_vectors(F, n):
    return [list(v) for v in itertools.product(range(F.q), repeat=n)]


def form_mul(F, a, b):
    """Product of binary forms given as coefficient lists of x^{m-k} y^k."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def form_pow(F, a, k):
    out = [1]
    for _ in range(k):
        out = form_mul(F, out, a)
    return out


def projective(F, v):
    """Scale so that the first nonzero entry is 1."""
    lead = next(x for x in v if x)
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in v)


def fs_orbit(F):
    """Normalised images of (xy)^{p-1} under every invertible 2x2 matrix over F."""
    p = F.p
    out = set()
    for a, b, c, d in itertools.product(range(F.q), repeat=4):
        if F.sub(F.mul(a, d), F.mul(b, c)) == 0:
            continue
        f = form_mul(F, form_pow(F, [a, b], p - 1), form_pow(F, [c, d], p - 1))
        out.add(projective(F, f))
    return out


def fs_pairs(K):
    """Normalised l1^{p-1} l2^{p-1} over K for distinct projective lines: the FS forms over K."""
    p = K.p
    pts = [(1, t) for t in range(K.q)] + [(0, 1)]
    out = set()
    for l1, l2 in itertools.combinations(pts, 2):
        out.add(projective(K, form_mul(K, form_pow(K, list(l1), p - 1), form_pow(K, list(l2), p - 1))))
    return out


# -- 1 -----------------------------------------------------------------------------------


def test_criterion_01_cotangent_tangent_tables():
    bad = []
    for name in ("P2", "P1xP1", "F1", "F2"):
        fan = builtin_fan(name)
        for p in (2, 3):
            F = GF(p)
            om, tb = cotangent_bundle(fan, F), tangent_bundle(fan, F)
            vecs = all_vectors(F, 2)
            for a, alpha in enumerate(fan.rays):
                perp = Subspace.span(F, [v for v in vecs if (v[0] * alpha[0] + v[1] * alpha[1]) % p == 0], 2)
                line = Subspace.span(F, [[alpha[0] % p, alpha[1] % p]], 2)
                for i in range(-2, 3):
                    want_om = Subspace.full(F, 2) if i <= -1 else (perp if i == 0 else Subspace.zero(F, 2))
                    want_tb = Subspace.full(F, 2) if i <= 0 else (line if i == 1 else Subspace.zero(F, 2))
                    if filtration_at(om, a, i) != want_om or filtration_at(tb, a, i) != want_tb:
                        bad.append((name, p, a, i))
    record(1, not bad, f"{4 * 2} fan/p pairs, rays x i in -2..2; mismatches: {bad[:5]}")


# -- 2 -----------------------------------------------------------------------------------


def test_criterion_02_klyachko_length():
    got = {name: klyachko_length(tangent_bundle(builtin_fan(name), GF(2))) for name in SURFACES}
    kl = klyachko_length(sum_of_lines(builtin_fan("P1"), GF(2), [[0, 0], [2, -1]]))
    ok = all(v == 1 for v in got.values()) and kl == 2
    record(2, ok, f"Kl(T_X) = {got}; Kl(O+O(2D0-D1)) = {kl}")


# -- 3 -----------------------------------------------------------------------------------


def test_criterion_03_theorem1():
    bad = []
    for name in SURFACES:
        for p in (2, 3, 5):
            F = GF(p)
            fan = builtin_fan(name)
            for label, b, want in (
                ("tangent", tangent_bundle(fan, F), Decision.SPLIT),
                ("cotangent", cotangent_bundle(fan, F), Decision.SPLIT),
                ("trivial", fixture(f"{name}/trivial2").bundle(p), Decision.CRITERION_FAILED),
            ):
                if theorem1_check(b, p).decision is not want:
                    bad.append((name, p, label))
    record(3, not bad, f"{len(SURFACES)} surfaces x p in (2,3,5); wrong: {bad}")


# -- 4 -----------------------------------------------------------------------------------


def test_criterion_04_theorem2_tangent():
    bad = []
    for name in ("P2", "P3", "P1xP1", "F1"):
        fan = builtin_fan(name)
        n = fan.rank
        for p in (2, 3):
            F = GF(p)
            b = tangent_bundle(fan, F)
            rep = theorem2_check(b, p)
            if rep.decision is not Decision.SPLIT:
                bad.append((name, p, "decision"))
                continue
            basis = rep.witness["basis"]
            # The witness must be the rays of one maximal cone (up to order and scaling).
            lines = {projective(F, v) for v in basis}
            if not any(lines == {projective(F, [x % p for x in s]) for s in c.rays} for c in fan.max_cones()):
                bad.append((name, p, "witness is not sigma_1 ... sigma_n"))
            v = fs_vector(F, basis, rep.witness["c"])
            one = Laurent.constant(F, n)
            vals = []
            for c in fan.max_cones():
                psi = pi_pushforward(b, v, c)
                vals.append(iota_eval(psi, one))
            lam = vals[0].terms.get((0,) * n, 0)
            if not lam or any(val != Laurent.constant(F, n, lam) for val in vals):
                bad.append((name, p, "chart values"))
                continue
            v = v.scale(F.inv(lam))
            if any(iota_eval(pi_pushforward(b, v, c), one) != one for c in fan.max_cones()):
                bad.append((name, p, "iota(pi(w))(1) != 1"))
    record(4, not bad, f"P2, P3, P1xP1, F1 x p in (2,3); failures: {bad}")


# -- 5 -----------------------------------------------------------------------------------


def test_criterion_05_trace(rng):
    bad = 0
    checks = 0
    for p in (2, 3, 5):
        F = GF(p)
        for n in (1, 2):
            for _ in range(500):
                f, g, h = (
                    Laurent(F, n, {tuple(int(x) for x in rng.integers(-5, 10, size=n)): int(rng.integers(1, p)) for _ in range(4)})
                    for _ in range(3)
                )
                checks += 1
                if trace(f + h) != trace(f) + trace(h) or trace(g**p * f) != g * trace(f):
                    bad += 1
            cone = builtin_fan("P1" if n == 1 else "P2").max_cones()[0]
            one = Laurent.constant(F, n)
            for e in itertools.product(range(2 * p - 1), repeat=n):
                val = iota_eval(OmegaSection(cone, Laurent.monomial(F, e)), one)
                want = one if all(x == p - 1 for x in e) else Laurent(F, n)
                checks += 1
                if val != want:
                    bad += 1
    record(5, bad == 0, f"{checks} checks, {bad} failures")


# -- 6 -----------------------------------------------------------------------------------


def test_criterion_06_sections():
    p1 = builtin_fan("P1")
    got = [total_section_dimension(line_bundle(p1, GF(2), [a, 0])) for a in range(7)]
    fan = builtin_fan("P2")
    anti = total_section_dimension(twisted_bundle(line_bundle(fan, GF(2), [0, 0, 0]), 2))
    ok = got == [a + 1 for a in range(7)] and anti == 10
    record(6, ok, f"h0(O(a)) = {got}; h0(omega^-1 on P2) = {anti}")


# -- 7 -----------------------------------------------------------------------------------

FS_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


def test_criterion_07_fs_detection(rng):
    disagree = []
    pos = neg = unknown = 0
    for p, d in FS_FIELDS:
        F = GF(p, d)
        m = 2 * (p - 1)
        orbit = fs_orbit(F)
        for f in orbit:
            pos += 1
            if fs_detect_rank2(SymTensor(F, 2, m, list(f)), dmax=d).status != "FS":
                disagree.append((F, f, "positive"))
        K = GF(p, 2 * d)
        emb = embedding(F, K)
        over_K = fs_pairs(K)
        sampled = 0
        while sampled < 200:
            f = [int(x) for x in rng.integers(0, F.q, size=m + 1)]
            if not any(f) or projective(F, f) in orbit:
                continue
            sampled += 1
            neg += 1
            det = fs_detect_rank2(SymTensor(F, 2, m, f), dmax=d)
            fs_over_K = projective(K, [int(emb[x]) for x in f]) in over_K
            if det.status == "FS":
                disagree.append((F, f, "negative reported FS"))
            elif det.status == "UNKNOWN":
                unknown += 1
                if not fs_over_K or fs_detect_rank2(SymTensor(F, 2, m, f), dmax=2 * d).status != "FS":
                    disagree.append((F, f, "UNKNOWN but not FS over the quadratic extension"))
            elif fs_over_K:
                disagree.append((F, f, "NO but FS over the quadratic extension"))
    record(
        7,
        not disagree,
        f"{pos} positives, {neg} negatives ({unknown} need GF(q^2)); disagreements: {disagree[:3]}",
    )


# -- 8 -----------------------------------------------------------------------------------


def _random_filtration(rng, F, r):
    """Random chain: spans of shrinking prefixes of a random matrix, at increasing indices."""
    M = rng.integers(0, F.q, size=(r, r))
    steps = [(0, Subspace.full(F, r))]
    i = 0
    k = r
    while True:
        k -= 1 if rng.random() < 0.75 else int(rng.integers(1, r + 1))
        if k <= 0:
            break
        i += int(rng.integers(1, 3))
        V = Subspace.span(F, M[:k], r)
        if V.is_zero():
            break
        if V < steps[-1][1]:
            steps.append((i, V))
    return RayFiltration(F, r, tuple(steps))


def _brute_compatible(F, filts, r):
    """Is there a basis of F^r such that every filtration step is spanned by basis vectors?"""
    pts = {projective(F, v) for v in all_vectors(F, r) if any(v)}
    steps = [v for f in filts for _, v in f.jumps]
    for basis in itertools.combinations(sorted(pts), r):
        if Subspace.span(F, list(basis), r).dim != r:
            continue
        if all(V.dim == sum(1 for b in basis if V.contains(list(b))) for V in steps):
            return True
    return False


def _decomposition_ok(F, dec, filts, cone, r):
    for f, alpha in zip(filts, cone.rays):
        for i in range(min(f.jump_set) - 1, max(f.jump_set) + 2):
            acc = Subspace.zero(F, r)
            for chi, V in dec.parts:
                if sum(x * y for x, y in zip(chi, alpha)) >= i:
                    acc = acc + V
            if acc != f.at(i):
                return False
    return True


def test_criterion_08_compatibility(rng):
    cones = {1: builtin_fan("P1").max_cones()[0], 2: builtin_fan("P2").max_cones()[0], 3: builtin_fan("P3").max_cones()[0]}
    cases = []
    F2 = GF(2)
    three = [RayFiltration(F2, 2, ((0, Subspace.full(F2, 2)), (1, Subspace.span(F2, [l], 2)))) for l in ((1, 0), (0, 1), (1, 1))]
    cases.append((F2, 2, 3, three))
    while len(cases) < 200:
        F = GF(int(rng.choice([2, 3])))
        # Two flags always admit a common splitting, so weight towards three rays.
        r = int(rng.choice([1, 2, 2, 3, 3, 3]))
        k = int(rng.choice([1, 2, 3, 3, 3, 3]))
        cases.append((F, r, k, [_random_filtration(rng, F, r) for _ in range(k)]))
    disagree = []
    n_incompat = 0
    for idx, (F, r, k, filts) in enumerate(cases):
        res = check_compatibility(filts, cones[k])
        brute = _brute_compatible(F, filts, r)
        ours = not isinstance(res, IncompatibilityCertificate)
        n_incompat += not brute
        if ours != brute or (ours and not _decomposition_ok(F, res, filts, cones[k], r)):
            disagree.append(idx)
    three_ok = isinstance(check_compatibility(three, cones[3]), IncompatibilityCertificate)
    record(
        8,
        not disagree and three_ok,
        f"{len(cases)} families ({n_incompat} incompatible, 3-line example {'rejected' if three_ok else 'ACCEPTED'}); disagreements: {disagree}",
    )


# -- 9 -----------------------------------------------------------------------------------


def test_criterion_09_cocycle_and_criterion_A():
    cocycle_bad = []
    disagree = []
    n2 = 0
    for fx in fixtures():
        for p in (2, 3):
            b = fx.bundle(p)
            c = kaneyama_from_klyachko(b)
            if c.check_cocycle():
                cocycle_bad.append((fx.name, p))
            if b.rank == 2:
                n2 += 1
                t1 = theorem1_check(b, p).decision
                a = criterion_A_check(c, p).decision
                # Both are sufficient-only; they disagree when one proves a splitting the other rules out.
                if t1 is Decision.SPLIT and a is not Decision.SPLIT:
                    disagree.append((fx.name, p))
    record(
        9,
        not cocycle_bad and not disagree,
        f"cocycle identity on {len(fixtures())} fixtures x 2 primes (violations {cocycle_bad}); "
        f"{n2} rank-2 cases, theorem 1 SPLIT without criterion A SPLIT: {disagree}",
    )


# -- 10 ----------------------------------------------------------------------------------


def _rank2_family(rng, p):
    F = GF(p)
    out = [fx.bundle(p) for fx in fixtures() if fx.fan_name == "P1" and fx.bundle(p).rank == 2]
    for name in SURFACES:
        out.append(tangent_bundle(builtin_fan(name), F))
        out.append(cotangent_bundle(builtin_fan(name), F))
    lines = [v for v in all_vectors(F, 2) if any(v) and projective(F, v) == tuple(v)]
    for name in ("P2", "P1xP1", "F1"):
        fan = builtin_fan(name)
        made = 0
        while made < 10:
            data = []
            for _ in fan.rays:
                lo = int(rng.integers(-2, 2))
                data.append((lo, lo + int(rng.integers(0, 4)), tuple(lines[int(rng.integers(len(lines)))])))
            try:
                out.append(rank2_line_filtrations(fan, F, data))
            except ValueError:
                continue
            made += 1
    return out


def test_criterion_10_cross_consistency(rng):
    clashes = []
    total = 0
    tally: dict = {}
    for p in (2, 3):
        for b in _rank2_family(rng, p):
            total += 1
            t1 = theorem1_check(b, p).decision
            t2 = theorem2_check(b, p).decision
            tally[(t1.value, t2.value)] = tally.get((t1.value, t2.value), 0) + 1
            if t1 is Decision.SPLIT and t2 is Decision.NOT_SPLIT:
                clashes.append((b.fan.name, p, [f.jumps for f in b.filtrations]))
    ok = not clashes and total >= 50
    record(10, ok, f"{total} bundles; outcome pairs {dict(sorted(tally.items()))}; clashes: {clashes[:2]}")
