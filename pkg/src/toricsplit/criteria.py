"""Decision procedures for Frobenius splitting of P(E).

* :func:`theorem1_check`: the rank-2 sufficient criterion (Klyachko length
  below p and no balanced ray), backed by the transition-matrix test.
* :func:`criterion_A_check`: the transition-matrix test on its own, applied to
  a :class:`KaneyamaCocycle`.
* :func:`theorem2_check`: search for an FS-vector in the weight-zero sections of
  ``S^{r(p-1)}E (x) det E^{1-p} (x) omega^{1-p}``.

Every SPLIT from :func:`theorem2_check` is re-verified chart by chart through
the pushforward ``pi`` and the trace map.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Any, Sequence

import numpy as np

from .fan import Cone, FanError, Vector, pairing
from .field import GF, embedding
from .frobenius import OmegaSection, SplittingCandidate, iota_eval, lemma_le_condition, lemma_le_failures
from .klyachko import (
    ConeDecomposition,
    ToricBundle,
    ToricLineData,
    det_bundle,
    sym_power,
    twist,
)
from .poly import Laurent, Poly, poly_gcd
from .sections import weight_space
from .subspace import mat_det, mat_inverse, matmul
from .symalg import SymTensor

DEFAULT_DMAX = 4
DEFAULT_EXHAUSTION_BOUND = 3
DEFAULT_POINT_BUDGET = 20000


class CriterionError(ValueError):
    pass


class Decision(str, enum.Enum):
    SPLIT = "SPLIT"
    NOT_SPLIT = "NOT_SPLIT"
    CRITERION_FAILED = "CRITERION_FAILED"
    UNKNOWN = "UNKNOWN"


@dataclass
class SplitReport:
    decision: Decision
    criterion: str
    witness: dict = dc_field(default_factory=dict)
    diagnostics: dict = dc_field(default_factory=dict)

    @property
    def split(self) -> bool:
        return self.decision is Decision.SPLIT

    def to_dict(self) -> dict:
        return {
            "decision": self.decision.value,
            "criterion": self.criterion,
            "witness": self.witness,
            "diagnostics": self.diagnostics,
        }


def _require_char(b: ToricBundle, p: int):
    if b.field.p != p:
        raise CriterionError(f"bundle is defined over {b.field!r}, not in characteristic {p}")


# -- Kaneyama cocycle ------------------------------------------------------------------


def _laurent_matrix_mul(A, B):
    n, m, k = len(A), len(B), len(B[0])
    F = A[0][0].field
    nv = A[0][0].nvars
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = Laurent(F, nv)
            for t in range(m):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


@dataclass(frozen=True)
class KaneyamaCocycle:
    """Transition data between the eigen-bases of the maximal cones.

    ``matrices[(s, t)] = P`` with ``b^t_j = sum_i P[i, j] b^s_i`` for the eigen-basis
    vectors ``b`` of cones ``s`` and ``t``.  The transition over the torus is
    ``Diag(x^{chi_s}) P Diag(x^{chi_t})^{-1}`` with entries ``P[i, j] x^{chi^i_s - chi^j_t}``.
    """

    field: GF
    cones: tuple[Cone, ...]
    characters: tuple[tuple[Vector, ...], ...]
    matrices: dict

    @property
    def rank(self) -> int:
        return len(self.characters[0])

    def P(self, s: int, t: int) -> np.ndarray:
        return self.matrices[(s, t)]

    def entries(self, s: int, t: int) -> list[list[tuple[int, tuple[int, ...]]]]:
        P = self.matrices[(s, t)]
        cs, ct = self.characters[s], self.characters[t]
        r = self.rank
        return [
            [(int(P[i, j]), tuple(a - b for a, b in zip(cs[i], ct[j]))) for j in range(r)]
            for i in range(r)
        ]

    def transition(self, s: int, t: int):
        n = self.cones[0].rank
        return [[Laurent(self.field, n, {e: c} if c else {}) for c, e in row] for row in self.entries(s, t)]

    def check_cocycle(self) -> list[tuple[int, int, int]]:
        """Triples ``(s, t, v)`` where ``M_st M_tv M_vs`` is not the identity (empty when sound)."""
        F = self.field
        n = self.cones[0].rank
        r = self.rank
        ident = [[Laurent.constant(F, n, 1) if i == j else Laurent(F, n) for j in range(r)] for i in range(r)]
        bad = []
        k = len(self.cones)
        for s, t, v in itertools.product(range(k), repeat=3):
            prod = _laurent_matrix_mul(_laurent_matrix_mul(self.transition(s, t), self.transition(t, v)), self.transition(v, s))
            if prod != ident:
                bad.append((s, t, v))
        return bad

    def to_dict(self) -> dict:
        return {
            "field": {"p": self.field.p, "d": self.field.d},
            "cones": [list(c.ray_indices) for c in self.cones],
            "characters": [[list(chi) for chi in cs] for cs in self.characters],
            "matrices": [
                {"from": s, "to": t, "P": self.matrices[(s, t)].tolist()}
                for (s, t) in sorted(self.matrices)
            ],
        }


def kaneyama_from_klyachko(b: ToricBundle) -> KaneyamaCocycle:
    F = b.field
    decs = b.max_cone_decompositions()
    if not decs:
        raise FanError("fan has no maximal cones")
    mats = [d.eigen_matrix() for d in decs]
    invs = [mat_inverse(F, B) for B in mats]
    P = {}
    for s, t in itertools.product(range(len(decs)), repeat=2):
        # B_t = P^T B_s, so P = (B_t B_s^{-1})^T.
        P[(s, t)] = np.ascontiguousarray(matmul(F, mats[t], invs[s]).T)
        P[(s, t)].setflags(write=False)
    chars = tuple(tuple(d.eigen_characters()) for d in decs)
    return KaneyamaCocycle(F, tuple(d.cone for d in decs), chars, P)


def criterion_A_check(c: KaneyamaCocycle, p: int) -> SplitReport:
    if c.rank != 2:
        raise CriterionError("criterion A is only available for rank 2")
    if c.field.p != p:
        raise CriterionError(f"cocycle is over {c.field!r}, not in characteristic {p}")
    failures = []
    for (s, t) in sorted(c.matrices):
        if s == t:
            continue
        # The coincidence test wants f_i = sum_j a_ij e_j row by row; entries() expands f_j by columns.
        ent = [list(col) for col in zip(*c.entries(s, t))]
        if not lemma_le_condition(ent, p, c.field):
            failures.append({"from": s, "to": t, "columns_and_s": lemma_le_failures(ent, p, c.field)})
    diag = {"pairs_checked": sum(1 for s, t in c.matrices if s != t), "failures": failures}
    if failures:
        return SplitReport(Decision.CRITERION_FAILED, "A", {}, diag)
    return SplitReport(Decision.SPLIT, "A", {"transitions": "all pairs pass the coincidence test"}, diag)


# -- Theorem 1 ---------------------------------------------------------------------------


def theorem1_check(b: ToricBundle, p: int) -> SplitReport:
    if b.rank != 2:
        raise CriterionError("theorem 1 applies to rank-2 bundles only")
    _require_char(b, p)
    kl = b.klyachko_length()
    balanced = [a for a, f in enumerate(b.filtrations) if f.n_max == f.n_min]
    numeric_ok = p > kl and not balanced
    cocycle = kaneyama_from_klyachko(b)
    lemma = criterion_A_check(cocycle, p)
    diag = {
        "klyachko_length": kl,
        "p": p,
        "balanced_rays": balanced,
        "rays": [
            {"ray": a, "jumps": list(f.jump_set), "n_max": f.n_max, "n_min": f.n_min}
            for a, f in enumerate(b.filtrations)
        ],
        "lemma_le": lemma.decision is Decision.SPLIT,
    }
    if numeric_ok:
        if lemma.decision is not Decision.SPLIT:  # pragma: no cover - would contradict the proof
            raise AssertionError(f"numeric condition holds but the transition test fails: {lemma.diagnostics}")
        return SplitReport(Decision.SPLIT, "1", {"klyachko_length": kl, "p": p}, diag)
    reasons = []
    if p <= kl:
        reasons.append(f"p = {p} does not exceed the Klyachko length {kl}")
    if balanced:
        reasons.append(f"n_max = n_min on rays {balanced}")
    diag["reasons"] = reasons
    return SplitReport(Decision.CRITERION_FAILED, "1", {}, diag)


# -- Theorem 2 machinery ----------------------------------------------------------------


def twist_line(b: ToricBundle, p: int) -> ToricLineData:
    """``det E^{1-p} (x) omega^{1-p}``: value ``(p - 1)(1 - det_alpha)`` on ray alpha."""
    d = det_bundle(b)
    return ToricLineData(tuple((p - 1) * (1 - v) for v in d.values))


def twisted_bundle(b: ToricBundle, p: int) -> ToricBundle:
    """Klyachko data of ``S^{r(p-1)}E (x) det E^{1-p} (x) omega^{1-p}``."""
    _require_char(b, p)
    return twist(sym_power(b, b.rank * (p - 1)), twist_line(b, p))


def fs_coefficient(b: ToricBundle, dec: ConeDecomposition, v: SymTensor) -> int:
    """Coefficient of the all-(p-1) eigen-monomial of ``v`` times ``det(B)^{p-1}``.

    ``B`` is the cone's eigen-basis in standard coordinates; the factor makes the
    value independent of the cone (it is the eigen-trivialisation of ``det E^{1-p}``).
    """
    F = b.field
    p = F.p
    B = dec.eigen_matrix()
    w = v.change_basis(mat_inverse(F, B))
    return F.mul(w.coefficient((p - 1,) * b.rank), F.pow(mat_det(F, B), p - 1))


def pi_pushforward(b: ToricBundle, s: SymTensor, cone: Cone | Sequence[int], chi: Sequence[int] | None = None) -> OmegaSection:
    """Image of the weight-chi section ``s`` of the twisted bundle on the chart of ``cone``.

    ``s`` is given as an element of ``S^{r(p-1)}E`` in the standard basis.
    """
    p = b.field.p
    if not isinstance(cone, Cone):
        cone = b.fan.cone(cone)
    chi = tuple(chi) if chi is not None else (0,) * b.fan.rank
    if s.degree != b.rank * (p - 1) or s.rank != b.rank:
        raise CriterionError("section does not live in S^{r(p-1)}E")
    dec = b.decomposition(cone)
    c = fs_coefficient(b, dec, s)
    n = b.fan.rank
    if not c:
        return OmegaSection(cone, Laurent(b.field, n))
    expo = tuple(p - 1 - pairing(chi, a) for a in cone.rays)
    return OmegaSection(cone, Laurent.monomial(b.field, expo, c))


def fs_vector(field: GF, basis: Sequence[Sequence[int]], c: int = 1) -> SymTensor:
    """``c * e_1^{p-1} ... e_r^{p-1}`` in the standard basis."""
    p = field.p
    v = SymTensor.product_of_powers(field, basis, [p - 1] * len(basis))
    return v.scale(c) if c != 1 else v


def fs_chart_sections(b: ToricBundle, v: SymTensor) -> SplittingCandidate:
    charts = tuple(pi_pushforward(b, v, d.cone) for d in b.max_cone_decompositions())
    return SplittingCandidate(charts, (0,) * b.fan.rank)


@dataclass
class FSVerification:
    ok: bool
    in_weight_space: bool
    independent_basis: bool
    chart_values: list
    overlaps_agree: bool
    normalised: SymTensor | None = None


def verify_fs_certificate(b: ToricBundle, basis: Sequence[Sequence[int]], c: int = 1) -> FSVerification:
    """Check that ``c * prod e_i^{p-1}`` lies in the weight-zero space of the twisted bundle
    and that, after normalising, ``iota(pi(v))(1) = 1`` on every chart.

    ``b`` and ``basis`` must be over the same field.
    """
    F = b.field
    p = F.p
    B = np.asarray(basis, dtype=np.int64).reshape(len(basis), -1)
    if B.shape != (b.rank, b.rank):
        raise CriterionError("certificate basis must have r vectors of length r")
    indep = mat_det(F, B) != 0
    v = fs_vector(F, B.tolist(), c)
    W = weight_space(twisted_bundle(b, p), (0,) * b.fan.rank).space
    inside = W.contains(v.coeffs)
    if not (indep and inside):
        return FSVerification(False, inside, indep, [], False)
    lam = fs_coefficient(b, b.max_cone_decompositions()[0], v)
    if not lam:  # pragma: no cover - an FS-vector always has nonzero coefficient
        return FSVerification(False, inside, indep, [], False)
    v = v.scale(F.inv(lam))
    cand = fs_chart_sections(b, v)
    one = Laurent.constant(F, b.fan.rank)
    values = [iota_eval(ch, one) for ch in cand.charts]
    ok = all(val == one for val in values) and cand.agrees_on_overlaps()
    return FSVerification(ok, inside, indep, [repr(x) for x in values], cand.agrees_on_overlaps(), v)


# -- rank-2 FS detection --------------------------------------------------------------------


@dataclass(frozen=True)
class FSDetection:
    """Outcome of :func:`fs_detect_rank2`.

    ``status`` is ``"FS"`` (with ``basis``/``c`` over ``field``), ``"NO"`` (not an
    FS-vector over any extension) or ``"UNKNOWN"`` (an FS-vector whose linear
    factors need a field beyond the degree cap).
    """

    status: str
    field: GF | None = None
    basis: tuple[tuple[int, ...], ...] | None = None
    c: int | None = None
    reason: str = ""


@functools.lru_cache(maxsize=None)
def _sqrt_table(F: GF) -> dict:
    out: dict = {}
    for x in F.elements():
        out.setdefault(F.mul(x, x), x)
    return out


@functools.lru_cache(maxsize=None)
def _artin_schreier_table(F: GF) -> dict:
    out: dict = {}
    for x in F.elements():
        out.setdefault(F.add(F.mul(x, x), x), x)
    return out


def quadratic_roots(F: GF, b: int, c: int) -> tuple[int, int] | None:
    """Roots of ``t^2 + b t + c`` in F, assuming distinct roots; None if irreducible."""
    if F.p == 2:
        # t = b s turns it into s^2 + s = c / b^2.
        s = _artin_schreier_table(F).get(F.div(c, F.mul(b, b)))
        if s is None:
            return None
        r1 = F.mul(b, s)
        return r1, F.add(r1, b)
    disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), c))
    root = _sqrt_table(F).get(disc)
    if root is None:
        return None
    half = F.inv(F.from_int(2))
    nb = F.neg(b)
    return F.mul(F.add(nb, root), half), F.mul(F.sub(nb, root), half)


def fs_detect_rank2(v: SymTensor, dmax: int = DEFAULT_DMAX) -> FSDetection:
    F = v.field
    p = F.p
    m = 2 * (p - 1)
    if v.rank != 2 or v.degree != m:
        raise CriterionError(f"expected a binary form of degree {m}, got S^{v.degree} in {v.rank} letters")
    coeffs = [int(x) for x in v.coeffs]  # coeffs[k] multiplies x^{m-k} y^k
    if not any(coeffs):
        return FSDetection("NO", reason="zero vector")
    kmin = next(k for k, c in enumerate(coeffs) if c)
    if kmin not in (0, p - 1):
        return FSDetection("NO", reason=f"root at infinity of multiplicity {kmin}")
    f = Poly(F, [coeffs[m - j] for j in range(m - kmin + 1)])
    lead = f.lead
    q = (f // poly_gcd(f, f.derivative())).monic()
    want_deg = 2 if kmin == 0 else 1
    if q.degree != want_deg or f != (q ** (p - 1)) * lead:
        return FSDetection("NO", reason="not a constant times a (p-1)-th power of a squarefree form")
    if kmin == p - 1:
        a = F.neg(q[0])
        return FSDetection("FS", F, ((0, 1), (1, F.neg(a))), lead)
    b1, c0 = q[1], q[0]
    disc = F.sub(F.mul(b1, b1), F.mul(F.from_int(4), c0))
    if disc == 0:
        return FSDetection("NO", reason="repeated linear factor")
    roots = quadratic_roots(F, b1, c0)
    K = F
    if roots is None:
        if 2 * F.d > dmax:
            return FSDetection("UNKNOWN", reason=f"linear factors need GF({p}^{2 * F.d}), beyond the degree cap {dmax}")
        K = GF(p, 2 * F.d)
        emb = embedding(F, K)
        roots = quadratic_roots(K, int(emb[b1]), int(emb[c0]))
        lead = int(emb[lead])
    r1, r2 = roots
    return FSDetection("FS", K, ((1, K.neg(r1)), (1, K.neg(r2))), lead)


# -- Theorem 2 ------------------------------------------------------------------------------


def _extension_degrees(base: GF, dmax: int) -> list[int]:
    return [k for k in range(base.d, dmax + 1) if k % base.d == 0]


def _basis_json(basis) -> list[list[int]]:
    return [[int(x) for x in row] for row in basis]


def theorem2_check(
    b: ToricBundle,
    p: int,
    dmax: int = DEFAULT_DMAX,
    exhaustion_bound: int = DEFAULT_EXHAUSTION_BOUND,
    point_budget: int = DEFAULT_POINT_BUDGET,
    certificate: Sequence[Sequence[int]] | None = None,
) -> SplitReport:
    """FS-vector search in ``W = H^0(S^{r(p-1)}E (x) det E^{1-p} (x) omega^{1-p})_0``.

    NOT_SPLIT is only reported with an exact certificate: ``W = 0``, or the
    chart coefficient ``lambda`` (nonzero on every FS-vector) vanishing on W.
    """
    _require_char(b, p)
    if not b.fan.complete:
        raise FanError("theorem 2 needs a complete fan")
    if dmax < b.field.d:
        raise CriterionError("degree cap is below the field's own degree")
    F = b.field
    tw = twisted_bundle(b, p)
    mu = (0,) * b.fan.rank
    W = weight_space(tw, mu).space
    r = b.rank
    diag: dict[str, Any] = {"weight_space_dim": W.dim, "sym_degree": r * (p - 1), "ambient_dim": W.ambient}
    if W.is_zero():
        return SplitReport(Decision.NOT_SPLIT, "2", {"certificate": "empty weight-zero space"}, diag)
    decs = b.max_cone_decompositions()
    basis_W = [SymTensor(F, r, r * (p - 1), row) for row in W.rows]
    lam = [fs_coefficient(b, decs[0], w) for w in basis_W]
    diag["lambda_on_basis"] = lam
    if not any(lam):
        return SplitReport(
            Decision.NOT_SPLIT,
            "2",
            {"certificate": "the all-(p-1) eigen-monomial coefficient vanishes on the weight-zero space"},
            diag,
        )

    def accept(bundle: ToricBundle, basis, c, source: str) -> SplitReport | None:
        ver = verify_fs_certificate(bundle, basis, c)
        if not ver.ok:
            return None
        K = bundle.field
        wit = {
            "basis": _basis_json(basis),
            "c": int(c),
            "field": {"p": K.p, "d": K.d},
            "source": source,
            "chart_iota_of_1": ver.chart_values,
        }
        return SplitReport(Decision.SPLIT, "2", wit, diag)

    if certificate is not None:
        rep = accept(b, certificate, 1, "certificate")
        diag["certificate_checked"] = rep is not None
        if rep is not None:
            return rep

    # Eigen-monomial candidates, one per maximal cone.
    for k, d in enumerate(decs):
        B = d.eigen_matrix()
        v = fs_vector(F, B.tolist())
        if W.contains(v.coeffs):
            rep = accept(b, B.tolist(), 1, f"eigen-monomial of cone {list(d.cone.ray_indices)}")
            if rep is not None:
                return rep
    diag["eigen_monomials"] = "none in the weight-zero space"
    if r != 2:
        diag["reason"] = "no eigen-monomial FS-vector; full detection is only implemented for rank 2"
        return SplitReport(Decision.UNKNOWN, "2", {}, diag)

    # Rank 2: enumerate the affine slice lambda = 1 of W over GF(p^k), k <= dmax.
    piv = next(i for i, x in enumerate(lam) if x)
    base_vec = basis_W[piv].scale(F.inv(lam[piv]))
    others = [w + base_vec.scale(F.neg(l)) for i, (w, l) in enumerate(zip(basis_W, lam)) if i != piv]
    searched = []
    exhaustive = W.dim <= exhaustion_bound
    for k in _extension_degrees(F, dmax):
        K = GF(p, k)
        count = K.q ** len(others)
        if count > point_budget:
            diag["budget_stop"] = f"GF({p}^{k}) slice has {count} points, budget {point_budget}"
            exhaustive = False
            break
        bk = b.extend_scalars(K)
        emb = embedding(F, K)
        v0 = emb[base_vec.coeffs]
        dirs = [emb[o.coeffs] for o in others]
        searched.append(k)
        for coeffs in itertools.product(range(K.q), repeat=len(dirs)):
            v = v0
            for a, dvec in zip(coeffs, dirs):
                if a:
                    v = K.add_table[v, K.mul_table[a, dvec]]
            det = fs_detect_rank2(SymTensor(K, 2, 2 * (p - 1), v), dmax)
            if det.status == "FS":
                target = bk if det.field is K else bk.extend_scalars(det.field)
                rep = accept(target, det.basis, det.c, f"search over GF({p}^{k})")
                if rep is not None:
                    diag["searched_degrees"] = searched
                    return rep
    diag["searched_degrees"] = searched
    diag["exhaustive"] = exhaustive
    diag["reason"] = (
        "no FS-vector found within the degree cap although the weight-zero space meets "
        "the splitting hyperplane; absence over the algebraic closure is not certified"
    )
    return SplitReport(Decision.UNKNOWN, "2", {}, diag)
