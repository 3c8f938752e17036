"""Trace map, the monomial splitting, and evaluation of sections of omega^{1-p}.

Chart coordinates ``u_1..u_n`` are the dual basis of a smooth maximal cone.
A section of ``omega^{1-p}`` on that chart is ``g * omega_sigma^{1-p}`` with
``omega_sigma = du_1 ^ ... ^ du_n`` and is stored as the Laurent polynomial g.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fan import Cone, Vector
from .field import GF
from .poly import Laurent


class FrobeniusError(ValueError):
    pass


def trace(f: Laurent) -> Laurent:
    """``Tr(f) = sum f_i^{1/p} x^j`` over exponents ``i = (p-1, ..., p-1) + p j``."""
    F = f.field
    p = F.p
    out = {}
    for e, c in f.terms.items():
        if all((x - (p - 1)) % p == 0 for x in e):
            out[tuple((x - (p - 1)) // p for x in e)] = F.frobenius_root(c)
    return Laurent(F, f.nvars, out)


def phi_standard(f: Laurent) -> Laurent:
    """The monomial splitting ``a x^s -> a^{1/p} x^{s/p}`` if ``p | s``, else 0, extended additively."""
    F = f.field
    p = F.p
    out = {}
    for e, c in f.terms.items():
        if all(x % p == 0 for x in e):
            out[tuple(x // p for x in e)] = F.frobenius_root(c)
    return Laurent(F, f.nvars, out)


def local_V_splitting(a: Laurent, s: Sequence[int]) -> tuple[Laurent, tuple[int, ...]] | None:
    """Splitting of ``V(E)`` on a trivialised chart applied to ``a e_1^{s_1} ... e_r^{s_r}``.

    Returns ``(phi(a), s / p)`` or None when some ``s_i`` is not divisible by p.
    """
    p = a.field.p
    if any(x % p for x in s):
        return None
    return phi_standard(a), tuple(x // p for x in s)


@dataclass(frozen=True)
class OmegaSection:
    """``coeff * omega_sigma^{1-p}`` on the chart of ``cone``."""

    cone: Cone
    coeff: Laurent

    @property
    def p(self) -> int:
        return self.coeff.field.p

    def weight(self) -> Vector | None:
        """Torus weight of a monomial section; None for sums of several weights."""
        if not self.coeff.is_monomial():
            return None
        ((e, _),) = self.coeff.terms.items()
        return self.cone.character_with_values([self.p - 1 - x for x in e])

    def on_torus(self) -> Laurent:
        """The same section as ``h * omega_x^{1-p}`` in the standard torus coordinates."""
        F = self.coeff.field
        p = F.p
        us = self.cone.dual_basis()
        n = len(us)
        shift = [(1 - p) * (sum(u[k] for u in us) - 1) for k in range(n)]
        out = {}
        for e, c in self.coeff.terms.items():
            x = [sum(a * u[k] for a, u in zip(e, us)) + shift[k] for k in range(n)]
            out[tuple(x)] = c
        # omega_sigma = det(U) x^{sum u - 1} omega_x with det(U) = +-1, and (+-1)^{1-p} = 1 in characteristic p.
        return Laurent(F, n, out)


def iota_eval(psi: OmegaSection, f: Laurent) -> Laurent:
    """``g`` with ``iota(psi)(f) = g``, i.e. ``tau(f * psi(omega_sigma)) = g omega_sigma``."""
    return trace(f * psi.coeff)


def is_chart_splitting(psi: OmegaSection) -> bool:
    one = Laurent.constant(psi.coeff.field, psi.coeff.nvars)
    return iota_eval(psi, one) == one


def canonical_omega_section(cone: Cone, field: GF, c: int = 1) -> OmegaSection:
    """``c (u_1 ... u_n)^{p-1} omega_sigma^{1-p}``, the weight-zero section."""
    n = cone.dim
    return OmegaSection(cone, Laurent.monomial(field, (field.p - 1,) * n, c))


@dataclass(frozen=True)
class SplittingCandidate:
    """Chart representatives of one global section of ``omega^{1-p}``."""

    charts: tuple[OmegaSection, ...]
    weight: Vector

    def agrees_on_overlaps(self) -> bool:
        if not self.charts:
            return True
        ref = self.charts[0].on_torus()
        return all(c.on_torus() == ref for c in self.charts[1:])

    def splits_every_chart(self) -> bool:
        return all(is_chart_splitting(c) for c in self.charts)

    def is_splitting(self) -> bool:
        return self.agrees_on_overlaps() and self.splits_every_chart()


Entry = tuple[int, Sequence[int]]


def _entry_power_product(F: GF, a: Entry, b: Entry, s: int, p: int) -> tuple[int, tuple[int, ...]]:
    scal = F.mul(F.pow(a[0], s), F.pow(b[0], p - s))
    expo = tuple(s * x + (p - s) * y for x, y in zip(a[1], b[1]))
    return scal, expo


def lemma_le_condition(entries: Sequence[Sequence[Entry]], p: int, field: GF | None = None) -> bool:
    """Coincidence test for the splittings from two bases related by a monomial 2x2 matrix.

    ``entries[i][j] = (scalar, exponent)`` stands for ``scalar * x^exponent``.
    True iff ``phi(a_1j^s a_2j^{p-s}) = 0`` for both columns j and all ``1 <= s <= p-1``;
    with monomial entries that is: the scalar is 0 or the exponent is not divisible by p.
    """
    F = field or GF(p)
    if F.p != p:
        raise FrobeniusError("field characteristic differs from p")
    if len(entries) != 2 or any(len(row) != 2 for row in entries):
        raise FrobeniusError("lemma_le_condition needs a 2x2 matrix")
    n = len(entries[0][0][1])

    def lau(e: Entry) -> Laurent:
        return Laurent(F, n, {tuple(e[1]): e[0]}) if e[0] else Laurent(F, n)

    det = lau(entries[0][0]) * lau(entries[1][1]) - lau(entries[0][1]) * lau(entries[1][0])
    if det.is_zero():
        raise FrobeniusError("transition matrix is not invertible")
    for j in range(2):
        for s in range(1, p):
            scal, expo = _entry_power_product(F, entries[0][j], entries[1][j], s, p)
            if scal and all(x % p == 0 for x in expo):
                return False
    return True


def lemma_le_failures(entries: Sequence[Sequence[Entry]], p: int, field: GF | None = None) -> list[tuple[int, int]]:
    """``(column, s)`` pairs where the product is a nonzero p-th power."""
    F = field or GF(p)
    out = []
    for j in range(2):
        for s in range(1, p):
            scal, expo = _entry_power_product(F, entries[0][j], entries[1][j], s, p)
            if scal and all(x % p == 0 for x in expo):
                out.append((j, s))
    return out
