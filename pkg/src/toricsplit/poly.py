"""Univariate and Laurent polynomials over :class:`~toricsplit.field.GF`."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .field import GF, FieldError

#: Degree reported for the zero polynomial.
ZERO_DEGREE = -1


class Poly:
    """Univariate polynomial, coefficients lowest degree first, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs: Iterable[int] = ()):
        c = [int(a) for a in coeffs]
        for a in c:
            if not 0 <= a < field.q:
                raise FieldError(f"coefficient {a} not in {field!r}")
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, field: GF, k: int, c: int = 1) -> "Poly":
        return cls(field, [0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def _check(self, other: "Poly"):
        if other.field is not self.field:
            raise FieldError("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, [F.add(self[k], other[k]) for k in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, [self.field.neg(a) for a in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        F = self.field
        if isinstance(other, int):
            return Poly(F, [F.mul(a, other) for a in self.coeffs])
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly(self.field, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(F), self
        quo = [0] * (dq + 1)
        inv_lead = F.inv(other.lead)
        for shift in range(dq, -1, -1):
            c = rem[shift + len(other.coeffs) - 1]
            if c == 0:
                continue
            f = F.mul(c, inv_lead)
            quo[shift] = f
            for j, b in enumerate(other.coeffs):
                rem[shift + j] = F.sub(rem[shift + j], F.mul(f, b))
        return Poly(F, quo), Poly(F, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.field.inv(self.lead)

    def derivative(self) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(F.from_int(k), a) for k, a in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for a in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), a)
        return acc

    def roots(self) -> list[int]:
        """All roots in the coefficient field, by exhaustive evaluation."""
        return [x for x in self.field.elements() if self(x) == 0]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __repr__(self):
        terms = [f"{a}*x^{k}" for k, a in enumerate(self.coeffs) if a]
        return f"Poly[{self.field!r}]({' + '.join(terms) or '0'})"


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; ``poly_gcd(f, 0) == f.monic()``."""
    f._check(g)
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class Laurent:
    """Laurent polynomial in ``nvars`` variables: ``{exponent tuple: coefficient}``."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: GF, nvars: int, terms: Mapping[Sequence[int], int] | None = None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = int(c)
            if not 0 <= c < field.q:
                raise FieldError(f"coefficient {c} not in {field!r}")
            if c:
                clean[e] = field.add(clean.get(e, 0), c)
                if clean[e] == 0:
                    del clean[e]
        self.terms = clean

    @classmethod
    def monomial(cls, field: GF, exponent: Sequence[int], c: int = 1) -> "Laurent":
        return cls(field, len(exponent), {tuple(exponent): c})

    @classmethod
    def constant(cls, field: GF, nvars: int, c: int = 1) -> "Laurent":
        return cls(field, nvars, {(0,) * nvars: c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def _check(self, other: "Laurent"):
        if other.field is not self.field or other.nvars != self.nvars:
            raise FieldError("incompatible Laurent polynomials")

    def __add__(self, other: "Laurent") -> "Laurent":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Laurent(F, self.nvars, out)

    def __neg__(self) -> "Laurent":
        F = self.field
        return Laurent(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other) -> "Laurent":
        F = self.field
        if isinstance(other, int):
            return Laurent(F, self.nvars, {e: F.mul(c, other) for e, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = F.add(out.get(e, 0), F.mul(c1, c2))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Laurent(F, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Laurent":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self.terms.items()
            return Laurent(self.field, self.nvars, {tuple(k * x for x in e): self.field.pow(self.field.inv(c), -k)})
        result = Laurent.constant(self.field, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def frobenius(self) -> "Laurent":
        """``f ** p`` computed termwise (exact in characteristic p)."""
        F = self.field
        p = F.p
        return Laurent(F, self.nvars, {tuple(p * x for x in e): F.frobenius(c) for e, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            return NotImplemented
        return self.field is other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.field.q, self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "Laurent(0)"
        parts = [f"{c}*x^{list(e)}" for e, c in sorted(self.terms.items())]
        return "Laurent(" + " + ".join(parts) + ")"
