"""Finite fields GF(p^d) with integer-encoded elements.

An element of GF(p^d) is stored as the integer ``sum(c_i * p**i)`` where
``c_0 + c_1 x + ... + c_{d-1} x^{d-1}`` is its representative modulo the
field's fixed irreducible polynomial.  For ``d == 1`` this is just the residue
mod p.  The modulus is the monic irreducible of degree d whose coefficient
vector, read from ``x^{d-1}`` down to ``x^0``, is lexicographically least.

Arithmetic uses precomputed addition/multiplication tables so the matrix
kernels in :mod:`toricsplit._kernels` can run on plain integer arrays.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np


class FieldError(ArithmeticError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# Polynomials over GF(p) as coefficient tuples, lowest degree first. Only used
# while building fields; the rest of the package works on encoded integers.


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymod(a, m, p):
    a = _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        f = (a[-1] * inv_lead) % p
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - f * mc) % p
        a = _trim(a)
    return a


def _polymulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _is_irreducible(f, p):
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            if not _polymod(f, g, p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def least_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree d over GF(p)."""
    if d == 1:
        return (0, 1)
    for n in range(p**d):
        low = [(n // p**i) % p for i in range(d)]
        f = low + [1]
        if f[0] == 0:
            continue
        if _is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible of degree {d} over GF({p})")  # pragma: no cover


class GF:
    """The finite field with ``p**d`` elements.

    Instances are cached: ``GF(3, 2) is GF(3, 2)``.  Use the methods on plain
    ints, or wrap values with :meth:`elem` for operator syntax.
    """

    _cache: dict = {}

    def __new__(cls, p: int, d: int = 1):
        key = (int(p), int(d))
        obj = cls._cache.get(key)
        if obj is not None:
            return obj
        if not is_prime(key[0]):
            raise FieldError(f"characteristic {p} is not prime")
        if key[1] < 1:
            raise FieldError("extension degree must be >= 1")
        obj = super().__new__(cls)
        obj._build(*key)
        cls._cache[key] = obj
        return obj

    def __getnewargs__(self):
        return (self.p, self.d)

    def _build(self, p, d):
        self.p = p
        self.d = d
        self.q = q = p**d
        self.modulus = least_irreducible(p, d)
        digits = np.array([[(a // p**i) % p for i in range(d)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(d, dtype=np.int64)
        add = np.zeros((q, q), dtype=np.int32)
        for i in range(d):
            col = digits[:, i].astype(np.int32)
            add += ((col[:, None] + col[None, :]) % p) * np.int32(p**i)
        neg = ((-digits) % p) @ weights
        # Discrete logarithms from a primitive element.
        if q == 2:
            gen = 1
        else:
            gen = None
            for g in range(2 if d == 1 else p, q):
                gc = _trim(digits[g])
                acc = [1]
                seen = 1
                for _ in range(q - 2):
                    acc = _polymulmod(acc, gc, self.modulus, p)
                    if acc == [1]:
                        break
                    seen += 1
                if seen == q - 1:
                    gen = g
                    break
            if gen is None:
                raise FieldError("no primitive element found")  # pragma: no cover
        exp = np.zeros(q - 1, dtype=np.int64)
        acc = [1]
        gc = _trim(digits[gen])
        for k in range(q - 1):
            exp[k] = int(np.dot(np.array(acc + [0] * (d - len(acc)), dtype=np.int64), weights))
            acc = _polymulmod(acc, gc, self.modulus, p)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        mul = np.zeros((q, q), dtype=np.int64)
        mul[1:, 1:] = exp[(log[1:, None] + log[None, 1:]) % (q - 1)]
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        self.generator = gen
        self._exp = exp
        self._log = log
        tdtype = np.int32
        self.add_table = add.astype(tdtype)
        self.mul_table = mul.astype(tdtype)
        self.neg_table = neg.astype(tdtype)
        self.inv_table = inv.astype(tdtype)
        for t in (self.add_table, self.mul_table, self.neg_table, self.inv_table):
            t.setflags(write=False)

    # -- scalar arithmetic on encoded ints ----------------------------------

    def __repr__(self):
        return f"GF({self.p}^{self.d})" if self.d > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (GF, (self.p, self.d))

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def __contains__(self, a) -> bool:
        return isinstance(a, (int, np.integer)) and 0 <= a < self.q

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self!r}")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError(f"negative power of zero in {self!r}")
            return 1 if k == 0 else 0
        return int(self._exp[(int(self._log[a]) * k) % (self.q - 1)])

    def frobenius(self, a: int) -> int:
        """``a ** p``."""
        return self.pow(a, self.p)

    def frobenius_root(self, a: int) -> int:
        """The unique ``b`` with ``b ** p == a``."""
        return self.pow(a, self.p ** (self.d - 1))

    def from_int(self, n: int) -> int:
        """Image of an integer under the prime-field embedding."""
        return n % self.p

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        """Element with representative ``sum(coeffs[i] x^i)`` (reduced mod the modulus)."""
        red = _polymod([c % self.p for c in coeffs], list(self.modulus), self.p) if coeffs else []
        return sum(c * self.p**i for i, c in enumerate(red))

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**i) % self.p for i in range(self.d))

    def sum(self, values: Iterable[int]) -> int:
        acc = 0
        for v in values:
            acc = int(self.add_table[acc, v])
        return acc

    def elem(self, a: int) -> "FieldElem":
        return FieldElem(self, a)

    def nonzero(self) -> Iterator[int]:
        return iter(range(1, self.q))

    # -- subfields ------------------------------------------------------------

    def embedding_from(self, sub: "GF") -> np.ndarray:
        """Array ``e`` with ``e[a]`` the image of ``a in sub`` inside this field.

        The generator of ``sub`` over GF(p) is sent to the least (by encoding)
        root of ``sub``'s modulus here, which makes the embedding deterministic.
        """
        if sub.p != self.p or self.d % sub.d:
            raise FieldError(f"{sub!r} does not embed in {self!r}")
        if sub.d == self.d:
            return np.arange(self.q, dtype=np.int64)
        root = None
        for cand in range(self.q):
            acc = 0
            power = 1
            for c in sub.modulus:
                acc = self.add(acc, self.mul(self.from_int(c), power))
                power = self.mul(power, cand)
            if acc == 0:
                root = cand
                break
        if root is None:  # pragma: no cover
            raise FieldError("modulus has no root in extension")
        powers = [self.pow(root, i) for i in range(sub.d)]
        table = np.zeros(sub.q, dtype=np.int64)
        for a in range(sub.q):
            acc = 0
            for c, pw in zip(sub.to_coeffs(a), powers):
                if c:
                    acc = self.add(acc, self.mul(self.from_int(c), pw))
            table[a] = acc
        return table


@functools.lru_cache(maxsize=None)
def embedding(sub: GF, big: GF) -> np.ndarray:
    table = big.embedding_from(sub)
    table.setflags(write=False)
    return table


class FieldElem:
    """An element of a :class:`GF` with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field: GF, value: int):
        if not 0 <= int(value) < field.q:
            raise FieldError(f"{value} is not an element of {field!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", int(value))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise FieldError(f"mixed fields {self.field!r} and {other.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.div(b, self.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElem(self.field, self.field.pow(self.value, int(k)))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.value))

    def frobenius_root(self) -> "FieldElem":
        return FieldElem(self.field, self.field.frobenius_root(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.d, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.field!r}({self.value})"
