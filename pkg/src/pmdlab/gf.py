"""Arithmetic in the small Galois fields GF(p^d).

An element of GF(p^d) is the polynomial a_{d-1}x^{d-1} + ... + a_0 over
GF(p), reduced modulo a fixed monic irreducible polynomial, and is encoded
as the integer a_{d-1}p^{d-1} + ... + a_1 p + a_0 in 0..q-1.  Index 0 is
zero and index 1 is one.

All arithmetic goes through precomputed tables, so the geometry code can
work on plain integer tuples.  :class:`FieldElement` wraps an index for
callers that prefer operator syntax.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

__all__ = [
    "FieldError",
    "FieldSpec",
    "FieldElement",
    "field_make",
    "field_of_order",
    "add",
    "sub",
    "neg",
    "mul",
    "inv",
    "is_prime",
    "prime_power",
    "supported_fields",
]

MAX_PRIME = 31

# Conway polynomials, coefficients from the constant term upwards.
MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, d)`` with ``q == p**d`` and ``p`` prime, or None."""
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    d = 0
    while q % p == 0:
        q //= p
        d += 1
    return (p, d) if q == 1 else None


def supported_fields() -> list[int]:
    qs = [p for p in range(2, MAX_PRIME + 1) if is_prime(p)]
    qs += [p**d for p, d in MODULI]
    return sorted(qs)


def _poly_rem(num, den, p):
    # coefficient lists low -> high; den is monic
    num = list(num)
    dd = len(den) - 1
    for shift in range(len(num) - 1 - dd, -1, -1):
        c = num[shift + dd] % p
        if c:
            for i, b in enumerate(den):
                num[shift + i] = (num[shift + i] - c * b) % p
    return [c % p for c in num[:dd]]


def _is_irreducible(poly, p) -> bool:
    d = len(poly) - 1
    for deg in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not any(_poly_rem(poly, low + (1,), p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^d).  Equality and hashing use ``(p, d)`` only."""

    p: int
    d: int
    q: int = field(init=False)
    modulus: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.d < 1:
            raise FieldError(f"degree must be positive, got {self.d}")
        if self.d == 1:
            if self.p > MAX_PRIME:
                raise FieldError(
                    f"unsupported field GF({self.p}): prime fields are limited to p <= {MAX_PRIME}"
                )
            modulus = (0, 1)
        else:
            if (self.p, self.d) not in MODULI:
                listed = ", ".join(f"GF({p}^{d})" for p, d in MODULI)
                raise FieldError(
                    f"unsupported field GF({self.p}^{self.d}): extension fields are limited to {listed}"
                )
            modulus = MODULI[self.p, self.d]
            if not _is_irreducible(modulus, self.p):
                raise FieldError(f"modulus {modulus} is reducible over GF({self.p})")
        object.__setattr__(self, "q", self.p**self.d)
        object.__setattr__(self, "modulus", modulus)
        self._build_tables()

    def _build_tables(self):
        p, d, q = self.p, self.d, self.q
        digits = [self.to_coeffs(a) for a in range(q)]
        add_t = [[self.from_coeffs([(x + y) % p for x, y in zip(da, db)]) for db in digits] for da in digits]
        mul_t = []
        for da in digits:
            row = []
            for db in digits:
                prod = [0] * (2 * d - 1)
                for i, x in enumerate(da):
                    if x:
                        for j, y in enumerate(db):
                            prod[i + j] += x * y
                if d == 1:
                    row.append(prod[0] % p)
                else:
                    row.append(self.from_coeffs(_poly_rem(prod, self.modulus, p)))
            mul_t.append(tuple(row))
        neg_t = [add_t[a].index(0) for a in range(q)]
        inv_t = [0] + [mul_t[a].index(1) for a in range(1, q)]
        object.__setattr__(self, "add_table", tuple(tuple(r) for r in add_t))
        object.__setattr__(self, "mul_table", tuple(mul_t))
        object.__setattr__(self, "neg_table", tuple(neg_t))
        object.__setattr__(self, "inv_table", tuple(inv_t))

    def to_coeffs(self, a: int) -> list[int]:
        """Coefficients of element ``a``, constant term first."""
        out = []
        for _ in range(self.d):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def from_coeffs(self, coeffs) -> int:
        n = 0
        for c in reversed(list(coeffs)):
            n = n * self.p + c
        return n

    # Raw index arithmetic, used by the geometry layer.

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in " + str(self))
        return self.inv_table[a]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        out = 1
        while n:
            if n & 1:
                out = self.mul_table[out][a]
            a = self.mul_table[a][a]
            n >>= 1
        return out

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, a) for a in range(self.q)]

    def __call__(self, index: int) -> FieldElement:
        return FieldElement(self, index)

    def __str__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field_make(p: int, d: int = 1) -> FieldSpec:
    """Return the (cached) field GF(p^d)."""
    return FieldSpec(p, d)


def field_of_order(q: int) -> FieldSpec:
    pd = prime_power(q)
    if pd is None:
        raise FieldError(f"{q} is not a prime power")
    return field_make(*pd)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.field.q:
            raise FieldError(f"index {self.index} out of range for {self.field}")

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.add(self.index, other.index))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.sub(self.index, other.index))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.mul(self.index, other.index))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.index, n))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.index))

    def __bool__(self):
        return self.index != 0

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"{self.field}({self.index})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()
