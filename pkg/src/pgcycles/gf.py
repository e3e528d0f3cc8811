"""Arithmetic in GF(p^e).

Elements are stored as their canonical integer encoding
``sum(coeffs[i] * p**i)``, where ``coeffs`` are the coefficients of a
polynomial over GF(p) reduced modulo a monic irreducible ``modulus``.
The same encoding is used when points are written to certificates.

Small fields (q <= 256) get full addition/multiplication tables; larger
ones fall back to direct polynomial arithmetic.  Either way the results
are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

MAX_ORDER = 2**20
_TABLE_LIMIT = 256


class NonPrime(ValueError):
    pass


class SizeExceeded(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
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


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` into ``(p, e)`` with ``q == p**e``; raise NonPrime otherwise."""
    if q < 2:
        raise NonPrime(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NonPrime(f"{q} is not a prime power")
    return p, e


# -- polynomials over GF(p), coefficient lists with constant term first --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    r = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(r) - 1 >= dm:
        c = r[-1]
        shift = len(r) - 1 - dm
        for i, mc in enumerate(m):
            r[shift + i] = (r[shift + i] - c * mc) % p
        _trim(r)
    return r


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    deg = len(f) - 1
    if deg <= 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


def _monic_candidates(p: int, e: int) -> Iterator[tuple[int, ...]]:
    # product() varies the last position fastest, so the constant term
    # is the most significant key of the ordering.
    for low in product(range(p), repeat=e):
        yield low + (1,)


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^e) with a fixed modulus.

    Elements passed to the arithmetic methods are canonical integers in
    ``range(q)``; use :meth:`element` for an object with operators.
    """

    p: int
    e: int
    q: int
    modulus: tuple[int, ...]

    # -- encoding --

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.e:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + c % self.p
        return v

    def element(self, value: int) -> FieldElement:
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element of GF({self.q})")
        return FieldElement(self, value)

    # -- raw arithmetic on canonical integers --

    def _add_raw(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        return self.from_coeffs([(x + y) % self.p for x, y in zip(ca, cb)])

    def _neg_raw(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.from_coeffs([(-x) % self.p for x in self.coeffs(a)])

    def _mul_raw(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    @cached_property
    def add_table(self) -> list[list[int]] | None:
        if self.q > _TABLE_LIMIT:
            return None
        return [[self._add_raw(a, b) for b in range(self.q)] for a in range(self.q)]

    @cached_property
    def mul_table(self) -> list[list[int]] | None:
        if self.q > _TABLE_LIMIT:
            return None
        return [[self._mul_raw(a, b) for b in range(self.q)] for a in range(self.q)]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self._neg_raw(a) for a in range(self.q)] if self.q <= _TABLE_LIMIT else []

    @cached_property
    def inv_table(self) -> list[int]:
        if self.q > _TABLE_LIMIT:
            return []
        out = [0] * self.q
        mt = self.mul_table
        for a in range(1, self.q):
            row = mt[a]
            out[a] = row.index(1)
        return out

    def add(self, a: int, b: int) -> int:
        t = self.add_table
        return t[a][b] if t is not None else self._add_raw(a, b)

    def neg(self, a: int) -> int:
        t = self.neg_table
        return t[a] if t else self._neg_raw(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        t = self.mul_table
        return t[a][b] if t is not None else self._mul_raw(a, b)

    def pow(self, a: int, m: int) -> int:
        if m < 0:
            return self.pow(self.inv(a), -m)
        result, base = 1, a
        while m:
            if m & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            m >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        t = self.inv_table
        return t[a] if t else self.pow(a, self.q - 2)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise DivisionByZero("zero has no multiplicative order")
        n, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            n += 1
        return n

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coeffs(self.value)

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("operands belong to different fields")
            return other.value
        return self.spec.from_coeffs([other])

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.value, self.spec.inv(self._other(other))))

    def __pow__(self, m: int):
        return FieldElement(self.spec, self.spec.pow(self.value, m))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value}@GF({self.spec.q})"


def make_field(p: int, e: int = 1) -> FieldSpec:
    """Build GF(p^e) with the lexicographically first irreducible monic modulus."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("exponent must be positive")
    q = p**e
    if q > MAX_ORDER:
        raise SizeExceeded(f"GF({p}^{e}) exceeds the limit of {MAX_ORDER} elements")
    for cand in _monic_candidates(p, e):
        if _is_irreducible(cand, p):
            return FieldSpec(p, e, q, cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def field_of_order(q: int) -> FieldSpec:
    return make_field(*prime_power(q))


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, a.spec.inv(a.value))


def power(a: FieldElement, m: int) -> FieldElement:
    return a**m


def enumerate_elements(spec: FieldSpec) -> list[FieldElement]:
    return [FieldElement(spec, v) for v in range(spec.q)]


def primitive_element(spec: FieldSpec) -> FieldElement:
    for v in range(1, spec.q):
        if spec.order(v) == spec.q - 1:
            return FieldElement(spec, v)
    raise AssertionError("finite field without a generator")  # pragma: no cover
