"""Exact arithmetic in GF(p^k) for prime powers up to 625.

Elements are plain integers 0..q-1: the coefficient vector of the
polynomial representative, read as a base-p number (lowest degree first,
so index p**i picks out x^i).  Each field carries dense multiplication
and inversion tables, which is the right trade at these sizes.

Moduli are pinned Conway polynomials so that every construction
downstream is bit-for-bit reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

MAX_ORDER = 625

# Conway polynomial coefficients, low degree first, for every (p, k) with
# k >= 2 and p^k <= 625.  Degree-1 moduli are derived on the fly.
_CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
    (17, 2): (3, 16, 1),
    (19, 2): (2, 18, 1),
    (23, 2): (5, 21, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _smallest_primitive_root(p: int) -> int:
    factors = _prime_factors(p - 1)
    for g in range(1, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


@dataclass(frozen=True)
class FieldElement:
    """Element of a finite field; thin wrapper over the integer index."""

    field: "Field"
    index: int

    def _peer(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise ValueError("elements from different fields")
        return other.index

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.add_i(self.index, self._peer(other)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.sub_i(self.index, self._peer(other)))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.mul_i(self.index, self._peer(other)))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg_i(self.index))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow_i(self.index, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv_i(self.index))

    def conjugate(self, base_q: int) -> "FieldElement":
        return FieldElement(self.field, self.field.conj_i(self.index, base_q))

    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.index)

    def __repr__(self) -> str:
        return f"GF({self.field.q})[{self.index}]"


class Field:
    """GF(p^k) with table-driven arithmetic on integer-indexed elements."""

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        q = p**k
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds supported limit {MAX_ORDER}")
        self.p = p
        self.k = k
        self.q = q
        if k == 1:
            g = _smallest_primitive_root(p) if p > 2 else 1
            self.modulus = ((-g) % p, 1)
        else:
            self.modulus = _CONWAY[(p, k)]
        self._mul = self._build_mul_table()
        self._inv = self._build_inv_table()

    # ---- integer-index arithmetic (the hot path) ----

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def _from_coeffs(self, cs) -> int:
        a = 0
        for c in reversed(cs):
            a = a * self.p + (c % self.p)
        return a

    def add_i(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg_i(self, a: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub_i(self, a: int, b: int) -> int:
        return self.add_i(a, self.neg_i(b))

    def mul_i(self, a: int, b: int) -> int:
        return self._mul[a * self.q + b]

    def inv_i(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def pow_i(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv_i(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul_i(result, a)
            a = self.mul_i(a, a)
            e >>= 1
        return result

    def conj_i(self, a: int, base_q: int) -> int:
        if base_q * base_q != self.q:
            raise ValueError(f"conjugation needs field order {base_q}^2, have {self.q}")
        return self.pow_i(a, base_q)

    def _build_mul_table(self) -> list[int]:
        p, k, q = self.p, self.k, self.q
        mod = self.modulus
        table = [0] * (q * q)
        coeff_cache = [self.coeffs(a) for a in range(q)]
        for a in range(q):
            ca = coeff_cache[a]
            for b in range(a, q):
                cb = coeff_cache[b]
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod[i + j] = (prod[i + j] + x * y) % p
                for d in range(2 * k - 2, k - 1, -1):
                    c = prod[d]
                    if c:
                        prod[d] = 0
                        for i in range(k):
                            prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
                v = self._from_coeffs(prod[:k])
                table[a * q + b] = v
                table[b * q + a] = v
        return table

    def _build_inv_table(self) -> list[int]:
        inv = [0] * self.q
        for a in range(1, self.q):
            if inv[a]:
                continue
            for b in range(1, self.q):
                if self.mul_i(a, b) == 1:
                    inv[a] = b
                    inv[b] = a
                    break
        return inv

    # ---- element interface ----

    def element(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise ValueError(f"index {index} outside [0,{self.q})")
        return FieldElement(self, index)

    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self):
        return [FieldElement(self, i) for i in range(self.q)]

    def __repr__(self) -> str:
        return f"Field(GF({self.p}^{self.k}))" if self.k > 1 else f"Field(GF({self.p}))"


_FIELD_CACHE: dict[tuple[int, int], Field] = {}


def field_new(p: int, k: int) -> Field:
    """Shared GF(p^k) instance (tables are expensive to rebuild)."""
    key = (p, k)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = Field(p, k)
    return _FIELD_CACHE[key]


def field_of_order(q: int) -> Field:
    """GF(q) for a prime power q."""
    if q < 2:
        raise ValueError("field order must be >= 2")
    p = min(_prime_factors(q))
    k = 0
    m = q
    while m > 1:
        if m % p:
            raise ValueError(f"{q} is not a prime power")
        m //= p
        k += 1
    return field_new(p, k)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, e: int) -> FieldElement:
    return a**e


def conjugate(a: FieldElement, base_q: int) -> FieldElement:
    """Frobenius x -> x^q on GF(q^2); an involution fixing GF(q)."""
    return a.conjugate(base_q)
