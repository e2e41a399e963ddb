"""Exact arithmetic in F_p and the number theory needed to build subgroups.

Field elements are plain Python ints in ``[0, p)``; the modulus travels
separately in a :class:`PrimeContext`.  Python ints never overflow, so the
"128-bit intermediate" requirement is met for free.  Bulk numpy helpers
(inverse and discrete-log tables) are cached per prime.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

from .errors import SubgroupLabError, ZeroInverse

FieldElement = int

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# Above this size the per-prime lookup tables get too large to cache.
TABLE_LIMIT = 1 << 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale inputs only)."""
    if n < 1:
        raise SubgroupLabError(f"cannot factor {n}")
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    small, large = [], []
    for k in range(1, isqrt(n) + 1):
        if n % k == 0:
            small.append(k)
            if k != n // k:
                large.append(n // k)
    return small + large[::-1]


def _modulus(ctx) -> int:
    return ctx.p if isinstance(ctx, PrimeContext) else int(ctx)


def mod_pow(base: FieldElement, exp: int, ctx) -> FieldElement:
    """``base**exp mod p`` by left-to-right square-and-multiply."""
    p = _modulus(ctx)
    if exp < 0:
        raise SubgroupLabError("negative exponent; use mod_inv first")
    result, b = 1, base % p
    for bit in bin(exp)[2:]:
        result = result * result % p
        if bit == "1":
            result = result * b % p
    return result % p


def mod_inv(a: FieldElement, ctx) -> FieldElement:
    p = _modulus(ctx)
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    # extended Euclid
    r0, r1, s0, s1 = p, a, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % p


def _is_generator(g: int, p: int, factors) -> bool:
    return all(pow(g, (p - 1) // q, p) != 1 for q in factors)


def primitive_root(p: int) -> FieldElement:
    """Smallest generator of F_p^*."""
    if p < 3 or not is_prime(p):
        raise SubgroupLabError(f"{p} is not an odd prime")
    factors = tuple(factorize(p - 1))
    g = 2
    while not _is_generator(g, p, factors):
        g += 1
    return g


@dataclass(frozen=True)
class PrimeContext:
    p: int
    g: int
    factors: tuple[int, ...]

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise SubgroupLabError(f"p not prime: {self.p}")
        if not _is_generator(self.g, self.p, self.factors):
            raise SubgroupLabError(f"{self.g} is not a primitive root mod {self.p}")

    @classmethod
    def of(cls, p: int) -> "PrimeContext":
        return _context(int(p))

    @property
    def order(self) -> int:
        """Order of the cyclic group F_p^*."""
        return self.p - 1


@lru_cache(maxsize=None)
def _context(p: int) -> PrimeContext:
    if p < 3 or not is_prime(p):
        raise SubgroupLabError(f"p not prime: {p}")
    return PrimeContext(p, primitive_root(p), tuple(sorted(factorize(p - 1))))


@lru_cache(maxsize=64)
def power_table(p: int) -> np.ndarray:
    """``g**k mod p`` for ``k = 0..p-2``, g the smallest primitive root."""
    ctx = PrimeContext.of(p)
    out = np.empty(p - 1, dtype=np.int64)
    x = 1
    for k in range(p - 1):
        out[k] = x
        x = x * ctx.g % p
    return out


@lru_cache(maxsize=64)
def dlog_table(p: int) -> np.ndarray:
    """Inverse of :func:`power_table`; entry 0 is -1 (log of zero undefined)."""
    out = np.full(p, -1, dtype=np.int64)
    out[power_table(p)] = np.arange(p - 1, dtype=np.int64)
    return out


@lru_cache(maxsize=64)
def inverse_table(p: int) -> np.ndarray:
    """``x**-1 mod p`` for every x; entry 0 is 0."""
    pw = power_table(p)
    out = np.zeros(p, dtype=np.int64)
    # g^-k = g^(p-1-k)
    out[pw] = pw[(-np.arange(p - 1)) % (p - 1)]
    return out


def inv_array(values: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse of nonzero residues."""
    values = np.asarray(values, dtype=np.int64) % p
    if np.any(values == 0):
        raise ZeroInverse("array contains 0")
    if p <= TABLE_LIMIT:
        return inverse_table(p)[values]
    return np.array([pow(int(v), -1, p) for v in values], dtype=np.int64)


def mul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Broadcasting product mod p without int64 overflow."""
    if p < 3_037_000_499:
        return (a * b) % p
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return ((a * b) % p).astype(np.int64)
