"""Multiplicative subgroups of F_p^*, their cosets, and invariant sets.

Sets of field elements are passed around as sorted ``int64`` numpy arrays.
Every subgroup of order ``d`` is ``{g**(m*k)}`` with ``m = (p-1)/d``; the
canonical coset representatives are ``g**j`` for ``0 <= j < m``, so the
coset of a nonzero ``x`` is indexed by ``dlog(x) mod m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateCoset, NotADivisor, SubgroupLabError, ZeroDilation
from .field import TABLE_LIMIT, PrimeContext, dlog_table, mod_pow, mul_mod, power_table


def as_set(values: Iterable[int], p: int) -> np.ndarray:
    """Canonical form of an element set: sorted, unique, reduced mod p."""
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.int64)
    return np.unique(arr % p)


def _coset_index(x: np.ndarray, ctx: PrimeContext, m: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64) % ctx.p
    if np.any(x == 0):
        raise SubgroupLabError("0 lies in no multiplicative coset")
    if ctx.p <= TABLE_LIMIT:
        return dlog_table(ctx.p)[x] % m
    # g^j ~ x  iff  (x * g^-j)^d == 1; fall back to solving per element
    d = (ctx.p - 1) // m
    ginv = pow(ctx.g, -1, ctx.p)
    out = np.empty(len(x), dtype=np.int64)
    for i, v in enumerate(int(t) for t in x):
        j = 0
        while pow(v, d, ctx.p) != 1:
            v = v * ginv % ctx.p
            j += 1
        out[i] = j
    return out


@dataclass(frozen=True, eq=False)
class Subgroup:
    ctx: PrimeContext
    order: int
    generator: int
    elements: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def index(self) -> int:
        """Number of cosets, ``(p-1)/d``."""
        return (self.ctx.p - 1) // self.order

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.ctx.p, dtype=bool)
        m[self.elements] = True
        return m

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x) % self.ctx.p])

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.ctx.p == other.ctx.p
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.ctx.p, self.order))

    def coset_index(self, x) -> np.ndarray:
        return _coset_index(np.atleast_1d(x), self.ctx, self.index)


def subgroup(ctx: PrimeContext | int, d: int) -> Subgroup:
    if not isinstance(ctx, PrimeContext):
        ctx = PrimeContext.of(ctx)
    p = ctx.p
    if d < 1 or (p - 1) % d:
        raise NotADivisor(f"{d} does not divide p-1 = {p - 1}")
    m = (p - 1) // d
    gen = mod_pow(ctx.g, m, ctx)
    if p <= TABLE_LIMIT:
        elems = np.sort(power_table(p)[::m])
    else:
        elems, x = [], 1
        for _ in range(d):
            elems.append(x)
            x = x * gen % p
        elems = np.sort(np.array(elems, dtype=np.int64))
    elems.setflags(write=False)
    return Subgroup(ctx, d, gen, elems)


@dataclass(frozen=True, eq=False)
class CosetReps:
    base: Subgroup
    reps: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.reps)


def coset_reps(G: Subgroup) -> CosetReps:
    p, m = G.ctx.p, G.index
    if p <= TABLE_LIMIT:
        reps = power_table(p)[:m].copy()
    else:
        reps = np.array([pow(G.ctx.g, j, p) for j in range(m)], dtype=np.int64)
    reps.setflags(write=False)
    return CosetReps(G, reps)


@dataclass(frozen=True, eq=False)
class InvariantSet:
    base: Subgroup
    chosen_reps: np.ndarray = field(repr=False)
    elements: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.elements)

    @property
    def p(self) -> int:
        return self.base.ctx.p


def invariant_set(G: Subgroup, reps: Iterable[int]) -> InvariantSet:
    """Union of the cosets ``r*G`` over ``reps`` (one rep per coset)."""
    p = G.ctx.p
    reps = np.asarray(list(reps), dtype=np.int64) % p
    idx = G.coset_index(reps) if len(reps) else np.empty(0, dtype=np.int64)
    if len(np.unique(idx)) != len(idx):
        raise DuplicateCoset("two representatives share a coset")
    elems = np.sort(mul_mod(reps[:, None], G.elements[None, :], p).ravel())
    reps.setflags(write=False)
    elems.setflags(write=False)
    return InvariantSet(G, reps, elems)


def random_invariant_set(G: Subgroup, k: int, rng: np.random.Generator) -> InvariantSet:
    """Invariant set made of ``k`` distinct cosets drawn by ``rng``."""
    reps = coset_reps(G).reps
    if not 1 <= k <= len(reps):
        raise SubgroupLabError(f"need 1 <= k <= {len(reps)}, got {k}")
    chosen = np.sort(rng.choice(len(reps), size=k, replace=False))
    return invariant_set(G, reps[chosen])


def dilate_invariant(Q: InvariantSet, xi: int) -> InvariantSet:
    """``xi * Q``, again an invariant set over the same subgroup."""
    p = Q.p
    if xi % p == 0:
        raise ZeroDilation("cannot dilate by 0")
    new = mul_mod(np.asarray(Q.chosen_reps), xi % p, p)
    # rewrite each image rep as the canonical rep of its coset
    canon = coset_reps(Q.base).reps[Q.base.coset_index(new)] if len(new) else new
    return invariant_set(Q.base, np.sort(canon))


def shift(A: Sequence[int], x: int, p: int) -> np.ndarray:
    return np.sort((np.asarray(A, dtype=np.int64) + x) % p)


def dilate(A: Sequence[int], xi: int, p: int) -> np.ndarray:
    if xi % p == 0:
        raise ZeroDilation("cannot dilate by 0")
    return np.sort(mul_mod(np.asarray(A, dtype=np.int64), xi % p, p))
