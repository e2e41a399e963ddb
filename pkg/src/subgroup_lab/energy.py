"""Representation profiles, sumsets and additive/multiplicative energies.

All set arguments are iterables of residues mod ``p``; duplicates are
dropped.  Profiles are dense ``bincount`` arrays internally and exposed as
:class:`RepProfile` (value -> multiplicity).  Zero is a legal element for
the multiplicative variants: any product with a zero factor lands on 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import BudgetExceeded, EmptySet, InvariantViolation, ZeroShift
from .field import TABLE_LIMIT, dlog_table, inv_array, mul_mod, power_table
from .groups import Subgroup, as_set

Op = Literal["add", "add_corr", "mul", "mul_corr"]

# |A||B| above which multiplicative profiles go through the discrete-log FFT
DLOG_THRESHOLD = 1 << 16


@dataclass(frozen=True)
class RepProfile:
    counts: dict[int, int]
    total: int

    @property
    def support(self) -> np.ndarray:
        return np.array(sorted(self.counts), dtype=np.int64)

    @property
    def energy(self) -> int:
        return sum(r * r for r in self.counts.values())

    def __getitem__(self, s: int) -> int:
        return self.counts.get(s, 0)


def _prep(A, p: int) -> np.ndarray:
    A = as_set(A, p)
    if len(A) == 0:
        raise EmptySet("empty set")
    return A


def _cyclic_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = len(a)
    out = np.fft.irfft(np.fft.rfft(a) * np.fft.rfft(b), n)
    return np.rint(out).astype(np.int64)


def _mul_counts_dlog(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Dense product profile via exponent convolution in the cyclic group."""
    logs = dlog_table(p)
    az, bz = A[A != 0], B[B != 0]
    ia = np.zeros(p - 1)
    ib = np.zeros(p - 1)
    ia[logs[az]] = 1
    ib[logs[bz]] = 1
    conv = _cyclic_conv(ia, ib)
    out = np.zeros(p, dtype=np.int64)
    out[power_table(p)] = conv
    out[0] = len(A) * len(B) - len(az) * len(bz)
    if out.sum() != len(A) * len(B):
        raise InvariantViolation("FFT rounding lost mass")
    return out


def _values(A: np.ndarray, B: np.ndarray, op: Op, p: int) -> np.ndarray:
    if op == "add":
        return (A[:, None] + B[None, :]) % p
    if op == "add_corr":
        return (B[None, :] - A[:, None]) % p
    if op == "mul":
        return mul_mod(A[:, None], B[None, :], p)
    if op == "mul_corr":
        A = A[A != 0]
        return mul_mod(inv_array(A, p)[:, None], B[None, :], p)
    raise ValueError(f"unknown op {op!r}")


def profile_array(A, B, op: Op, p: int, method: str = "auto") -> np.ndarray:
    """Dense multiplicity vector of length ``p`` (requires p <= TABLE_LIMIT)."""
    A, B = _prep(A, p), _prep(B, p)
    if op == "mul":
        fast = method == "dlog" or (method == "auto" and len(A) * len(B) > DLOG_THRESHOLD)
        if fast:
            return _mul_counts_dlog(A, B, p)
    return np.bincount(_values(A, B, op, p).ravel(), minlength=p)


def rep_profile(A, B, op: Op, p: int, method: str = "auto") -> RepProfile:
    """Multiplicity profile of ``a+b``, ``b-a``, ``a*b`` or ``b/a``.

    For ``mul_corr`` pairs with ``a == 0`` are skipped, so the total is
    ``|A \\ {0}| * |B|``.
    """
    if p > TABLE_LIMIT:
        vals = _values(_prep(A, p), _prep(B, p), op, p)
        v, c = np.unique(vals.ravel(), return_counts=True)
        counts = dict(zip(v.tolist(), c.tolist()))
    else:
        arr = profile_array(A, B, op, p, method)
        nz = np.flatnonzero(arr)
        counts = dict(zip(nz.tolist(), arr[nz].tolist()))
    return RepProfile(counts, sum(counts.values()))


def _energy(A, B, op: Op, p: int, method: str = "auto") -> int:
    if p > TABLE_LIMIT:
        return rep_profile(A, B, op, p).energy
    arr = profile_array(A, B, op, p, method)
    return int(np.dot(arr, arr))


def additive_energy(A, B, p: int) -> int:
    return _energy(A, B, "add", p)


def multiplicative_energy(A, B, p: int, method: str = "auto") -> int:
    return _energy(A, B, "mul", p, method)


def sumset(A, B, p: int) -> np.ndarray:
    A, B = _prep(A, p), _prep(B, p)
    return np.unique((A[:, None] + B[None, :]) % p)


def iterated_sumset(A, k: int, p: int) -> np.ndarray:
    """``kA = A + ... + A``; stops convolving once the support is all of F_p."""
    if k < 1:
        raise ValueError("k must be positive")
    A = _prep(A, p)
    ind = np.zeros(p, dtype=bool)
    ind[A] = True
    for _ in range(k - 1):
        if ind.all():
            break
        nxt = np.zeros(p, dtype=bool)
        for a in A.tolist():
            nxt |= np.roll(ind, a)
        ind = nxt
    return np.flatnonzero(ind).astype(np.int64)


def energy_bruteforce(A, B, op: Literal["add", "mul"], p: int, max_pairs: int = 10**6) -> int:
    """Direct count of ``a1 (op) b1 == a2 (op) b2`` over all 4-tuples.

    Independent of the profile code: compares every pair of ``(a, b)``
    results against every other.  Runs in ``(|A||B|)**2`` comparisons.
    """
    A, B = _prep(A, p), _prep(B, p)
    if len(A) * len(B) > max_pairs:
        raise BudgetExceeded(f"|A||B| = {len(A) * len(B)} > {max_pairs}")
    if op == "add":
        vals = ((A[:, None] + B[None, :]) % p).ravel()
    elif op == "mul":
        vals = mul_mod(A[:, None], B[None, :], p).ravel()
    else:
        raise ValueError(f"unknown op {op!r}")
    total = 0
    step = max(1, (1 << 22) // len(vals))
    for i in range(0, len(vals), step):
        total += int(np.count_nonzero(vals[i:i + step, None] == vals[None, :]))
    return total


def shift_energy_invariance_check(
    G: Subgroup, P: Subgroup, x: int, y: int, samples: int | None = None, rng=None
) -> int:
    """``E×(G+x, P+y)``, after confirming it is the same for every ``x' in xG``, ``y' in yP``.

    With ``samples`` set only that many random ``(x', y')`` are checked.
    """
    p = G.ctx.p
    x, y = x % p, y % p
    if x == 0 or y == 0:
        raise ZeroShift("shifts must be nonzero")
    base = multiplicative_energy((G.elements + x) % p, (P.elements + y) % p, p)
    xs = mul_mod(G.elements, x, p)
    ys = mul_mod(P.elements, y, p)
    pairs = [(a, b) for a in xs.tolist() for b in ys.tolist()]
    if samples is not None and samples < len(pairs):
        rng = rng or np.random.default_rng(0)
        pairs = [pairs[i] for i in rng.choice(len(pairs), size=samples, replace=False)]
    for a, b in pairs:
        e = multiplicative_energy((G.elements + a) % p, (P.elements + b) % p, p)
        if e != base:
            raise InvariantViolation(f"E×(G+{a}, P+{b}) = {e} != {base}")
    return base
