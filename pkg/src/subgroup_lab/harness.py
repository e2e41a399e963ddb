"""Scans over primes and subgroup orders, measuring each inequality.

Every record holds an exact integer ``lhs`` and the real main term
``bound_expr`` of the corresponding upper or lower bound (logs base 2).
Implied constants are never assumed; records are compared against frozen
fixtures instead.  Hypothesis flags annotate records but never suppress
them.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import ceil, log2, sqrt
from typing import Sequence

import numpy as np

from . import collinear, energy
from .errors import BudgetExceeded, ConfigInvalid, SubgroupLabError, ZeroShift
from .field import PrimeContext, divisors, is_prime
from .groups import (
    InvariantSet, Subgroup, coset_reps, dilate_invariant, invariant_set, subgroup,
)

log = logging.getLogger(__name__)

QUANTITIES = (
    "theorem1", "thm41", "thm43", "cor34_ratio", "cor34_2GX",
    "cor44", "konyagin", "mitkin", "glibichuk", "qtau",
)
D_POLICIES = ("below_sqrt_p", "all_divisors")
THREADS_ENV = "SUBGROUP_LAB_THREADS"


@dataclass(frozen=True)
class ScanRecord:
    p: int
    d_gamma: int
    d_pi: int
    quantity: str
    lhs: int
    bound_expr: float
    ratio: float
    hypothesis_ok: bool
    params: str = ""
    seed: int = 0

    @property
    def sort_key(self):
        return (self.p, self.d_gamma, self.d_pi, self.quantity, self.params)


@dataclass(frozen=True)
class ScanConfig:
    p_min: int = 3
    p_max: int = 2000
    d_policy: str | tuple[int, ...] = "below_sqrt_p"
    quantities: tuple[str, ...] = QUANTITIES
    seed: int = 0
    budget: int = 2 * 10**6
    workers: int | None = None

    def validate(self) -> "ScanConfig":
        if self.p_min > self.p_max:
            raise ConfigInvalid(f"p_min {self.p_min} > p_max {self.p_max}")
        if self.budget <= 0:
            raise ConfigInvalid("budget must be positive")
        bad = set(self.quantities) - set(QUANTITIES)
        if bad:
            raise ConfigInvalid(f"unknown quantities: {sorted(bad)}")
        if isinstance(self.d_policy, str):
            if self.d_policy not in D_POLICIES:
                raise ConfigInvalid(f"unknown d_policy {self.d_policy!r}")
        elif not all(isinstance(d, int) and d >= 1 for d in self.d_policy):
            raise ConfigInvalid("explicit d list must hold positive ints")
        if not 0 <= self.seed < 1 << 64:
            raise ConfigInvalid("seed must fit in 64 bits")
        return self


def _record(p, dg, dp, quantity, lhs, bound, hyp, params="", seed=0) -> ScanRecord:
    lhs = int(lhs)
    bound = float(bound)
    return ScanRecord(p, dg, dp, quantity, lhs, bound, lhs / bound, bool(hyp), params, seed)


def _ctx(ctx) -> PrimeContext:
    return ctx if isinstance(ctx, PrimeContext) else PrimeContext.of(ctx)


def _join(values) -> str:
    return "/".join(str(int(v)) for v in values)


def _need_log(d: int):
    if d < 2:
        raise SubgroupLabError("log-bearing bound needs |Γ| >= 2")


# ---------------------------------------------------------------- quantities


def theorem1_ratio(ctx, d: int, seed: int = 0) -> ScanRecord:
    """``|3Γ|`` against ``|Γ|^2 / log|Γ|``."""
    ctx = _ctx(ctx)
    _need_log(d)
    G = subgroup(ctx, d)
    lhs = len(energy.iterated_sumset(G.elements, 3, ctx.p))
    return _record(ctx.p, d, d, "theorem1", lhs, d * d / log2(d), d * d < ctx.p, seed=seed)


def thm41_ratio(ctx, d_gamma: int, d_pi: int, x: int = 1, y: int = 1, seed: int = 0) -> ScanRecord:
    """``E×(Γ+x, Π+y)`` against ``|Γ||Π| log min + |Γ|^2 + |Π|^2``."""
    ctx = _ctx(ctx)
    p = ctx.p
    if x % p == 0 or y % p == 0:
        raise ZeroShift("shifts must be nonzero")
    _need_log(min(d_gamma, d_pi))
    G, P = subgroup(ctx, d_gamma), subgroup(ctx, d_pi)
    lhs = energy.multiplicative_energy((G.elements + x) % p, (P.elements + y) % p, p)
    bound = d_gamma * d_pi * log2(min(d_gamma, d_pi)) + d_gamma**2 + d_pi**2
    return _record(p, d_gamma, d_pi, "thm41", lhs, bound, d_gamma * d_pi < p,
                   f"x={x % p};y={y % p}", seed)


def _thm43_bound(q1: int, q2: int, g: int, h: int) -> float:
    return (q1 * q2) ** 3 / (g * h) * log2(min(q1, q2)) ** 2 + q1 * q2 * (q1 * q1 + q2 * q2)


def thm43_ratio(ctx, Q1: InvariantSet, Q2: InvariantSet, seed: int = 0) -> ScanRecord:
    """``T(Q1, Q2, Q1, Q2)`` against the invariant-set bound."""
    ctx = _ctx(ctx)
    g, h = Q1.base.order, Q2.base.order
    _need_log(min(g, h))
    lhs = collinear.triples_invariant(Q1, Q2).total
    bound = _thm43_bound(len(Q1), len(Q2), g, h)
    params = f"reps1={_join(Q1.chosen_reps)};reps2={_join(Q2.chosen_reps)}"
    return _record(ctx.p, g, h, "thm43", lhs, bound, g * h < ctx.p, params, seed)


def thm43_dilated_ratio(ctx, Q: InvariantSet, xi: int, seed: int = 0) -> ScanRecord:
    """``T(Γ, Q, ξΓ, Q)`` with the smaller error term ``|Γ|^3|Q| + |Γ|^2|Q|^2``."""
    ctx = _ctx(ctx)
    G = Q.base
    g, q = G.order, len(Q)
    _need_log(g)
    xi %= ctx.p
    if xi in (0, 1):
        raise SubgroupLabError("xi must differ from 0 and 1")
    gamma = invariant_set(G, [1])
    lhs = collinear.triples_invariant(gamma, Q, dilate_invariant(gamma, xi), Q).total
    bound = (g * q) ** 3 / (g * g) * log2(min(g, q)) ** 2 + g**3 * q + g * g * q * q
    params = f"variant=dilated;xi={xi};reps={_join(Q.chosen_reps)}"
    return _record(ctx.p, g, g, "thm43", lhs, bound, g * g < ctx.p, params, seed)


def cor34_quantities(ctx, d: int, rng: np.random.Generator | None = None, seed: int = 0) -> list[ScanRecord]:
    """Ratio-set size and ``|2Γ + X|`` for seeded ``X ⊆ Γ`` of three sizes."""
    ctx = _ctx(ctx)
    _need_log(d)
    rng = rng if rng is not None else np.random.default_rng(seed)
    p = ctx.p
    G = subgroup(ctx, d)
    hyp = d * d < p
    out = [_record(p, d, d, "cor34_ratio", len(collinear.ratio_set(G)), d * d / log2(d), hyp, seed=seed)]
    two = energy.sumset(G.elements, G.elements, p)
    for size in sorted({d, ceil(d / 2), ceil(sqrt(d))}, reverse=True):
        X = np.sort(rng.choice(G.elements, size=size, replace=False))
        lhs = len(energy.sumset(two, X, p))
        out.append(_record(p, d, d, "cor34_2GX", lhs, size * size / log2(d), hyp,
                           f"X={_join(X)}", seed))
    return out


def cor44_min_energy(ctx, Q: InvariantSet, x: int, seed: int = 0) -> ScanRecord:
    """``min_q E×(Q - q, Γ + x)``; one q per coset suffices since ``Q - rg = g(Q - r)``."""
    ctx = _ctx(ctx)
    p = ctx.p
    if x % p == 0:
        raise ZeroShift("x must be nonzero")
    G = Q.base
    _need_log(G.order)
    shifted = (G.elements + x) % p
    best_q, best = None, None
    for r in np.asarray(Q.chosen_reps).tolist():
        e = energy.multiplicative_energy((Q.elements - r) % p, shifted, p)
        if best is None or e < best:
            best_q, best = r, e
    bound = len(Q) ** 2 * log2(G.order) ** 2
    params = f"x={x % p};reps={_join(Q.chosen_reps)};q={best_q}"
    return _record(p, G.order, G.order, "cor44", best, bound, G.order**2 < p, params, seed)


def konyagin_ratio(ctx, d: int, seed: int = 0) -> ScanRecord:
    """``E+(Γ)`` against ``|Γ|^(5/2) log^(1/2)|Γ|``."""
    ctx = _ctx(ctx)
    _need_log(d)
    G = subgroup(ctx, d)
    lhs = energy.additive_energy(G.elements, G.elements, ctx.p)
    return _record(ctx.p, d, d, "konyagin", lhs, d**2.5 * sqrt(log2(d)), d * d < ctx.p, seed=seed)


def glibichuk_check(ctx, d: int, seed: int = 0) -> ScanRecord:
    """``|4Γ|`` against ``p/2``; passes iff ``ratio > 1``."""
    ctx = _ctx(ctx)
    G = subgroup(ctx, d)
    lhs = len(energy.iterated_sumset(G.elements, 4, ctx.p))
    return _record(ctx.p, d, d, "glibichuk", lhs, ctx.p / 2, d * d > ctx.p, seed=seed)


def glibichuk_passes(rec: ScanRecord) -> bool:
    return 2 * rec.lhs > rec.p


def mitkin_record(ctx, d_gamma: int, d_pi: int, tau: int = 2, hist=None, seed: int = 0) -> ScanRecord | None:
    """Richness summed over the classes of richness >= tau; None if there are none."""
    ctx = _ctx(ctx)
    G, P = subgroup(ctx, d_gamma), subgroup(ctx, d_pi)
    hist = hist or collinear.richness_histogram(G, P)
    idx = hist.theta(tau)
    if len(idx) == 0:
        return None
    U, V = coset_reps(G).reps, coset_reps(P).reps
    ms = collinear.mitkin_sum(zip(U[idx[:, 0]].tolist(), V[idx[:, 1]].tolist()), G, P)
    return _record(ctx.p, d_gamma, d_pi, "mitkin", ms.lhs, ms.rhs, ms.hypotheses_ok,
                   f"tau={tau};theta={len(idx)}", seed)


def qtau_records(ctx, d_gamma: int, d_pi: int, hist=None, seed: int = 0) -> list[ScanRecord]:
    """``q_τ`` against ``|Γ|^2|Π|^2 τ^-3`` for each dyadic τ with ``q_τ > 0``."""
    ctx = _ctx(ctx)
    G, P = subgroup(ctx, d_gamma), subgroup(ctx, d_pi)
    hist = hist or collinear.richness_histogram(G, P)
    gp = d_gamma * d_pi
    out = []
    for tau, q in hist.q_tau.items():
        theta = int(np.count_nonzero(hist.classes >= tau))
        out.append(_record(ctx.p, d_gamma, d_pi, "qtau", q, gp * gp / tau**3,
                           gp * gp * theta < ctx.p ** 3, f"tau={tau}", seed))
    return out


# ---------------------------------------------------------------- scanning


def admissible_orders(p: int, policy) -> list[int]:
    ds = divisors(p - 1)
    if policy == "below_sqrt_p":
        return [d for d in ds if d >= 2 and d * d < p]
    if policy == "all_divisors":
        return ds
    return [d for d in ds if d in set(policy)]


def _rng(seed: int, p: int, d: int, quantity: str) -> np.random.Generator:
    return np.random.default_rng([seed, p, d, QUANTITIES.index(quantity)])


def _coset_count(m: int, d: int, budget: int, rng, *, squared: bool) -> tuple[int, int] | int:
    """Seeded number of cosets per invariant set, shrunk to fit ``budget``."""
    if squared:
        k1, k2 = (int(k) for k in rng.integers(1, m + 1, size=2))
        while (k1 * k2 * d) ** 2 > budget and max(k1, k2) > 1:
            if k1 >= k2:
                k1 -= 1
            else:
                k2 -= 1
        return k1, k2
    k = int(rng.integers(1, m + 1))
    while (k * d) ** 2 > budget and k > 1:
        k -= 1
    return k


def _pick_reps(G: Subgroup, k: int, rng) -> InvariantSet:
    reps = coset_reps(G).reps
    return invariant_set(G, np.sort(reps[rng.choice(len(reps), size=k, replace=False)]))


def scan_prime(p: int, config: ScanConfig) -> list[ScanRecord]:
    """All records for one prime."""
    ctx = PrimeContext.of(p)
    want = set(config.quantities)
    seed, budget = config.seed, config.budget
    ds = admissible_orders(p, config.d_policy)
    out: list[ScanRecord] = []

    def attempt(fn, *args, **kw):
        try:
            res = fn(*args, **kw)
        except (BudgetExceeded, SubgroupLabError) as exc:
            log.debug("skip %s p=%d %s: %s", fn.__name__, p, args[1:], exc)
            return
        if res is None:
            return
        out.extend(res if isinstance(res, list) else [res])

    for d in ds:
        if "glibichuk" in want:
            attempt(glibichuk_check, ctx, d, seed=seed)
        if d < 2:
            continue
        if "theorem1" in want and d**3 <= budget:
            attempt(theorem1_ratio, ctx, d, seed=seed)
        if "konyagin" in want and d * d <= budget:
            attempt(konyagin_ratio, ctx, d, seed=seed)
        if "thm41" in want:
            for e in ds:
                if e >= d and d * e <= budget:
                    attempt(thm41_ratio, ctx, d, e, 1, 1, seed=seed)
        if {"cor34_ratio", "cor34_2GX"} & want and 4 * d**3 <= budget:
            recs = cor34_quantities(ctx, d, _rng(seed, p, d, "cor34_2GX"), seed)
            out.extend(r for r in recs if r.quantity in want)
        G = subgroup(ctx, d)
        m = G.index
        if "thm43" in want:
            rng = _rng(seed, p, d, "thm43")
            k1, k2 = _coset_count(m, d, budget, rng, squared=True)
            Q1, Q2 = _pick_reps(G, k1, rng), _pick_reps(G, k2, rng)
            if (k1 * k2 * d) ** 2 <= budget:
                attempt(thm43_ratio, ctx, Q1, Q2, seed=seed)
            if m > 1:
                k = _coset_count(m, d, budget, rng, squared=False)
                Q = _pick_reps(G, k, rng)
                xi = int(rng.integers(2, p))
                if (k * d) ** 2 <= budget:
                    attempt(thm43_dilated_ratio, ctx, Q, xi, seed=seed)
        if "cor44" in want:
            rng = _rng(seed, p, d, "cor44")
            k = _coset_count(m, d, budget, rng, squared=False)
            Q = _pick_reps(G, k, rng)
            x = int(rng.integers(1, p))
            if (k * d) ** 2 <= budget:
                attempt(cor44_min_energy, ctx, Q, x, seed=seed)
        if {"mitkin", "qtau"} & want and m * m * d <= budget:
            hist = collinear.richness_histogram(G, G)
            if "mitkin" in want:
                attempt(mitkin_record, ctx, d, d, hist=hist, seed=seed)
            if "qtau" in want:
                attempt(qtau_records, ctx, d, d, hist=hist, seed=seed)
    return out


def worker_count(config: ScanConfig) -> int:
    if config.workers:
        return config.workers
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigInvalid(f"{THREADS_ENV}={env!r} is not an integer")
    return os.cpu_count() or 1


def _scan_one(args):
    return scan_prime(*args)


def scan(config: ScanConfig) -> list[ScanRecord]:
    """Every record for every prime in range, sorted by (p, d_gamma, d_pi, quantity)."""
    config.validate()
    primes = [p for p in range(max(3, config.p_min), config.p_max + 1) if is_prime(p)]
    workers = min(worker_count(config), max(1, len(primes)))
    records: list[ScanRecord] = []
    if workers == 1:
        for p in primes:
            records.extend(scan_prime(p, config))
    else:
        # largest primes first so the pool drains evenly
        jobs = [(p, config) for p in reversed(primes)]
        with ProcessPoolExecutor(workers) as pool:
            for chunk in pool.map(_scan_one, jobs):
                records.extend(chunk)
    records.sort(key=lambda r: r.sort_key)
    return records


# ---------------------------------------------------------------- summaries


def summarize(records: Sequence[ScanRecord]) -> dict:
    """Extreme ratios over hypothesis-respecting records, per tracked family."""

    def pick(pred):
        return [r.ratio for r in records if r.hypothesis_ok and pred(r)]

    fams = {
        "theorem1_min": (min, lambda r: r.quantity == "theorem1"),
        "thm41_diag_max": (max, lambda r: r.quantity == "thm41" and r.d_gamma == r.d_pi),
        "konyagin_max": (max, lambda r: r.quantity == "konyagin"),
        "thm43_max": (max, lambda r: r.quantity == "thm43" and not r.params.startswith("variant=")),
        "thm43_dilated_max": (max, lambda r: r.quantity == "thm43" and r.params.startswith("variant=")),
        "cor44_max": (max, lambda r: r.quantity == "cor44"),
    }
    out = {}
    for name, (agg, pred) in fams.items():
        vals = pick(pred)
        out[name] = agg(vals) if vals else None
        out[name.rsplit("_", 1)[0] + "_count"] = len(vals)
    return out
