"""Exact-identity suite and record spot checks.

Everything here is a theorem, so a single failure means a bug.  Checks
are cheap individually; ranges are chosen so the default suite runs in
well under a minute on one core.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterator, Sequence

import numpy as np

from . import collinear, energy
from .errors import BudgetExceeded
from .field import divisors, is_prime
from .groups import coset_reps, invariant_set, subgroup
from .harness import ScanRecord, glibichuk_passes


@dataclass(frozen=True)
class Check:
    name: str
    p: int
    detail: str
    ok: bool


def primes_upto(n: int) -> list[int]:
    return [p for p in range(3, n + 1) if is_prime(p)]


def check_regularity(p_max: int) -> Iterator[Check]:
    """``E×(Γ, Γ) = |Γ|^3``."""
    for p in primes_upto(p_max):
        for d in divisors(p - 1):
            G = subgroup(p, d)
            e = energy.multiplicative_energy(G.elements, G.elements, p)
            yield Check("mul_energy_regular", p, f"d={d} got={e}", e == d**3)


def check_shift_identity(p_max: int) -> Iterator[Check]:
    """``E+(Γ) = E×(Γ, Γ+1)``."""
    for p in primes_upto(p_max):
        for d in divisors(p - 1):
            G = subgroup(p, d)
            a = energy.additive_energy(G.elements, G.elements, p)
            m = energy.multiplicative_energy(G.elements, (G.elements + 1) % p, p)
            yield Check("add_energy_eq_shift_mul", p, f"d={d} E+={a} Ex={m}", a == m)


def random_set_pairs(n: int, seed: int, max_product: int = 10**4, p_max: int = 2000):
    """Seeded ``(p, A, B)`` with ``|A||B| <= max_product``, sizes log-uniform."""
    rng = np.random.default_rng(seed)
    primes = primes_upto(p_max)
    for _ in range(n):
        p = int(rng.choice(primes))
        a = int(np.exp(rng.uniform(0, np.log(min(p, 100) + 1))))
        a = max(1, min(a, p))
        b_cap = min(p, max_product // a)
        b = max(1, min(int(np.exp(rng.uniform(0, np.log(b_cap + 1)))), b_cap))
        A = rng.choice(p, size=a, replace=False)
        B = rng.choice(p, size=b, replace=False)
        yield p, np.sort(A), np.sort(B)


def check_energy_random(n_pairs: int, seed: int) -> Iterator[Check]:
    """Profile energies against the 4-tuple loop, and dlog path against counter path."""
    for p, A, B in random_set_pairs(n_pairs, seed):
        tag = f"|A|={len(A)} |B|={len(B)}"
        add = energy.additive_energy(A, B, p)
        corr = int(np.dot(*(2 * [energy.profile_array(A, B, "add_corr", p)])))
        brute_add = energy.energy_bruteforce(A, B, "add", p)
        yield Check("add_energy_identity", p, f"{tag} {add} {corr} {brute_add}",
                    add == corr == brute_add)
        mul = energy.multiplicative_energy(A, B, p, method="counter")
        fast = energy.multiplicative_energy(A, B, p, method="dlog")
        brute_mul = energy.energy_bruteforce(A, B, "mul", p)
        yield Check("mul_energy_identity", p, f"{tag} {mul} {fast} {brute_mul}",
                    mul == fast == brute_mul)
        yield Check("energy_lower_bound", p, tag, mul >= len(A) * len(B))
        bound = min(len(A) ** 2 * len(B), len(B) ** 2 * len(A), (len(A) * len(B)) ** 1.5)
        yield Check("add_energy_upper_bound", p, tag, add <= bound + 1e-9)


def _three_way(p, A, B, pivot_group=None) -> tuple[bool, str, int]:
    x = collinear.triples_by_definition(A, B, A, B, p)
    y = collinear.triples_bruteforce(A, B, A, B, p, pivot_group=pivot_group)
    z = collinear.triples_by_lines(A, B, p)
    key = lambda t: (t.total, t.degenerate, t.origin_lines)
    return key(x) == key(y) == key(z), f"{key(x)} {key(y)} {key(z)}", x.total


def subgroup_pairs(p_max: int, max_product: int):
    for p in primes_upto(p_max):
        ds = divisors(p - 1)
        for a in ds:
            for b in ds:
                if a * b <= max_product:
                    yield p, a, b


def check_triples(p_max: int, max_product: int, random_pairs: int, seed: int) -> Iterator[Check]:
    """Definition, 6-tuple and lines counts agree; ``T >= |A||B||C||D|``."""
    sizes = []
    for p, a, b in subgroup_pairs(p_max, max_product):
        G, P = subgroup(p, a), subgroup(p, b)
        ok, detail, total = _three_way(p, G.elements, P.elements, pivot_group=(G, P))
        yield Check("triples_three_way", p, f"d=({a},{b}) {detail}", ok)
        yield Check("triples_lower_bound", p, f"d=({a},{b})", total >= (a * b) ** 2)
        sizes.append((p, a, b))
    rng = np.random.default_rng(seed)
    for i in rng.choice(len(sizes), size=min(random_pairs, len(sizes)), replace=False):
        p, a, b = sizes[int(i)]
        A = np.sort(rng.choice(p, size=a, replace=False))
        B = np.sort(rng.choice(p, size=b, replace=False))
        ok, detail, total = _three_way(p, A, B)
        yield Check("triples_three_way_random", p, f"|A|={a} |B|={b} {detail}", ok)
        yield Check("triples_lower_bound", p, f"random |A|={a} |B|={b}", total >= (a * b) ** 2)


def check_richness(p_max: int, max_product: int) -> Iterator[Check]:
    """Class richness matches the full-plane scan on every orbit; totals double-count."""
    for p, a, b in subgroup_pairs(p_max, max_product):
        G, P = subgroup(p, a), subgroup(p, b)
        hist = collinear.richness_histogram(G, P)
        full = collinear.richness_full_scan(G, P)
        nz = np.arange(1, p)
        ci, cj = G.coset_index(nz), P.coset_index(nz)
        orbit_ok = np.array_equal(full[1:, 1:], hist.classes[ci][:, cj])
        yield Check("richness_orbit_invariance", p, f"d=({a},{b})", orbit_ok)
        tot = int(full.sum())
        yield Check("richness_double_count", p, f"d=({a},{b}) {tot} {hist.incidence_total()}",
                    tot == hist.incidence_total() == p * a * b)
        q_full = {}
        tau = 2
        while (q := int(np.count_nonzero(full >= tau))) > 0:
            q_full[tau] = q
            tau *= 2
        yield Check("qtau_full_scan", p, f"d=({a},{b})", q_full == hist.q_tau)


def check_glibichuk(p_max: int) -> Iterator[Check]:
    """``|4Γ| > p/2`` whenever ``|Γ| > sqrt(p)``."""
    from .harness import glibichuk_check

    for p in primes_upto(p_max):
        for d in divisors(p - 1):
            if d * d > p:
                rec = glibichuk_check(p, d)
                yield Check("glibichuk", p, f"d={d} |4G|={rec.lhs}", glibichuk_passes(rec))


def identity_suite(
    p_max: int = 2000,
    *,
    shift_p_max: int = 500,
    energy_pairs: int = 200,
    triples_p_max: int = 200,
    triples_product: int = 400,
    triple_random_pairs: int = 50,
    richness_p_max: int = 200,
    glibichuk_p_max: int = 500,
    seed: int = 0,
) -> dict[str, Callable[[], Iterator[Check]]]:
    """Named check groups; each value is a zero-argument generator factory."""
    return {
        "regularity": lambda: check_regularity(p_max),
        "shift_identity": lambda: check_shift_identity(min(p_max, shift_p_max)),
        "energy_random": lambda: check_energy_random(energy_pairs, seed),
        "triples": lambda: check_triples(min(p_max, triples_p_max), triples_product,
                                         triple_random_pairs, seed),
        "richness": lambda: check_richness(min(p_max, richness_p_max), triples_product),
        "glibichuk": lambda: check_glibichuk(min(p_max, glibichuk_p_max)),
    }


# ---------------------------------------------------------------- spot checks


def _params(rec: ScanRecord) -> dict[str, str]:
    return dict(kv.split("=", 1) for kv in rec.params.split(";") if kv)


def _ints(s: str) -> list[int]:
    return [int(t) for t in s.split("/") if t]


def oracle_lhs(rec: ScanRecord, budget: int = 10**8) -> int:
    """Recompute ``rec.lhs`` by an independent slow route.

    Raises :class:`BudgetExceeded` when the oracle would be too expensive.
    """
    p, q = rec.p, rec.quantity
    G = subgroup(p, rec.d_gamma)
    g = G.elements.tolist()
    kv = _params(rec)
    if q == "theorem1":
        if len(g) ** 3 > budget:
            raise BudgetExceeded(q)
        return len({(a + b + c) % p for a in g for b in g for c in g})
    if q == "glibichuk":
        two = {(a + b) % p for a in g for b in g}
        if len(two) ** 2 > budget:
            raise BudgetExceeded(q)
        return len({(s + t) % p for s in two for t in two})
    if q == "konyagin":
        return energy.energy_bruteforce(g, g, "add", p, max_pairs=isqrt(budget))
    if q == "thm41":
        P = subgroup(p, rec.d_pi)
        x, y = int(kv["x"]), int(kv["y"])
        return energy.energy_bruteforce([(a + x) % p for a in g],
                                        [(b + y) % p for b in P.elements.tolist()],
                                        "mul", p, max_pairs=isqrt(budget))
    if q == "cor34_ratio":
        if 4 * len(g) ** 3 > budget:
            raise BudgetExceeded(q)
        out = set()
        for a in g:
            for b in g:
                for c in g:
                    for num in (a + b, a - b):
                        for den in (a + c, a - c):
                            if den % p:
                                out.add(num * pow(den, -1, p) % p)
        return len(out)
    if q == "cor34_2GX":
        X = _ints(kv["X"])
        return len({(a + b + x) % p for a in g for b in g for x in X})
    if q == "thm43":
        if kv.get("variant") == "dilated":
            Q = invariant_set(G, _ints(kv["reps"]))
            C = (G.elements * int(kv["xi"])) % p
            n = len(g) * len(Q)
            if len(C) * len(Q) * n > budget:
                raise BudgetExceeded(q)
            return collinear.triples_by_definition(G.elements, Q.elements, C, Q.elements, p).total
        Q1 = invariant_set(G, _ints(kv["reps1"]))
        Q2 = invariant_set(subgroup(p, rec.d_pi), _ints(kv["reps2"]))
        n = len(Q1) * len(Q2)
        if n * n > budget:
            raise BudgetExceeded(q)
        return collinear.triples_by_lines(Q1.elements, Q2.elements, p).total
    if q == "cor44":
        Q = invariant_set(G, _ints(kv["reps"]))
        x = int(kv["x"])
        if len(Q) * (len(Q) * len(g)) ** 2 > budget:
            raise BudgetExceeded(q)
        shifted = [(a + x) % p for a in g]
        return min(
            energy.energy_bruteforce([(t - s) % p for t in Q.elements.tolist()], shifted, "mul", p)
            for s in Q.elements.tolist()
        )
    if q in ("mitkin", "qtau"):
        P = subgroup(p, rec.d_pi)
        if p * len(g) * len(P) > budget:
            raise BudgetExceeded(q)
        full = collinear.richness_full_scan(G, P)
        tau = int(kv["tau"])
        if q == "qtau":
            return int(np.count_nonzero(full >= tau))
        # one (u, v) per class: the canonical reps, both nonzero
        U, V = coset_reps(G).reps, coset_reps(P).reps
        sub = full[np.ix_(U, V)]
        return int(sub[sub >= tau].sum())
    raise ValueError(f"no oracle for {q!r}")


@dataclass(frozen=True)
class SpotCheckResult:
    checked: int
    skipped: int
    mismatches: tuple[tuple[ScanRecord, int], ...]


def spot_check(records: Sequence[ScanRecord], fraction: float = 0.05, seed: int = 0,
               budget: int = 10**8) -> SpotCheckResult:
    """Recompute a seeded sample of records with :func:`oracle_lhs`."""
    if not records:
        return SpotCheckResult(0, 0, ())
    rng = np.random.default_rng(seed)
    k = max(1, int(round(fraction * len(records))))
    idx = np.sort(rng.choice(len(records), size=min(k, len(records)), replace=False))
    checked = skipped = 0
    bad = []
    for i in idx.tolist():
        rec = records[i]
        try:
            val = oracle_lhs(rec, budget)
        except BudgetExceeded:
            skipped += 1
            continue
        checked += 1
        if val != rec.lhs:
            bad.append((rec, val))
    return SpotCheckResult(checked, skipped, tuple(bad))
