"""Collinear triples in grids over F_p, line richness and the ratio set.

``T(A, B, C, D)`` is the sum over pivots ``(c, d)`` in ``C x D`` of
``E×(A - c, B - d)``.  A solution ``(x1 - c)(y1 - d) = (x2 - c)(y2 - d)``
is the same thing as the three points ``(c, d)``, ``(x1, y2)``,
``(x2, y1)`` having zero determinant, so for ``C = A, D = B`` the count is
the number of ordered collinear triples (repeats allowed) in ``A x B``.
Three independent counters are provided and must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .energy import _prep
from .errors import BudgetExceeded, SubgroupLabError, ThetaNotReps
from .field import inv_array, inverse_table, mul_mod
from .groups import InvariantSet, Subgroup, coset_reps

_CHUNK = 1 << 21


@dataclass(frozen=True)
class TripleCount:
    total: int
    degenerate: int
    origin_lines: int
    method: str

    def __int__(self):
        return self.total


def _degenerate(A, B, C, D) -> int:
    """Tuples where two of the three points coincide (inclusion-exclusion)."""
    g = len(A) * len(B)
    h = len(C) * len(D)
    gh = len(np.intersect1d(A, C)) * len(np.intersect1d(B, D))
    return 2 * gh * g + h * g - 2 * gh


def _origin_pivot_zero(A, B, p) -> int:
    """Distinct collinear (P1, P2) pairs on lines through a pivot at the origin."""
    X = np.repeat(A, len(B))
    Y = np.tile(B, len(A))
    keep = (X != 0) | (Y != 0)
    X, Y = X[keep], Y[keep]
    slope = np.full(len(X), p, dtype=np.int64)
    nz = X != 0
    slope[nz] = mul_mod(Y[nz], inv_array(X[nz], p), p)
    _, cnt = np.unique(slope, return_counts=True)
    return int(np.sum(cnt * (cnt - 1)))


def _pivot_sums(A, B, cs, ds, p) -> tuple[int, int]:
    """Sum over pivots in ``cs x ds`` of (energy, origin-line pair count)."""
    na, nb = len(A), len(B)
    A_set = set(A.tolist())
    pc = np.repeat(cs, len(ds))
    pd = np.tile(ds, len(cs))
    zero = (pc == 0) & (pd == 0)
    energy = 0
    origin = 0
    if zero.any():
        origin += int(zero.sum()) * _origin_pivot_zero(A, B, p)
    step = max(1, _CHUNK // max(na * nb, p))
    for i in range(0, len(pc), step):
        c = pc[i:i + step]
        d = pd[i:i + step]
        k = len(c)
        X = (A[None, :] - c[:, None]) % p
        Y = (B[None, :] - d[:, None]) % p
        prods = mul_mod(X[:, :, None], Y[:, None, :], p).reshape(k, -1)
        prods += (np.arange(k, dtype=np.int64) * p)[:, None]
        r = np.bincount(prods.ravel(), minlength=k * p)
        energy += int(np.dot(r, r))
    # points of A x B on the line through the origin and each pivot
    bmask = np.zeros(p, dtype=bool)
    bmask[B] = True
    has_zero_x = bool(np.any(A == 0))
    for c, d in zip(pc.tolist(), pd.tolist()):
        if c == 0 and d == 0:
            continue
        if c == 0:
            on = len(B) if has_zero_x else 0
        else:
            on = int(np.count_nonzero(bmask[mul_mod(A, d * pow(c, -1, p) % p, p)]))
        m = on - int(c in A_set and bmask[d])
        origin += m * (m - 1)
    return energy, origin


def triples_by_definition(A, B, C, D, p: int) -> TripleCount:
    """``sum_{c in C, d in D} E×(A - c, B - d)`` via per-pivot product profiles."""
    A, B, C, D = (_prep(S, p) for S in (A, B, C, D))
    energy, origin = _pivot_sums(A, B, C, D, p)
    return TripleCount(energy, _degenerate(A, B, C, D), origin, "definition")


def _is_invariant(S: np.ndarray, G: Subgroup) -> bool:
    if np.any(S == 0):
        return False
    mask = np.zeros(G.ctx.p, dtype=bool)
    mask[S] = True
    return bool(mask[mul_mod(S[:, None], G.elements[None, :], G.ctx.p)].all())


def triples_bruteforce(A, B, C, D, p: int, budget: int = 10**8, pivot_group=None) -> TripleCount:
    """Direct 6-tuple count of ``(x1-c)(y1-d) == (x2-c)(y2-d)``.

    Every ``(x1, y1, x2, y2)`` is compared for every pivot, and each
    solution is classified on the spot (repeated point / line through 0).

    ``pivot_group=(G, P)`` may be given when A, C are G-invariant and B, D
    are P-invariant: pivots are then taken one per coset pair and weighted
    by ``|G||P|``, since scaling by ``(g, h)`` maps the grid onto itself.
    """
    A, B, C, D = (_prep(S, p) for S in (A, B, C, D))
    weight = 1
    if pivot_group is not None:
        G, P = pivot_group
        if not (_is_invariant(A, G) and _is_invariant(C, G)
                and _is_invariant(B, P) and _is_invariant(D, P)):
            raise SubgroupLabError("sets are not invariant under pivot_group")
        C = C[np.unique(G.coset_index(C), return_index=True)[1]]
        D = D[np.unique(P.coset_index(D), return_index=True)[1]]
        weight = G.order * P.order
    n = len(A) * len(B)
    cost = len(C) * len(D) * n * n
    if cost > budget:
        raise BudgetExceeded(f"{cost} steps > {budget}")
    X1 = np.repeat(A, len(B))  # index i <-> (x1, y1)
    Y1 = np.tile(B, len(A))
    # P1 = (x1, y2) uses i's x and j's y; P2 = (x2, y1)
    same = (X1[:, None] == X1[None, :]) & (Y1[:, None] == Y1[None, :])
    cross12 = (mul_mod(X1[:, None], Y1[:, None], p) - mul_mod(Y1[None, :], X1[None, :], p)) % p
    total = degenerate = origin = 0
    for c in C.tolist():
        for d in D.tolist():
            v = mul_mod((X1 - c) % p, (Y1 - d) % p, p)
            sol = v[:, None] == v[None, :]
            p1_is_pivot = (X1[:, None] == c) & (Y1[None, :] == d)
            p2_is_pivot = (X1[None, :] == c) & (Y1[:, None] == d)
            deg = sol & (same | p1_is_pivot | p2_is_pivot)
            total += int(np.count_nonzero(sol))
            degenerate += int(np.count_nonzero(deg))
            origin += int(np.count_nonzero(sol & ~deg & (cross12 == 0)))
    return TripleCount(total * weight, degenerate * weight, origin * weight, "bruteforce")


def triples_by_lines(A, B, p: int) -> TripleCount:
    """``T(A, B, A, B)`` from the lines spanned by pairs of grid points.

    A line with ``n`` grid points holds ``n(n-1)(n-2)`` ordered triples of
    distinct points; triples with a repeated point add ``3|G|^2 - 2|G|``.
    """
    A, B = _prep(A, p), _prep(B, p)
    X = np.repeat(A, len(B))
    Y = np.tile(B, len(A))
    g = len(X)
    degenerate = 3 * g * g - 2 * g
    if g < 2:
        return TripleCount(degenerate, degenerate, 0, "lines")
    i, j = np.triu_indices(g, 1)
    dx = (X[j] - X[i]) % p
    dy = (Y[j] - Y[i]) % p
    vertical = dx == 0
    key = np.empty(len(i), dtype=np.int64)
    key[vertical] = p * p + X[i][vertical]
    nv = ~vertical
    if p <= 1 << 24:
        inv = inverse_table(p)[dx[nv]]
    else:
        inv = inv_array(dx[nv], p)
    slope = mul_mod(dy[nv], inv, p)
    icpt = (Y[i][nv] - mul_mod(slope, X[i][nv], p)) % p
    key[nv] = slope * p + icpt
    keys, pairs = np.unique(key, return_counts=True)
    n = (1 + np.sqrt(1 + 8 * pairs.astype(np.float64))).round().astype(np.int64) // 2
    if np.any(n * (n - 1) // 2 != pairs):
        raise SubgroupLabError("pair count is not triangular")
    triples = n * (n - 1) * (n - 2)
    through_origin = np.where(keys >= p * p, keys - p * p == 0, keys % p == 0)
    return TripleCount(
        int(triples.sum()) + degenerate,
        degenerate,
        int(triples[through_origin].sum()),
        "lines",
    )


def triples_invariant(
    Q1: InvariantSet,
    Q2: InvariantSet,
    C: InvariantSet | None = None,
    D: InvariantSet | None = None,
) -> TripleCount:
    """``T(Q1, Q2, C, D)`` for invariant sets, one pivot per coset pair.

    ``C`` must be invariant under the same subgroup as ``Q1`` and ``D``
    under that of ``Q2`` (default: ``C = Q1``, ``D = Q2``).  Replacing a
    pivot ``(r*g, s*h)`` by ``(r, s)`` rescales the whole picture by
    ``(g, h)``, which fixes the grid, so each coset pair contributes
    ``|G||P|`` identical terms.
    """
    C = Q1 if C is None else C
    D = Q2 if D is None else D
    if C.base != Q1.base or D.base != Q2.base:
        raise SubgroupLabError("pivot sets must share the grid's subgroups")
    p = Q1.p
    A, B = Q1.elements, Q2.elements
    mult = Q1.base.order * Q2.base.order
    energy, origin = _pivot_sums(A, B, np.asarray(C.chosen_reps), np.asarray(D.chosen_reps), p)
    return TripleCount(
        energy * mult, _degenerate(A, B, C.elements, D.elements), origin * mult, "invariant"
    )


# ---------------------------------------------------------------- richness


def line_richness(u: int, v: int, G: Subgroup, P: Subgroup) -> int:
    """Number of points of ``G x P`` on the line ``u*x + v*y = 1``."""
    p = G.ctx.p
    u, v = u % p, v % p
    if u == 0 and v == 0:
        raise SubgroupLabError("(u, v) = (0, 0) is not a line")
    if v == 0:
        return P.order if pow(u, -1, p) in G else 0
    y = mul_mod((1 - mul_mod(G.elements, u, p)) % p, pow(v, -1, p), p)
    return int(np.count_nonzero(P.mask[y]))


@dataclass(frozen=True, eq=False)
class RichnessHistogram:
    """Richness of the lines ``u*x + v*y = 1`` against ``G x P``.

    ``classes[i, j]`` is the richness of ``(reps_G[i], reps_P[j])``; each
    such class stands for ``multiplicity = |G||P|`` pairs ``(u, v)``.
    Lines with ``u = 0`` or ``v = 0`` are not in any class; they are
    kept in ``axis`` as ``(number of (u, v), richness)`` rows.
    """

    p: int
    gamma_order: int
    pi_order: int
    classes: np.ndarray = field(repr=False)
    buckets: dict[int, int]
    zero_one_count: int
    multiplicity: int
    axis: tuple[tuple[int, int], ...]
    q_tau: dict[int, int]

    def incidence_total(self) -> int:
        """Sum of richness over every (u, v) != (0, 0)."""
        generic = int(self.classes.sum()) * self.multiplicity
        return generic + sum(n * r for n, r in self.axis)

    def theta(self, tau: int) -> np.ndarray:
        """Indices ``(i, j)`` of classes with richness at least ``tau``."""
        return np.argwhere(self.classes >= tau)


def class_richness(G: Subgroup, P: Subgroup) -> np.ndarray:
    p = G.ctx.p
    U = coset_reps(G).reps
    Vinv = inv_array(coset_reps(P).reps, p)
    out = np.empty((len(U), len(Vinv)), dtype=np.int64)
    step = max(1, _CHUNK // (len(Vinv) * G.order))
    for i in range(0, len(U), step):
        W = (1 - mul_mod(U[i:i + step, None], G.elements[None, :], p)) % p
        Y = mul_mod(W[:, None, :], Vinv[None, :, None], p)
        out[i:i + step] = np.count_nonzero(P.mask[Y], axis=2)
    return out


def richness_histogram(G: Subgroup, P: Subgroup) -> RichnessHistogram:
    R = class_richness(G, P)
    mult = G.order * P.order
    top = int(R.max()) if R.size else 0
    buckets = {}
    j = 1
    while (1 << (j - 1)) < top:
        buckets[j] = int(np.count_nonzero((R > (1 << (j - 1))) & (R <= (1 << j))))
        j += 1
    # u-axis lines u*x = 1 meet the grid iff 1/u in G; likewise v-axis
    axis = ((G.order, P.order), (P.order, G.order))
    q_tau = {}
    j = 1
    while True:
        tau = 1 << j
        q = int(np.count_nonzero(R >= tau)) * mult + sum(n for n, r in axis if r >= tau)
        if q == 0:
            break
        q_tau[tau] = q
        j += 1
    return RichnessHistogram(
        G.ctx.p, G.order, P.order, R, buckets,
        int(np.count_nonzero(R <= 1)), mult, axis, q_tau,
    )


def richness_full_scan(G: Subgroup, P: Subgroup) -> np.ndarray:
    """Richness of every ``(u, v)`` in F_p^2 by enumerating incidences.

    Each grid point ``(x, y)`` lies on the lines ``v = (1 - u*x) / y``,
    one per ``u``; the result is a ``p x p`` array indexed ``[u, v]``.
    """
    p = G.ctx.p
    u = np.arange(p, dtype=np.int64)
    total = np.zeros(p * p, dtype=np.int64)
    yinv = inv_array(P.elements, p)
    for x in G.elements.tolist():
        w = (1 - u * x) % p
        v = mul_mod(w[:, None], yinv[None, :], p)
        total += np.bincount((u[:, None] * p + v).ravel(), minlength=p * p)
    return total.reshape(p, p)


@dataclass(frozen=True)
class MitkinSum:
    lhs: int
    rhs: float
    size_ok: bool
    density_ok: bool

    @property
    def hypotheses_ok(self) -> bool:
        return self.size_ok and self.density_ok


def mitkin_sum(theta: Iterable[tuple[int, int]], G: Subgroup, P: Subgroup) -> MitkinSum:
    """Richness summed over a set of line classes, against ``(|G||P||Θ|^2)^(1/3)``."""
    p = G.ctx.p
    theta = [(u % p, v % p) for u, v in theta]
    if not theta:
        raise SubgroupLabError("Θ is empty")
    if any(u == 0 or v == 0 for u, v in theta):
        raise ThetaNotReps("class representatives must be nonzero")
    us = np.array([u for u, _ in theta])
    vs = np.array([v for _, v in theta])
    cls = set(zip(G.coset_index(us).tolist(), P.coset_index(vs).tolist()))
    if len(cls) != len(theta):
        raise ThetaNotReps("Θ contains two equivalent classes")
    lhs = sum(line_richness(u, v, G, P) for u, v in theta)
    t = len(theta)
    gp = G.order * P.order
    return MitkinSum(
        lhs,
        (gp * t * t) ** (1 / 3),
        gp * gp * t < p ** 3,
        t * 33 ** 3 <= gp,
    )


def ratio_set(G: Subgroup) -> np.ndarray:
    """All ``(a ± b) / (a ± c)`` with ``a, b, c`` in G and nonzero denominator."""
    p = G.ctx.p
    g = G.elements
    seen = np.zeros(p, dtype=bool)
    inv = inverse_table(p) if p <= 1 << 24 else None
    for a in g.tolist():
        nums = np.concatenate([(a + g) % p, (a - g) % p])
        dens = np.concatenate([(a + g) % p, (a - g) % p])
        dens = dens[dens != 0]
        dinv = inv[dens] if inv is not None else inv_array(dens, p)
        seen[mul_mod(nums[:, None], dinv[None, :], p).ravel()] = True
    return np.flatnonzero(seen).astype(np.int64)
