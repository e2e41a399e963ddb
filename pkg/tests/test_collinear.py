from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_T
from subgroup_lab.collinear import (
    class_richness, line_richness, mitkin_sum, ratio_set, richness_full_scan,
    richness_histogram, triples_bruteforce, triples_by_definition, triples_by_lines,
    triples_invariant,
)
from subgroup_lab.errors import BudgetExceeded, SubgroupLabError, ThetaNotReps
from subgroup_lab.field import divisors
from subgroup_lab.groups import coset_reps, dilate_invariant, invariant_set, subgroup

G13 = [1, 3, 9]


def key(t):
    return (t.total, t.degenerate, t.origin_lines)


# frozen from the plain 6-tuple loop in conftest.brute_T
@pytest.mark.parametrize("A, B, p, expected", [
    ([1], [1], 13, 1),
    ([1, 12], [1, 12], 13, 40),
    (G13, G13, 13, 279),
    ([1, 2, 3, 4], [1, 2, 3, 4], 5, 1120),
    (G13, [1, 5, 8, 12], 13, 504),
])
def test_triples_frozen(A, B, p, expected, oracles):
    assert oracles.T(A, B, A, B, p) == expected
    t = [triples_by_definition(A, B, A, B, p), triples_bruteforce(A, B, A, B, p), triples_by_lines(A, B, p)]
    assert [x.total for x in t] == [expected] * 3
    assert key(t[0]) == key(t[1]) == key(t[2])
    assert expected >= (len(A) * len(B)) ** 2


def test_triples_single_line_grid():
    B = subgroup(31, 6).elements
    for f in (lambda: triples_by_lines([1], B, 31), lambda: triples_by_definition([1], B, [1], B, 31)):
        assert f().total == len(B) ** 3


@st.composite
def four_sets(draw):
    p = draw(st.sampled_from([5, 7, 11, 13]))
    s = st.sets(st.integers(0, p - 1), min_size=1, max_size=4)
    return p, *(sorted(draw(s)) for _ in range(4))


@settings(max_examples=120, deadline=None)
@given(case=four_sets())
def test_general_signature_matches_oracle(case):
    p, A, B, C, D = case
    d = triples_by_definition(A, B, C, D, p)
    b = triples_bruteforce(A, B, C, D, p)
    assert d.total == b.total == brute_T(A, B, C, D, p)
    assert key(d) == key(b)
    assert d.total >= len(A) * len(B) * len(C) * len(D)


@settings(max_examples=120, deadline=None)
@given(case=four_sets())
def test_three_way_agreement_random(case):
    p, A, B, _, _ = case
    assert key(triples_by_definition(A, B, A, B, p)) == key(triples_bruteforce(A, B, A, B, p)) \
        == key(triples_by_lines(A, B, p))


def test_three_way_agreement_subgroups():
    for p in (13, 31, 61):
        for a in divisors(p - 1):
            for b in divisors(p - 1):
                if a * b > 100:
                    continue
                G, P = subgroup(p, a), subgroup(p, b)
                A, B = G.elements, P.elements
                full = triples_bruteforce(A, B, A, B, p)
                reduced = triples_bruteforce(A, B, A, B, p, pivot_group=(G, P))
                assert key(full) == key(reduced) == key(triples_by_lines(A, B, p)) \
                    == key(triples_by_definition(A, B, A, B, p))


def test_bruteforce_guards():
    G = subgroup(13, 3)
    with pytest.raises(SubgroupLabError):
        triples_bruteforce([1, 2], G.elements, [1, 2], G.elements, 13, pivot_group=(G, G))
    with pytest.raises(BudgetExceeded):
        triples_bruteforce(range(20), range(20), range(20), range(20), 23, budget=1000)


def test_dilation_invariance_of_T():
    p = 31
    G, P = subgroup(p, 3).elements, subgroup(p, 5).elements
    base = triples_by_definition(G, P, G, P, p).total
    for xi, eta in [(2, 7), (11, 3), (30, 30)]:
        Gx, Pe = (G * xi) % p, (P * eta) % p
        assert triples_by_lines(Gx, Pe, p).total == base


def test_triples_invariant_matches_definition(oracles):
    p = 31
    G = subgroup(p, 3)
    Q = invariant_set(G, [1, 3])
    assert triples_invariant(Q, Q).total == 6138 == oracles.T(*(4 * [Q.elements.tolist()]), p)
    rng = np.random.default_rng(5)
    for p, d1, d2 in [(61, 3, 5), (61, 4, 4), (73, 3, 4)]:
        G, P = subgroup(p, d1), subgroup(p, d2)
        reps_g, reps_p = coset_reps(G).reps, coset_reps(P).reps
        Q1 = invariant_set(G, np.sort(rng.choice(reps_g, 3, replace=False)))
        Q2 = invariant_set(P, np.sort(rng.choice(reps_p, 2, replace=False)))
        C = dilate_invariant(Q1, 7)
        inv = triples_invariant(Q1, Q2, C, Q2)
        full = triples_by_definition(Q1.elements, Q2.elements, C.elements, Q2.elements, p)
        assert key(inv) == key(full)


def test_line_richness_examples():
    G = subgroup(13, 3)
    assert line_richness(0, 1, subgroup(13, 1), G) == 1
    # u = 0: y = 1/v forced, x free over G
    assert line_richness(0, 1, G, G) == 3
    assert line_richness(2, 12, G, G) == 1
    assert line_richness(2, 12, G, G) == sum(1 for x in G13 for y in G13 if (2 * x + 12 * y) % 13 == 1)
    with pytest.raises(SubgroupLabError):
        line_richness(0, 0, G, G)


def test_richness_orbit_invariance_exhaustive():
    for p in (13, 31, 37):
        for a in divisors(p - 1)[:4]:
            for b in divisors(p - 1)[:4]:
                G, P = subgroup(p, a), subgroup(p, b)
                for u, v in product(range(1, p), range(1, p)):
                    r = line_richness(u, v, G, P)
                    g = int(G.elements[-1])
                    h = int(P.elements[-1])
                    assert line_richness(u * g % p, v * h % p, G, P) == r


def test_histogram_p13():
    G = subgroup(13, 3)
    h = richness_histogram(G, G)
    # full (u, v) double loop over F_13^2
    R = {(u, v): sum(1 for x in G13 for y in G13 if (u * x + v * y) % 13 == 1)
         for u in range(13) for v in range(13) if (u, v) != (0, 0)}
    assert h.q_tau == {2: 15} == {2: sum(r >= 2 for r in R.values())}
    assert h.incidence_total() == sum(R.values()) == 13 * 9
    assert h.buckets == {1: 1}
    assert h.zero_one_count == 15
    assert h.zero_one_count + sum(h.buckets.values()) == len(coset_reps(G)) ** 2


def test_histogram_trivial_group():
    h = richness_histogram(subgroup(13, 1), subgroup(13, 1))
    assert h.buckets == {} and h.q_tau == {}


def test_histogram_consistency():
    for p, a, b in [(61, 3, 4), (97, 4, 6), (101, 5, 5)]:
        G, P = subgroup(p, a), subgroup(p, b)
        h = richness_histogram(G, P)
        full = richness_full_scan(G, P)
        assert int(full.sum()) == h.incidence_total() == p * a * b
        qs = list(h.q_tau.values())
        assert qs == sorted(qs, reverse=True)
        nz = np.arange(1, p)
        assert np.array_equal(full[1:, 1:], h.classes[G.coset_index(nz)][:, P.coset_index(nz)])


def test_mitkin_sum():
    p = 61
    G = subgroup(p, 4)
    R = class_richness(G, G)
    reps = coset_reps(G).reps
    one = mitkin_sum([(int(reps[2]), int(reps[5]))], G, G)
    assert one.lhs == R[2, 5]
    assert one.rhs == pytest.approx(16 ** (1 / 3))
    everything = [(int(u), int(v)) for u in reps for v in reps]
    total = mitkin_sum(everything, G, G)
    # every grid point is on p lines not through 0; axis lines carry 2|G|^2 of them
    assert total.lhs * 16 == p * 16 - 2 * 16
    assert not total.density_ok
    with pytest.raises(ThetaNotReps):
        mitkin_sum([(1, 1), (int(G.elements[1]), 1)], G, G)
    with pytest.raises(ThetaNotReps):
        mitkin_sum([(0, 1)], G, G)


def test_ratio_set():
    assert ratio_set(subgroup(13, 1)).tolist() == [0, 1]
    assert len(ratio_set(subgroup(13, 3))) == 13
    for p in (31, 61, 97):
        for d in divisors(p - 1):
            g = subgroup(p, d).elements.tolist()
            assert len(ratio_set(subgroup(p, d))) >= d
    g = subgroup(61, 5).elements.tolist()
    oracle = {(a + s * b) * pow(a + t * c, -1, 61) % 61
              for a, b, c in product(g, g, g) for s in (1, -1) for t in (1, -1) if (a + t * c) % 61}
    assert ratio_set(subgroup(61, 5)).tolist() == sorted(oracle)
