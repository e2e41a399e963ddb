import numpy as np
import pytest

from subgroup_lab.errors import DuplicateCoset, NotADivisor, ZeroDilation
from subgroup_lab.field import PrimeContext, divisors, is_prime
from subgroup_lab.groups import (
    coset_reps, dilate, dilate_invariant, invariant_set, random_invariant_set, shift, subgroup,
)


def test_subgroup_examples(oracles):
    assert subgroup(13, 3).elements.tolist() == [1, 3, 9] == oracles.subgroup(13, 3)
    assert subgroup(7, 3).elements.tolist() == [1, 2, 4] == oracles.subgroup(7, 3)
    assert subgroup(101, 1).elements.tolist() == [1]
    with pytest.raises(NotADivisor):
        subgroup(13, 5)


@pytest.mark.parametrize("p", [p for p in range(3, 200) if is_prime(p)])
def test_subgroup_structure(p, oracles):
    for d in divisors(p - 1):
        G = subgroup(p, d)
        g = G.elements.tolist()
        assert g == oracles.subgroup(p, d)
        assert len(g) == d and 1 in G
        assert {a * b % p for a in g for b in g} == set(g)
        assert {pow(a, -1, p) for a in g} == set(g)
        reps = coset_reps(G).reps
        assert len(reps) == (p - 1) // d
        cover = np.sort((reps[:, None] * G.elements[None, :] % p).ravel())
        assert cover.tolist() == list(range(1, p))


def test_uniqueness_across_generators():
    p, d = 31, 5
    ctx = PrimeContext.of(p)
    for g in range(2, p):
        if len({pow(g, k, p) for k in range(p - 1)}) == p - 1:
            other = sorted({pow(g, (p - 1) // d * k, p) for k in range(d)})
            assert other == subgroup(ctx, d).elements.tolist()


def test_coset_reps_examples():
    assert coset_reps(subgroup(13, 12)).reps.tolist() == [1]
    assert sorted(coset_reps(subgroup(13, 1)).reps.tolist()) == list(range(1, 13))
    assert coset_reps(subgroup(13, 3)).reps.tolist() == [1, 2, 4, 8]


def test_coset_reps_greedy_oracle():
    p, d = 13, 3
    G = set(subgroup(p, d).elements.tolist())
    covered, reps = set(), []
    for x in range(1, p):
        if x not in covered:
            reps.append(x)
            covered |= {x * g % p for g in G}
    assert len(reps) == len(coset_reps(subgroup(p, d)))


def test_invariant_set():
    G = subgroup(13, 3)
    assert invariant_set(G, [1]).elements.tolist() == [1, 3, 9]
    assert invariant_set(G, coset_reps(G).reps).elements.tolist() == list(range(1, 13))
    Q = invariant_set(G, [1, 2])
    assert Q.elements.tolist() == [1, 2, 3, 5, 6, 9]
    with pytest.raises(DuplicateCoset):
        invariant_set(G, [1, 3])


def test_random_invariant_sets_are_invariant():
    rng = np.random.default_rng(0)
    for p in (31, 61, 97, 181):
        for d in divisors(p - 1)[:-1]:
            G = subgroup(p, d)
            k = int(rng.integers(1, G.index + 1))
            Q = random_invariant_set(G, k, rng)
            q = set(Q.elements.tolist())
            assert len(q) == k * d
            assert {a * g % p for a in q for g in G.elements.tolist()} == q


def test_dilate_invariant():
    G = subgroup(31, 5)
    Q = invariant_set(G, [1, 3])
    R = dilate_invariant(Q, 7)
    assert R.elements.tolist() == sorted(7 * q % 31 for q in Q.elements.tolist())


def test_shift_and_dilate():
    G = subgroup(13, 3).elements
    assert shift(G, 1, 13).tolist() == [2, 4, 10]
    for gamma in G.tolist():
        assert dilate(G, gamma, 13).tolist() == G.tolist()
        # gamma * (G + 1) == (gamma * G) + gamma
        assert dilate(shift(G, 1, 13), gamma, 13).tolist() == shift(dilate(G, gamma, 13), gamma, 13).tolist()
    with pytest.raises(ZeroDilation):
        dilate(G, 0, 13)
