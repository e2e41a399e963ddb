from math import log2
from pathlib import Path

import numpy as np
import pytest

from conftest import brute_energy, brute_subgroup
from subgroup_lab.errors import ConfigInvalid, SubgroupLabError, ZeroShift
from subgroup_lab.groups import invariant_set, subgroup
from subgroup_lab.harness import (
    QUANTITIES, ScanConfig, admissible_orders, cor34_quantities, cor44_min_energy,
    glibichuk_check, glibichuk_passes, konyagin_ratio, mitkin_record, qtau_records,
    scan, scan_prime, summarize, theorem1_ratio, thm41_ratio, thm43_dilated_ratio,
    thm43_ratio, worker_count,
)
from subgroup_lab.report import to_csv
from subgroup_lab.verify import oracle_lhs, spot_check

DATA = Path(__file__).parent / "data"


def test_theorem1_example():
    r = theorem1_ratio(13, 3)
    assert r.lhs == 10
    assert r.bound_expr == pytest.approx(9 / log2(3))
    assert r.ratio == pytest.approx(1.7610, abs=1e-3)
    assert r.hypothesis_ok
    assert not theorem1_ratio(7, 3).hypothesis_ok
    assert theorem1_ratio(7, 6).lhs == 7
    with pytest.raises(SubgroupLabError):
        theorem1_ratio(13, 1)


def test_thm41_example_and_shift_invariance():
    r = thm41_ratio(13, 3, 3)
    assert r.lhs == 15
    g = brute_subgroup(13, 3)
    assert r.lhs == brute_energy([(x + 1) % 13 for x in g], [(x + 1) % 13 for x in g], 13, "mul")
    # x only matters up to its coset
    for x in (3, 9):
        assert thm41_ratio(13, 3, 3, x, 1).lhs == 15
    assert thm41_ratio(31, 5, 5).lhs == 49
    with pytest.raises(ZeroShift):
        thm41_ratio(13, 3, 3, 0, 1)


def test_glibichuk_examples():
    for p, d in [(13, 4), (7, 3), (13, 12), (101, 25)]:
        r = glibichuk_check(p, d)
        assert r.hypothesis_ok and glibichuk_passes(r)
    assert glibichuk_check(13, 12).lhs == 13
    assert not glibichuk_check(13, 3).hypothesis_ok


def test_konyagin_and_cor34():
    assert konyagin_ratio(13, 3).lhs == 15
    recs = cor34_quantities(13, 3, np.random.default_rng(0))
    assert recs[0].quantity == "cor34_ratio" and recs[0].lhs == 13
    assert {r.quantity for r in recs[1:]} == {"cor34_2GX"}
    assert all(r.lhs <= 13 for r in recs)


def test_invariant_records():
    G = subgroup(31, 3)
    Q = invariant_set(G, [1, 3])
    r = thm43_ratio(31, Q, Q)
    assert r.lhs == 6138 and r.params == "reps1=1/3;reps2=1/3"
    d = thm43_dilated_ratio(31, Q, 7)
    assert d.quantity == "thm43" and d.params.startswith("variant=dilated")
    assert d.lhs == oracle_lhs(d)
    with pytest.raises(SubgroupLabError):
        thm43_dilated_ratio(31, Q, 1)
    c = cor44_min_energy(13, invariant_set(subgroup(13, 3), [1]), 1)
    assert c.lhs == 15


def test_richness_records():
    rec = mitkin_record(13, 3, 3)
    assert rec.params == "tau=2;theta=1" and rec.lhs == 2
    q = qtau_records(13, 3, 3)
    assert [(r.params, r.lhs) for r in q] == [("tau=2", 15)]


def test_admissible_orders():
    assert admissible_orders(13, "below_sqrt_p") == [2, 3]
    assert admissible_orders(13, "all_divisors") == [1, 2, 3, 4, 6, 12]
    assert admissible_orders(13, (3, 5, 12)) == [3, 12]
    assert admissible_orders(3, "below_sqrt_p") == []


def test_config_validation():
    for bad in [dict(p_min=20, p_max=10), dict(budget=0), dict(quantities=("nope",)),
                dict(d_policy="some"), dict(seed=-1)]:
        with pytest.raises(ConfigInvalid):
            ScanConfig(**bad).validate()


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("SUBGROUP_LAB_THREADS", "3")
    assert worker_count(ScanConfig()) == 3
    assert worker_count(ScanConfig(workers=2)) == 2
    monkeypatch.setenv("SUBGROUP_LAB_THREADS", "x")
    with pytest.raises(ConfigInvalid):
        worker_count(ScanConfig())


def test_empty_range():
    assert scan(ScanConfig(p_max=4)) == []
    assert scan(ScanConfig(p_min=24, p_max=28)) == []


def test_theorem1_only_rows():
    recs = scan(ScanConfig(p_max=13, quantities=("theorem1",)))
    want = [(p, d) for p in (5, 7, 11, 13) for d in range(2, p) if (p - 1) % d == 0 and d * d < p]
    assert [(r.p, r.d_gamma) for r in recs] == want


def test_scan_frozen_p13():
    text = to_csv(scan(ScanConfig(p_max=13, workers=1)))
    assert text == (DATA / "scan_p13.csv").read_text()


def test_scan_deterministic_and_sorted():
    cfg = ScanConfig(p_max=60, seed=7, workers=1)
    a, b = scan(cfg), scan(cfg)
    assert a == b
    assert a == sorted(a, key=lambda r: r.sort_key)
    assert scan(ScanConfig(p_max=60, seed=7, workers=2)) == a
    assert {r.quantity for r in a} == set(QUANTITIES)


def test_seed_changes_random_instances():
    a = [r for r in scan_prime(61, ScanConfig(seed=0)) if r.quantity == "cor44"]
    b = [r for r in scan_prime(61, ScanConfig(seed=1)) if r.quantity == "cor44"]
    assert [r.params for r in a] != [r.params for r in b]


def test_spot_check_clean():
    recs = scan(ScanConfig(p_max=60, workers=1))
    res = spot_check(recs, fraction=1.0, seed=0)
    assert res.checked > 0 and not res.mismatches


def test_spot_check_catches_corruption():
    recs = scan(ScanConfig(p_max=40, quantities=("konyagin",), workers=1))
    bad = [r.__class__(**{**r.__dict__, "lhs": r.lhs + 1}) for r in recs]
    assert len(spot_check(bad, fraction=1.0).mismatches) == len(bad)


def test_summarize_uses_hypothesis_records_only():
    recs = [theorem1_ratio(13, 3), theorem1_ratio(7, 3)]
    s = summarize(recs)
    assert s["theorem1_count"] == 1 and s["theorem1_min"] == recs[0].ratio
    assert s["cor44_max"] is None
