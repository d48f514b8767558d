"""Simulation driver: lifetimes, reproducibility, rate sampling."""

import math

import numpy as np
import pytest
from scipy import stats

from colourcode.montecarlo import (
    SimConfig,
    estimate_rk,
    logical_rate_polynomial,
    prefactors_from_rk,
    qubits_for_distance,
    run_instance,
    sweep,
    unencoded_lifetime,
)


def test_p0_zero_never_fails():
    cfg = SimConfig(d=3, p0=0.0, mode="ideal", instances=10, max_rounds=50,
                    seed=1)
    res = sweep(cfg)
    pt = res.points[0]
    assert pt.failures == 0 and pt.censored == 10


def test_reproducible_given_seed():
    cfg = SimConfig(d=3, p0=0.08, mode="ideal", instances=60,
                    max_rounds=10000, seed=42)
    a = sweep(cfg).points[0]
    b = sweep(cfg).points[0]
    assert a.failure_times == b.failure_times
    c = sweep(SimConfig(d=3, p0=0.08, mode="ideal", instances=60,
                        max_rounds=10000, seed=43)).points[0]
    assert a.failure_times != c.failure_times


def test_worker_count_does_not_change_results():
    cfg = SimConfig(d=3, p0=0.1, mode="ideal", instances=40,
                    max_rounds=10000, seed=5)
    a = sweep(cfg, workers=1).points[0]
    b = sweep(cfg, workers=2).points[0]
    assert a.failure_times == b.failure_times


def test_ideal_lifetime_scales_like_p_squared_d3():
    # F=2 errors needed: log-log slope of failure rate vs p0 ~ 2
    qs = []
    ps = (0.02, 0.04, 0.08)
    for p0 in ps:
        cfg = SimConfig(d=3, p0=p0, mode="ideal", instances=4000,
                        max_rounds=10 ** 6, seed=11)
        pt = sweep(cfg).points[0]
        qs.append(pt.rate)
    slope = np.polyfit(np.log(ps), np.log(qs), 1)[0]
    assert 1.6 < slope < 2.4, (qs, slope)


def test_ideal_failure_times_geometric():
    # round-independence: failure times follow a geometric distribution
    cfg = SimConfig(d=3, p0=0.15, mode="ideal", instances=4000,
                    max_rounds=10 ** 6, seed=3)
    pt = sweep(cfg).points[0]
    times = np.array(pt.failure_times)
    q = pt.rate
    # chi-square against geometric pmf over binned support
    edges = [1, 2, 3, 4, 6, 9, 14, math.inf]
    obs = np.histogram(times, bins=edges)[0]
    cdf = lambda t: 1 - (1 - q) ** t
    exp_p = np.diff([cdf(e - 1) if e != math.inf else 1.0 for e in edges])
    exp = exp_p * len(times)
    keep = exp > 8
    chi2 = float(((obs[keep] - exp[keep]) ** 2 / exp[keep]).sum())
    dof = int(keep.sum()) - 1
    assert chi2 < stats.chi2.ppf(0.999, dof), (chi2, dof)


def test_censoring_reported():
    cfg = SimConfig(d=5, p0=0.02, mode="ideal", instances=50, max_rounds=3,
                    seed=9)
    pt = sweep(cfg).points[0]
    assert pt.censored + pt.failures == 50
    assert pt.censored > 0
    assert pt.total_rounds >= pt.censored * 3


def test_unencoded_baseline():
    assert unencoded_lifetime(0.01) == pytest.approx(150.0)
    rng = np.random.default_rng(0)
    # simulate the bare qubit to confirm the closed form
    p0 = 0.05
    hits = [int(rng.geometric(2 * p0 / 3)) for _ in range(20000)]
    assert np.mean(hits) == pytest.approx(unencoded_lifetime(p0), rel=0.05)


def test_circuit_mode_runs_and_fails():
    cfg = SimConfig(d=3, p0=0.02, mode="circuit", instances=20,
                    max_rounds=2000, seed=2)
    pt = sweep(cfg).points[0]
    assert pt.failures == 20
    assert pt.mean_rounds < 200


def test_circuit_reproducible():
    cfg = SimConfig(d=3, p0=0.01, mode="circuit", instances=10,
                    max_rounds=2000, seed=8)
    a = sweep(cfg).points[0].failure_times
    b = sweep(cfg).points[0].failure_times
    assert a == b


def test_rk_trivial_cases():
    r, e = estimate_rk(3, -2, 100, seed=1)
    assert r == 0.0
    r0, _ = estimate_rk(3, 0, 3000, seed=1, decoder="oracle")
    assert r0 == 1.0


def test_rk_d5_oracle_matches_table():
    r0, err = estimate_rk(5, 0, 20000, seed=4, decoder="oracle")
    assert abs(r0 - 332 / 680) < 0.01


def test_rk_approx_decoder_close_to_oracle_d3():
    r_or, _ = estimate_rk(3, 1, 4000, seed=5, decoder="oracle")
    r_ap, _ = estimate_rk(3, 1, 4000, seed=5, decoder="approx")
    assert abs(r_or - r_ap) < 0.05


def test_polynomial_zero_prefactors():
    Q = qubits_for_distance(3)
    F = 2
    assert logical_rate_polynomial(3, 0.1, [0.0] * (Q - F + 1)) == 0.0
    with pytest.raises(ValueError):
        logical_rate_polynomial(3, 0.1, [0.0] * 3)


def test_polynomial_matches_simulation_d3():
    # measured r_k feed Eq-style polynomial; direct sim should agree
    rk = {}
    for k in range(0, 4):
        rk[k], _ = estimate_rk(3, k, 4000, seed=6, decoder="approx")
    for k in range(4, 6):
        rk[k] = 1.0
    pref = prefactors_from_rk(3, rk)
    p0 = 0.05
    pL = logical_rate_polynomial(3, p0, pref)
    cfg = SimConfig(d=3, p0=p0, mode="ideal", instances=6000,
                    max_rounds=10 ** 6, seed=12)
    pt = sweep(cfg).points[0]
    q = pt.rate
    sigma = pt.rate_err
    assert abs(q - pL) < max(3 * sigma, 0.15 * pL), (q, pL, sigma)


def test_csv_format():
    cfg = SimConfig(d=3, p0=0.1, mode="ideal", instances=30,
                    max_rounds=1000, seed=1)
    res = sweep(cfg)
    text = res.csv()
    header, row = text.strip().split("\n")
    assert header == "d,p0,mode,instances,mean_rounds,stderr,censored"
    assert row.startswith("3,0.1,ideal,30,")
