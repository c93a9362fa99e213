"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 1..8 cover the primary component (run with ``pytest -s`` to see the
lines as they print); the figure-rendering criterion lives in the separate
frontend package and is exercised by its own test suite.
"""
import math

import numpy as np
import pytest

from mixadc.analytic import (
    phi,
    rate_imperfect_csi,
    rate_imperfect_rayleigh,
    rate_limit_imperfect_constant,
    rate_limit_power_scaled_imperfect,
    rate_limit_power_scaled_perfect,
    rate_perfect_K_infinity,
    rate_perfect_csi,
    rate_perfect_rayleigh,
)
from mixadc.experiments import make_spec, parse_csv_metadata, result_to_csv, run_sweep, spec_from_metadata
from mixadc.power import PowerParams, total_power
from mixadc.quantization import (
    AqnmParams,
    DISTORTION_TABLE,
    empirical_distortion,
    lloyd_max_design,
)
from mixadc.scenario import SystemConfig, fixed_user_scenario
from dataclasses import replace


def report(criterion: str, passed: bool, detail: str) -> None:
    print(f"[acceptance] criterion {criterion}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"criterion {criterion}: {detail}"


def paired_gaps(rows):
    """Max relative sum-rate gap between analytic and MC rows per point."""
    analytic = {}
    mc = {}
    for row in rows:
        key = (row["axis_value"], row["case_label"])
        if row["method"].startswith("analytic"):
            analytic[key] = row["sum_rate_bpshz"]
        elif row["method"].startswith("mc"):
            mc[key] = row["sum_rate_bpshz"]
    assert set(analytic) == set(mc) and analytic
    return max(abs(mc[k] - analytic[k]) / mc[k] for k in mc)


@pytest.fixture(scope="module")
def fig2_sweep():
    spec = make_spec("rate-vs-pu", normalized_beta=True, seed=1, realizations=2000)
    return run_sweep(spec)


def test_criterion_1_perfect_csi_agreement(fig2_sweep):
    worst = paired_gaps(fig2_sweep.rows)
    report("1", worst <= 0.05, f"max |MC-analytic|/MC = {worst:.2%} <= 5%, 4 cases x 5 powers, 2000 realizations")


def test_criterion_2_imperfect_csi_agreement():
    spec = make_spec("rate-vs-pu", normalized_beta=True, seed=1, realizations=2000, csi="imperfect")
    worst = paired_gaps(run_sweep(spec).rows)
    report("2", worst <= 0.07, f"max |MC-analytic|/MC = {worst:.2%} <= 7% under estimated CSI")


def _max_rel(xs, ys):
    return max(abs(x - y) / abs(y) for x, y in zip(xs, ys))


def test_criterion_3_special_case_algebra():
    rng = np.random.default_rng(11)
    theta = rng.uniform(-np.pi / 2, np.pi / 2, 6)
    beta = np.array([1.0, 0.8, 1.2, 0.5, 0.9, 1.1])
    aqnm = AqnmParams.from_bits(1)
    cfg = SystemConfig(M=128, M0=64, N=6, b=1, p_u=2.0, tau=6)

    rayleigh = fixed_user_scenario(beta, theta, np.zeros(6))
    gap_p = _max_rel(
        rate_perfect_csi(rayleigh, cfg, aqnm).per_user_rate,
        rate_perfect_rayleigh(rayleigh, cfg, aqnm).per_user_rate,
    )
    gap_ip = _max_rel(
        rate_imperfect_csi(rayleigh, cfg, aqnm).per_user_rate,
        rate_imperfect_rayleigh(rayleigh, cfg, aqnm).per_user_rate,
    )

    rician = fixed_user_scenario(beta, theta, np.array([0.0, 1.0, 3.0, 10.0, 0.5, 6.0]))
    sharp = SystemConfig(M=128, M0=64, N=6, b=1, p_u=10.0, tau=10**7)  # pilot power 1e8
    gap_pp = _max_rel(
        rate_imperfect_csi(rician, sharp, aqnm).per_user_rate,
        rate_perfect_csi(rician, sharp, aqnm).per_user_rate,
    )

    ideal_cfg = SystemConfig(M=128, M0=128, N=6, b=1, p_u=2.0, tau=6)
    ours = rate_perfect_csi(rician, ideal_cfg, AqnmParams.ideal()).per_user_rate
    reference = []
    M = ideal_cfg.M
    for n in range(6):
        Kn, bn = rician.K[n], beta[n]
        num = ideal_cfg.p_u * bn * ((2 * Kn + 1) * M + (Kn + 1) ** 2 * M**2)
        den = (Kn + 1) ** 2 * M
        for i in range(6):
            if i == n:
                continue
            Ki = rician.K[i]
            den += (
                ideal_cfg.p_u
                * (Kn + 1)
                * beta[i]
                * (Kn * Ki * phi(theta[n], theta[i], M) ** 2 + M * (Kn + Ki + 1))
                / (Ki + 1)
            )
        reference.append(math.log2(1 + num / den))
    gap_unq = _max_rel(ours, reference)

    passed = gap_p < 1e-10 and gap_ip < 1e-10 and gap_pp < 1e-4 and gap_unq < 1e-10
    report(
        "3",
        passed,
        f"K=0 identities {max(gap_p, gap_ip):.2e} <= 1e-10, pilot-limit {gap_pp:.2e} <= 1e-4, "
        f"unquantized form {gap_unq:.2e} <= 1e-10",
    )


def test_criterion_4_limits():
    rng = np.random.default_rng(11)
    theta = rng.uniform(-np.pi / 2, np.pi / 2, 6)
    beta = np.array([1.0, 0.8, 1.2, 0.5, 0.9, 1.1])
    aqnm = AqnmParams.from_bits(1)
    cfg = SystemConfig(M=128, M0=64, N=6, b=1, p_u=2.0, tau=6)

    strong = fixed_user_scenario(beta, theta, np.full(6, 1e6))
    gap_k = _max_rel(
        rate_perfect_csi(strong, cfg, aqnm).per_user_rate,
        rate_perfect_K_infinity(strong, cfg, aqnm).per_user_rate,
    )

    M = 10**6
    big = SystemConfig(M=M, M0=M // 2, N=6, b=1, p_u=10.0 / M, tau=6)
    modest = fixed_user_scenario(beta, theta, np.full(6, 5.0))
    gap_scaling = _max_rel(
        rate_perfect_csi(modest, big, aqnm).per_user_rate,
        [rate_limit_power_scaled_perfect(10.0, bn, 0.5, aqnm) for bn in beta],
    )

    scaled = rate_limit_power_scaled_imperfect(10.0, 1.0, 5.0, 8, 0.5, aqnm, gamma=1.0, M=1e6)
    constant = rate_limit_imperfect_constant(10.0, 1.0, 5.0, 0.5, aqnm)
    gap_ip = abs(scaled - constant) / constant

    passed = gap_k <= 1e-3 and gap_scaling <= 5e-3 and gap_ip <= 5e-3
    report(
        "4",
        passed,
        f"strong-LoS {gap_k:.2e} <= 0.1%, perfect scaling {gap_scaling:.2e} <= 0.5%, "
        f"imperfect scaling {gap_ip:.2e} <= 0.5%",
    )


def test_criterion_5_quantizer_oracle():
    worst = max(abs(lloyd_max_design(b).gaussian_distortion() - DISTORTION_TABLE[b]) for b in range(1, 6))
    rho_hat = empirical_distortion(lloyd_max_design(1), 10**6, np.random.default_rng(7))
    empirical_gap = abs(rho_hat - 0.3634)
    passed = worst <= 2e-3 and empirical_gap <= 5e-3
    report(
        "5",
        passed,
        f"Lloyd-Max vs table {worst:.2e} <= 2e-3, empirical 1-bit {empirical_gap:.2e} <= 5e-3",
    )


def test_criterion_6_power_model():
    cfg = SystemConfig(M=200, M0=0, N=10, b=1, p_u=1.0, tau=10)
    total = total_power(cfg, 12, PowerParams()).total_w
    # "exact" means the closed-form sum; the float sum and the decimal
    # literal agree to the last unit in the last place
    exact = math.isclose(total, 2.0345, rel_tol=1e-12, abs_tol=0.0)

    spec = make_spec("ee-vs-b", normalized_beta=True, seed=1)
    rows = [r for r in run_sweep(spec).rows if r["case_label"] == "kappa=0.5"]
    best = max(rows, key=lambda r: r["ee_bits_per_joule"])
    interior = 1 < best["b"] < 12

    report(
        "6",
        exact and interior,
        f"total power {total * 1e3:.10g} mW == 2034.5 mW, EE optimum at b={best['b']} (interior)",
    )


def test_criterion_7_rate_saturation_in_K():
    spec = make_spec("rate-vs-K", normalized_beta=True, seed=1, axis_values=(10.0, 30.0))
    rows = run_sweep(spec).rows
    worst = 0.0
    for label in ("M0=200,M1=0", "M0=100,M1=100", "M0=0,M1=200"):
        analytic = next(
            r["sum_rate_bpshz"]
            for r in rows
            if r["case_label"] == label and r["axis_value"] == 30.0 and r["method"].startswith("analytic")
        )
        limit = next(
            r["sum_rate_bpshz"]
            for r in rows
            if r["case_label"] == label and r["axis_value"] == 30.0 and r["method"] == "limit-K-infinity"
        )
        worst = max(worst, abs(analytic - limit) / limit)
    report("7", worst <= 0.02, f"K=30dB rate within {worst:.2%} <= 2% of the strong-LoS constant")


def test_criterion_8_bit_identical_replay():
    spec = make_spec(
        "rate-vs-b",
        axis_values=(1, 2),
        M=16,
        N=2,
        seed=99,
        realizations=100,
        normalized_beta=True,
        cases=[{"label": "M0=8,M1=8,K=10dB", "M0": 8, "K_db": 10.0}],
    )
    first = result_to_csv(run_sweep(spec))
    replay = spec_from_metadata(parse_csv_metadata(first))
    replay = replace(replay, mc=replace(replay.mc, workers=4))
    second = result_to_csv(run_sweep(replay))
    report("8", first == second, "rerun from recorded metadata with 4 workers is byte-identical")
