import math

import numpy as np
import pytest

from mixadc.channel import draw_channel, draw_estimated_channel, pilot_estimation_stats
from mixadc.montecarlo import McSettings, mc_rate, realization_rng, sinr_imperfect, sinr_perfect
from mixadc.quantization import AqnmParams
from mixadc.scenario import SystemConfig, fixed_user_scenario, sample_user_scenario

ONE_BIT = AqnmParams.from_bits(1)
TWO_BIT = AqnmParams.from_bits(2)


def scripted_channel():
    # fixed M=4, N=2 channel, split 2/2
    G = np.array(
        [
            [0.6 + 0.3j, -0.2 + 0.9j],
            [-0.1 - 0.5j, 0.4 + 0.1j],
            [0.8 + 0.0j, 0.3 - 0.6j],
            [0.2 + 0.7j, -0.5 - 0.2j],
        ]
    )
    return G[:2], G[2:]


class TestSinrPerfect:
    def test_single_user_unquantized(self):
        rng = np.random.default_rng(0)
        g = rng.standard_normal((6, 1)) + 1j * rng.standard_normal((6, 1))
        value = sinr_perfect(g, np.zeros((0, 1), dtype=complex), 0, 2.5, AqnmParams.ideal())
        assert value == pytest.approx(2.5 * np.sum(np.abs(g) ** 2), rel=1e-12)

    def test_ideal_adc_drops_quantization_term(self):
        G0, G1 = scripted_channel()
        ideal = AqnmParams.ideal()
        value = sinr_perfect(G0, G1, 0, 1.7, ideal)
        # reference without any quantization machinery
        g0, g1 = G0[:, 0], G1[:, 0]
        desired = 1.7 * abs(g0.conj() @ g0 + g1.conj() @ g1) ** 2
        interf = 1.7 * abs(g0.conj() @ G0[:, 1] + g1.conj() @ G1[:, 1]) ** 2
        awgn = np.sum(np.abs(g0) ** 2) + np.sum(np.abs(g1) ** 2)
        assert value == pytest.approx(desired / (interf + awgn), rel=1e-12)

    def test_scripted_term_by_term(self):
        # independent dense evaluation of every term on a hardcoded channel
        G0, G1 = scripted_channel()
        p_u, aqnm = 1.3, TWO_BIT
        a, r = aqnm.alpha, aqnm.rho
        for n in range(2):
            g0, g1 = G0[:, n], G1[:, n]
            desired = p_u * abs(g0.conj() @ g0 + a * (g1.conj() @ g1)) ** 2
            interf = 0.0
            for i in range(2):
                if i != n:
                    interf += p_u * abs(g0.conj() @ G0[:, i] + a * (g1.conj() @ G1[:, i])) ** 2
            awgn = np.sum(np.abs(g0) ** 2) + a * np.sum(np.abs(g1) ** 2)
            quant = 0.0
            for m in range(2):
                row_power = sum(abs(G1[m, i]) ** 2 for i in range(2))
                quant += a * r * p_u * abs(g1[m]) ** 2 * row_power
            expected = desired / (interf + awgn + quant)
            assert sinr_perfect(G0, G1, n, p_u, aqnm) == pytest.approx(expected, rel=1e-12)


class TestSinrImperfect:
    def test_reduces_to_perfect_with_clean_estimate(self):
        G0, G1 = scripted_channel()
        scn = fixed_user_scenario([1.0, 0.9], [0.1, -0.3], [2.0, 2.0])
        # enormous pilot power: sigma^2 ~ 1e-19, estimate equals the truth
        value = sinr_imperfect(G0, G1, G1, scn, 0, 1.3, 1e18, TWO_BIT)
        assert value == pytest.approx(sinr_perfect(G0, G1, 0, 1.3, TWO_BIT), rel=1e-9)

    def test_scripted_term_by_term(self):
        Gh0, Gh1 = scripted_channel()
        G1_true = Gh1 + np.array([[0.05 - 0.02j, -0.03 + 0.04j], [0.01 + 0.02j, 0.02 - 0.05j]])
        scn = fixed_user_scenario([1.0, 0.7], [0.4, -0.9], [1.5, 4.0])
        p_u, p_p, aqnm = 0.8, 4.0, TWO_BIT
        a, r = aqnm.alpha, aqnm.rho
        _, sigma2 = pilot_estimation_stats(scn, p_p)
        s2 = sigma2.sum()
        for n in range(2):
            g0, g1 = Gh0[:, n], Gh1[:, n]
            desired = p_u * abs(g0.conj() @ g0 + a * (g1.conj() @ g1)) ** 2
            interf = sum(
                p_u * abs(g0.conj() @ Gh0[:, i] + a * (g1.conj() @ Gh1[:, i])) ** 2
                for i in range(2)
                if i != n
            )
            awgn = np.sum(np.abs(g0) ** 2) + a * np.sum(np.abs(g1) ** 2)
            estimation = p_u * (np.sum(np.abs(g0) ** 2) + a * a * np.sum(np.abs(g1) ** 2)) * s2
            quant = sum(
                a * r * p_u * abs(g1[m]) ** 2 * sum(abs(G1_true[m, i]) ** 2 for i in range(2))
                for m in range(2)
            )
            expected = desired / (interf + awgn + estimation + quant)
            got = sinr_imperfect(Gh0, Gh1, G1_true, scn, n, p_u, p_p, aqnm)
            assert got == pytest.approx(expected, rel=1e-12)

    def test_worse_estimation_lowers_sinr(self):
        Gh0, Gh1 = scripted_channel()
        scn = fixed_user_scenario([1.0, 0.9], [0.1, -0.3], [2.0, 2.0])
        good = sinr_imperfect(Gh0, Gh1, Gh1, scn, 0, 1.0, 50.0, TWO_BIT)
        bad = sinr_imperfect(Gh0, Gh1, Gh1, scn, 0, 1.0, 0.5, TWO_BIT)
        assert bad < good


@pytest.fixture
def small_setup():
    scn = sample_user_scenario(4, K=4.0, rng_seed=10, normalized_beta=True)
    cfg = SystemConfig(M=32, M0=16, N=4, b=2, p_u=2.0, tau=4)
    return scn, cfg


class TestMcRate:
    def test_deterministic_for_fixed_seed(self, small_setup):
        scn, cfg = small_setup
        one = mc_rate(scn, cfg, TWO_BIT, "perfect", McSettings(1, seed=5))
        two = mc_rate(scn, cfg, TWO_BIT, "perfect", McSettings(1, seed=5))
        assert one.per_user_rate == two.per_user_rate

    def test_worker_count_never_changes_results(self, small_setup):
        scn, cfg = small_setup
        serial = mc_rate(scn, cfg, TWO_BIT, "perfect", McSettings(301, seed=6, workers=1))
        pooled = mc_rate(scn, cfg, TWO_BIT, "perfect", McSettings(301, seed=6, workers=4))
        assert serial.per_user_rate == pooled.per_user_rate
        assert serial.mc_stderr == pooled.mc_stderr

    def test_all_high_resolution_equals_plain_mrc(self, small_setup):
        scn, _ = small_setup
        cfg = SystemConfig(M=32, M0=32, N=4, b=2, p_u=2.0, tau=4)
        ours = mc_rate(scn, cfg, AqnmParams.ideal(), "perfect", McSettings(150, seed=7))
        reference = np.zeros((150, 4))
        for t in range(150):
            G = draw_channel(scn, cfg, realization_rng(7, t)).G
            gram = G.conj().T @ G
            power = np.abs(gram) ** 2
            for n in range(4):
                signal = cfg.p_u * power[n, n]
                interf = cfg.p_u * (power[n].sum() - power[n, n])
                reference[t, n] = math.log2(1 + signal / (interf + gram[n, n].real))
        assert tuple(reference.mean(axis=0)) == ours.per_user_rate

    def test_rates_finite_and_nonnegative(self, small_setup):
        scn, cfg = small_setup
        for mode in ("perfect", "imperfect"):
            report = mc_rate(scn, cfg, TWO_BIT, mode, McSettings(100, seed=8))
            assert all(math.isfinite(r) and r >= 0 for r in report.per_user_rate)

    def test_imperfect_not_above_perfect(self, small_setup):
        scn, cfg = small_setup
        perfect = mc_rate(scn, cfg, TWO_BIT, "perfect", McSettings(2000, seed=9))
        imperfect = mc_rate(scn, cfg, TWO_BIT, "imperfect", McSettings(2000, seed=9))
        slack = 3 * math.hypot(perfect.sum_rate_stderr, imperfect.sum_rate_stderr)
        assert imperfect.sum_rate <= perfect.sum_rate + slack

    def test_doubling_realizations_stays_within_error_bars(self, small_setup):
        scn, cfg = small_setup
        half = mc_rate(scn, cfg, TWO_BIT, "perfect", McSettings(5000, seed=12))
        full = mc_rate(scn, cfg, TWO_BIT, "perfect", McSettings(10000, seed=12))
        combined = math.hypot(half.sum_rate_stderr, full.sum_rate_stderr)
        assert abs(full.sum_rate - half.sum_rate) < 2 * combined

    def test_channel_hardening_shrinks_stderr(self):
        scn = sample_user_scenario(2, K=1e4, rng_seed=3, normalized_beta=True)
        cfg = SystemConfig(M=64, M0=32, N=2, b=1, p_u=1.0, tau=2)
        report = mc_rate(scn, cfg, ONE_BIT, "perfect", McSettings(500, seed=4))
        assert max(report.mc_stderr) < 1e-3

    def test_method_tags(self, small_setup):
        scn, cfg = small_setup
        assert mc_rate(scn, cfg, TWO_BIT, "perfect", McSettings(2, seed=1)).method == "mc-perfect"
        assert mc_rate(scn, cfg, TWO_BIT, "imperfect", McSettings(2, seed=1)).method == "mc-imperfect"

    def test_invalid_inputs(self, small_setup):
        scn, cfg = small_setup
        with pytest.raises(ValueError):
            McSettings(0, seed=1)
        with pytest.raises(ValueError):
            McSettings(10, seed=-1)
        with pytest.raises(ValueError):
            mc_rate(scn, cfg, TWO_BIT, "genie", McSettings(2, seed=1))

    def test_estimated_draws_consume_shared_stream(self, small_setup):
        # imperfect mode is deterministic too
        scn, cfg = small_setup
        one = mc_rate(scn, cfg, TWO_BIT, "imperfect", McSettings(50, seed=21, workers=1))
        two = mc_rate(scn, cfg, TWO_BIT, "imperfect", McSettings(50, seed=21, workers=3))
        assert one.per_user_rate == two.per_user_rate


def test_realization_streams_are_independent_of_each_other():
    a = realization_rng(5, 0).standard_normal(4)
    b = realization_rng(5, 1).standard_normal(4)
    assert not np.allclose(a, b)


def test_estimate_consistency_between_modes(small_setup=None):
    # same seed: the true channel the estimator reconstructs is a valid draw
    scn = fixed_user_scenario([1.0], [0.2], [3.0])
    cfg = SystemConfig(M=8, M0=4, N=1, b=1, p_u=1.0, tau=1)
    ch, est = draw_estimated_channel(scn, cfg, np.random.default_rng(0))
    assert np.allclose(ch.G0, est.Ghat0 - est.Xi0)
    assert np.allclose(ch.G1, est.Ghat1 - est.Xi1)
