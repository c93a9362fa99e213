import numpy as np
import pytest

from mixadc.channel import (
    draw_channel,
    draw_estimated_channel,
    los_steering,
    pilot_estimation_stats,
)
from mixadc.analytic import phi
from mixadc.scenario import SystemConfig, fixed_user_scenario


@pytest.fixture
def two_user_scenario():
    return fixed_user_scenario([1.0, 0.7], [0.4, -0.9], [1.5, 4.0])


@pytest.fixture
def small_config():
    return SystemConfig(M=8, M0=4, N=2, b=2, p_u=1.0, tau=2)


class TestLosSteering:
    def test_broadside_is_all_ones(self):
        assert los_steering(0.0, 6) == pytest.approx(np.ones(6))

    def test_thirty_degrees_two_elements(self):
        # kd*sin(pi/6) = pi/2 at half-wavelength spacing
        v = los_steering(np.pi / 6, 2, 0.5)
        assert v == pytest.approx([1.0, np.exp(-1j * np.pi / 2)])

    def test_unit_modulus(self):
        rng = np.random.default_rng(2)
        for theta in rng.uniform(-np.pi / 2, np.pi / 2, 10):
            assert np.abs(los_steering(theta, 16)) == pytest.approx(np.ones(16))

    def test_prefix_equals_subarray(self):
        full = los_steering(0.73, 12)
        assert full[:5] == pytest.approx(los_steering(0.73, 5), rel=0)


class TestDrawChannel:
    def test_shapes_and_split(self, two_user_scenario, small_config):
        ch = draw_channel(two_user_scenario, small_config, np.random.default_rng(0))
        assert ch.G0.shape == (4, 2)
        assert ch.G1.shape == (4, 2)
        assert ch.G.shape == (8, 2)

    def test_los_only_limit(self, two_user_scenario, small_config):
        ch = draw_channel(two_user_scenario, small_config, np.random.default_rng(0), los_only=True)
        for n, theta in enumerate(two_user_scenario.theta):
            expected = np.sqrt(two_user_scenario.beta[n]) * los_steering(theta, 8)
            assert ch.G[:, n] == pytest.approx(expected, rel=0)

    def test_rayleigh_mean_and_variance(self):
        scn = fixed_user_scenario([0.8], [0.3], [0.0])
        cfg = SystemConfig(M=4, M0=2, N=1, b=1, p_u=1.0, tau=1)
        rng = np.random.default_rng(5)
        draws = np.stack([draw_channel(scn, cfg, rng).G[:, 0] for _ in range(10**5)])
        assert np.abs(draws.mean()) < 0.01
        assert np.mean(np.abs(draws) ** 2) == pytest.approx(0.8, rel=0.02)

    def test_column_energy(self, two_user_scenario, small_config):
        rng = np.random.default_rng(6)
        energy = np.zeros(2)
        draws = 10**4
        for _ in range(draws):
            G = draw_channel(two_user_scenario, small_config, rng).G
            energy += np.sum(np.abs(G) ** 2, axis=0)
        energy /= draws
        expected = two_user_scenario.beta * small_config.M
        assert energy == pytest.approx(expected, rel=0.02)

    def test_fourth_and_cross_moments(self, two_user_scenario, small_config):
        rng = np.random.default_rng(7)
        draws = 10**5
        norm4 = np.zeros(2)
        cross = 0.0
        for _ in range(draws):
            G = draw_channel(two_user_scenario, small_config, rng).G
            n2 = np.sum(np.abs(G) ** 2, axis=0)
            norm4 += n2**2
            cross += np.abs(G[:, 0].conj() @ G[:, 1]) ** 2
        norm4 /= draws
        cross /= draws
        beta, K, theta = two_user_scenario.beta, two_user_scenario.K, two_user_scenario.theta
        M = small_config.M
        expected4 = beta**2 * (M**2 + (2 * M * K + M) / (K + 1) ** 2)
        align = phi(theta[0], theta[1], M, small_config.d_over_lambda)
        expected_cross = (
            beta[0] * beta[1]
            * (K[0] * K[1] * align**2 + M * (K[0] + K[1]) + M)
            / ((K[0] + 1) * (K[1] + 1))
        )
        assert norm4 == pytest.approx(expected4, rel=0.03)
        assert cross == pytest.approx(expected_cross, rel=0.03)


class TestEstimatedChannel:
    def test_error_variance_value(self):
        scn = fixed_user_scenario([1.0], [0.0], [1.0])
        _, sigma2 = pilot_estimation_stats(scn, p_p=10.0)
        assert sigma2[0] == pytest.approx(1.0 / 22.0, rel=1e-12)

    def test_variance_decomposition(self, two_user_scenario):
        # estimated scattered variance plus error variance recovers the
        # full scattered variance beta/(K+1)
        eta, sigma2 = pilot_estimation_stats(two_user_scenario, p_p=3.7)
        beta, K = two_user_scenario.beta, two_user_scenario.K
        assert beta * eta / (K + 1) + sigma2 == pytest.approx(beta / (K + 1), rel=1e-12)

    def test_identity_g_equals_ghat_minus_xi(self, two_user_scenario, small_config):
        ch, est = draw_estimated_channel(two_user_scenario, small_config, np.random.default_rng(1))
        assert ch.G == pytest.approx(est.Ghat - est.Xi, rel=0)

    def test_perfect_pilot_mode(self, two_user_scenario, small_config):
        ch, est = draw_estimated_channel(
            two_user_scenario, small_config, np.random.default_rng(2), perfect_pilots=True
        )
        assert np.all(est.Xi == 0)
        assert est.Ghat == pytest.approx(ch.G, rel=0)

    def test_reconstructed_moments_match_direct_draws(self, two_user_scenario, small_config):
        draws = 2 * 10**4
        rng_a = np.random.default_rng(3)
        rng_b = np.random.default_rng(4)
        direct2 = np.zeros(2)
        direct4 = np.zeros(2)
        recon2 = np.zeros(2)
        recon4 = np.zeros(2)
        for _ in range(draws):
            G = draw_channel(two_user_scenario, small_config, rng_a).G
            n2 = np.sum(np.abs(G) ** 2, axis=0)
            direct2 += n2
            direct4 += n2**2
            ch, _ = draw_estimated_channel(two_user_scenario, small_config, rng_b)
            m2 = np.sum(np.abs(ch.G0) ** 2, axis=0) + np.sum(np.abs(ch.G1) ** 2, axis=0)
            recon2 += m2
            recon4 += m2**2
        assert recon2 / draws == pytest.approx(direct2 / draws, rel=0.03)
        assert recon4 / draws == pytest.approx(direct4 / draws, rel=0.03)

    def test_estimate_scattered_variance(self, two_user_scenario, small_config):
        rng = np.random.default_rng(9)
        draws = 10**4
        power = np.zeros(2)
        for _ in range(draws):
            _, est = draw_estimated_channel(two_user_scenario, small_config, rng)
            hbar = np.stack(
                [los_steering(t, small_config.M) for t in two_user_scenario.theta], axis=1
            )
            beta, K = two_user_scenario.beta, two_user_scenario.K
            los = np.sqrt(beta * K / (K + 1))[None, :] * hbar
            power += np.mean(np.abs(est.Ghat - los) ** 2, axis=0)
        power /= draws
        eta, _ = pilot_estimation_stats(two_user_scenario, small_config.p_p)
        beta, K = two_user_scenario.beta, two_user_scenario.K
        assert power == pytest.approx(beta * eta / (K + 1), rel=0.05)

    def test_pilot_power_must_be_positive(self, two_user_scenario):
        with pytest.raises(ValueError):
            pilot_estimation_stats(two_user_scenario, 0.0)
