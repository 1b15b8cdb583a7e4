import math

import numpy as np
import pytest

from thermalpdc import (
    DisentangledCoefficients,
    ModeParams,
    correlation_index,
    cross_covariance,
    evolve_thermal_pair,
    moments,
    noise_reduction_factor,
    noise_reduction_threshold,
    param_grid,
    separability_margin,
    sweep,
    write_sweep_csv,
)


def gamma_correction_general(mu_t, mu_r, n_pdc):
    """Large-gain expansion of 1 - gamma (reference form, not public API)."""
    s = 1.0 + mu_t + mu_r
    return 0.5 * (mu_t + mu_r + 2.0 * mu_t * mu_r) / (s ** 2 * n_pdc ** 2)


def gamma_correction_one_arm(mu, n_pdc):
    """1 - gamma for one bright seed (mu >> 1) at any gain."""
    return 1.0 / ((1.0 + n_pdc) * n_pdc * 2.0 * mu)


def gamma_correction_equal_seeds(n_pdc):
    """1 - gamma for equal bright seeds (mu >> 1)."""
    return 1.0 / (1.0 + 2.0 * n_pdc) ** 2


class TestCorrelationIndex:
    def test_twin_beams_perfect(self):
        for n_pdc in (1e-3, 0.5, 3.0):
            assert correlation_index(ModeParams.from_npdc(0, 0, n_pdc)) == pytest.approx(
                1.0, abs=1e-12
            )

    def test_equal_seeds_example(self):
        # means 4, variances 20, cross covariance 18
        p = ModeParams.from_npdc(1, 1, 1)
        assert cross_covariance(p) == pytest.approx(18.0, rel=1e-12)
        assert correlation_index(p) == pytest.approx(0.9, rel=1e-12)

    def test_vacuum_is_undefined(self):
        assert correlation_index(ModeParams.from_npdc(0, 0, 0)) is None
        assert correlation_index(ModeParams.from_npdc(0, 2, 0)) is None

    def test_bounds_and_symmetry(self):
        rng = np.random.default_rng(23)
        for _ in range(500):
            mu_t, mu_r = rng.uniform(0, 10, 2)
            n_pdc = rng.uniform(1e-6, 10)
            p = ModeParams.from_npdc(mu_t, mu_r, n_pdc)
            g = correlation_index(p)
            assert 0.0 <= g <= 1.0
            assert correlation_index(ModeParams.from_npdc(mu_r, mu_t, n_pdc)) == pytest.approx(g, rel=1e-12)

    def test_unity_only_for_unseeded_gain(self):
        assert correlation_index(ModeParams.from_npdc(0, 0, 0.2)) == pytest.approx(1.0, abs=1e-12)
        assert correlation_index(ModeParams.from_npdc(0.1, 0, 0.2)) < 1.0

    def test_monotone_in_gain(self):
        gains = np.linspace(0.01, 10, 200)
        vals = [correlation_index(ModeParams.from_npdc(0.5, 1.5, n)) for n in gains]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_large_gain_expansion(self):
        p = ModeParams.from_npdc(1.0, 2.0, 100.0)
        correction = gamma_correction_general(1.0, 2.0, 100.0)
        assert 1.0 - correlation_index(p) == pytest.approx(correction, rel=1e-2)

    def test_bright_one_arm_asymptote(self):
        mu = 1e6
        p = ModeParams.from_npdc(mu, 0.0, 100.0)
        assert 1.0 - correlation_index(p) == pytest.approx(
            gamma_correction_one_arm(mu, 100.0), rel=1e-2
        )

    def test_bright_equal_seed_asymptote(self):
        mu = 1e6
        p = ModeParams.from_npdc(mu, mu, 100.0)
        assert 1.0 - correlation_index(p) == pytest.approx(
            gamma_correction_equal_seeds(100.0), rel=1e-2
        )


class TestNoiseReductionFactor:
    def test_twin_beams_fully_suppressed(self):
        assert noise_reduction_factor(ModeParams.from_npdc(0, 0, 1)) == 0.0

    def test_uncorrelated_thermals_exceed_shot_noise(self):
        assert noise_reduction_factor(ModeParams.from_npdc(1, 1, 0)) == pytest.approx(2.0)

    def test_threshold_point_is_exact(self):
        assert noise_reduction_factor(
            ModeParams.from_npdc(1, 1, 1.0 / 3.0)
        ) == pytest.approx(1.0, abs=1e-12)

    def test_vacuum_is_undefined(self):
        assert noise_reduction_factor(ModeParams.from_npdc(0, 0, 0)) is None

    def test_symmetry_and_monotonicity(self):
        rng = np.random.default_rng(29)
        for _ in range(200):
            mu_t, mu_r, n = rng.uniform(0, 5, 3)
            a = noise_reduction_factor(ModeParams.from_npdc(mu_t, mu_r, n))
            b = noise_reduction_factor(ModeParams.from_npdc(mu_r, mu_t, n))
            assert a == pytest.approx(b, rel=1e-12)
        gains = np.linspace(0.01, 10, 200)
        vals = [noise_reduction_factor(ModeParams.from_npdc(0.5, 1.5, n)) for n in gains]
        assert all(b < a for a, b in zip(vals, vals[1:]))


class TestNoiseReductionThreshold:
    def test_values(self):
        assert noise_reduction_threshold(0, 0) == 0.0
        assert noise_reduction_threshold(1, 1) == pytest.approx(1.0 / 3.0)
        assert noise_reduction_threshold(2, 0) == pytest.approx(2.0 / 3.0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            noise_reduction_threshold(-1, 0)

    def test_crossing_matches_nrf(self):
        for mu_t, mu_r in [(0.5, 2.0), (3.0, 3.0), (0.0, 4.0)]:
            star = noise_reduction_threshold(mu_t, mu_r)
            above = noise_reduction_factor(ModeParams.from_npdc(mu_t, mu_r, star * 1.001))
            below = noise_reduction_factor(ModeParams.from_npdc(mu_t, mu_r, star * 0.999))
            assert above < 1.0 < below

    def test_one_arm_threshold_sits_above_separability(self):
        # one-arm seeding is entangled for any gain, yet needs finite gain
        # for sub-shot-noise correlations
        assert noise_reduction_threshold(2, 0) > 0.0
        assert separability_margin(ModeParams.from_npdc(2, 0, 1e-9)) < 0.0

    def test_subshot_noise_implies_entangled(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            p = ModeParams.from_npdc(*rng.uniform(0, 10, 2), rng.uniform(1e-6, 10))
            nrf = noise_reduction_factor(p)
            if nrf is not None and nrf < 1.0:
                assert separability_margin(p) < 0.0


class TestOracleCrossCheck:
    def test_gamma_and_nrf_from_fock_moments(self):
        for mu_t, mu_r, n_pdc in [(0.0, 0.0, 0.3), (0.5, 0.0, 0.2), (0.6, 0.4, 0.25)]:
            p = ModeParams.from_npdc(mu_t, mu_r, n_pdc)
            c = DisentangledCoefficients.from_mode_params(p)
            state = evolve_thermal_pair(mu_t, mu_r, c, 45)
            m = moments(state)
            tol = 10.0 * state.cutoff ** 2 * state.trace_deficit + 1e-7
            got_gamma = m.cross / math.sqrt(m.var_t * m.var_r)
            assert got_gamma == pytest.approx(correlation_index(p), rel=tol)
            got_nrf = (m.var_t + m.var_r - 2.0 * m.cross) / (m.mean_t + m.mean_r)
            assert got_nrf == pytest.approx(noise_reduction_factor(p), rel=tol, abs=tol)


class TestSweep:
    def test_fig2_style_shapes(self):
        gains = np.geomspace(0.01, 10, 60)
        rows = sweep(param_grid([0.0], [2.0], gains))
        gammas = [r.gamma for r in rows]
        nrfs = [r.nrf for r in rows]
        assert all(b > a for a, b in zip(gammas, gammas[1:]))
        assert all(b < a for a, b in zip(nrfs, nrfs[1:]))
        assert gammas[-1] > 0.99
        crossing = noise_reduction_threshold(0.0, 2.0)
        assert crossing == pytest.approx(2.0 / 3.0)
        below = [r.n_pdc for r in rows if r.nrf > 1.0]
        above = [r.n_pdc for r in rows if r.nrf < 1.0]
        assert max(below) < crossing < min(above)

    def test_equal_seed_crossing_matches_margin_zero(self):
        mu = 1.7
        star = noise_reduction_threshold(mu, mu)
        margin_at_star = separability_margin(ModeParams.from_npdc(mu, mu, star))
        assert abs(margin_at_star) < 1e-9

    def test_loss_does_not_change_verdict(self):
        rows = sweep(param_grid([1.0], [1.0], [0.5]), taus=[1.0, 0.5])
        assert rows[0].separable == rows[1].separable is False
        assert rows[1].margin == pytest.approx(0.25 * rows[0].margin, rel=1e-12)

    def test_row_order_deterministic(self):
        grid = param_grid([0.0, 1.0], [0.5], [0.1, 0.2])
        rows = sweep(grid, taus=[1.0, 0.7])
        keys = [(r.mu_t, r.n_pdc, r.tau) for r in rows]
        expected = [
            (0.0, 0.1, 1.0), (0.0, 0.1, 0.7), (0.0, 0.2, 1.0), (0.0, 0.2, 0.7),
            (1.0, 0.1, 1.0), (1.0, 0.1, 0.7), (1.0, 0.2, 1.0), (1.0, 0.2, 0.7),
        ]
        for got, want in zip(keys, expected):
            assert got == pytest.approx(want, rel=1e-12)

    def test_undefined_points_propagate_as_empty_fields(self, tmp_path):
        rows = sweep(param_grid([0.0], [0.0], [0.0, 0.5]))
        assert rows[0].gamma is None and rows[0].nrf is None
        path = tmp_path / "sweep.csv"
        write_sweep_csv(rows, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "mu_t,mu_r,n_pdc,tau,gamma,nrf,margin,separable"
        first = lines[1].split(",")
        assert first[4] == "" and first[5] == ""
        assert lines[2].split(",")[4] != ""
        assert "," in lines[1] and "." in lines[2]

    def test_csv_is_byte_deterministic(self, tmp_path):
        rows = sweep(param_grid([0.3, 1.1], [0.2], np.geomspace(0.01, 2, 7)))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_sweep_csv(rows, a)
        write_sweep_csv(rows, b)
        assert a.read_bytes() == b.read_bytes()
