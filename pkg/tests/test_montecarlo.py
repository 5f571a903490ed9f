"""Monte-Carlo oracle: exact-in-law simulation of the driving process."""

import math

import numpy as np
import pytest

from glspectra import (ConfigError, Empty, LevyModel, MCEstimate,
                       PathConfig, UnsupportedJumpsError, eigen_check,
                       eigen_poly, phi_eval, psi_eval, sample_gl,
                       semigroup_apply, simulate_xi)
from glspectra.presets import PRESETS

CLASSICAL = PRESETS["classical_m1"]
PERT = PRESETS["perturbed_m2"]
BM = LevyModel(sigma2=1.0, m=0.0, jumps=Empty())

FAST = PathConfig(dt=1e-3, horizon=1.0, n_paths=20_000, seed=7)


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        {"dt": -1e-3}, {"dt": 0.0}, {"horizon": 0.0}, {"n_paths": 0},
    ])
    def test_invalid_config_rejected(self, kwargs):
        base = dict(dt=1e-3, horizon=1.0, n_paths=100, seed=0)
        base.update(kwargs)
        with pytest.raises(ConfigError):
            PathConfig(**base)

    def test_gl_jumps_refused(self):
        with pytest.raises(UnsupportedJumpsError):
            simulate_xi(PRESETS["gauss_laguerre"], FAST)

    def test_x0_must_be_positive(self):
        with pytest.raises(ConfigError):
            sample_gl(CLASSICAL, FAST, 0.0, 1.0)


class TestLevyIncrements:
    def test_brownian_variance(self):
        xi = simulate_xi(BM, FAST)
        est = MCEstimate.from_samples(xi ** 2)
        # Var xi_1 = psi''(0) = 2 sigma^2
        assert abs(est.mean - 2.0) <= 3 * est.std_error

    def test_drift_mean(self):
        xi = simulate_xi(CLASSICAL, FAST)
        est = MCEstimate.from_samples(xi)
        # E xi_1 = psi'(0+) = m
        assert abs(est.mean - 1.0) <= 3 * est.std_error

    def test_exponential_moment_matches_psi(self):
        xi = simulate_xi(PERT, FAST)
        est = MCEstimate.from_samples(np.exp(0.5 * xi))
        target = math.exp(psi_eval(PERT, 0.5).real)
        assert abs(est.mean - target) <= 3 * est.std_error


class TestDeterminism:
    def test_thread_count_invariance(self):
        cfg = PathConfig(dt=1e-3, horizon=10.0, n_paths=8192, seed=3)
        a = sample_gl(CLASSICAL, cfg, 1.0, 0.5, n_threads=1)
        b = sample_gl(CLASSICAL, cfg, 1.0, 0.5, n_threads=4)
        assert np.array_equal(a, b)

    def test_seed_reproducibility(self):
        a = simulate_xi(PERT, FAST)
        b = simulate_xi(PERT, FAST)
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        other = PathConfig(dt=1e-3, horizon=1.0, n_paths=20_000, seed=8)
        assert not np.array_equal(simulate_xi(PERT, FAST),
                                  simulate_xi(PERT, other))


class TestLampertiProcess:
    def test_short_time_stays_near_start(self):
        cfg = PathConfig(dt=1e-3, horizon=10.0, n_paths=10_000, seed=1)
        samples = sample_gl(CLASSICAL, cfg, 2.0, 0.01)
        est = MCEstimate.from_samples(samples)
        assert abs(est.mean - 2.0) <= 3 * est.std_error + 0.01

    def test_mean_matches_semigroup(self):
        cfg = PathConfig(dt=1e-3, horizon=20.0, n_paths=20_000, seed=2)
        t, x0 = 1.0, 1.0
        samples = sample_gl(CLASSICAL, cfg, x0, t)
        est = MCEstimate.from_samples(samples)
        target = float(semigroup_apply(CLASSICAL, t, [0.0, 1.0], x0))
        assert abs(est.mean - target) <= 3 * est.std_error + 1e-2

    def test_eigen_check_near_zero_z(self):
        cfg = PathConfig(dt=1e-3, horizon=20.0, n_paths=20_000, seed=4)
        res = eigen_check(CLASSICAL, cfg, 1.0, 0.5, 1)
        assert abs(res["z"]) <= 4.0

    def test_eigen_check_order_guard(self):
        with pytest.raises(ConfigError):
            eigen_check(CLASSICAL, FAST, 1.0, 0.5, 6)
