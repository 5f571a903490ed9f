"""Invariant density: closed forms, Mellin inversion, co-eigen numerators."""

import math

import numpy as np
import pytest

from glspectra import (DensityEvaluator, SmoothnessError, density_evaluator,
                       invariant_moment, nu, w_n)
from glspectra.presets import PRESETS
from glspectra.quadrature import certify_endpoint, integrate_support

CLASSICAL = PRESETS["classical_m1"]
PERT = PRESETS["perturbed_m2"]
SAW = PRESETS["sawtooth"]
GL = PRESETS["gauss_laguerre"]


class TestClosedForms:
    def test_classical_is_gamma_density(self):
        xs = np.linspace(0.1, 10, 25)
        expected = xs * np.exp(-xs)   # Gamma(2, 1)
        assert np.max(np.abs(nu(CLASSICAL, xs) - expected)) < 1e-14

    def test_perturbed_closed_form(self):
        xs = np.linspace(0.1, 10, 25)
        expected = (1 + xs) * xs * np.exp(-xs) / 3.0
        assert np.max(np.abs(nu(PERT, xs) - expected)) < 1e-14

    def test_sawtooth_support_is_unit_interval(self):
        assert nu(SAW, np.array([1.5]))[0] == 0.0
        assert nu(SAW, np.array([0.5]))[0] > 0.0

    def test_gl_stretched_exponential(self):
        xs = np.linspace(0.1, 5, 10)
        expected = 2.0 * xs ** 2 * np.exp(-xs ** 2) / math.gamma(1.5)
        assert np.max(np.abs(nu(GL, xs) - expected)) < 1e-13

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_unit_mass(self, name):
        ev = density_evaluator(PRESETS[name])
        rho = ev.scalars.rho
        if ev.has_edge_form:
            total = (integrate_support(ev.nu, 0.5 * rho, tol=1e-12)
                     + certify_endpoint(ev.nu_upper, rho))
        else:
            total = integrate_support(ev.nu, rho, tol=1e-12)
        assert total == pytest.approx(1.0, abs=1e-9)


class TestMoments:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    @pytest.mark.parametrize("n", [1, 2, 5, 8])
    def test_quadrature_matches_weierstrass_product(self, name, n):
        model = PRESETS[name]
        ev = density_evaluator(model)
        rho = ev.scalars.rho
        target = invariant_moment(model, n)

        def f(x):
            return x ** n * ev.nu(x)

        if ev.has_edge_form:
            def edge(u):
                return (rho - u) ** n * ev.nu_upper(u)
            val = (integrate_support(f, 0.5 * rho, tol=1e-12)
                   + certify_endpoint(edge, rho))
        else:
            val = integrate_support(f, rho, tol=1e-12)
        assert val == pytest.approx(target, rel=1e-6)


class TestMellinRoute:
    def test_density_matches_closed_form(self):
        mev = DensityEvaluator(CLASSICAL, force_mellin=True)
        xs = np.linspace(0.1, 8.0, 21)
        err = np.max(np.abs(mev.nu(xs) - nu(CLASSICAL, xs)))
        assert err < 1e-6

    def test_derivative_matches_closed_form(self):
        mev = DensityEvaluator(CLASSICAL, force_mellin=True)
        cev = density_evaluator(CLASSICAL)
        xs = np.linspace(0.2, 6.0, 13)
        err = np.max(np.abs(mev.nu_deriv(xs, 1) - cev.nu_deriv(xs, 1)))
        assert err < 1e-6

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_w_n_matches_closed_form(self, n):
        mev = DensityEvaluator(CLASSICAL, force_mellin=True)
        cev = density_evaluator(CLASSICAL)
        xs = np.linspace(0.1, 8.0, 21)
        err = np.max(np.abs(mev.w_n(n, xs, interior=True)
                            - cev.w_n(n, xs, interior=True)))
        assert err < 1e-6


class TestCoeigenNumerators:
    @pytest.mark.parametrize("name, n",
                             [("classical_m1", 1), ("classical_m1", 4),
                              ("perturbed_m2", 2), ("gauss_laguerre", 1)])
    def test_w_n_integrates_to_zero(self, name, n):
        model = PRESETS[name]
        ev = density_evaluator(model)

        def f(x):
            return ev.w_n(n, x, interior=True)

        val = integrate_support(f, ev.scalars.rho, tol=1e-12)
        assert abs(val) < 1e-10

    def test_classical_w1_closed_form(self):
        # w_1 = (x nu)' = (2x - x^2) e^{-x}
        xs = np.linspace(0.1, 6, 11)
        expected = (2 * xs - xs ** 2) * np.exp(-xs)
        assert np.max(np.abs(w_n(CLASSICAL, 1, xs) - expected)) < 1e-13

    def test_sawtooth_smoothness_guard(self):
        # smoothness index 0: the global derivative does not exist
        ev = density_evaluator(SAW)
        with pytest.raises(SmoothnessError):
            ev.w_n(1, np.array([0.5]))
        # but the interior pointwise value is defined
        val = ev.w_n(1, np.array([0.5]), interior=True)
        assert np.isfinite(val[0])
