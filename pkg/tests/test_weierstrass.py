"""Generalized Weierstrass product W and its companions."""

import cmath
import math

import numpy as np
import pytest

from glspectra import (DomainError, SpectralContext, UnboundedContourError,
                       phi_eval)
from glspectra.gammafn import log_gamma
from glspectra.presets import PRESETS

_EULER = 0.5772156649015328606

Z_GRID = [complex(a, b) for a in (0.5, 1.0, 2.0, 3.5, 5.0)
          for b in (0.0, 1.0, -1.0, 5.0, -5.0)]


@pytest.fixture(scope="module")
def contexts():
    return {name: SpectralContext(model) for name, model in PRESETS.items()}


class TestGammaRecovery:
    @pytest.mark.parametrize("z", Z_GRID)
    def test_w_equals_gamma(self, contexts, z):
        w = cmath.exp(contexts["gamma"].log_W(z))
        g = cmath.exp(log_gamma(z))
        assert abs(w - g) / abs(g) < 1e-8

    def test_classical_integer_values(self, contexts):
        # phi(u) = u + 1 gives W(n+1) = (n+1)!
        assert cmath.exp(
            contexts["classical_m1"].log_W(4.0)).real == pytest.approx(
                24.0, rel=1e-10)

    def test_perturbed_integer_value(self, contexts):
        # W(3) = phi(1) phi(2) = (8/3)(15/4) = 10
        assert cmath.exp(
            contexts["perturbed_m2"].log_W(3.0)).real == pytest.approx(
                10.0, rel=1e-10)


class TestFunctionalEquation:
    @pytest.mark.parametrize("name", ["classical_m1", "perturbed_m2",
                                      "sawtooth", "gauss_laguerre"])
    def test_residual(self, contexts, name):
        ctx = contexts[name]
        worst = 0.0
        for z in Z_GRID:
            lhs = cmath.exp(ctx.log_W(z + 1))
            rhs = phi_eval(ctx.model, z) * cmath.exp(ctx.log_W(z))
            worst = max(worst, abs(lhs - rhs) / abs(lhs))
        assert worst < 1e-9

    def test_shift_below_half(self, contexts):
        # Re z < 1/2 goes through the recursion, not the raw product
        ctx = contexts["classical_m1"]
        lhs = cmath.exp(ctx.log_W(0.25 + 1.0))
        rhs = phi_eval(ctx.model, 0.25) * cmath.exp(ctx.log_W(0.25))
        assert abs(lhs - rhs) / abs(lhs) < 1e-9

    def test_domain_error_left_of_d_phi(self, contexts):
        with pytest.raises(DomainError):
            contexts["classical_m1"].log_W(-1.5)


class TestGammaPhi:
    def test_euler_constant(self, contexts):
        # phi(u) = u reduces gamma_phi to the Euler-Mascheroni constant
        assert contexts["gamma"].gamma_phi() == pytest.approx(
            _EULER, abs=1e-11)


class TestVectorizedNodes:
    def test_matches_scalar_route(self, contexts):
        ctx = contexts["perturbed_m2"]
        zs = np.array([1.0 + 1j, 2.5 + 4j, 0.5 + 10j])
        vec = ctx.log_W_nodes(zs)
        ref = np.array([ctx.log_W(z) for z in zs])
        assert np.max(np.abs(vec - ref)) < 1e-9


class TestContourTruncation:
    @pytest.mark.parametrize("name", ["gamma", "classical_m1",
                                      "perturbed_m2"])
    def test_height_is_finite_and_sufficient(self, contexts, name):
        ctx = contexts[name]
        B = ctx.contour_truncation(1.0, 1e-9)
        assert 5.0 < B < 200.0
        # |W| must actually have decayed below ~tol at the top
        w_top = abs(cmath.exp(ctx.log_W(complex(1.0, B))))
        assert w_top < 1e-6

    def test_sawtooth_has_no_decay(self, contexts):
        # bounded support: the Mellin transform does not decay along
        # vertical lines, the truncation search must refuse
        with pytest.raises(UnboundedContourError):
            contexts["sawtooth"].contour_truncation(1.0, 1e-9)
