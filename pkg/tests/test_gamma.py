"""Complex gamma-function building blocks."""

import cmath
import math

import numpy as np
import pytest
from scipy.special import gammaln as scipy_gammaln

from glspectra.gammafn import digamma, gamma, log_gamma, log_gamma_vec, \
    trigamma

_EULER = 0.5772156649015328606


@pytest.mark.parametrize("x, expected", [
    (1.0, 1.0),
    (2.0, 1.0),
    (5.0, 24.0),
    (0.5, math.sqrt(math.pi)),
    (7.5, 1871.254305797788),
])
def test_gamma_real_values(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("x", [0.3, 1.7, 4.2, 11.0, 33.3])
def test_log_gamma_matches_scipy_on_reals(x):
    assert log_gamma(x).real == pytest.approx(scipy_gammaln(x), rel=1e-13)
    assert log_gamma(x).imag == 0.0


def test_log_gamma_complex_reflection():
    # Gamma(z) Gamma(1-z) = pi / sin(pi z), checked at a left-plane point
    z = complex(-0.7, 0.4)
    lhs = cmath.exp(log_gamma(z) + log_gamma(1.0 - z))
    rhs = math.pi / cmath.sin(math.pi * z)
    assert abs(lhs - rhs) / abs(rhs) < 1e-12


def test_log_gamma_functional_equation_complex():
    z = complex(2.3, 5.0)
    res = cmath.exp(log_gamma(z + 1) - log_gamma(z)) - z
    assert abs(res) < 1e-12 * abs(z)


def test_log_gamma_vec_agrees_with_scalar():
    zs = np.array([0.6 + 0j, 2.0 + 1j, 5.5 - 3j, 10.0 + 10j])
    vec = log_gamma_vec(zs)
    ref = np.array([log_gamma(z) for z in zs])
    assert np.max(np.abs(vec - ref)) < 1e-13


def test_digamma_at_one_is_minus_euler():
    assert digamma(1.0) == pytest.approx(-_EULER, abs=1e-13)


def test_trigamma_at_one_is_pi_sq_over_six():
    assert trigamma(1.0) == pytest.approx(math.pi ** 2 / 6.0, rel=1e-12)
