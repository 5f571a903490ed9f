"""Generalized Weierstrass products and companion Mellin transforms.

W(z) is the unique positive-definite solution of W(z+1) = phi(z) W(z),
W(1) = 1; it reduces to the Gamma function when phi(u) = u and is the
Mellin transform of the invariant law. Evaluation uses the telescoped
log-product

    ln W(z) = -ln phi(z) + lim_N [ sum_{k=1}^N (ln phi(k) - ln phi(k+z))
                                   + z ln phi(N) ]

whose partial sums carry an Euler-Maclaurin tail closure (error O(1/N^4))
plus two levels of Richardson extrapolation over (N, 2N, 4N). The
Euler-type constant gamma_phi is computed separately with its own
Euler-Maclaurin tail correction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConvergenceError, DomainError, QuadratureError,
                     UnboundedContourError)
from .gammafn import log_gamma, log_gamma_vec
from .levy import (ExpMixture, GaussLaguerreKernel, LevyModel, d_phi,
                   phi_derivative, phi_eval)
from .quadrature import adaptive_quad

_BASE_N = 4000  # Richardson base; the cache holds ln phi(k) for k <= 4N


def _lnphi_array(model: LevyModel, z: complex, k: np.ndarray) -> np.ndarray:
    """ln phi(k + z) for an integer array k >= 1, principal branch.

    Safe because Re phi(a+ib) >= phi(a) > 0 for a > 0, so phi(k+z) stays in
    the right half-plane for Re(k+z) > 0.
    """
    j = model.jumps
    w = k + z
    if isinstance(j, GaussLaguerreKernel):
        a, mf = j.alpha, j.mfrak
        return (log_gamma_vec(a * w + a * mf + 1.0)
                - log_gamma_vec(a * w + a * mf + 1.0 - a))
    val = model.m + model.sigma2 * w
    if isinstance(j, ExpMixture):
        for c, b in j.components:
            val = val + (c / b ** 2) * w / (w + b)
    return np.log(val)


def _lnphi_derivs(model: LevyModel, t: float) -> tuple[float, float, float]:
    """First three derivatives of h = ln phi at a real point t > 0."""
    j = model.jumps
    if isinstance(j, GaussLaguerreKernel):
        from scipy.special import polygamma

        a, mf = j.alpha, j.mfrak
        x1 = a * t + a * mf + 1.0
        x2 = x1 - a
        h1 = a * float(polygamma(0, x1) - polygamma(0, x2))
        h2 = a ** 2 * float(polygamma(1, x1) - polygamma(1, x2))
        h3 = a ** 3 * float(polygamma(2, x1) - polygamma(2, x2))
        return h1, h2, h3
    phi = model.m + model.sigma2 * t
    d1, d2, d3 = model.sigma2, 0.0, 0.0
    if isinstance(j, ExpMixture):
        for c, b in j.components:
            q = c / b ** 2
            phi += q * t / (t + b)
            d1 += q * b / (t + b) ** 2
            d2 += -2.0 * q * b / (t + b) ** 3
            d3 += 6.0 * q * b / (t + b) ** 4
    r1 = d1 / phi
    h2 = d2 / phi - r1 * r1
    h3 = d3 / phi - 3.0 * (d2 / phi) * r1 + 2.0 * r1 ** 3
    return r1, h2, h3


def _tail_correction(model: LevyModel, n: int, z):
    """Euler-Maclaurin closure of the telescoped product at cutoff n.

    Adding h'(n) z(z+1)/2 + h''(n) z(z+1)(2z+1)/12 + h'''(n) z^2(z+1)^2/24
    (h = ln phi) to the partial sum replaces its O(1/n) truncation error
    by O(z^5/n^4), which matters for families whose ln phi(k) tail carries
    large low-order coefficients.
    """
    h1, h2, h3 = _lnphi_derivs(model, float(n))
    return (h1 * z * (z + 1.0) / 2.0
            + h2 * z * (z + 1.0) * (2.0 * z + 1.0) / 12.0
            + h3 * (z * (z + 1.0)) ** 2 / 24.0)


@dataclass
class SpectralContext:
    """Cached W_phi evaluator for one model.

    Carries the ln phi(k) table (reproducible from the model alone), the
    convergence tolerance, and the default Mellin contour abscissa. Warm-up
    happens on first evaluation; afterwards every operation is pure.
    """

    model: LevyModel
    product_terms_cap: int = 10 ** 6
    tol: float = 1e-10
    contour_a: float = 1.0
    _lnphi_cache: np.ndarray | None = field(default=None, repr=False)
    _d_phi: float = field(default=0.0, repr=False)

    def __post_init__(self):
        if self.product_terms_cap <= 0:
            raise ValueError("product_terms_cap must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        self._d_phi = d_phi(self.model)
        if self.contour_a <= self._d_phi:
            raise ValueError(
                f"contour_a = {self.contour_a} must exceed d_phi = "
                f"{self._d_phi}")

    # -- cache -------------------------------------------------------------

    def _lnphi_k(self, upto: int) -> np.ndarray:
        if self._lnphi_cache is None or len(self._lnphi_cache) < upto:
            k = np.arange(1, upto + 1, dtype=float)
            self._lnphi_cache = _lnphi_array(self.model, 0.0 + 0.0j,
                                             k).real.astype(float)
        return self._lnphi_cache[:upto]

    # -- core product ------------------------------------------------------

    def _partial_sums(self, z: complex, base_n: int):
        """S(z, N) at N = base_n, 2*base_n, 4*base_n."""
        top = 4 * base_n
        lnphi_k = self._lnphi_k(top)
        k = np.arange(1, top + 1, dtype=float)
        terms = lnphi_k - _lnphi_array(self.model, z, k)
        prefix = np.cumsum(terms)
        out = []
        for n_ in (base_n, 2 * base_n, 4 * base_n):
            out.append(prefix[n_ - 1] + z * lnphi_k[n_ - 1]
                       + _tail_correction(self.model, n_, z))
        return out

    def log_W(self, z: complex) -> complex:
        """Principal-branch-consistent ln W(z) on Re z > d_phi."""
        z = complex(z)
        if z.real <= self._d_phi:
            raise DomainError(
                f"Re z = {z.real} outside half-plane (d_phi = {self._d_phi})")
        # shift into Re z >= 0.5 via the functional equation so every
        # product factor sits where Re phi > 0 (no branch jumps)
        head = 0.0 + 0.0j
        while z.real < 0.5:
            head -= cmath.log(phi_eval(self.model, z))
            z += 1.0
        base_n = _BASE_N
        while True:
            s1, s2, s4 = self._partial_sums(z, base_n)
            r1a = (16.0 * s2 - s1) / 15.0
            r1b = (16.0 * s4 - s2) / 15.0
            r2 = (32.0 * r1b - r1a) / 31.0
            est_err = abs(r2 - r1b)
            if est_err <= 10 * self.tol * max(1.0, abs(r2)):
                break
            if 16 * base_n > self.product_terms_cap:
                raise ConvergenceError(
                    f"Weierstrass product not converged at term cap "
                    f"{self.product_terms_cap} (est err {est_err:g})")
            base_n *= 4
        return head + r2 - cmath.log(phi_eval(self.model, z))

    def log_W_nodes(self, z: np.ndarray) -> np.ndarray:
        """Vectorized ln W over an array of points with Re z >= 0.5.

        Fixed base-N Richardson (no per-point escalation); used to
        precompute contour tables where thousands of nodes share a cache.
        """
        z = np.asarray(z, dtype=complex)
        if np.any(z.real < 0.5):
            raise DomainError("log_W_nodes requires Re z >= 0.5")
        top = 4 * _BASE_N
        lnphi_k = self._lnphi_k(top)
        k = np.arange(1, top + 1, dtype=float)
        terms = lnphi_k[None, :] - _lnphi_array(self.model, 0j,
                                                k[None, :] + z[:, None])
        prefix = np.cumsum(terms, axis=1)
        s = [prefix[:, n_ - 1] + z * lnphi_k[n_ - 1]
             + _tail_correction(self.model, n_, z)
             for n_ in (_BASE_N, 2 * _BASE_N, 4 * _BASE_N)]
        r1a = (16.0 * s[1] - s[0]) / 15.0
        r1b = (16.0 * s[2] - s[1]) / 15.0
        r2 = (32.0 * r1b - r1a) / 31.0
        head = np.array([cmath.log(phi_eval(self.model, zi)) for zi in z])
        return r2 - head

    def gamma_phi(self) -> float:
        """Euler-type constant lim_N [sum_{k<=N} phi'(k)/phi(k) - ln phi(N)].

        Partial sums carry an Euler-Maclaurin correction
        -f(N)/2 - f'(N)/12 with f = phi'/phi, which upgrades the O(1/N)
        raw convergence to O(1/N^3); estimates at N and 2N must agree.
        """
        model = self.model

        def estimate(n_: int) -> float:
            k = np.arange(1, n_ + 1, dtype=float)
            phik = np.array([phi_eval(model, float(x)) for x in k],
                            dtype=float)
            dphik = np.array([phi_derivative(model, float(x)) for x in k])
            s = float(np.sum(dphik / phik))
            fN = dphik[-1] / phik[-1]
            d2 = phi_derivative(model, float(n_), order=2)
            fpN = d2 / phik[-1] - fN * fN
            return s - math.log(phik[-1]) - 0.5 * fN - fpN / 12.0

        n_ = 2000
        prev = estimate(n_)
        while True:
            n_ *= 2
            cur = estimate(n_)
            if abs(cur - prev) <= self.tol:
                return cur
            if n_ >= self.product_terms_cap:
                raise ConvergenceError(
                    f"gamma_phi estimates at N and 2N differ by "
                    f"{abs(cur - prev):g} at the term cap")
            prev = cur

    # -- Mellin transforms ---------------------------------------------------

    def mellin_V(self, z: complex) -> complex:
        """Mellin transform of the invariant law: W(z)."""
        return cmath.exp(self.log_W(z))

    def mellin_I(self, z: complex) -> complex:
        """Mellin transform of the exponential functional: Gamma(z)/W(z)."""
        z = complex(z)
        if z.real <= 0:
            raise DomainError("mellin_I requires Re z > 0")
        return cmath.exp(log_gamma(z) - self.log_W(z))

    # -- asymptotics / contour truncation -------------------------------------

    def asymp_G(self, u: float) -> float:
        """G(u) = int_1^u ln phi(r) dr (log-scale growth of W)."""
        if u < 1:
            raise DomainError("asymp_G requires u >= 1")
        if u == 1:
            return 0.0
        return adaptive_quad(
            lambda r: math.log(phi_eval(self.model, r)), 1.0, u, tol=1e-12)

    def _envelope(self, a: float, b: float, w_a: float,
                  poly_order: int = 0) -> float:
        """Decay envelope of |W(a+ib)| used for contour truncation.

        poly_order > 0 inflates the envelope by (|a+ib| + order)^order, the
        bound on the Pochhammer multipliers that appear when inverting
        derivatives or the w_n transforms.
        """
        from .levy import theta_phi
        phi_a = phi_eval(self.model, a).real
        phi_ab = abs(phi_eval(self.model, complex(a, b)))
        theta = theta_phi(self.model, a, b)
        env = (math.sqrt(phi_a / phi_ab) * w_a
               * math.exp(-b * theta) * math.exp(19.0 / (8.0 * a)))
        if poly_order:
            env *= (math.hypot(a, b) + poly_order) ** poly_order
        return env

    def contour_truncation(self, a: float, tol: float,
                           poly_order: int = 0) -> float:
        """Smallest height B with the decay envelope of |W(a+i.)| <= tol.

        Doubling search followed by bisection. Raises UnboundedContourError
        if the envelope has not fallen below tol by B = 1e6 (no usable
        decay; Mellin inversion is refused downstream).
        """
        if a <= self._d_phi:
            raise DomainError(f"contour abscissa must exceed {self._d_phi}")
        w_a = abs(self.mellin_V(a))
        b = 1.0
        while self._envelope(a, b, w_a, poly_order) > tol:
            b *= 2.0
            if b > 1e6:
                raise UnboundedContourError(
                    f"envelope above {tol:g} up to B = 1e6 at a = {a}")
        lo, hi = b / 2.0, b
        if b == 1.0:
            return b
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            if self._envelope(a, mid, w_a, poly_order) <= tol:
                hi = mid
            else:
                lo = mid
        return hi
