"""Invariant density nu, its derivatives, and co-eigenfunction numerators.

Two live computation routes:

* closed forms for the catalog families whose invariant law is known
  exactly (gamma, scaled beta, gamma-with-linear-factor, stretched
  gamma) -- these also provide analytic derivatives of any order via small
  term-dictionary algebras closed under d/dx;
* numerical Mellin inversion nu(x) = (1/2pi) int x^{-a-ib} W(a+ib) db for
  everything else with exponential contour decay. Compound-Poisson models
  without a diffusion part carry no decay guarantee and the Mellin route
  refuses them with a typed error.

The co-eigenfunction numerators w_n = (x^n nu)^(n) / n! come from the same
two routes: Leibniz-free analytic differentiation of the term dictionaries,
or inversion of (-1)^n/n! * Gamma(z)/Gamma(z-n) * W(z) on a contour right
of n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, SmoothnessError, UnsupportedModelError
from .gammafn import log_gamma
from .levy import (Empty, ExpMixture, GaussLaguerreKernel, LevyModel,
                   ModelScalars, derive_scalars, phi_eval)
from .quadrature import gauss_legendre_panels
from .weierstrass import SpectralContext

_LD = np.longdouble  # closed-form evaluation accumulates in extended precision


# ---------------------------------------------------------------------------
# Term-dictionary algebras (each closed under differentiation)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _GammaTerms:
    """f(x) = sum_lam c_lam x^lam e^{-x/theta} on (0, inf)."""

    terms: tuple[tuple[float, float], ...]  # (lam, c)
    theta: float

    def eval(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lam_max = max(lam for lam, _ in self.terms)
        with np.errstate(divide="ignore", invalid="ignore"):
            logenv = lam_max * np.log(np.maximum(x, 1e-300)) - x / self.theta
        live = (x > 0) & (logenv > -1000.0)  # beyond: below any roundoff
        xl = np.where(live, x, 1.0).astype(_LD)
        acc = np.zeros_like(xl)
        for lam, c in self.terms:
            acc += _LD(c) * xl ** _LD(lam)
        out = acc * np.exp(-xl / _LD(self.theta))
        return np.where(live, out.astype(float), 0.0)

    def deriv(self) -> "_GammaTerms":
        new: dict[float, float] = {}
        for lam, c in self.terms:
            if lam != 0.0:
                new[lam - 1.0] = new.get(lam - 1.0, 0.0) + c * lam
            new[lam] = new.get(lam, 0.0) - c / self.theta
        return _GammaTerms(tuple(sorted(new.items())), self.theta)

    def x_shift(self, n: int) -> "_GammaTerms":
        return _GammaTerms(tuple((lam + n, c) for lam, c in self.terms),
                           self.theta)


@dataclass(frozen=True)
class _BetaTerms:
    """f(x) = sum c x^p (rho - x)^q on (0, rho), zero outside."""

    terms: tuple[tuple[float, float, float], ...]  # (p, q, c)
    rho: float

    def eval(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = (x > 0) & (x < self.rho)
        xs = np.where(inside, x, 0.5 * self.rho).astype(_LD)
        acc = np.zeros_like(xs)
        for p, q, c in self.terms:
            acc += _LD(c) * xs ** _LD(p) * (_LD(self.rho) - xs) ** _LD(q)
        return np.where(inside, acc.astype(float), 0.0)

    def eval_upper(self, u: np.ndarray) -> np.ndarray:
        """f(rho - u) computed directly in the edge distance u.

        Avoids the catastrophic (rho - x) subtraction that caps plain
        evaluation at ~sqrt(ulp) accuracy next to the endpoint.
        """
        u = np.asarray(u, dtype=float)
        inside = (u > 0) & (u < self.rho)
        us = np.where(inside, u, 0.5 * self.rho).astype(_LD)
        acc = np.zeros_like(us)
        for p, q, c in self.terms:
            acc += _LD(c) * (_LD(self.rho) - us) ** _LD(p) * us ** _LD(q)
        return np.where(inside, acc.astype(float), 0.0)

    def deriv(self) -> "_BetaTerms":
        new: dict[tuple[float, float], float] = {}
        for p, q, c in self.terms:
            if p != 0.0:
                key = (p - 1.0, q)
                new[key] = new.get(key, 0.0) + c * p
            if q != 0.0:
                key = (p, q - 1.0)
                new[key] = new.get(key, 0.0) - c * q
        return _BetaTerms(tuple(sorted((p, q, c) for (p, q), c in new.items())),
                          self.rho)

    def x_shift(self, n: int) -> "_BetaTerms":
        return _BetaTerms(tuple((p + n, q, c) for p, q, c in self.terms),
                          self.rho)


@dataclass(frozen=True)
class _StretchedTerms:
    """f(x) = sum c x^lam e^{-x^s} on (0, inf) (stretched-gamma lattice)."""

    terms: tuple[tuple[float, float], ...]  # (lam, c)
    s: float

    def eval(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lam_max = max(lam for lam, _ in self.terms)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            logenv = lam_max * np.log(np.maximum(x, 1e-300)) \
                - np.maximum(x, 0.0) ** self.s
        live = (x > 0) & (logenv > -1000.0)
        xl = np.where(live, x, 1.0).astype(_LD)
        acc = np.zeros_like(xl)
        for lam, c in self.terms:
            acc += _LD(c) * xl ** _LD(lam)
        out = acc * np.exp(-xl ** _LD(self.s))
        return np.where(live, out.astype(float), 0.0)

    def deriv(self) -> "_StretchedTerms":
        new: dict[float, float] = {}
        for lam, c in self.terms:
            if lam != 0.0:
                new[lam - 1.0] = new.get(lam - 1.0, 0.0) + c * lam
            key = lam + self.s - 1.0
            new[key] = new.get(key, 0.0) - c * self.s
        return _StretchedTerms(tuple(sorted(new.items())), self.s)

    def x_shift(self, n: int) -> "_StretchedTerms":
        return _StretchedTerms(tuple((lam + n, c) for lam, c in self.terms),
                               self.s)


_Terms = Union[_GammaTerms, _BetaTerms, _StretchedTerms]


def _closed_form(model: LevyModel) -> tuple[str, _Terms] | None:
    """Match the model against the catalog of exactly-known invariant laws."""
    j = model.jumps
    if isinstance(j, Empty):
        # phi(u) = m + sigma2 u: gamma law, shape m/sigma2 + 1, scale sigma2
        k0 = model.m / model.sigma2 + 1.0
        theta = model.sigma2
        c = math.exp(-gammaln(k0) - k0 * math.log(theta))
        return "gamma", _GammaTerms(((k0 - 1.0, c),), theta)
    if isinstance(j, GaussLaguerreKernel):
        a, mf = j.alpha, j.mfrak
        if a == 1.0:
            c = math.exp(-gammaln(mf + 1.0))
            return "gamma", _GammaTerms(((mf, c),), 1.0)
        s = 1.0 / a
        c = s * math.exp(-gammaln(a * mf + 1.0))
        return "stretched-gamma", _StretchedTerms(((mf + s - 1.0, c),), s)
    assert isinstance(j, ExpMixture)
    if len(j.components) != 1:
        return None
    c_, b_ = j.components[0]
    q = c_ / b_ ** 2
    if model.sigma2 == 0.0:
        # scaled beta on (0, rho): rho * Beta(1 + m b / rho, q b / rho)
        rho = model.m + q
        p = m_over = model.m * b_ / rho
        pa, pb = 1.0 + m_over, q * b_ / rho
        lognorm = (gammaln(pa) + gammaln(pb) - gammaln(pa + pb)
                   + (pa + pb - 1.0) * math.log(rho))
        return "beta", _BetaTerms(((pa - 1.0, pb - 1.0, math.exp(-lognorm)),),
                                  rho)
    if (model.sigma2 == 1.0 and c_ == b_
            and abs(model.m - (c_ * c_ - 1.0) / c_) < 1e-13):
        # linear perturbation of the gamma law:
        # nu = (1+x)/(mfrak+1) * x^{mfrak-1} e^{-x} / Gamma(mfrak)
        mf = c_
        c0 = math.exp(-gammaln(mf)) / (mf + 1.0)
        return "perturbed-gamma", _GammaTerms(((mf - 1.0, c0), (mf, c0)), 1.0)
    return None


# ---------------------------------------------------------------------------
# Evaluator
# ---------------------------------------------------------------------------

class DensityEvaluator:
    """Route-dispatching evaluator of nu, its derivatives and the w_n.

    source is "closed-form:<family>" or "mellin"; support_upper is
    rho = phi(inf). Mellin contours are cached per (order, kind) so grid
    sweeps amortize the Weierstrass-product evaluations.
    """

    def __init__(self, model: LevyModel, contour_a: float = 1.0,
                 contour_tol: float = 1e-9, force_mellin: bool = False):
        self.model = model
        self.scalars: ModelScalars = derive_scalars(model)
        self.support_upper = self.scalars.rho
        cf = None if force_mellin else _closed_form(model)
        if cf is not None:
            self.source = f"closed-form:{cf[0]}"
            self._base: _Terms | None = cf[1]
        else:
            if "N_inf_c" in self.scalars.class_flags:
                raise UnsupportedModelError(
                    "no closed form and no contour-decay guarantee for "
                    "compound-Poisson models without diffusion; Mellin "
                    "inversion refused")
            self.source = "mellin"
            self._base = None
        self._ctx = SpectralContext(model, contour_a=contour_a)
        self._contour_tol = contour_tol
        self._contours: dict = {}
        self._deriv_cache: dict = {}

    # -- closed-form internals ------------------------------------------------

    def _derived_terms(self, shift: int, n_deriv: int) -> _Terms:
        key = (shift, n_deriv)
        if key not in self._deriv_cache:
            assert self._base is not None
            t = self._base.x_shift(shift) if shift else self._base
            for _ in range(n_deriv):
                t = t.deriv()
            self._deriv_cache[key] = t
        return self._deriv_cache[key]

    # -- Mellin internals -------------------------------------------------------

    def _contour(self, a: float, poly_order: int):
        """Cached (nodes b_j, weights, W(a+ib_j)) for one abscissa."""
        key = (a, poly_order)
        if key not in self._contours:
            B = self._ctx.contour_truncation(a, self._contour_tol,
                                             poly_order=poly_order)
            nodes, weights = gauss_legendre_panels(
                0.0, B, n_panels=max(8, int(math.ceil(B))))
            wvals = np.exp(self._ctx.log_W_nodes(a + 1j * nodes))
            self._contours[key] = (nodes, weights, wvals)
        return self._contours[key]

    def _mellin_invert(self, x: np.ndarray, a: float, poly_order: int,
                       multiplier) -> np.ndarray:
        """(1/pi) Re int_0^B x^{-a-ib} multiplier(z) W(z) db, z = a+ib."""
        nodes, weights, wvals = self._contour(a, poly_order)
        z = a + 1j * nodes
        f = wvals * multiplier(z) if multiplier is not None else wvals
        x = np.asarray(x, dtype=float)
        shape = x.shape
        xf = x.reshape(-1)
        pos = xf > 0
        xs = np.where(pos, xf, 1.0)
        ker = np.exp(-np.multiply.outer(np.log(xs), z))
        out = (ker * (weights * f)).sum(axis=-1).real / math.pi
        return np.where(pos, out, 0.0).reshape(shape)

    # -- public surface ---------------------------------------------------------

    def nu(self, x) -> np.ndarray:
        """Invariant density at x (vectorized); 0 outside (0, rho)."""
        x = np.asarray(x, dtype=float)
        if self._base is not None:
            return self._base.eval(x)
        return self._mellin_invert(x, self._ctx.contour_a, 0, None)

    def nu_deriv(self, x, n: int) -> np.ndarray:
        """n-th derivative of nu on the interior of the support."""
        if n < 0:
            raise DomainError("derivative order must be >= 0")
        if n == 0:
            return self.nu(x)
        n_rho = self.scalars.n_rho
        if "N_inf_c" in self.scalars.class_flags and n > n_rho - 1:
            raise SmoothnessError(
                f"nu has at most {max(int(n_rho) - 1, 0)} derivatives for "
                f"this finite-activity model (smoothness index {n_rho})")
        if n > 20:
            raise DomainError("derivative order capped at 20")
        if self._base is not None:
            return self._derived_terms(0, n).eval(x)

        def mult(z):
            # d^n/dx^n x^{-z} = (-1)^n z (z+1) ... (z+n-1) x^{-z-n}
            p = np.ones_like(z)
            for i in range(n):
                p = p * (z + i)
            return p if n % 2 == 0 else -p
        x = np.asarray(x, dtype=float)
        out = self._mellin_invert(x, self._ctx.contour_a, n, mult)
        return out / np.where(x > 0, x, 1.0) ** n

    def w_n(self, n: int, x, interior: bool = False) -> np.ndarray:
        """Co-eigenfunction numerator w_n(x) = (x^n nu)^(n)(x) / n!.

        interior=True evaluates the analytic pointwise derivative on the
        open support even when the model's global smoothness index would
        reject the same order through nu_deriv (the numerator exists
        classically away from the endpoint).
        """
        if n < 0:
            raise DomainError("n must be >= 0")
        if n == 0:
            return self.nu(x)
        if self._base is not None:
            n_rho = self.scalars.n_rho
            if (not interior and "N_inf_c" in self.scalars.class_flags
                    and n > n_rho - 1 and not math.isinf(n_rho)):
                raise SmoothnessError(
                    f"w_{n} is unbounded at the support edge for this "
                    f"model (smoothness index {n_rho}); pass interior=True "
                    f"for pointwise values on the open support")
            t = self._derived_terms(n, n)
            return t.eval(x) / math.factorial(n)
        def mult(z):
            # (-1)^n/n! * Gamma(z)/Gamma(z-n) = (-1)^n/n! (z-n)...(z-1)
            p = np.ones_like(z)
            for i in range(1, n + 1):
                p = p * (z - i)
            sign = -1.0 if n % 2 else 1.0
            return sign / math.factorial(n) * p

        # contour-truncation noise scales like x^{-a}: keep the contour at
        # the default abscissa for x <= 1 and shift it right (faster decay
        # of the kernel) for x > 1
        x = np.asarray(x, dtype=float)
        a_right = max(self._ctx.contour_a, n + 0.5)
        out = self._mellin_invert(x, self._ctx.contour_a, n, mult)
        big = x > 1.0
        if np.any(big):
            out = np.where(big,
                           self._mellin_invert(x, a_right, n, mult), out)
        return out

    @property
    def has_edge_form(self) -> bool:
        """True when an exact upper-edge evaluator is available."""
        return isinstance(self._base, _BetaTerms)

    def nu_upper(self, u) -> np.ndarray:
        """nu(rho - u) in the edge distance u (finite-support families)."""
        if not isinstance(self._base, _BetaTerms):
            raise UnsupportedModelError("no finite upper edge for this model")
        return self._base.eval_upper(u)

    def w_n_upper(self, n: int, u) -> np.ndarray:
        """w_n(rho - u) in the edge distance u, pointwise on the interior."""
        if not isinstance(self._base, _BetaTerms):
            raise UnsupportedModelError("no finite upper edge for this model")
        if n == 0:
            return self._base.eval_upper(u)
        t = self._derived_terms(n, n)
        assert isinstance(t, _BetaTerms)
        return t.eval_upper(u) / math.factorial(n)

    def invariant_moment(self, n: int) -> float:
        """n-th moment of nu: W(n+1) as the exact product phi(1)...phi(n)."""
        if n < 0 or n != int(n):
            raise DomainError("moment order must be a nonnegative integer")
        out = 1.0
        for k in range(1, int(n) + 1):
            out *= phi_eval(self.model, float(k)).real
        return out


@lru_cache(maxsize=64)
def density_evaluator(model: LevyModel) -> DensityEvaluator:
    """Shared per-model evaluator (models are immutable and hashable)."""
    return DensityEvaluator(model)


def nu(model: LevyModel, x):
    """Invariant density at x; closed form when known, Mellin otherwise."""
    return density_evaluator(model).nu(x)


def nu_deriv(model: LevyModel, x, n: int):
    """n-th derivative of the invariant density."""
    return density_evaluator(model).nu_deriv(x, n)


def w_n(model: LevyModel, n: int, x, interior: bool = False):
    """Co-eigenfunction numerator (x^n nu)^(n) / n!."""
    return density_evaluator(model).w_n(n, x, interior=interior)


def invariant_moment(model: LevyModel, n: int) -> float:
    """n-th invariant moment W(n+1) by direct product of phi values."""
    return density_evaluator(model).invariant_moment(n)
