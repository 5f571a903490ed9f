"""Quadrature helpers shared by the density and spectral modules.

Wraps scipy's double-exponential (tanh-sinh) rule for integrals over the
support (0, rho) -- rho finite or infinite, integrable endpoint
singularities allowed -- plus a dyadic endpoint-refinement loop used to
certify divergence of norm integrals rather than silently returning a big
number.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.integrate import quad, tanhsinh

from .errors import DivergenceDetected, QuadratureError

_INF = math.inf


def integrate_support(f: Callable[[np.ndarray], np.ndarray], rho: float,
                      tol: float = 1e-10,
                      upper: Callable[[np.ndarray], np.ndarray] | None = None
                      ) -> float:
    """Integral of f over (0, rho) by tanh-sinh quadrature.

    f must accept numpy arrays. For rho = inf the half-line is split at 1 so
    the double-exponential node clustering covers both the origin and the
    tail. When the integrand has a singularity at a finite rho, pass
    `upper(u) = f(rho - u)` written directly in the edge distance u: the
    plain f(x) loses the endpoint to floating-point subtraction and stalls
    around sqrt(ulp) accuracy.
    """
    if upper is not None:
        if not math.isfinite(rho):
            raise ValueError("upper-edge form requires finite rho")
        v1 = integrate_support(f, 0.5 * rho, tol=tol)
        r2 = tanhsinh(upper, 0.0, 0.5 * rho, atol=tol, rtol=tol)
        if not r2.success and r2.error > max(10 * tol, 1e-9):
            raise QuadratureError(
                f"tanh-sinh failed near the upper edge at tol={tol}")
        return v1 + float(r2.integral)
    hi = rho if math.isfinite(rho) else _INF
    res = tanhsinh(f, 0.0, hi, atol=tol, rtol=tol)
    if not res.success:
        # retry with a split at an interior point; endpoint behaviour and
        # tail decay then get separate node ladders
        mid = 1.0 if not math.isfinite(rho) else 0.5 * rho
        r1 = tanhsinh(f, 0.0, mid, atol=tol, rtol=tol)
        r2 = tanhsinh(f, mid, hi, atol=tol, rtol=tol)
        val = float(r1.integral + r2.integral)
        budget = max(10 * tol, 1e-9) * max(1.0, abs(val))
        if not (r1.success and r2.success) and r1.error + r2.error > budget:
            raise QuadratureError(
                f"tanh-sinh failed on (0, {rho}) at tol={tol}")
        return val
    return float(res.integral)


def integrate_interval(f: Callable[[np.ndarray], np.ndarray],
                       a: float, b: float, tol: float = 1e-10) -> float:
    """Integral of f over (a, b), endpoints possibly singular."""
    res = tanhsinh(f, a, b, atol=tol, rtol=tol)
    if not res.success:
        raise QuadratureError(f"tanh-sinh failed on ({a}, {b}) at tol={tol}")
    return float(res.integral)


def certify_endpoint(f_edge: Callable[[np.ndarray], np.ndarray], rho: float,
                     blow_up: float = 1e6, max_levels: int = 400,
                     conv_tol: float = 1e-10) -> float:
    """Dyadic refinement of an integral toward a finite endpoint.

    f_edge(u) is the integrand written in the edge distance u (the value at
    x = rho - u), so shells arbitrarily close to the endpoint stay exactly
    representable. Accumulates int over shells u in (rho/2^(k+1), rho/2^k).
    Returns the converged value of int_0^(rho/2) f_edge when the shell
    contributions go geometric-small; raises DivergenceDetected once the
    running total exceeds blow_up -- the caller's certificate that the
    integral is infinite.
    """
    if not math.isfinite(rho):
        raise ValueError("certify_endpoint needs a finite endpoint")
    total = 0.0
    for k in range(1, max_levels + 1):
        hi = rho / 2 ** k
        lo = rho / 2 ** (k + 1)
        shell = integrate_interval(f_edge, lo, hi, tol=1e-13)
        total += shell
        if total > blow_up:
            raise DivergenceDetected(
                f"partial integrals toward the endpoint exceeded "
                f"{blow_up:g} after {k} dyadic levels")
        if k > 4 and abs(shell) < conv_tol * max(abs(total), 1.0):
            return total
    raise QuadratureError(
        f"endpoint refinement did not settle within {max_levels} levels")


def adaptive_quad(f: Callable[[float], float], a: float, b: float,
                  tol: float = 1e-10, limit: int = 400) -> float:
    """Scalar adaptive Gauss-Kronrod wrapper with a typed failure."""
    val, err = quad(f, a, b, epsabs=tol, epsrel=tol, limit=limit)
    if err > max(100 * tol, 1e-6) * max(1.0, abs(val)):
        raise QuadratureError(
            f"adaptive quadrature error {err:g} above budget on ({a}, {b})")
    return val


def gauss_legendre_panels(a: float, b: float, n_panels: int,
                          n_nodes: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Fixed composite Gauss-Legendre nodes/weights on [a, b].

    Used for contour integrals where the same weighted sum is reused for
    many evaluation points: precompute once, dot-product per point.
    """
    x0, w0 = np.polynomial.legendre.leggauss(n_nodes)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mids[:, None] + half[:, None] * x0[None, :]).ravel()
    weights = (half[:, None] * w0[None, :]).ravel()
    return nodes, weights
