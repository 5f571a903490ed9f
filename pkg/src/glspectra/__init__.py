"""Spectral toolkit for generalized Laguerre semigroups."""

__version__ = "0.1.0"

from .errors import (ClassError, ConfigError, ConvergenceError,
                     DivergenceDetected, DomainError, GLSpectraError,
                     HorizonError, MembershipWarning, ModelSpecError,
                     QuadratureError, SmoothnessError, SupportError,
                     TimeBelowThreshold, UnboundedContourError,
                     UnsupportedJumpsError, UnsupportedModelError)
from .levy import (Empty, ExpMixture, GaussLaguerreKernel, JumpFamily,
                   LevyModel, ModelScalars, derive_scalars, d_phi,
                   model_from_dict, model_to_dict, phi_derivative, phi_eval,
                   psi_eval, theta_phi)
from .weierstrass import SpectralContext
from .density import (DensityEvaluator, density_evaluator, invariant_moment,
                      nu, nu_deriv, w_n)
from .spectral import (EigenPair, adjoint_apply, coeigen_eval, eigen_coeffs,
                       eigen_poly, equilibrium_gap, gram, heat_kernel,
                       inner_product, norms_report, p_norm, semigroup_apply,
                       t_min, v_norm)
from .montecarlo import (MCEstimate, PathConfig, eigen_check, sample_gl,
                         simulate_xi)
from .presets import PRESETS, preset_name
from .verify import CheckResult, RunReport, run_suite

__all__ = [
    "ClassError", "ConfigError", "ConvergenceError", "DivergenceDetected",
    "DomainError", "GLSpectraError", "HorizonError", "MembershipWarning",
    "ModelSpecError", "QuadratureError", "SmoothnessError", "SupportError",
    "TimeBelowThreshold", "UnboundedContourError", "UnsupportedJumpsError",
    "UnsupportedModelError",
    "Empty", "ExpMixture", "GaussLaguerreKernel", "JumpFamily", "LevyModel",
    "ModelScalars", "derive_scalars", "d_phi", "model_from_dict",
    "model_to_dict", "phi_derivative", "phi_eval", "psi_eval", "theta_phi",
    "SpectralContext",
    "DensityEvaluator", "density_evaluator", "invariant_moment", "nu",
    "nu_deriv", "w_n",
    "EigenPair", "adjoint_apply", "coeigen_eval", "eigen_coeffs",
    "eigen_poly", "equilibrium_gap", "gram", "heat_kernel", "inner_product",
    "norms_report", "p_norm", "semigroup_apply", "t_min", "v_norm",
    "MCEstimate", "PathConfig", "eigen_check", "sample_gl", "simulate_xi",
    "PRESETS", "preset_name",
    "CheckResult", "RunReport", "run_suite",
]
