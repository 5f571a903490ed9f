"""Built-in model presets.

Five families with known closed forms, used as oracles by the
verification suite and shipped as JSON files under ``presets/``:

``classical_m1``
    sigma2 = 1, m = 1, no jumps; phi(u) = u + 1, nu = Gamma(2, 1).
``gamma``
    sigma2 = 1, m = 0, no jumps; phi(u) = u, W(z) = Gamma(z).
``perturbed_m2``
    sigma2 = 1, m = 3/2, one exponential jump component (c = 2, b = 2);
    phi(u) = (u + 3)(u + 1)/(u + 2).
``sawtooth``
    sigma2 = 0, m = 1/2, one exponential jump component (c = 1/2, b = 1);
    phi(u) = (u + 1/2)/(u + 1), bounded support (0, 1).
``gauss_laguerre``
    pure-jump family with alpha = 1/2, mfrak = 1;
    phi(z) = Gamma(z/2 + 3/2)/Gamma(z/2 + 1).
"""

from __future__ import annotations

from .levy import Empty, ExpMixture, GaussLaguerreKernel, LevyModel

PRESETS: dict[str, LevyModel] = {
    "classical_m1": LevyModel(sigma2=1.0, m=1.0, jumps=Empty()),
    "gamma": LevyModel(sigma2=1.0, m=0.0, jumps=Empty()),
    "perturbed_m2": LevyModel(sigma2=1.0, m=1.5,
                              jumps=ExpMixture(((2.0, 2.0),))),
    "sawtooth": LevyModel(sigma2=0.0, m=0.5,
                          jumps=ExpMixture(((0.5, 1.0),))),
    "gauss_laguerre": LevyModel(sigma2=0.0, m=0.0,
                                jumps=GaussLaguerreKernel(0.5, 1.0)),
}


def preset_name(model: LevyModel) -> str | None:
    """Name of the preset equal to ``model``, or None."""
    for name, preset in PRESETS.items():
        if preset == model:
            return name
    return None
