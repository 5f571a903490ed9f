"""Pydantic request/response models for the service endpoints.

Non-finite floats are encoded as the strings "inf", "-inf", "nan" on the
wire (strict JSON has no literals for them); ``encode_float`` /
``decode_float`` are the single source of truth for that convention.
"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, Field


def encode_float(v: float) -> float | str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return float(v)


def decode_float(v: float | str) -> float:
    if isinstance(v, str):
        return float(v)
    return v


class JumpSpec(BaseModel):
    kind: Literal["empty", "exp_mixture", "gauss_laguerre"]
    components: list[tuple[float, float]] | None = None
    alpha: float | None = None
    mfrak: float | None = None


class ModelSpec(BaseModel):
    sigma2: float = Field(ge=0)
    m: float = Field(ge=0)
    jumps: JumpSpec

    def to_wire(self) -> dict:
        jd: dict = {"kind": self.jumps.kind}
        if self.jumps.kind == "exp_mixture":
            jd["components"] = [[c, b] for c, b in
                                (self.jumps.components or [])]
        elif self.jumps.kind == "gauss_laguerre":
            jd["alpha"] = self.jumps.alpha
            jd["mfrak"] = self.jumps.mfrak
        return {"sigma2": self.sigma2, "m": self.m, "jumps": jd}


class ScalarsResponse(BaseModel):
    rho: float | str
    n_rho: float | str
    d_phi: float
    class_flags: list[str]
    alpha: float | None = None
    c_alpha: float | None = None
    t_min: float
    pi_bar0: float | str
    pi_bar_bar0: float | str


class WphiRequest(BaseModel):
    model: ModelSpec
    z: list[tuple[float, float]]


class WphiResponse(BaseModel):
    rows: list[dict]  # z_re, z_im, w_re, w_im


class DensityRequest(BaseModel):
    model: ModelSpec
    x: list[float]
    order: int = 0              # derivative order of nu; ignored for op="w"
    op: Literal["nu", "deriv", "w"] = "nu"
    n: int = 0                  # index for op="w"
    force_mellin: bool = False


class DensityResponse(BaseModel):
    x: list[float]
    values: list[float]
    source: str


class SpectrumRequest(BaseModel):
    model: ModelSpec
    op: Literal["coeffs", "gram", "norms"]
    N: int = Field(ge=0, default=6)


class SpectrumResponse(BaseModel):
    op: str
    coeffs: list[list[float]] | None = None
    gram: list[list[float]] | None = None
    norms: dict | None = None


class HeatKernelRequest(BaseModel):
    model: ModelSpec
    t: float
    x: list[float]
    y: list[float]
    N: int = 40


class HeatKernelResponse(BaseModel):
    rows: list[dict]  # t, x, y, value, last_term


class SimulateRequest(BaseModel):
    model: ModelSpec
    x0: float
    t: float
    paths: int = 10_000
    dt: float = 1e-3
    seed: int = 0
    horizon: float = 30.0
    check: str = "eigen:1"      # "eigen:n" or "moments:n"
    threads: int = 1


class SimulateResponse(BaseModel):
    rows: list[dict]  # n, estimate, std_error, target, z


class VerifyRequest(BaseModel):
    models: list[str] | None = None
    seed: int = 0
    threads: int = 1
    mc_paths: int = 100_000


class VerifyResponse(BaseModel):
    passed: bool
    report: dict
    human_text: str


class ErrorResponse(BaseModel):
    error: str
    message: str
