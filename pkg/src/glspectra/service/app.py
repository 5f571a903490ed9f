"""FastAPI application exposing the spectral toolkit.

One POST endpoint per CLI subcommand. Library errors surface as 422
responses carrying the exception class name and message; malformed
payloads are FastAPI's usual 422 validation errors.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..density import DensityEvaluator, density_evaluator
from ..errors import ConfigError, GLSpectraError
from ..levy import LevyModel, derive_scalars, model_from_dict
from ..montecarlo import MCEstimate, PathConfig, eigen_check, sample_gl
from ..presets import PRESETS
from ..spectral import (eigen_coeffs, gram, heat_kernel, norms_report,
                        t_min)
from ..verify import run_suite
from ..weierstrass import SpectralContext
from .schemas import (DensityRequest, DensityResponse, HeatKernelRequest,
                      HeatKernelResponse, ModelSpec, ScalarsResponse,
                      SimulateRequest, SimulateResponse, SpectrumRequest,
                      SpectrumResponse, VerifyRequest, VerifyResponse,
                      WphiRequest, WphiResponse, encode_float)

app = FastAPI(title="glspectra", version="0.1.0")


@app.exception_handler(GLSpectraError)
async def _library_error(_: Request, exc: GLSpectraError) -> JSONResponse:
    return JSONResponse(status_code=422,
                        content={"error": type(exc).__name__,
                                 "message": str(exc)})


def _build(spec: ModelSpec) -> LevyModel:
    return model_from_dict(spec.to_wire())


@app.post("/model", response_model=ScalarsResponse)
def model_endpoint(spec: ModelSpec) -> ScalarsResponse:
    model = _build(spec)
    sc = derive_scalars(model)
    flags = sorted(sc.class_flags)
    return ScalarsResponse(
        rho=encode_float(sc.rho),
        n_rho=encode_float(float(sc.n_rho)),
        d_phi=sc.d_phi,
        class_flags=flags,
        alpha=sc.alpha,
        c_alpha=sc.c_alpha,
        t_min=t_min(model),
        pi_bar0=encode_float(model.pi_bar0()),
        pi_bar_bar0=encode_float(model.pi_bar_bar0()),
    )


@app.post("/wphi", response_model=WphiResponse)
def wphi_endpoint(req: WphiRequest) -> WphiResponse:
    model = _build(req.model)
    ctx = SpectralContext(model)
    rows = []
    for re_, im_ in req.z:
        w = complex(np.exp(ctx.log_W(complex(re_, im_))))
        rows.append({"z_re": re_, "z_im": im_,
                     "w_re": w.real, "w_im": w.imag})
    return WphiResponse(rows=rows)


@app.post("/density", response_model=DensityResponse)
def density_endpoint(req: DensityRequest) -> DensityResponse:
    model = _build(req.model)
    if req.force_mellin:
        ev = DensityEvaluator(model, force_mellin=True)
    else:
        ev = density_evaluator(model)
    x = np.asarray(req.x, dtype=float)
    if req.op == "w":
        vals = ev.w_n(req.n, x)
    elif req.op == "deriv" or req.order > 0:
        vals = ev.nu_deriv(x, req.order)
    else:
        vals = ev.nu(x)
    return DensityResponse(x=list(map(float, x)),
                           values=[float(v) for v in np.atleast_1d(vals)],
                           source=ev.source)


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum_endpoint(req: SpectrumRequest) -> SpectrumResponse:
    model = _build(req.model)
    if req.op == "coeffs":
        rows = [[float(c) for c in eigen_coeffs(model, n)]
                for n in range(req.N + 1)]
        return SpectrumResponse(op="coeffs", coeffs=rows)
    if req.op == "gram":
        g = gram(model, req.N)
        return SpectrumResponse(op="gram",
                                gram=[[float(v) for v in row] for row in g])
    rep = norms_report(model, req.N)
    return SpectrumResponse(op="norms", norms={
        "n": [int(v) for v in rep["n"]],
        "p_norm": [float(v) for v in rep["p_norm"]],
        "v_norm": [float(v) for v in rep["v_norm"]],
        "v_slope": float(rep["v_slope"]),
    })


@app.post("/heatkernel", response_model=HeatKernelResponse)
def heatkernel_endpoint(req: HeatKernelRequest) -> HeatKernelResponse:
    model = _build(req.model)
    rows = []
    for x in req.x:
        for y in req.y:
            value, last = heat_kernel(model, req.t, x, y, N=req.N)
            rows.append({"t": req.t, "x": x, "y": y,
                         "value": value, "last_term": last})
    return HeatKernelResponse(rows=rows)


@app.post("/simulate", response_model=SimulateResponse)
def simulate_endpoint(req: SimulateRequest) -> SimulateResponse:
    model = _build(req.model)
    kind, _, arg = req.check.partition(":")
    n = int(arg) if arg else 1
    cfg = PathConfig(dt=req.dt, horizon=req.horizon, n_paths=req.paths,
                     seed=req.seed)
    rows = []
    if kind == "eigen":
        for k in range(1, n + 1):
            res = eigen_check(model, cfg, req.x0, req.t, k,
                              n_threads=req.threads)
            est: MCEstimate = res["estimate"]
            rows.append({"n": k, "estimate": est.mean,
                         "std_error": est.std_error,
                         "target": res["target"], "z": res["z"]})
    elif kind == "moments":
        ev = density_evaluator(model)
        samples = sample_gl(model, cfg, req.x0, req.t,
                            n_threads=req.threads)
        for k in range(1, n + 1):
            est = MCEstimate.from_samples(samples ** k)
            target = ev.invariant_moment(k)
            z = ((est.mean - target) / est.std_error
                 if est.std_error > 0 else 0.0)
            rows.append({"n": k, "estimate": est.mean,
                         "std_error": est.std_error,
                         "target": target, "z": z})
    else:
        raise ConfigError(
            f"unknown check kind {kind!r} (expected eigen:n or moments:n)")
    return SimulateResponse(rows=rows)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
    if req.models is not None:
        unknown = [m for m in req.models if m not in PRESETS]
        if unknown:
            raise ConfigError(
                f"unknown preset name(s) {unknown}; "
                f"choose from {sorted(PRESETS)}")
    report = run_suite(models=req.models, seed=req.seed,
                       n_threads=req.threads, mc_paths=req.mc_paths)
    return VerifyResponse(passed=report.passed,
                          report=report.to_dict(),
                          human_text=report.human_text())
