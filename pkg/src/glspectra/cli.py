"""Command-line front end.

Every subcommand is a thin client of the in-process HTTP service
(``glspectra.service.app``): it assembles a request, posts it through an
in-memory transport, and renders the JSON response as CSV or JSON. This
keeps one schema for both the network service and the terminal.

Output contract: CSV uses '.' decimal, comma separator, a header row, LF
endings, and floats printed with a 17-significant-digit round-trip
format, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .presets import PRESETS


def _client():
    import warnings

    with warnings.catch_warnings():
        # starlette's test client currently warns about its httpx pin;
        # irrelevant for the in-process transport used here
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app, raise_server_exceptions=False)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit_csv(rows: list[dict], columns: list[str]):
    out = sys.stdout
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(row[c]) for c in columns) + "\n")


def _emit(rows: list[dict], columns: list[str], fmt: str):
    if fmt == "csv":
        _emit_csv(rows, columns)
    else:
        click.echo(json.dumps(rows, indent=2))


def _load_model(path: str) -> dict:
    if path in PRESETS:
        from .levy import model_to_dict

        return model_to_dict(PRESETS[path])
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise click.UsageError(f"model file not found: {path}")
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"model file is not valid JSON: {exc}")


def _post(path: str, payload: dict) -> dict:
    resp = _client().post(path, json=payload)
    body = resp.json()
    if resp.status_code != 200:
        if isinstance(body, dict) and "error" in body:
            click.echo(f"{body['error']}: {body['message']}", err=True)
        else:
            click.echo(f"request failed: {body}", err=True)
        sys.exit(1)
    return body


def _threads(threads: int | None) -> int:
    if threads is not None:
        return threads
    return int(os.environ.get("GL_SPECTRA_THREADS", "1"))


_format_opt = click.option("--format", "fmt",
                           type=click.Choice(["csv", "json"]),
                           default="csv", show_default=True)
_model_opt = click.option("--model", "model_path", required=True,
                          help="model JSON file or preset name")


@click.group()
def main():
    """Spectral toolkit for generalized Laguerre semigroups."""


@main.command()
@_model_opt
@_format_opt
def model(model_path: str, fmt: str):
    """Validate a model and print its derived scalars."""
    body = _post("/model", _load_model(model_path))
    if fmt == "json":
        click.echo(json.dumps(body, indent=2, sort_keys=True))
        return
    cols = ["rho", "n_rho", "d_phi", "t_min", "pi_bar0", "pi_bar_bar0",
            "class_flags"]
    row = {c: body[c] for c in cols[:-1]}
    row["class_flags"] = ";".join(body["class_flags"])
    _emit_csv([row], cols)


@main.command()
@_model_opt
@click.option("--z", "z_points", multiple=True, required=True,
              help="complex point like 4+0i (repeatable)")
@_format_opt
def wphi(model_path: str, z_points: tuple[str, ...], fmt: str):
    """Evaluate the generalized Weierstrass product W(z)."""
    zs = []
    for token in z_points:
        try:
            c = complex(token.replace("i", "j").replace(" ", ""))
        except ValueError:
            raise click.UsageError(f"cannot parse complex number: {token}")
        zs.append((c.real, c.imag))
    body = _post("/wphi", {"model": _load_model(model_path), "z": zs})
    _emit(body["rows"], ["z_re", "z_im", "w_re", "w_im"], fmt)


@main.command()
@_model_opt
@click.option("--x", "x_points", multiple=True, type=float,
              help="evaluation point (repeatable)")
@click.option("--xmin", type=float, default=None)
@click.option("--xmax", type=float, default=None)
@click.option("--points", type=int, default=41, show_default=True)
@click.option("--order", type=int, default=0, show_default=True,
              help="derivative order of nu")
@click.option("--w", "w_index", type=int, default=None,
              help="emit the co-eigenfunction numerator w_n instead")
@click.option("--mellin", is_flag=True,
              help="force the Mellin-inversion route")
@_format_opt
def density(model_path: str, x_points, xmin, xmax, points, order,
            w_index, mellin, fmt):
    """Evaluate the invariant density nu (or derivatives / w_n)."""
    if x_points:
        xs = list(x_points)
    elif xmin is not None and xmax is not None:
        if points < 2 or xmax <= xmin:
            raise click.UsageError("need xmax > xmin and points >= 2")
        step = (xmax - xmin) / (points - 1)
        xs = [xmin + i * step for i in range(points)]
    else:
        raise click.UsageError("pass either --x or (--xmin and --xmax)")
    op = "nu"
    n = 0
    if w_index is not None:
        op, n = "w", w_index
    elif order > 0:
        op = "deriv"
    body = _post("/density", {"model": _load_model(model_path), "x": xs,
                              "order": order, "op": op, "n": n,
                              "force_mellin": mellin})
    rows = [{"x": x, "value": v}
            for x, v in zip(body["x"], body["values"])]
    if fmt == "json":
        click.echo(json.dumps({"source": body["source"], "rows": rows},
                              indent=2))
    else:
        _emit_csv(rows, ["x", "value"])


@main.command()
@_model_opt
@click.option("--coeffs", "n_coeffs", type=int, default=None,
              help="eigenpolynomial coefficient table up to degree N")
@click.option("--gram", "n_gram", type=int, default=None,
              help="(N+1)x(N+1) biorthogonality matrix")
@click.option("--norms", "n_norms", type=int, default=None,
              help="norm table for n <= N with fitted growth slope")
@_format_opt
def spectrum(model_path: str, n_coeffs, n_gram, n_norms, fmt):
    """Eigenpolynomial coefficients, Gram matrix, or norm tables."""
    chosen = [v for v in (n_coeffs, n_gram, n_norms) if v is not None]
    if len(chosen) != 1:
        raise click.UsageError(
            "pass exactly one of --coeffs, --gram, --norms")
    spec = _load_model(model_path)
    if n_coeffs is not None:
        body = _post("/spectrum", {"model": spec, "op": "coeffs",
                                   "N": n_coeffs})
        click.echo(json.dumps(body["coeffs"], indent=2))
        return
    if n_gram is not None:
        body = _post("/spectrum", {"model": spec, "op": "gram",
                                   "N": n_gram})
        rows = [{f"m{j}": v for j, v in enumerate(row)}
                for row in body["gram"]]
        _emit(rows, [f"m{j}" for j in range(n_gram + 1)], fmt)
        return
    body = _post("/spectrum", {"model": spec, "op": "norms", "N": n_norms})
    nd = body["norms"]
    rows = [{"n": n, "norm_P": p, "norm_V": v}
            for n, p, v in zip(nd["n"], nd["p_norm"], nd["v_norm"])]
    if fmt == "json":
        click.echo(json.dumps({"rows": rows, "v_slope": nd["v_slope"]},
                              indent=2))
    else:
        _emit_csv(rows, ["n", "norm_P", "norm_V"])


@main.command()
@_model_opt
@click.option("--t", type=float, required=True)
@click.option("--x", "x_points", multiple=True, type=float, required=True)
@click.option("--y", "y_points", multiple=True, type=float, required=True)
@click.option("--n", "n_trunc", type=int, default=40, show_default=True)
@_format_opt
def heatkernel(model_path: str, t, x_points, y_points, n_trunc, fmt):
    """Heat-kernel values P_t(x, y) with last-term diagnostics."""
    body = _post("/heatkernel", {"model": _load_model(model_path), "t": t,
                                 "x": list(x_points),
                                 "y": list(y_points), "N": n_trunc})
    _emit(body["rows"], ["t", "x", "y", "value", "last_term"], fmt)


@main.command()
@_model_opt
@click.option("--x0", type=float, required=True)
@click.option("--t", type=float, required=True)
@click.option("--paths", type=int, default=10000, show_default=True)
@click.option("--dt", type=float, default=1e-3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--horizon", type=float, default=30.0, show_default=True)
@click.option("--check", default="eigen:1", show_default=True,
              help="eigen:n or moments:n")
@click.option("--threads", type=int, default=None)
@_format_opt
def simulate(model_path: str, x0, t, paths, dt, seed, horizon, check,
             threads, fmt):
    """Monte-Carlo sample the process and test analytic identities."""
    body = _post("/simulate", {"model": _load_model(model_path), "x0": x0,
                               "t": t, "paths": paths, "dt": dt,
                               "seed": seed, "horizon": horizon,
                               "check": check,
                               "threads": _threads(threads)})
    _emit(body["rows"], ["n", "estimate", "std_error", "target", "z"], fmt)


@main.command()
@click.option("--model", "model_path", default=None,
              help="narrow the suite to one preset (file or name)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--mc-paths", type=int, default=100_000, show_default=True)
@click.option("--threads", type=int, default=None)
def verify(model_path, seed, mc_paths, threads):
    """Run the 13-check verification suite.

    Prints the machine-readable RunReport JSON on stdout (byte-identical
    across runs with the same seed) and a human summary with wall times
    on stderr. Exit code 1 if any check fails.
    """
    models = None
    if model_path is not None:
        if model_path in PRESETS:
            models = [model_path]
        else:
            spec = _load_model(model_path)
            from .levy import model_from_dict
            from .presets import preset_name

            name = preset_name(model_from_dict(spec))
            if name is None:
                raise click.UsageError(
                    "verification checks are preset-specific; the model "
                    f"must equal one of {sorted(PRESETS)}")
            models = [name]
    body = _post("/verify", {"models": models, "seed": seed,
                             "threads": _threads(threads),
                             "mc_paths": mc_paths})
    report = body["report"]
    click.echo(json.dumps(report, sort_keys=True, separators=(",", ":")))
    click.echo(body["human_text"], err=True)
    if not body["passed"]:
        sys.exit(1)


if __name__ == "__main__":
    sys.exit(main())
