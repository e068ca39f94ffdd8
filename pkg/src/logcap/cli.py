"""Command line client for the verification service.

By default commands run against the in-process service (no network, same
process), which keeps CI runs hermetic and deterministic; `--server URL`
points the same client at a remote instance.  All outputs are canonical
JSON: sorted keys, fixed separators, shortest-round-trip floats, so a rerun
with identical inputs and seed is byte-identical.

Exit codes: 0 clean, 1 on errors (bad input, malformed JSON), 2 when a
guaranteed-class check reports a violation.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .reporting import canonical_json


class ServiceClient:
    """Minimal POST/GET wrapper over the in-process app or a remote server."""

    def __init__(self, server: str | None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                # starlette nags about its preferred httpx flavor; irrelevant here
                warnings.simplefilter("ignore")
                from starlette.testclient import TestClient

                from .service.app import app

                self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code >= 400:
            detail = response.json().get("detail", response.text)
            _fail(f"{path}: {detail}")
        return response.json()

    def get(self, path: str) -> dict:
        response = self._client.get(path)
        if response.status_code >= 400:
            _fail(f"{path}: {response.text}")
        return response.json()


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        _fail(str(exc))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _resolve_poly(reference: str) -> dict:
    """A polynomial argument is a JSON file path or fixture:NAME."""
    if reference.startswith("fixture:"):
        from .fixtures import packaged_fixture

        name = reference.split(":", 1)[1]
        try:
            return packaged_fixture(name)["poly"]
        except FileNotFoundError:
            _fail(f"unknown fixture {name!r}")
    payload = _load_json(reference)
    return payload.get("poly", payload)


def _emit(payload, out: str | None) -> None:
    text = canonical_json(payload)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(text)


def _format_option(fn):
    return click.option("--format", "fmt", type=click.Choice(["json"]), default="json",
                        help="Output format (canonical JSON).")(fn)


def _out_option(fn):
    return click.option("--out", type=click.Path(dir_okay=False), default=None,
                        help="Also write the output to this file.")(fn)


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Remote service URL; default is the in-process service.")
@click.pass_context
def main(ctx, server):
    """Capacity, mixed derivatives, and log-concavity checks."""
    ctx.obj = ServiceClient(server)


@main.command()
@click.option("--poly", required=True, help="Polynomial JSON file or fixture:NAME.")
@click.option("--target", default=None,
              help="Optional comma-separated exponents; default is all ones.")
@click.option("--tol", type=float, default=1e-8, show_default=True)
@_out_option
@_format_option
@click.pass_obj
def cap(client, poly, target, tol, out, fmt):
    """Capacity: infimum of p(x) over the product of the x_i (or x^target)."""
    payload: dict = {"poly": _resolve_poly(poly), "tol": tol}
    if target is not None:
        payload["target"] = target.split(",")
    _emit(client.post("/cap", payload), out)


@main.command()
@click.option("--poly", required=True)
@click.option("--target", required=True, help="Comma-separated exponents, e.g. 1,1,2.")
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.option("--unscaled", is_flag=True,
              help="Plain infimum of p / x^target without the target^target scaling.")
@_out_option
@_format_option
@click.pass_obj
def cfr(client, poly, target, tol, unscaled, out, fmt):
    """Capacity at a general exponent target."""
    payload = {"poly": _resolve_poly(poly), "target": target.split(","),
               "tol": tol, "scaled": not unscaled}
    _emit(client.post("/cfr", payload), out)


@main.command()
@click.option("--poly", required=True)
@click.option("--target", required=True, help="Comma-separated integer exponents.")
@_out_option
@_format_option
@click.pass_obj
def der(client, poly, target, out, fmt):
    """Exact mixed derivative at the origin."""
    exponents = [int(v) for v in target.split(",")]
    _emit(client.post("/der", {"poly": _resolve_poly(poly), "target": exponents}), out)


@main.command()
@click.option("--poly", required=True)
@click.option("--samples", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_out_option
@_format_option
@click.pass_obj
def slc(client, poly, samples, seed, out, fmt):
    """Strong log-concavity: sampled falsifier with exact low-dimension routes."""
    payload = {"poly": _resolve_poly(poly), "samples": samples, "seed": seed}
    _emit(client.post("/slc", payload), out)


@main.command()
@click.option("--poly", required=True)
@_out_option
@_format_option
@click.pass_obj
def dconvex(client, poly, out, fmt):
    """Discrete convexity of the support (exact lattice check)."""
    _emit(client.post("/dconvex", {"poly": _resolve_poly(poly)}), out)


@main.command()
@click.option("--poly", required=True)
@_out_option
@_format_option
@click.pass_obj
def rado(client, poly, out, fmt):
    """Degree-constraint characterization of the support."""
    _emit(client.post("/rado", {"poly": _resolve_poly(poly)}), out)


@main.command()
@click.option("--weights", required=True, help="Weights JSON file ({\"weights\": [...]}).")
@click.option("--poly", required=True)
@click.option("--grid", required=True, help="Comma-separated rational times, e.g. 0,1/2,1,2.")
@_out_option
@_format_option
@click.pass_obj
def propagate(client, weights, poly, grid, out, fmt):
    """Log-concavity of the weighted derivative vector along the flow."""
    weights_payload = _load_json(weights)
    payload = {"weights": weights_payload.get("weights", weights_payload),
               "poly": _resolve_poly(poly), "grid": grid.split(",")}
    _emit(client.post("/propagate", payload), out)


@main.command()
@click.option("--suite", default="all", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@_out_option
@_format_option
@click.pass_obj
def verify(client, suite, seed, tol, out, fmt):
    """Run the inequality suite over the fixture catalog."""
    result = client.post("/verify", {"suite": suite, "seed": seed, "tol": tol})
    _emit(result["records"], out)
    sys.exit(result["exit_code"])


@main.command()
@click.option("--matrix", required=True, help="Matrix JSON file.")
@click.option("--check", type=click.Choice(["value", "vdw"]), default="value",
              show_default=True)
@_out_option
@_format_option
@click.pass_obj
def perm(client, matrix, check, out, fmt):
    """Exact permanent; optionally the doubly stochastic bound checks."""
    payload = {"matrix": _load_json(matrix), "check": check}
    result = client.post("/perm", payload)
    exit_code = result.pop("exit_code", 0)
    if result.get("reports") is None:
        result.pop("reports", None)
    _emit(result, out)
    sys.exit(exit_code)


@main.command()
@click.option("--p", "p_ref", required=True)
@click.option("--q", "q_ref", required=True)
@click.option("--l", "weights", required=True, help="Comma-separated rationals summing to the degree.")
@click.option("--provenance", default="user", show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@_out_option
@_format_option
@click.pass_obj
def inner(client, p_ref, q_ref, weights, provenance, tol, out, fmt):
    """Inner-product lower bounds for two stable polynomials."""
    payload = {"p": _resolve_poly(p_ref), "q": _resolve_poly(q_ref),
               "weights": weights.split(","), "provenance": provenance, "tol": tol}
    result = client.post("/inner", payload)
    _emit(result["records"], out)
    sys.exit(result["exit_code"])


_FILE_ARGS = ("poly", "p", "q")


@main.command()
@click.option("--manifest", required=True, help="Manifest JSON file.")
@_out_option
@_format_option
@click.pass_obj
def run(client, manifest, out, fmt):
    """Execute a manifest of commands and merge their records."""
    payload = _load_json(manifest)
    commands = payload.get("commands", [])
    for command in commands:
        args = command.setdefault("args", {})
        for key in _FILE_ARGS:
            if isinstance(args.get(key), str):
                args[key] = _resolve_poly(args[key])
        if isinstance(args.get("matrix"), str):
            args["matrix"] = _load_json(args["matrix"])
    result = client.post("/run", {"manifest": payload})
    _emit(result["records"], out)
    sys.exit(result["exit_code"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Start the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
