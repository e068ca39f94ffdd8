"""The HTTP service: every computation behind one POST endpoint each.

The CLI is a thin client of this app (in-process by default); anything the
CLI can do, a remote client can do with the same JSON payloads.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..capacity import CapacityError, capacity_at, relative_infimum
from ..fixtures import catalog_by_name
from ..inequalities import verify_inner_product
from ..jsonio import matrix_from_dict, poly_from_dict, weights_from_dict
from ..logconcavity import slc_sampled
from ..permanent import ryser_permanent, vdw_bounds_check, EXACT_RYSER_LIMIT
from ..sequences import lc_trajectory_check, propagatable_check
from ..suite import derive_seed, exit_code_for, run_suite
from ..supports import d_convex_check, rado_check
from .schemas import (
    CapacityRequest,
    CapacityResponse,
    DconvexRequest,
    DconvexResponse,
    DerivativeRequest,
    DerivativeResponse,
    FixtureInfo,
    InnerRequest,
    PermRequest,
    PermResponse,
    PolynomialIn,
    PropagateRequest,
    PropagateResponse,
    RadoRequest,
    RadoResponse,
    ReportsResponse,
    RunRequest,
    SlcRequest,
    SlcResponse,
    VerifyRequest,
)

app = FastAPI(
    title="logcap",
    version=__version__,
    description="Capacity, mixed derivatives and log-concavity checks "
                "for polynomials with nonnegative coefficients.",
)


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def _poly(payload: PolynomialIn):
    try:
        return poly_from_dict(payload.payload())
    except ValueError as exc:
        raise _bad_request(exc)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/fixtures", response_model=list[FixtureInfo])
def list_fixtures() -> list[FixtureInfo]:
    return [FixtureInfo(name=f.name, provenance=f.provenance,
                        construction=f.construction, hstable=f.hstable)
            for f in catalog_by_name().values()]


@app.get("/fixtures/{name}")
def get_fixture(name: str) -> dict:
    try:
        return catalog_by_name()[name].to_dict()
    except KeyError:
        raise HTTPException(status_code=404, detail=f"unknown fixture {name!r}")


def _capacity_impl(request: CapacityRequest) -> CapacityResponse:
    p = _poly(request.poly)
    target = request.target if request.target is not None else [1] * p.num_vars
    try:
        weights = [Fraction(str(v)) for v in target]
        if request.scaled:
            result = capacity_at(p, weights, tol=request.tol)
        else:
            result = relative_infimum(p, weights, tol=request.tol)
    except (ValueError, ZeroDivisionError) as exc:
        raise _bad_request(exc)
    except CapacityError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return CapacityResponse(**result.to_dict())


@app.post("/cap", response_model=CapacityResponse)
def cap(request: CapacityRequest) -> CapacityResponse:
    """Capacity with the all-ones target (or an explicit one)."""
    return _capacity_impl(request)


@app.post("/cfr", response_model=CapacityResponse)
def cfr(request: CapacityRequest) -> CapacityResponse:
    """Scaled capacity at a general exponent target."""
    if request.target is None:
        raise HTTPException(status_code=400, detail="cfr needs a target")
    return _capacity_impl(request)


@app.post("/der", response_model=DerivativeResponse)
def der(request: DerivativeRequest) -> DerivativeResponse:
    p = _poly(request.poly)
    try:
        value = p.der_at_zero(tuple(request.target))
    except ValueError as exc:
        raise _bad_request(exc)
    return DerivativeResponse(value=str(value), float_value=float(value),
                              in_support=tuple(request.target) in p.terms)


@app.post("/slc", response_model=SlcResponse)
def slc(request: SlcRequest) -> SlcResponse:
    p = _poly(request.poly)
    try:
        verdict = slc_sampled(p, samples=request.samples, seed=request.seed)
    except ValueError as exc:
        raise _bad_request(exc)
    return SlcResponse(**verdict.to_dict())


@app.post("/dconvex", response_model=DconvexResponse)
def dconvex(request: DconvexRequest) -> DconvexResponse:
    p = _poly(request.poly)
    try:
        result = d_convex_check(p)
    except ValueError as exc:
        raise _bad_request(exc)
    return DconvexResponse(**result.to_dict())


@app.post("/rado", response_model=RadoResponse)
def rado(request: RadoRequest) -> RadoResponse:
    p = _poly(request.poly)
    try:
        result = rado_check(p)
    except ValueError as exc:
        raise _bad_request(exc)
    return RadoResponse(**result.to_dict())


@app.post("/propagate", response_model=PropagateResponse)
def propagate(request: PropagateRequest) -> PropagateResponse:
    p = _poly(request.poly)
    try:
        weights = weights_from_dict({"weights": [str(v) for v in request.weights]})
        grid = [Fraction(str(v)) for v in request.grid]
        report = lc_trajectory_check(weights, p, grid)
    except (ValueError, ZeroDivisionError) as exc:
        raise _bad_request(exc)
    payload = report.to_dict()
    return PropagateResponse(propagatable=propagatable_check(weights), **payload)


@app.post("/perm", response_model=PermResponse)
def perm(request: PermRequest) -> PermResponse:
    try:
        a = matrix_from_dict(request.matrix.payload())
        value = ryser_permanent(a, exact=a.n <= EXACT_RYSER_LIMIT)
    except ValueError as exc:
        raise _bad_request(exc)
    if request.check == "vdw":
        reports = [r.to_dict() for r in vdw_bounds_check(a)]
        return PermResponse(permanent=str(value), float_value=float(value),
                            reports=reports, exit_code=exit_code_for(reports))
    return PermResponse(permanent=str(value), float_value=float(value))


@app.post("/inner", response_model=ReportsResponse)
def inner(request: InnerRequest) -> ReportsResponse:
    p = _poly(request.p)
    q = _poly(request.q)
    try:
        weights = [Fraction(str(v)) for v in request.weights]
        reports = [r.to_dict() for r in verify_inner_product(
            p, q, weights, provenance=request.provenance, tol=request.tol)]
    except (ValueError, ZeroDivisionError) as exc:
        raise _bad_request(exc)
    return ReportsResponse(records=reports, exit_code=exit_code_for(reports))


@app.post("/verify", response_model=ReportsResponse)
def verify(request: VerifyRequest) -> ReportsResponse:
    try:
        records = run_suite(request.suite, seed=request.seed, tol=request.tol)
    except ValueError as exc:
        raise _bad_request(exc)
    return ReportsResponse(records=records, exit_code=exit_code_for(records))


_SAMPLED_COMMANDS = {"slc", "verify"}


@app.post("/run", response_model=ReportsResponse)
def run(request: RunRequest) -> ReportsResponse:
    """Execute manifest commands in order and merge their records."""
    manifest = request.manifest
    if manifest.seed is None and any(c.command in _SAMPLED_COMMANDS
                                     for c in manifest.commands):
        raise HTTPException(status_code=400,
                            detail="manifest needs a seed: sampled commands present")
    records: list[dict] = []
    for index, command in enumerate(manifest.commands):
        args = dict(command.args)
        if manifest.tol is not None:
            args.setdefault("tol", manifest.tol)
        if command.command in _SAMPLED_COMMANDS and "seed" not in args:
            args["seed"] = derive_seed(manifest.seed, index)
        try:
            records.extend(_dispatch(command.command, args, index))
        except HTTPException as exc:
            raise HTTPException(status_code=exc.status_code,
                                detail=f"command[{index}] {command.command}: {exc.detail}")
    return ReportsResponse(records=records, exit_code=exit_code_for(records))


def _dispatch(name: str, args: dict, index: int) -> list[dict]:
    def tag(kind: str, payload: dict) -> dict:
        return {"command": name, "index": index, "type": kind, **payload}

    if name in ("cap", "cfr"):
        response = _capacity_impl(CapacityRequest(**args))
        return [tag("capacity", response.model_dump())]
    if name == "der":
        response = der(DerivativeRequest(**args))
        return [tag("derivative", response.model_dump())]
    if name == "slc":
        response = slc(SlcRequest(**args))
        return [tag("slc", response.model_dump())]
    if name == "dconvex":
        response = dconvex(DconvexRequest(**args))
        return [tag("dconvex", response.model_dump())]
    if name == "rado":
        response = rado(RadoRequest(**args))
        return [tag("rado", response.model_dump())]
    if name == "propagate":
        response = propagate(PropagateRequest(**args))
        return [tag("trajectory", response.model_dump())]
    if name == "perm":
        response = perm(PermRequest(**args))
        payload = response.model_dump()
        reports = payload.pop("reports", None) or []
        return [tag("permanent", payload)] + [tag("bound", r) for r in reports]
    if name == "inner":
        response = inner(InnerRequest(**args))
        return [tag("bound", r) for r in response.records]
    if name == "verify":
        response = verify(VerifyRequest(**args))
        return [tag("bound", r) for r in response.records]
    raise HTTPException(status_code=400, detail=f"unknown command {name!r}")
