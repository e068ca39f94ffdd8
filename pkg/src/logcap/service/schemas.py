"""Pydantic request/response models for the HTTP service.

These mirror the JSON wire formats: exact rationals travel as strings
(or ints), never floats.  Floats appear only in computed outputs.
"""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

Rational = Union[int, str]


class TermIn(BaseModel):
    exp: list[int]
    coef: Rational


class PolynomialIn(BaseModel):
    vars: int = Field(ge=1)
    terms: list[TermIn]

    def payload(self) -> dict:
        return {"vars": self.vars,
                "terms": [{"exp": t.exp, "coef": t.coef} for t in self.terms]}


class MatrixIn(BaseModel):
    n: Optional[int] = None
    rows: list[list[Rational]]

    def payload(self) -> dict:
        return {"n": self.n if self.n is not None else len(self.rows), "rows": self.rows}


class CapacityRequest(BaseModel):
    poly: PolynomialIn
    target: Optional[list[Rational]] = None
    tol: float = Field(default=1e-8, gt=0)
    scaled: bool = True


class CapacityResponse(BaseModel):
    value: float
    log_value: float
    minimizer: Optional[list[float]]
    status: str
    iterations: int
    gradient_norm: float


class DerivativeRequest(BaseModel):
    poly: PolynomialIn
    target: list[int]

    @field_validator("target")
    @classmethod
    def _nonnegative(cls, v):
        if any(e < 0 for e in v):
            raise ValueError("target entries must be nonnegative")
        return v


class DerivativeResponse(BaseModel):
    value: str
    float_value: float
    in_support: bool


class SlcRequest(BaseModel):
    poly: PolynomialIn
    samples: int = Field(default=200, ge=1)
    seed: int = 0


class SlcResponse(BaseModel):
    status: str
    witness: Optional[dict]
    samples: int
    seed: int
    method: str
    orders_checked: int


class DconvexRequest(BaseModel):
    poly: PolynomialIn


class DconvexResponse(BaseModel):
    d_convex: bool
    counterexample: Optional[list[int]]
    candidates_checked: int


class RadoRequest(BaseModel):
    poly: PolynomialIn


class RadoResponse(BaseModel):
    holds: bool
    degree: int
    vectors_checked: int
    violations: list[dict]


class PropagateRequest(BaseModel):
    weights: list[Rational]
    poly: PolynomialIn
    grid: list[Rational]


class PropagateResponse(BaseModel):
    propagatable: bool
    precondition_ok: bool
    grid: list[str]
    in_cone: list[bool]
    first_exit: Optional[str]


class PermRequest(BaseModel):
    matrix: MatrixIn
    check: Literal["value", "vdw"] = "value"


class PermResponse(BaseModel):
    permanent: str
    float_value: float
    reports: Optional[list[dict]] = None
    exit_code: int = 0


class InnerRequest(BaseModel):
    p: PolynomialIn
    q: PolynomialIn
    weights: list[Rational]
    provenance: str = "user"
    tol: float = Field(default=1e-8, gt=0)


class VerifyRequest(BaseModel):
    suite: str = "all"
    seed: int = 0
    tol: float = Field(default=1e-8, gt=0)


class ReportsResponse(BaseModel):
    records: list[dict]
    exit_code: int


class ManifestCommand(BaseModel):
    command: str
    args: dict[str, Any] = Field(default_factory=dict)


class RunManifest(BaseModel):
    """A batch of commands with one master seed for all sampled operations."""

    seed: Optional[int] = None
    tol: Optional[float] = None
    commands: list[ManifestCommand] = Field(default_factory=list)


class RunRequest(BaseModel):
    manifest: RunManifest


class FixtureInfo(BaseModel):
    name: str
    provenance: str
    construction: str
    hstable: bool
