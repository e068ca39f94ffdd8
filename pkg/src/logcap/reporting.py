"""Report records and canonical serialization.

Reports must be byte-identical across runs with the same inputs and seed,
so serialization always sorts keys, uses fixed separators, and relies on
Python's shortest round-trip float repr.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"

DEFAULT_VIOLATION_THRESHOLD = 1e-7


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(_plain(v) for v in value)
    return value


def canonical_json(payload: Any) -> str:
    return json.dumps(_plain(payload), sort_keys=True, separators=(",", ":"))


def digest(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()[:16]


def classify(left: float, right: float, threshold: float = DEFAULT_VIOLATION_THRESHOLD) -> str:
    """holds / violated for the claim left >= right, with a relative noise floor."""
    slack = left - right
    scale = max(1.0, abs(left), abs(right))
    return VIOLATED if slack < -threshold * scale else HOLDS


@dataclass(frozen=True)
class BoundReport:
    """One verified inequality: the claim is left >= right."""

    inequality: str
    left: float
    right: float
    verdict: str
    guaranteed: bool
    inputs_digest: str
    constants: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.left - self.right

    def to_dict(self) -> dict:
        return {
            "inequality": self.inequality,
            "left": self.left,
            "right": self.right,
            "slack": self.slack,
            "verdict": self.verdict,
            "guaranteed": self.guaranteed,
            "inputs_digest": self.inputs_digest,
            "constants": _plain(self.constants),
            "details": _plain(self.details),
        }


def make_report(inequality: str, left: float, right: float, *, guaranteed: bool,
                inputs: Any, constants: dict | None = None, details: dict | None = None,
                threshold: float = DEFAULT_VIOLATION_THRESHOLD,
                applicable: bool = True) -> BoundReport:
    verdict = classify(left, right, threshold) if applicable else NOT_APPLICABLE
    return BoundReport(
        inequality=inequality,
        left=float(left),
        right=float(right),
        verdict=verdict,
        guaranteed=guaranteed,
        inputs_digest=digest(inputs),
        constants=constants or {},
        details=details or {},
    )
