"""JSON wire formats for polynomials, matrices, and weight sequences.

Polynomial: {"vars": m, "terms": [{"exp": [int, ...], "coef": "p/q"}]}
Matrix:     {"n": k, "rows": [["p/q", ...], ...]}
Weights:    {"weights": ["p/q", ...]}

Coefficients are decimal strings, "p/q" strings, or integers; floats are
rejected to keep every value exact.  Parsers reject negative coefficients
and negative exponents.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .permanent import NonnegMatrix
from .polynomials import ExpLinearFixture, SparsePoly
from .sequences import WeightSequence


def _parse_coef(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{where}: coefficients must be exact (int or string), got {value!r}")
    if isinstance(value, int):
        result = Fraction(value)
    elif isinstance(value, str):
        try:
            result = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{where}: cannot parse rational {value!r}") from exc
    else:
        raise ValueError(f"{where}: unsupported coefficient type {type(value).__name__}")
    return result


def poly_to_dict(p: SparsePoly) -> dict:
    return {"vars": p.num_vars,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in p.terms_sorted()]}


def poly_from_dict(payload: dict) -> SparsePoly:
    if not isinstance(payload, dict) or "vars" not in payload or "terms" not in payload:
        raise ValueError("polynomial JSON needs 'vars' and 'terms'")
    num_vars = payload["vars"]
    if not isinstance(num_vars, int) or num_vars < 1:
        raise ValueError("'vars' must be a positive integer")
    terms: dict[tuple[int, ...], Fraction] = {}
    for k, term in enumerate(payload["terms"]):
        where = f"terms[{k}]"
        exp = term.get("exp")
        if not isinstance(exp, list) or len(exp) != num_vars:
            raise ValueError(f"{where}: 'exp' must be a list of {num_vars} integers")
        if any(not isinstance(e, int) or isinstance(e, bool) for e in exp):
            raise ValueError(f"{where}: exponents must be integers")
        if any(e < 0 for e in exp):
            raise ValueError(f"{where}: negative exponent")
        coef = _parse_coef(term.get("coef"), where)
        if coef < 0:
            raise ValueError(f"{where}: negative coefficient")
        key = tuple(exp)
        terms[key] = terms.get(key, Fraction(0)) + coef
    return SparsePoly(num_vars, terms)


def exp_linear_to_dict(f: ExpLinearFixture) -> dict:
    return {"exp_linear": [str(a) for a in f.coefficients]}


def exp_linear_from_dict(payload: dict) -> ExpLinearFixture:
    coeffs = payload.get("exp_linear")
    if not isinstance(coeffs, list) or not coeffs:
        raise ValueError("'exp_linear' must be a nonempty list of positive rationals")
    return ExpLinearFixture(tuple(_parse_coef(v, "exp_linear") for v in coeffs))


def matrix_to_dict(a: NonnegMatrix) -> dict:
    return a.to_dict()


def matrix_from_dict(payload: dict) -> NonnegMatrix:
    if not isinstance(payload, dict) or "rows" not in payload:
        raise ValueError("matrix JSON needs 'rows'")
    rows = payload["rows"]
    n = payload.get("n", len(rows))
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, found {len(rows)}")
    parsed = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"rows[{i}] has length {len(row)}, expected {n}")
        parsed.append(tuple(_parse_coef(v, f"rows[{i}]") for v in row))
        if any(v < 0 for v in parsed[-1]):
            raise ValueError(f"rows[{i}]: negative entry")
    return NonnegMatrix(tuple(parsed))


def weights_to_dict(b: WeightSequence) -> dict:
    return {"weights": [str(v) for v in b.weights]}


def weights_from_dict(payload: dict) -> WeightSequence:
    values = payload.get("weights")
    if not isinstance(values, list) or not values:
        raise ValueError("'weights' must be a nonempty list of positive rationals")
    return WeightSequence(tuple(_parse_coef(v, "weights") for v in values))


def parse_rational_csv(text: str) -> list[Fraction]:
    """Comma-separated rationals like "1,1,2" or "0,1/2,1"."""
    items = [chunk.strip() for chunk in text.split(",") if chunk.strip()]
    if not items:
        raise ValueError("empty list")
    return [_parse_coef(item, "list") for item in items]
