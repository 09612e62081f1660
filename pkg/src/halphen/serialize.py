"""Lossless JSON forms of the exact objects.

Scalars are strings ("p/q" or "p/q+r/s*sqrt(d)"), polynomials are lists of
scalars lowest degree first, matrices are row-major lists of scalar rows.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .exactalg import ExactMatrix, Polynomial, Quad, format_poly, format_scalar, parse_scalar
from .monodromy import FrickeData, MatrixTuple
from .ode import INF, DiffOperator, LameEquation, HeunEquation, MoebiusMap, RiemannScheme
from .report import Report


def scalar_to_json(v) -> str:
    return format_scalar(v)


def scalar_from_json(s) -> Fraction | Quad:
    if isinstance(s, int):
        return Fraction(s)
    return parse_scalar(s)


def poly_to_json(p: Polynomial) -> list[str]:
    return [format_scalar(c) for c in p.coeffs]


def poly_from_json(data) -> Polynomial:
    return Polynomial([scalar_from_json(c) for c in data])


def operator_to_json(op: DiffOperator) -> dict:
    return {"order": op.order, "coeffs": [poly_to_json(c) for c in op.coeffs]}


def operator_from_json(data: dict) -> DiffOperator:
    op = DiffOperator([poly_from_json(c) for c in data["coeffs"]])
    if "order" in data and data["order"] != op.order:
        raise ValueError(f"order {data['order']} does not match {len(data['coeffs'])} coefficients")
    return op


def matrix_to_json(m: ExactMatrix) -> list[list[str]]:
    return [[format_scalar(v) for v in r] for r in m.rows]


def matrix_from_json(data) -> ExactMatrix:
    return ExactMatrix([[scalar_from_json(v) for v in r] for r in data])


def tuple_to_json(t: MatrixTuple) -> dict:
    return {"size": t.size, "matrices": [matrix_to_json(m) for m in t]}


def tuple_from_json(data, check: bool = True) -> MatrixTuple:
    ms = data["matrices"] if isinstance(data, dict) else data
    return MatrixTuple([matrix_from_json(m) for m in ms], check=check)


FRICKE_KEYS = ("a1", "a2", "a3", "a4", "x", "y", "z")


def fricke_to_json(f: FrickeData) -> dict:
    return {k: format_scalar(v) for k, v in zip(FRICKE_KEYS, f.astuple())}


def fricke_from_json(data) -> FrickeData:
    if isinstance(data, dict):
        return FrickeData(*(scalar_from_json(data[k]) for k in FRICKE_KEYS))
    return FrickeData(*(scalar_from_json(v) for v in data))


def scheme_to_json(s: RiemannScheme) -> list[dict]:
    return [{"point": e.label(), "count": e.count, "exponents": [format_scalar(x) for x in e.exponents]} for e in s.entries]


def to_jsonable(v):
    """Recursively convert exact objects to JSON values."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, (Fraction, Quad)):
        return format_scalar(v)
    if isinstance(v, float):
        return v
    if isinstance(v, Polynomial):
        return format_poly(v)
    if isinstance(v, DiffOperator):
        return operator_to_json(v)
    if isinstance(v, ExactMatrix):
        return matrix_to_json(v)
    if isinstance(v, MatrixTuple):
        return tuple_to_json(v)
    if isinstance(v, FrickeData):
        return fricke_to_json(v)
    if isinstance(v, RiemannScheme):
        return scheme_to_json(v)
    if isinstance(v, LameEquation):
        return {"p0": format_poly(v.p0), "nu": format_scalar(v.nu), "H": format_scalar(v.H)}
    if isinstance(v, HeunEquation):
        return {"p0": format_poly(v.p0), "ab": format_scalar(v.ab), "Ht": format_scalar(v.Ht), "lam": format_scalar(v.lam)}
    if isinstance(v, MoebiusMap):
        return str(v)
    if v is INF:
        return "infinity"
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = [to_jsonable(x) for x in v]
        return sorted(items, key=json.dumps) if isinstance(v, (set, frozenset)) else items
    return str(v)


def report_to_json(rep: Report) -> dict:
    return {
        "title": rep.title,
        "ok": rep.ok,
        "passed": rep.passed,
        "total": len(rep.checks),
        "checks": [{"name": c.name, "ok": c.ok, "detail": to_jsonable(c.detail)} for c in rep.checks],
        "summary": to_jsonable(rep.summary),
    }


def schema_path() -> Path:
    return Path(__file__).with_name("data") / "schema.json"


def load_schema() -> dict:
    with open(schema_path(), encoding="utf-8") as fh:
        return json.load(fh)
