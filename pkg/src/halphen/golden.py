"""Access to the shipped reference data (JSON files under ``data/``).

``HALPHEN_DATA_DIR`` points the loader at another directory with files of
the same names.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .exactalg import ExactMatrix, Polynomial
from .parse import evaluate, parse_poly, parse_value

DATA_FILES = ("tables.json", "belyi.json", "tuples.json")


def data_dir() -> Path:
    env = os.environ.get("HALPHEN_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).with_name("data")


def load(name: str) -> dict:
    path = data_dir() / name
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


@dataclass(frozen=True)
class TableRow:
    row: int
    heun: "object"
    lame: "object"


def table_rows() -> list[TableRow]:
    from .ode import HeunEquation, LameEquation

    d = load("tables.json")
    lame_by_row = {r["row"]: r for r in d["lame"]}
    out = []
    for h in d["heun"]:
        p0 = parse_poly(h["p0"])
        heun = HeunEquation(p0, parse_value(h["ab"]), parse_value(h["Ht"]))
        lr = lame_by_row[h["row"]]
        # displayed zeroth coefficient is -(nu*x - H)
        lame = LameEquation(parse_poly(lr["p0"]), -parse_value(lr["linear"]), parse_value(lr["constant"]))
        out.append(TableRow(h["row"], heun, lame))
    return out


def belyi_rows() -> dict[str, dict]:
    return {r["id"]: r for r in load("belyi.json")["rows"]}


def matrix(rows) -> ExactMatrix:
    return ExactMatrix([[Fraction(v) if not isinstance(v, str) else parse_value(v) for v in r] for r in rows])


def golden_tuples() -> list[dict]:
    return load("tuples.json")["tuples"]


def tuple_families() -> list[dict]:
    return load("tuples.json")["families"]


def conjugate_pairs() -> list[tuple[str, str]]:
    return [tuple(p) for p in load("tuples.json")["conjugate_pairs"]]


def family_matrices(family: dict, env: dict) -> list[ExactMatrix]:
    return [ExactMatrix([[evaluate(e, env) for e in r] for r in m]) for m in family["matrices"]]
