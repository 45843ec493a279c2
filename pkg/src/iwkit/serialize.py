"""JSON wire formats.

Big integers travel as decimal strings so any JSON parser round-trips them.
Series: {"prime", "precision", "coeffs": [str, ...]}.
Modules: {"prime", "generators": [series | {"phi": c} | {"p_power": m}, ...]}.
Frobenius data: {"g", "prime", "matrix": [[str, ...], ...]}.
Scenarios: {"selmer": module, "mw_shape": [c, ...], "n_max", "expected"?}.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import InputError
from .growth import MWShape
from .logmatrix import FrobeniusData, MinorTable
from .modules import ElementaryModule, TowerReport
from .series import IwasawaSeries, phi


def series_to_dict(f: IwasawaSeries) -> dict:
    return {
        "prime": f.prime,
        "precision": f.precision,
        "coeffs": [str(c) for c in f.coeffs],
    }


def series_from_dict(d: dict, *, degree_cap: int | None = None,
                     precision: int | None = None) -> IwasawaSeries:
    try:
        prime = int(d["prime"])
        prec = int(d["precision"])
        coeffs = [int(c) for c in d["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad series object: {exc}") from exc
    if precision is not None:
        prec = min(prec, precision)
    cap = degree_cap if degree_cap is not None else len(coeffs) - 1
    return IwasawaSeries.make(prime, prec, coeffs, max(cap, len(coeffs) - 1))


def module_to_dict(m: ElementaryModule) -> dict:
    return {
        "prime": m.prime,
        "generators": [series_to_dict(g) for g in m.generators],
    }


def module_from_dict(d: dict, *, degree_cap: int | None = None,
                     precision: int = 24) -> ElementaryModule:
    try:
        prime = int(d["prime"])
        raw = d["generators"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad module object: {exc}") from exc
    gens = []
    for g in raw:
        if "phi" in g:
            gens.append(phi(int(g["phi"]), prime=prime, precision=precision,
                            degree_cap=degree_cap))
        elif "p_power" in g:
            gens.append(IwasawaSeries.constant(prime ** int(g["p_power"]), prime,
                                               precision, degree_cap or 0))
        else:
            gens.append(series_from_dict(g, degree_cap=degree_cap,
                                         precision=precision))
    return ElementaryModule(prime, tuple(gens))


def frobenius_to_dict(f: FrobeniusData) -> dict:
    return {
        "g": f.g,
        "prime": f.prime,
        "matrix": [[str(x.residue) for x in row] for row in f.c_p],
    }


def frobenius_from_dict(d: dict, *, precision: int = 24) -> FrobeniusData:
    try:
        g = int(d["g"])
        prime = int(d["prime"])
        rows = [[int(x) for x in row] for row in d["matrix"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad frobenius object: {exc}") from exc
    return FrobeniusData.from_int_rows(g, prime, precision, rows)


def minor_table_to_dict(t: MinorTable) -> dict:
    values = {}
    for (rows, cols), v in sorted(t.values.items()):
        key = ",".join(map(str, rows)) + "|" + ",".join(map(str, cols))
        values[key] = [str(c) for c in v.coeffs]
    return {
        "n": t.n,
        "g": t.g,
        "prime": t.prime,
        "precision": t.precision,
        "minors": values,
    }


def scenario_from_dict(d: dict, *, degree_cap: int | None = None,
                       precision: int = 24):
    try:
        selmer = module_from_dict(d["selmer"], degree_cap=degree_cap,
                                  precision=precision)
        shape = MWShape(tuple(int(c) for c in d.get("mw_shape", [])))
        n_max = int(d.get("n_max", 4))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad scenario object: {exc}") from exc
    expected = d.get("expected")
    if expected is not None:
        expected = [int(x) for x in expected]
    return selmer, shape, n_max, expected


def tower_report_to_dict(report: TowerReport) -> dict:
    return {
        "prime": report.prime,
        "lambda": report.lambda_invariant,
        "mu": report.mu_invariant,
        "stabilization_level": report.stabilization_level,
        "n0": report.n0,
        "min_valid_n0": report.min_valid_n0,
        "non_finite_levels": list(report.non_finite_levels),
        "levels": [
            {
                "n": lv.n,
                "zp_rank": lv.zp_rank,
                "finite_length": lv.finite_length,
                "nabla": lv.nabla,
                "predicted": lv.predicted,
                "match": lv.match,
            }
            for lv in report.levels
        ],
    }


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
