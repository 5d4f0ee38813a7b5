"""JSON and CSV wire formats for manuals, weights, frames, parameters and counts."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

import numpy as np

from .estimation import GENERATOR, CountTable, FitResult, GoodnessOfFit
from .ftt import BiasParams, FTTParams, predict_dichotomies
from .manual import PROBE_TYPES, Manual, validate_manual
from .spin import DensityOperator, Frame, frame_from_basis
from .weights import WeightFunction, validate_weight

__all__ = [
    "FormatError",
    "manual_from_json",
    "manual_to_json",
    "identification_from_json",
    "weight_from_json",
    "weight_to_json",
    "complex_to_json",
    "complex_from_json",
    "frame_to_json",
    "frame_from_json",
    "density_to_json",
    "density_from_json",
    "params_from_json",
    "params_to_json",
    "counts_to_csv",
    "counts_from_csv",
    "fit_to_json",
    "fit_from_json",
    "gof_to_json",
]


class FormatError(ValueError):
    """Malformed input (a usage error, not a domain finding)."""


def _require(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise FormatError(f"{key!r} has the wrong type")
    return val


def manual_from_json(obj: Any) -> Manual:
    ops = _require(obj, "operations", list)
    if not all(isinstance(op, list) and all(isinstance(x, str) for x in op) for op in ops):
        raise FormatError("operations must be lists of strings")
    return validate_manual(ops)


def manual_to_json(manual: Manual) -> dict:
    return manual.to_dict()


def identification_from_json(obj: Any) -> dict[str, str]:
    ident = _require(obj, "identify", dict)
    if not all(isinstance(k, str) and isinstance(v, str) for k, v in ident.items()):
        raise FormatError("identify must map strings to strings")
    return dict(ident)


def _number(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise FormatError(f"expected a number, got {v!r}")
    return float(v)


def weight_values_from_json(obj: Any) -> tuple[Manual, dict[str, float]]:
    manual = manual_from_json(_require(obj, "manual", dict))
    weights = _require(obj, "weights", dict)
    return manual, {k: _number(v) for k, v in weights.items()}


def weight_from_json(obj: Any) -> WeightFunction:
    manual, values = weight_values_from_json(obj)
    return validate_weight(manual, values)


def weight_to_json(w: WeightFunction) -> dict:
    return w.to_dict()


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(pair) -> complex:
    if not (isinstance(pair, list) and len(pair) == 2):
        raise FormatError("complex numbers are [re, im] pairs")
    return complex(_number(pair[0]), _number(pair[1]))


def frame_to_json(frame: Frame) -> list:
    """Unit generating vectors of a rank-one frame."""
    out = []
    for p in frame:
        if p.rank != 1:
            raise FormatError("only rank-one frames serialize as vectors")
        vals, vecs = np.linalg.eigh(p.matrix)
        v = vecs[:, -1]
        out.append([complex_to_json(c) for c in v])
    return out


def frame_from_json(obj: Any) -> Frame:
    if not (isinstance(obj, list) and len(obj) == 3):
        raise FormatError("a frame is a list of three vectors")
    vecs = []
    for v in obj:
        if not (isinstance(v, list) and len(v) == 3):
            raise FormatError("vectors have three complex components")
        vecs.append([complex_from_json(c) for c in v])
    return frame_from_basis(vecs)


def density_to_json(rho: DensityOperator | np.ndarray) -> list:
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    return [[complex_to_json(c) for c in row] for row in m]


def density_matrix_from_json(obj: Any) -> np.ndarray:
    if not (isinstance(obj, list) and len(obj) == 3 and all(isinstance(r, list) and len(r) == 3 for r in obj)):
        raise FormatError("a density operator is a 3x3 array of [re, im]")
    return np.array([[complex_from_json(c) for c in row] for row in obj])


def density_from_json(obj: Any) -> DensityOperator:
    return DensityOperator(density_matrix_from_json(obj))


def params_from_json(obj: Any) -> tuple[FTTParams, BiasParams | None]:
    if not isinstance(obj, dict):
        raise FormatError("params must be a JSON object")
    try:
        params = FTTParams(*(_number(obj[k]) for k in ("iota_t", "sigma_t", "nu_r", "sigma_r")))
        bias = None
        if "bias" in obj and obj["bias"] is not None:
            b = obj["bias"]
            bias = BiasParams(*(_number(b[k]) for k in ("b_T", "b_R", "b_U")))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"missing parameter {exc}") from None
    return params, bias


def params_to_json(params: FTTParams, bias: BiasParams | None = None) -> dict:
    out: dict[str, Any] = dict(zip(("iota_t", "sigma_t", "nu_r", "sigma_r"), params.as_tuple()))
    if bias is not None:
        out["bias"] = dict(zip(("b_T", "b_R", "b_U"), bias.as_tuple()))
    return out


COUNTS_HEADER = ["discrimination", "probe_type", "yes", "total"]


def counts_to_csv(counts: CountTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COUNTS_HEADER)
    for row in counts.rows():
        w.writerow(row)
    return buf.getvalue()


def counts_from_csv(text: str) -> CountTable:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != COUNTS_HEADER:
        raise FormatError(f"header must be {','.join(COUNTS_HEADER)}")
    body = [r for r in rows[1:] if r]
    if len(body) != 9:
        raise FormatError("expected nine data rows")
    yes = np.full((3, 3), -1, dtype=np.int64)
    total = np.full((3, 3), -1, dtype=np.int64)
    for r in body:
        if len(r) != 4:
            raise FormatError(f"bad row {r!r}")
        y, z = r[0].strip(), r[1].strip()
        if y not in PROBE_TYPES or z not in PROBE_TYPES:
            raise FormatError(f"unknown discrimination/probe in {r!r}")
        i, j = PROBE_TYPES.index(y), PROBE_TYPES.index(z)
        if yes[i, j] >= 0:
            raise FormatError(f"duplicate cell {y},{z}")
        try:
            yes[i, j], total[i, j] = int(r[2]), int(r[3])
        except ValueError:
            raise FormatError(f"non-integer counts in {r!r}") from None
    try:
        return CountTable(yes, total)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _finite(x: float):
    return x if math.isfinite(x) else (None if math.isnan(x) else ("-inf" if x < 0 else "inf"))


def fit_to_json(result: FitResult) -> dict:
    return {
        "params": params_to_json(result.params, result.bias),
        "log_likelihood": _finite(result.log_likelihood),
        "converged": result.converged,
        "iterations": result.iterations,
        "predicted": result.predicted.to_dict(),
        "max_abs_residual": result.max_abs_residual,
        "flags": sorted(result.flags),
        "diagnostic": result.diagnostic,
        "options": dict(result.options),
        "generator": GENERATOR,
    }


def fit_from_json(obj: Any) -> FitResult:
    """Rebuild a FitResult from :func:`fit_to_json` output (predictions recomputed)."""
    params, bias = params_from_json(_require(obj, "params", dict))
    ll = obj.get("log_likelihood")
    ll = float("-inf") if ll == "-inf" else float(ll) if ll is not None else float("nan")
    pred = predict_dichotomies(params, bias)
    return FitResult(
        params=params,
        bias=bias,
        log_likelihood=ll,
        converged=bool(obj.get("converged", False)),
        iterations=int(obj.get("iterations", 0)),
        predicted=pred,
        max_abs_residual=float(obj.get("max_abs_residual", float("nan"))),
        flags=frozenset(obj.get("flags", ())),
        diagnostic=obj.get("diagnostic"),
        options=dict(obj.get("options", {})),
    )


def gof_to_json(report: GoodnessOfFit) -> dict:
    return {
        "cells": list(report.cells()),
        "max_residual": report.max_residual,
        "g2": _finite(report.g2),
        "dof": report.dof,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
