"""Fuzzy Trace Theory forward model for recognition memory.

Four covert judgment probabilities drive overt responses:

    iota_t   identity judgment for a target
    sigma_t  similarity judgment for a target, given no identity judgment
    nu_r     nonidentity judgment for a related distractor
    sigma_r  similarity judgment for a related distractor, given no nonidentity

In a Y vs Y' discrimination a similarity judgment without verbatim support is
accepted as Y for both Y = T and Y = R. That shared term is counted twice when
the dichotomy outcomes are identified with the TRU outcomes, which is the
source of the interference computed here.

Bias parameters (b_T, b_R, b_U) are an extension: when no judgment fires the
subject answers "Y" with probability b_Y. The default (0, 0, 1) is the
bias-free model.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from typing import Callable, Mapping

import numpy as np

from .errors import ParamOutOfRange
from .manual import PROBE_TYPES, Manual, dichotomy_manual, identify_outcomes, validate_manual
from .weights import WeightFunction, validate_weight

__all__ = [
    "FTTParams",
    "BiasParams",
    "DEFAULT_BIAS",
    "DichotomyPredictions",
    "predict_dichotomies",
    "predict_array",
    "tru_sums",
    "TRURule",
    "similarity_as_related",
    "split_similarity",
    "predict_tru",
    "packing_excess",
    "interference_excess",
    "canonical_states",
    "dichotomy_values",
    "combined_memory_manual",
]


def _check_unit(obj):
    for f in fields(obj):
        v = getattr(obj, f.name)
        if not (0.0 <= v <= 1.0):
            raise ParamOutOfRange(f"{f.name}={v!r} outside [0, 1]")


@dataclass(frozen=True)
class FTTParams:
    iota_t: float
    sigma_t: float
    nu_r: float
    sigma_r: float

    def __post_init__(self):
        _check_unit(self)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return astuple(self)

    @classmethod
    def from_mapping(cls, d: Mapping) -> "FTTParams":
        return cls(*(float(d[f.name]) for f in fields(cls)))


@dataclass(frozen=True)
class BiasParams:
    b_T: float = 0.0
    b_R: float = 0.0
    b_U: float = 1.0

    def __post_init__(self):
        _check_unit(self)

    def as_tuple(self) -> tuple[float, float, float]:
        return astuple(self)

    @classmethod
    def from_mapping(cls, d: Mapping) -> "BiasParams":
        return cls(*(float(d[f.name]) for f in fields(cls)))


DEFAULT_BIAS = BiasParams()


@dataclass(frozen=True)
class DichotomyPredictions:
    """P(respond "Y" | probe type Z) in the Y vs Y' discrimination.

    ``table[i, j]`` has Y = PROBE_TYPES[i] and Z = PROBE_TYPES[j].
    """

    table: np.ndarray

    def __call__(self, y: str, z: str) -> float:
        return float(self.table[PROBE_TYPES.index(y), PROBE_TYPES.index(z)])

    def to_dict(self) -> dict[str, float]:
        return {f"{y}_{z}": self(y, z) for y in PROBE_TYPES for z in PROBE_TYPES}


def predict_array(theta):
    """3x3 prediction table from a flat parameter vector.

    ``theta`` is (iota_t, sigma_t, nu_r, sigma_r) optionally followed by
    (b_T, b_R, b_U). Pure arithmetic so it also accepts complex input, which
    the estimator uses for complex-step derivatives.
    """
    it, st, nr, sr = theta[:4]
    bt, br, bu = theta[4:7] if len(theta) > 4 else (0.0, 0.0, 1.0)
    # probability mass of each covert branch, per probe type
    t_gist = (1 - it) * st
    t_none = (1 - it) * (1 - st)
    r_gist = (1 - nr) * sr
    r_none = (1 - nr) * (1 - sr)
    table = [
        [it + t_gist + t_none * bt, r_gist + r_none * bt, bt],
        [t_gist + t_none * br, nr + r_gist + r_none * br, br],
        [t_none * bu, r_none * bu, bu],
    ]
    dtype = complex if any(isinstance(v, complex) for row in table for v in row) else float
    return np.array(table, dtype=dtype)


def predict_dichotomies(params: FTTParams, bias: BiasParams | None = None) -> DichotomyPredictions:
    bias = bias or DEFAULT_BIAS
    t = predict_array(params.as_tuple() + bias.as_tuple())
    t.setflags(write=False)
    return DichotomyPredictions(t)


def tru_sums(params: FTTParams) -> tuple[float, float, float]:
    """Per-probe-type totals of the three dichotomy "yes" rates (bias-free model)."""
    t = predict_dichotomies(params).table
    return tuple(float(s) for s in t.sum(axis=0))


TRURule = Callable[[FTTParams], dict[str, tuple[float, float, float]]]


def similarity_as_related(params: FTTParams) -> dict[str, tuple[float, float, float]]:
    """Three-way choice where similarity without verbatim support answers "R"."""
    it, st, nr, sr = params.as_tuple()
    return {
        "T": (it, (1 - it) * st, (1 - it) * (1 - st)),
        "R": (0.0, nr + (1 - nr) * sr, (1 - nr) * (1 - sr)),
        "U": (0.0, 0.0, 1.0),
    }


def split_similarity(share_t: float) -> TRURule:
    """Rule sending a fraction ``share_t`` of similarity-only responses to "T"."""
    if not 0.0 <= share_t <= 1.0:
        raise ParamOutOfRange(f"share_t={share_t!r} outside [0, 1]")

    def rule(params: FTTParams):
        it, st, nr, sr = params.as_tuple()
        tg, rg = (1 - it) * st, (1 - nr) * sr
        return {
            "T": (it + share_t * tg, (1 - share_t) * tg, (1 - it) * (1 - st)),
            "R": (share_t * rg, nr + (1 - share_t) * rg, (1 - nr) * (1 - sr)),
            "U": (0.0, 0.0, 1.0),
        }

    return rule


def predict_tru(
    params: FTTParams, rule: TRURule = similarity_as_related
) -> dict[str, tuple[float, float, float]]:
    """(P(T), P(R), P(U)) in the three-way classification, keyed by probe type."""
    return rule(params)


def packing_excess(
    params: FTTParams, y: str, z: str, rule: TRURule = similarity_as_related
) -> float:
    """P_TRU(not Y | Z) minus P(Y' | Z) in the dichotomy where not-Y is packed.

    Summed over Y this equals the probe type's TRU sum minus one, whatever the
    three-way rule.
    """
    k = PROBE_TYPES.index(y)
    tru = predict_tru(params, rule)[z]
    unpacked = sum(p for i, p in enumerate(tru) if i != k)
    packed = 1 - predict_dichotomies(params)(y, z)
    return unpacked - packed


def interference_excess(params: FTTParams) -> tuple[float, float]:
    """Excess of the event {R, U} over the packed outcome T', for targets and
    related distractors: (1 - iota_t) sigma_t and (1 - nu_r) sigma_r."""
    return packing_excess(params, "T", "T"), packing_excess(params, "T", "R")


def dichotomy_values(pred: DichotomyPredictions) -> dict[str, float]:
    """Outcome weights for the nine-dichotomy manual, complements filled in."""
    out = {}
    for z in PROBE_TYPES:
        for y in PROBE_TYPES:
            p = pred(y, z)
            out[f"{y}_{z}"] = p
            out[f"{y}'_{z}"] = 1 - p
    return out


def canonical_states() -> dict[str, WeightFunction]:
    """Perfect memory, no memory and gist-only memory on the dichotomy manual."""
    m = dichotomy_manual()
    points = {
        "omega_p": FTTParams(1, 1, 1, 1),
        "omega_0": FTTParams(0, 0, 0, 0),
        "omega_g": FTTParams(0, 1, 0, 1),
    }
    return {k: validate_weight(m, dichotomy_values(predict_dichotomies(p))) for k, p in points.items()}


def combined_memory_manual() -> Manual:
    """Nine dichotomies plus the three TRU operations, with like-labelled
    outcomes identified (T in TRU is the same outcome as T in T vs T')."""
    tru = [[f"TRU:{y}_{z}" for y in PROBE_TYPES] for z in PROBE_TYPES]
    base = validate_manual(list(dichotomy_manual().operations) + tru)
    ident = {f"TRU:{y}_{z}": f"{y}_{z}" for y in PROBE_TYPES for z in PROBE_TYPES}
    return identify_outcomes(base, ident)
