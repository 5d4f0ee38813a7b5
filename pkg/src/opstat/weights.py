"""Weight functions on manuals and the relations built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import ManualMismatch, MissingOutcome, OperationSumViolation, ValueOutOfRange
from .manual import Event, Manual

__all__ = [
    "SUM_TOL",
    "WeightFunction",
    "UnsupportedDimension",
    "sum_violations",
    "validate_weight",
    "weight_space_dof",
    "common_zero_set",
    "is_superposition",
    "event_probability",
]

SUM_TOL = 1e-9


@dataclass(frozen=True)
class WeightFunction:
    values: Mapping[str, float]
    manual: Manual

    def __getitem__(self, outcome: str) -> float:
        return self.values[outcome]

    def zero_set(self) -> frozenset[str]:
        return frozenset(x for x, v in self.values.items() if v == 0)

    def to_dict(self):
        return {"manual": self.manual.to_dict(), "weights": dict(self.values)}


@dataclass(frozen=True)
class UnsupportedDimension:
    reason: str
    shared_outcomes: tuple[str, ...] = ()


def _check_values(manual: Manual, values: Mapping[str, float]):
    for x in manual.outcomes:
        if x not in values:
            raise MissingOutcome(f"no weight for outcome {x!r}")
        v = float(values[x])
        if not (0.0 <= v <= 1.0):
            raise ValueOutOfRange(f"weight of {x!r} is {v!r}")


def sum_violations(manual: Manual, values: Mapping[str, float]) -> list[OperationSumViolation]:
    """Every operation whose weights miss 1 by more than SUM_TOL, in manual order."""
    out = []
    for i, op in enumerate(manual.operations):
        total = math.fsum(float(values[x]) for x in op)
        if abs(total - 1.0) > SUM_TOL:
            out.append(OperationSumViolation(i, op, total))
    return out


def validate_weight(manual: Manual, values: Mapping[str, float]) -> WeightFunction:
    _check_values(manual, values)
    violations = sum_violations(manual, values)
    if violations:
        raise violations[0]
    stored = MappingProxyType({x: float(values[x]) for x in manual.outcomes})
    return WeightFunction(stored, manual)


def weight_space_dof(manual: Manual) -> int | UnsupportedDimension:
    """Dimension of the weight space, for manuals whose operations share no outcome."""
    shared = tuple(x for x, ops in manual.outcome_index.items() if len(ops) > 1)
    if shared:
        return UnsupportedDimension("operations share outcomes", shared)
    return sum(len(op) - 1 for op in manual.operations)


def common_zero_set(manual: Manual, generators: Iterable[WeightFunction]) -> frozenset[str]:
    """Outcomes on which every generator vanishes (all outcomes for no generators)."""
    return frozenset(manual.outcomes).intersection(*(g.zero_set() for g in generators))


def is_superposition(
    manual: Manual, omega: WeightFunction, generators: Iterable[WeightFunction]
) -> bool:
    """True iff ``omega`` vanishes on every outcome where all generators vanish."""
    gens = list(generators)
    for w in [omega, *gens]:
        if not w.manual.same_as(manual):
            raise ManualMismatch("weights are defined on different manuals")
    return all(omega[x] == 0 for x in common_zero_set(manual, gens))


def event_probability(omega: WeightFunction, event: Event) -> float:
    return math.fsum(omega[x] for x in event.outcomes)
