"""Finite manuals (test spaces): operations over shared outcomes, events,
orthogonality and the two coarsening constructions.

A manual is an immutable collection of operations. Each operation is a tuple of
distinct outcome identifiers; operations may share outcomes, which is how
experiments get connected. Any subset of an operation is an event.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateOutcomeInOperation,
    EmptyOperation,
    MergeCollapsesOperation,
    NewIdCollision,
    PackedNotSubset,
    RedundantOperation,
    UnknownOutcome,
)

__all__ = [
    "Manual",
    "Event",
    "validate_manual",
    "is_event",
    "are_orthogonal",
    "local_complements",
    "coarsen_pack",
    "identify_outcomes",
    "PROBE_TYPES",
    "tru_manual",
    "dichotomy_manual",
]

PROBE_TYPES = ("T", "R", "U")


def _build_index(operations):
    index: dict[str, set[int]] = {}
    for i, op in enumerate(operations):
        for x in op:
            index.setdefault(x, set()).add(i)
    return MappingProxyType({x: frozenset(s) for x, s in index.items()})


@dataclass(frozen=True)
class Manual:
    operations: tuple[tuple[str, ...], ...]
    outcome_index: Mapping[str, frozenset[int]] = field(compare=False, repr=False)

    @property
    def outcomes(self) -> tuple[str, ...]:
        """All outcomes, in order of first appearance."""
        return tuple(self.outcome_index)

    def operation_set(self, i: int) -> frozenset[str]:
        return frozenset(self.operations[i])

    def __len__(self):
        return len(self.operations)

    def same_as(self, other: "Manual") -> bool:
        """Equality as a set of sets (ignores operation and outcome order)."""
        return {frozenset(op) for op in self.operations} == {
            frozenset(op) for op in other.operations
        }

    def to_dict(self):
        return {"operations": [list(op) for op in self.operations]}


@dataclass(frozen=True)
class Event:
    """A subset of some operation. Equality ignores the witness."""

    outcomes: frozenset[str]
    witness: int = field(default=0, compare=False)

    def __len__(self):
        return len(self.outcomes)

    def sorted(self) -> list[str]:
        return sorted(self.outcomes)


def validate_manual(raw_operations: Iterable[Sequence[str]]) -> Manual:
    """Build a manual, checking that no operation contains another.

    Operations that repeat an earlier one as a set are dropped (a manual is a
    set of sets).
    """
    ops: list[tuple[str, ...]] = []
    seen: set[frozenset[str]] = set()
    for i, raw in enumerate(raw_operations):
        op = tuple(str(x) for x in raw)
        if not op:
            raise EmptyOperation(f"operation {i} has no outcomes")
        for x in op:
            if not x:
                raise EmptyOperation(f"operation {i} contains an empty outcome id")
        if len(set(op)) != len(op):
            dup = next(x for x in op if op.count(x) > 1)
            raise DuplicateOutcomeInOperation(f"outcome {dup!r} repeated in operation {i}")
        key = frozenset(op)
        if key in seen:
            continue
        seen.add(key)
        ops.append(op)

    sets = [frozenset(op) for op in ops]
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if i != j and a < b:
                raise RedundantOperation(i, j)
    return Manual(tuple(ops), _build_index(ops))


def _check_known(manual: Manual, outcomes: Iterable[str]):
    for x in outcomes:
        if x not in manual.outcome_index:
            raise UnknownOutcome(f"{x!r} is not an outcome of the manual")


def is_event(manual: Manual, outcomes: Iterable[str]) -> Event | None:
    """Return the event for ``outcomes`` or None if no operation contains them all.

    The witness is the lowest-index operation containing the set.
    """
    s = frozenset(outcomes)
    _check_known(manual, s)
    if not s:
        return Event(s, 0)
    candidates = frozenset.intersection(*(manual.outcome_index[x] for x in s))
    if not candidates:
        return None
    return Event(s, min(candidates))


def are_orthogonal(manual: Manual, a: Event, b: Event) -> bool:
    if a.outcomes & b.outcomes:
        return False
    return is_event(manual, a.outcomes | b.outcomes) is not None


def local_complements(manual: Manual, a: Event) -> set[Event]:
    """Events c orthogonal to ``a`` whose union with ``a`` is a whole operation."""
    out = set()
    for i, op in enumerate(manual.operations):
        ops = frozenset(op)
        if a.outcomes <= ops:
            # set.add keeps the first (lowest-index) witness
            out.add(Event(ops - a.outcomes, i))
    return out


def coarsen_pack(manual: Manual, op_index: int, packed: Iterable[str], new_id: str) -> Manual:
    """Replace ``packed`` outcomes of one operation by a single new outcome.

    The new outcome is not an alias for the event: other operations keep the
    original outcomes and the weight of ``new_id`` is unconstrained by them.
    """
    packed = frozenset(packed)
    op = manual.operations[op_index]
    if not packed or not packed < frozenset(op):
        raise PackedNotSubset(
            f"{sorted(packed)} is not a nonempty proper subset of operation {op_index}"
        )
    if new_id in manual.outcome_index:
        raise NewIdCollision(f"{new_id!r} already names an outcome")
    kept = [x for x in op if x not in packed]
    pos = min(op.index(x) for x in packed)
    new_op = kept[:pos] + [new_id] + kept[pos:]
    ops = list(manual.operations)
    ops[op_index] = tuple(new_op)
    return validate_manual(ops)


def identify_outcomes(manual: Manual, identification: Mapping[str, str]) -> Manual:
    """Merge outcomes according to ``identification`` (old id -> target id).

    Targets need not exist yet. Two outcomes of one operation may not be merged.
    """
    _check_known(manual, identification)
    ops = []
    for i, op in enumerate(manual.operations):
        merged = tuple(identification.get(x, x) for x in op)
        if len(set(merged)) != len(merged):
            raise MergeCollapsesOperation(f"identification merges two outcomes of operation {i}")
        ops.append(merged)
    return validate_manual(ops)


def tru_manual(probe_types: Sequence[str] = PROBE_TYPES) -> Manual:
    """Three-way classification, one operation per probe type (X_Z = say X to Z)."""
    return validate_manual([[f"{y}_{z}" for y in PROBE_TYPES] for z in probe_types])


def dichotomy_manual(probe_types: Sequence[str] = PROBE_TYPES) -> Manual:
    """Yes/no discriminations Y vs Y' for every probe type, nine operations in all.

    Operations are ordered by probe type, then discrimination.
    """
    return validate_manual(
        [[f"{y}_{z}", f"{y}'_{z}"] for z in probe_types for y in PROBE_TYPES]
    )
