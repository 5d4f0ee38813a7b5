"""The logic of a finite manual: perspectivity classes of events, their order
and orthocomplement, plus a brute-force orthomodularity checker.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

from .errors import EventCapExceeded
from .manual import Event, Manual, local_complements

__all__ = [
    "LogicElement",
    "Logic",
    "LogicDegeneracy",
    "OrthomodularityReport",
    "DEFAULT_EVENT_CAP",
    "enumerate_events",
    "build_logic",
    "is_orthomodular_poset",
]

DEFAULT_EVENT_CAP = 2**20


@dataclass(frozen=True)
class LogicElement:
    members: frozenset[Event]
    representative: Event

    @property
    def confirm(self) -> frozenset[str]:
        """Outcomes that confirm the proposition."""
        return frozenset().union(*(e.outcomes for e in self.members))


@dataclass(frozen=True)
class Logic:
    elements: tuple[LogicElement, ...]
    leq: frozenset[tuple[int, int]]
    ortho: tuple[int, ...]
    zero: int
    one: int
    _class_of: dict = field(compare=False, repr=False)

    def __len__(self):
        return len(self.elements)

    def le(self, p: int, q: int) -> bool:
        return (p, q) in self.leq

    def class_of(self, event: Event) -> int:
        return self._class_of[event.outcomes]

    def refute(self, p: int) -> frozenset[str]:
        return self.elements[self.ortho[p]].confirm

    def upper_bounds(self, items) -> list[int]:
        return [u for u in range(len(self)) if all(self.le(p, u) for p in items)]

    def lower_bounds(self, items) -> list[int]:
        return [u for u in range(len(self)) if all(self.le(u, p) for p in items)]

    def join(self, *items: int) -> int | None:
        """Least upper bound, or None when it does not exist."""
        ubs = self.upper_bounds(items)
        least = [u for u in ubs if all(self.le(u, v) for v in ubs)]
        return least[0] if least else None

    def meet(self, *items: int) -> int | None:
        lbs = self.lower_bounds(items)
        greatest = [u for u in lbs if all(self.le(v, u) for v in lbs)]
        return greatest[0] if greatest else None

    def atoms(self) -> list[int]:
        return [
            p
            for p in range(len(self))
            if p != self.zero
            and not any(q not in (p, self.zero) and self.le(q, p) for q in range(len(self)))
        ]

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Covering pairs (p, q): p < q with nothing strictly between."""
        n = len(self)
        edges = []
        for p, q in itertools.permutations(range(n), 2):
            if not self.le(p, q):
                continue
            if any(r not in (p, q) and self.le(p, r) and self.le(r, q) for r in range(n)):
                continue
            edges.append((p, q))
        return sorted(edges)

    def label(self, p: int) -> str:
        rep = self.elements[p].representative
        return "{" + ",".join(rep.sorted()) + "}"


@dataclass(frozen=True)
class LogicDegeneracy:
    """Returned instead of a Logic when classes do not carry an orthostructure."""

    reason: str
    detail: tuple = ()


@dataclass(frozen=True)
class OrthomodularityReport:
    ok: bool
    law: str | None = None
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def _event_key(s: frozenset[str]):
    return (len(s), sorted(s))


def enumerate_events(manual: Manual, cap: int = DEFAULT_EVENT_CAP) -> list[Event]:
    bound = sum(2 ** len(op) for op in manual.operations)
    if bound > cap:
        raise EventCapExceeded(f"up to {bound} events exceeds cap {cap}")
    seen: dict[frozenset[str], Event] = {}
    for i, op in enumerate(manual.operations):
        for r in range(len(op) + 1):
            for sub in itertools.combinations(op, r):
                s = frozenset(sub)
                if s not in seen:
                    seen[s] = Event(s, i)
    return sorted(seen.values(), key=lambda e: _event_key(e.outcomes))


def _transitive_closure(pairs: set[tuple[int, int]], n: int) -> set[tuple[int, int]]:
    reach = [set() for _ in range(n)]
    for a, b in pairs:
        reach[a].add(b)
    for k in range(n):
        for i in range(n):
            if k in reach[i]:
                reach[i] |= reach[k]
    return {(i, j) for i in range(n) for j in reach[i]}


def build_logic(manual: Manual, cap: int = DEFAULT_EVENT_CAP) -> Logic | LogicDegeneracy:
    """Form the logic of ``manual``.

    Events sharing a local complement are perspective; classes are the
    transitive closure. The order is the transitive closure of class-level
    inclusion, and the orthocomplement maps a class to the class of its
    members' local complements.
    """
    if cap > DEFAULT_EVENT_CAP:
        warnings.warn(f"event cap raised to {cap}", stacklevel=2)
    events = enumerate_events(manual, cap)
    pos = {e.outcomes: i for i, e in enumerate(events)}
    complements = [
        sorted((pos[c.outcomes] for c in local_complements(manual, e))) for e in events
    ]

    parent = list(range(len(events)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_complement: dict[int, list[int]] = {}
    for i, comps in enumerate(complements):
        for c in comps:
            by_complement.setdefault(c, []).append(i)
    for group in by_complement.values():
        for i in group[1:]:
            parent[find(i)] = find(group[0])

    roots: dict[int, list[int]] = {}
    for i in range(len(events)):
        roots.setdefault(find(i), []).append(i)
    # classes ordered by their least member, so the class of the empty event is first
    classes = sorted(roots.values(), key=lambda m: min(m))
    cls = [0] * len(events)
    for k, members in enumerate(classes):
        for i in members:
            cls[i] = k
    n = len(classes)

    ortho = []
    for k, members in enumerate(classes):
        targets = {cls[c] for i in members for c in complements[i]}
        if len(targets) != 1:
            return LogicDegeneracy(
                "orthocomplement not well defined",
                (k, tuple(sorted(targets))),
            )
        ortho.append(targets.pop())

    pairs = {(k, k) for k in range(n)}
    for a, b in itertools.product(range(len(events)), repeat=2):
        if events[a].outcomes <= events[b].outcomes:
            pairs.add((cls[a], cls[b]))
    leq = _transitive_closure(pairs, n)
    for p, q in leq:
        if p != q and (q, p) in leq:
            return LogicDegeneracy("order not antisymmetric", (p, q))

    zero = cls[pos[frozenset()]]
    ones = {cls[pos[frozenset(op)]] for op in manual.operations}
    if len(ones) != 1:
        return LogicDegeneracy("operations fall into distinct classes", tuple(sorted(ones)))
    one = ones.pop()
    if zero == one:
        return LogicDegeneracy("zero and one coincide", (zero,))

    elements = tuple(
        LogicElement(frozenset(events[i] for i in members), events[min(members)])
        for members in classes
    )
    class_of = {e.outcomes: cls[i] for i, e in enumerate(events)}
    return Logic(elements, frozenset(leq), tuple(ortho), zero, one, class_of)


def is_orthomodular_poset(logic: Logic) -> OrthomodularityReport:
    """Exhaustively check the orthoposet axioms and the orthomodular law.

    Returns the first violated law with a witness tuple of element indices.
    """
    n = len(logic)
    le, ortho = logic.le, logic.ortho
    for p in range(n):
        if not (le(logic.zero, p) and le(p, logic.one)):
            return OrthomodularityReport(False, "bounds", (p,))
        if ortho[ortho[p]] != p:
            return OrthomodularityReport(False, "involution", (p,))
        if logic.join(p, ortho[p]) != logic.one:
            return OrthomodularityReport(False, "complement join", (p,))
        if logic.meet(p, ortho[p]) != logic.zero:
            return OrthomodularityReport(False, "complement meet", (p,))
    for p, q in itertools.product(range(n), repeat=2):
        if le(p, q) and not le(ortho[q], ortho[p]):
            return OrthomodularityReport(False, "order reversal", (p, q))
        if le(p, ortho[q]) and logic.join(p, q) is None:
            return OrthomodularityReport(False, "orthogonal join", (p, q))
    for p, q in itertools.product(range(n), repeat=2):
        if not le(p, q):
            continue
        if not any(le(r, ortho[p]) and logic.join(p, r) == q for r in range(n)):
            return OrthomodularityReport(False, "orthomodular law", (p, q))
    return OrthomodularityReport(True)
