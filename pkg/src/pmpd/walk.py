"""Walks and the operations used to assemble long walks from short ones.

A walk stores its closing element explicitly: ``visits = (v_0, ..., v_k)``
with ``v_k == v_0``. Positions passed to :func:`shortcut` and gap indices
passed to :func:`insert` refer to that closed tuple.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import (
    InfeasibleInsertion,
    InfeasibleShortcut,
    PivotAbsent,
    TerminusMismatch,
    WalkError,
)
from .instance import DEPOT, Instance


class WalkKind(str, enum.Enum):
    PMP = "pmp"
    PMPD = "pmpd"


@dataclass(frozen=True)
class Walk:
    kind: WalkKind
    visits: tuple

    def __post_init__(self):
        object.__setattr__(self, "visits", tuple(int(v) for v in self.visits))
        object.__setattr__(self, "kind", WalkKind(self.kind))
        if len(self.visits) < 2:
            raise WalkError("a walk needs at least two elements")

    @property
    def k(self) -> int:
        return len(self.visits) - 1

    @property
    def open(self) -> tuple:
        """``(v_0, ..., v_{k-1})``: one period of the repeated walk."""
        return self.visits[:-1]

    @property
    def start(self) -> int:
        return self.visits[0]

    def depot_count(self) -> int:
        return self.open.count(DEPOT)

    def __len__(self) -> int:
        return self.k

    def __str__(self) -> str:
        return "(" + ", ".join(fmt_visit(v) for v in self.visits) + ")"


def fmt_visit(v: int) -> str:
    return "d" if v == DEPOT else str(v)


def pmpd(*visits) -> Walk:
    """Shorthand used heavily in tests: ``pmpd("d", 1, 2, 3, "d")``."""
    return Walk(WalkKind.PMPD, tuple(_parse_visit(v) for v in visits))


def pmp(*visits) -> Walk:
    return Walk(WalkKind.PMP, tuple(_parse_visit(v) for v in visits))


def _parse_visit(v) -> int:
    if v == "d" or v == "D":
        return DEPOT
    v = int(v)
    if v < 1:
        raise WalkError(f"target ids start at 1, got {v}")
    return v


def _kind_for(start: int) -> WalkKind:
    return WalkKind.PMPD if start == DEPOT else WalkKind.PMP


# -- validation ---------------------------------------------------------------


class Violation(NamedTuple):
    rule: str
    message: str
    position: Optional[int] = None

    def __str__(self) -> str:
        return self.message


def validate(walk: Walk, instance: Instance) -> list[Violation]:
    """List every broken walk rule; an empty list means the walk is valid."""
    out: list[Violation] = []
    seq = walk.visits
    n = instance.n
    for i, v in enumerate(seq):
        if not 0 <= v <= n:
            out.append(Violation("range", f"visit {v} at position {i} is not a node of the instance", i))
    if seq[0] != seq[-1]:
        out.append(Violation("closed", f"walk is not closed: v_0={fmt_visit(seq[0])}, v_k={fmt_visit(seq[-1])}"))
    for i in range(1, len(seq)):
        if seq[i - 1] == seq[i]:
            out.append(Violation(
                "repeat", f"immediate repeat of {fmt_visit(seq[i])} at positions {i - 1}-{i}", i - 1))
    if walk.kind is WalkKind.PMPD:
        if seq[0] != DEPOT or seq[-1] != DEPOT:
            out.append(Violation("depot-ends", "a PMP-D walk must start and end at the depot"))
        for i in range(1, len(seq) - 1):
            if seq[i] == DEPOT:
                out.append(Violation("depot-interior", f"depot visited inside the walk at position {i}", i))
        covered = set(seq[1:-1])
        min_k = n + 1
    else:
        if walk.depot_count() > 1:
            out.append(Violation("depot-count", f"depot appears {walk.depot_count()} times per cycle"))
        covered = set(seq)
        min_k = n
    missing = sorted(set(range(1, n + 1)) - covered)
    for t in missing:
        out.append(Violation("coverage", f"target {t} unvisited"))
    if walk.k < min_k:
        out.append(Violation("length", f"k={walk.k} is below the minimum {min_k} for this kind"))
    return out


def is_valid(walk: Walk, instance: Instance) -> bool:
    return not validate(walk, instance)


# -- algebra ------------------------------------------------------------------


def permute(walk: Walk, pivot: int) -> Walk:
    """Rotate the closed walk so it starts and ends at the first occurrence of ``pivot``."""
    seq = walk.open
    try:
        i = seq.index(pivot)
    except ValueError:
        raise PivotAbsent(f"{fmt_visit(pivot)} does not occur in {walk}") from None
    rot = seq[i:] + seq[:i]
    return Walk(_kind_for(pivot), rot + (pivot,))


def concatenate(w1: Walk, *rest: Walk) -> Walk:
    """Join closed walks that share the same terminus.

    The caller is responsible for keeping at most one depot visit per cycle.
    """
    visits = list(w1.visits)
    for w in rest:
        if w.start != w1.start:
            raise TerminusMismatch(f"cannot concatenate {w1} and {w}: termini differ")
        visits.extend(w.visits[1:])
    return Walk(_kind_for(w1.start), tuple(visits))


def shortcut(walk: Walk, positions: Iterable[int]) -> Walk:
    """Skip the visits at the given interior positions (``1..k-1``)."""
    pos = set(positions)
    seq = walk.visits
    k = walk.k
    for p in pos:
        if p in (0, k) and seq[p] == DEPOT:
            raise InfeasibleShortcut("DepotRequired", "the depot terminus of a PMP-D walk cannot be skipped")
        if not 0 < p < k:
            raise WalkError(f"position {p} is not an interior index of a {k}-visit walk")
    kept = [v for i, v in enumerate(seq) if i not in pos]
    before = Counter(v for v in walk.open if v != DEPOT)
    after = Counter(v for v in kept[:-1] if v != DEPOT)
    lost = sorted(set(before) - set(after))
    if lost:
        raise InfeasibleShortcut("CoverageLoss", f"target(s) {lost} would no longer be visited")
    for i in range(1, len(kept)):
        if kept[i - 1] == kept[i]:
            raise InfeasibleShortcut(
                "AdjacentDuplicate", f"{fmt_visit(kept[i])} would be visited twice in a row")
    return Walk(walk.kind, tuple(kept))


def insert(walk: Walk, gap_index: int, visit: int) -> Walk:
    """Insert ``visit`` between ``v_gap`` and ``v_{gap+1}``."""
    seq = walk.visits
    if not 0 <= gap_index < walk.k:
        raise WalkError(f"gap index {gap_index} out of range for a {walk.k}-visit walk")
    if visit == DEPOT and DEPOT in seq:
        raise InfeasibleInsertion("DepotPresent", "the walk already visits the depot")
    if visit in (seq[gap_index], seq[gap_index + 1]):
        raise InfeasibleInsertion(
            "AdjacentDuplicate", f"{fmt_visit(visit)} is adjacent to gap {gap_index}")
    return Walk(walk.kind, seq[: gap_index + 1] + (visit,) + seq[gap_index + 1 :])


def visit_counts(walk: Walk) -> Counter:
    return Counter(v for v in walk.open if v != DEPOT)


def singly_visited_targets(walk: Walk) -> list[int]:
    return sorted(t for t, c in visit_counts(walk).items() if c == 1)


def positions_of(walk: Walk, node: int) -> list[int]:
    return [i for i, v in enumerate(walk.open) if v == node]


def reverse(walk: Walk) -> Walk:
    return Walk(walk.kind, walk.visits[::-1])


# -- JSON ---------------------------------------------------------------------


def walk_to_dict(walk: Walk) -> dict:
    return {"kind": walk.kind.value, "visits": ["d" if v == DEPOT else v for v in walk.visits]}


def walk_from_dict(data: dict) -> Walk:
    return Walk(WalkKind(data.get("kind", "pmpd")), tuple(_parse_visit(v) for v in data["visits"]))


def from_sequence(seq: Sequence, kind: Optional[WalkKind] = None) -> Walk:
    visits = tuple(_parse_visit(v) if isinstance(v, str) else int(v) for v in seq)
    return Walk(kind or _kind_for(visits[0]), visits)
