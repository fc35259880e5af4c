"""Travel time and revisit time of walks repeated indefinitely."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidWalk, TargetAbsent
from .instance import DEPOT, Instance
from .walk import Walk, validate


def travel_time(seq: Sequence[int] | Walk, instance: Instance) -> float:
    if isinstance(seq, Walk):
        seq = seq.visits
    t = instance.time
    total = 0.0
    for a, b in zip(seq, seq[1:]):
        total += t[a, b]
    return float(total)


@dataclass(frozen=True)
class RevisitSequence:
    terminus: int
    visits: tuple  # (v_0, ..., v_{r-1}, v_0)

    @property
    def r(self) -> int:
        return len(self.visits) - 1

    def spanning(self, n: int) -> bool:
        return set(range(1, n + 1)) <= set(self.visits)

    def travel_time(self, instance: Instance) -> float:
        return travel_time(self.visits, instance)


def _prefix(seq: Sequence[int], instance: Instance) -> list[float]:
    t = instance.time
    pre = [0.0]
    k = len(seq)
    for i in range(k):
        pre.append(pre[-1] + float(t[seq[i], seq[(i + 1) % k]]))
    return pre


def target_gaps(walk: Walk, instance: Instance, check: bool = True) -> dict[int, float]:
    """Worst time between consecutive visits of each target in the repeated walk."""
    if check:
        bad = validate(walk, instance)
        if bad:
            raise InvalidWalk(bad)
    seq = walk.open
    pre = _prefix(seq, instance)
    total = pre[-1]
    first: dict[int, float] = {}
    last: dict[int, float] = {}
    worst: dict[int, float] = {}
    for i, v in enumerate(seq):
        if v == DEPOT:
            continue
        now = pre[i]
        if v in last:
            gap = now - last[v]
            if gap > worst[v]:
                worst[v] = gap
        else:
            first[v] = now
            worst[v] = 0.0
        last[v] = now
    for v, f in first.items():
        wrap = total - last[v] + f
        if wrap > worst[v]:
            worst[v] = wrap
    return worst


def revisit_time(walk: Walk, instance: Instance, check: bool = True) -> float:
    """Maximum over targets of the longest gap between successive visits.

    Computed on one period of the cyclic sequence; the depot is never a terminus.
    """
    gaps = target_gaps(walk, instance, check=check)
    return max(gaps.values())


def enumerate_revisit_sequences(walk: Walk, target: int) -> list[RevisitSequence]:
    """Gap sequences between consecutive occurrences of ``target``, in walk order."""
    seq = walk.open
    pos = [i for i, v in enumerate(seq) if v == target]
    if not pos or target == DEPOT:
        raise TargetAbsent(f"target {target} is not visited by {walk}")
    k = len(seq)
    out = []
    for j, p in enumerate(pos):
        q = pos[(j + 1) % len(pos)]
        length = (q - p) % k or k
        vis = tuple(seq[(p + s) % k] for s in range(length + 1))
        out.append(RevisitSequence(target, vis))
    return out
