"""The three small optimal walks every bound and construction starts from.

* ``wd_n1``: best PMP-D walk with n+1 visits (depot, each target once).
* ``wd_n2``: best PMP-D walk with n+2 visits (one target visited twice).
* ``w_n1``: best target-only walk with n+1 visits (one target visited twice).

All three live in the regime where revisit time equals travel time, so they
are found by minimising travel time: exactly up to ``dp_threshold`` targets,
by budgeted branch and bound above it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import OutOfRange
from .evaluator import travel_time
from .instance import DEPOT, Instance, close
from .results import Certificate, Status
from .tsp import closed_walk_bnb, closed_walk_dp, heuristic_walk, held_karp_bound
from .walk import Walk, WalkKind, walk_to_dict

DP_THRESHOLD = 16
DEFAULT_BUDGET_MS = 60_000


@dataclass(frozen=True)
class SeedResult:
    walk: Walk
    value: float
    certificate: Certificate
    seconds: float = 0.0
    nodes: int = 0


def _solve(instance: Instance, home: int, others, extra: int, kind: WalkKind,
           budget_ms: float, dp_threshold: int) -> SeedResult:
    t0 = time.perf_counter()
    D = instance.time
    if instance.n <= dp_threshold:
        cost, seq = closed_walk_dp(D, home, others, extra)
        walk = Walk(kind, tuple(seq))
        return SeedResult(walk, travel_time(walk, instance), Certificate.optimal(),
                          time.perf_counter() - t0)
    # heuristic gets a slice of the budget, the search most of the rest; the
    # tail is kept for the dual bound so the whole call stays within budget
    deadline = t0 + 0.95 * budget_ms / 1000.0
    _, seq = heuristic_walk(D, home, others, extra, deadline=t0 + 0.25 * budget_ms / 1000.0)
    out = closed_walk_bnb(D, home, others, extra, incumbent=seq, deadline=deadline)
    walk = Walk(kind, tuple(out.seq))
    value = travel_time(walk, instance)
    if out.complete:
        cert = Certificate.optimal()
    else:
        # shortcutting the duplicate visit leaves a Hamiltonian cycle, so the
        # cycle bound on the same node set is a valid dual bound either way
        lb = held_karp_bound(D, [home, *others], upper=value)
        cert = Certificate.best_found(value, lb)
    return SeedResult(walk, value, cert, time.perf_counter() - t0, out.nodes)


def optimal_wd_n1(instance: Instance, budget_ms: float = DEFAULT_BUDGET_MS,
                  dp_threshold: int = DP_THRESHOLD) -> SeedResult:
    return _solve(instance, DEPOT, list(instance.targets), 0, WalkKind.PMPD, budget_ms, dp_threshold)


def optimal_wd_n2(instance: Instance, budget_ms: float = DEFAULT_BUDGET_MS,
                  dp_threshold: int = DP_THRESHOLD) -> SeedResult:
    return _solve(instance, DEPOT, list(instance.targets), 1, WalkKind.PMPD, budget_ms, dp_threshold)


def optimal_w_n1(instance: Instance, budget_ms: float = DEFAULT_BUDGET_MS,
                 dp_threshold: int = DP_THRESHOLD) -> SeedResult:
    # With n+1 visits over n targets exactly one target repeats, so either
    # target 1 or target 2 is visited once and can serve as the terminus.
    results = []
    for home in (1, 2):
        others = [t for t in instance.targets if t != home]
        results.append(_solve(instance, home, others, 1, WalkKind.PMP, budget_ms / 2, dp_threshold))
    a, b = results
    if a.value < b.value and not close(a.value, b.value):
        best = a
    elif b.value < a.value and not close(a.value, b.value):
        best = b
    else:
        best = min(results, key=lambda r: r.walk.visits)
    if not all(r.certificate.is_optimal for r in results):
        gaps = [r.certificate.gap for r in results if not r.certificate.is_optimal]
        lb_gap = max((g for g in gaps if g is not None), default=None)
        cert = Certificate(Status.BEST_FOUND, lb_gap)
    else:
        cert = Certificate.optimal()
    return SeedResult(best.walk, best.value, cert, a.seconds + b.seconds, a.nodes + b.nodes)


@dataclass
class SeedWalks:
    wd_n1: Walk
    wd_n2: Walk
    w_n1: Walk
    rd_n1: float
    rd_n2: float
    r_n1: float
    certificates: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def n(self) -> int:
        return self.wd_n1.k - 1

    @property
    def certified(self) -> bool:
        return all(c.is_optimal for c in self.certificates.values())

    def is_certified(self, *names: str) -> bool:
        return all(self.certificates[nm].is_optimal for nm in names)

    @classmethod
    def from_walks(cls, instance: Instance, wd_n1: Walk, wd_n2: Walk, w_n1: Walk,
                   certified: bool = True) -> "SeedWalks":
        """Wrap externally supplied seed walks (values are recomputed)."""
        cert = Certificate.optimal() if certified else Certificate(Status.BEST_FOUND, None)
        return cls(
            wd_n1, wd_n2, w_n1,
            travel_time(wd_n1, instance), travel_time(wd_n2, instance), travel_time(w_n1, instance),
            {"wd_n1": cert, "wd_n2": cert, "w_n1": cert},
        )

    def to_dict(self) -> dict:
        return {
            "wd_n1": walk_to_dict(self.wd_n1),
            "wd_n2": walk_to_dict(self.wd_n2),
            "w_n1": walk_to_dict(self.w_n1),
            "rd_n1": self.rd_n1,
            "rd_n2": self.rd_n2,
            "r_n1": self.r_n1,
            "certificates": {k: c.to_dict() for k, c in self.certificates.items()},
            "certified": self.certified,
            "seconds": self.seconds,
        }


def compute_seeds(instance: Instance, budget_ms: float = DEFAULT_BUDGET_MS,
                  dp_threshold: int = DP_THRESHOLD) -> SeedWalks:
    """All three seed walks; ``budget_ms`` is shared between them above the DP threshold."""
    share = budget_ms / 3.0
    a = optimal_wd_n1(instance, share, dp_threshold)
    b = optimal_wd_n2(instance, share, dp_threshold)
    c = optimal_w_n1(instance, share, dp_threshold)
    return SeedWalks(
        a.walk, b.walk, c.walk, a.value, b.value, c.value,
        {"wd_n1": a.certificate, "wd_n2": b.certificate, "w_n1": c.certificate},
        a.seconds + b.seconds + c.seconds,
    )


# -- minimum travel time of revisit sequences ----------------------------------


MAX_EXTRA = 4


@lru_cache(maxsize=64)
def _revisit_seq_table(instance: Instance) -> dict:
    """Minimum travel time of spanning revisit sequences by visit count.

    Keys are ``(visits, with_depot)``. A sequence runs terminus -> ... ->
    terminus with the terminus absent from the interior, every other target
    visited, no back-to-back repeats and the depot at most once.
    """
    n = instance.n
    D = instance.time.tolist()
    best: dict = {}
    for term in range(1, n + 1):
        others = [t for t in range(1, n + 1) if t != term]
        bit = {t: 1 << i for i, t in enumerate(others)}
        full = (1 << len(others)) - 1
        # state: (mask, last, extra_used, depot_used) -> cost
        layer = {(0, term, 0, 0): 0.0}
        steps = len(others) + MAX_EXTRA + 1
        for _ in range(steps):
            nxt: dict = {}
            for (mask, last, e, du), c in layer.items():
                for v in others:
                    if v == last:
                        continue
                    if mask & bit[v]:
                        if e == MAX_EXTRA:
                            continue
                        key = (mask, v, e + 1, du)
                    else:
                        key = (mask | bit[v], v, e, du)
                    nc = c + D[last][v]
                    if nc < nxt.get(key, math.inf):
                        nxt[key] = nc
                if not du and last != DEPOT:
                    key = (mask, DEPOT, e, 1)
                    nc = c + D[last][DEPOT]
                    if nc < nxt.get(key, math.inf):
                        nxt[key] = nc
            layer = nxt
            for (mask, last, e, du), c in layer.items():
                if mask != full or last == DEPOT:
                    continue
                v = n + e + du
                total = c + D[last][term]
                if total < best.get((v, bool(du)), math.inf):
                    best[(v, bool(du))] = total
    return best


def min_revisit_seq_time(instance: Instance, v: int, with_depot: bool) -> float:
    """Least travel time of a spanning revisit sequence with exactly ``v`` visits.

    ``with_depot`` selects sequences that pass the depot once (otherwise none).
    """
    n = instance.n
    lo = n + 1 if with_depot else n
    if not lo <= v <= n + MAX_EXTRA:
        raise OutOfRange(f"v={v} outside [{lo}, {n + MAX_EXTRA}]")
    if n > 10:
        raise OutOfRange("revisit-sequence tables are limited to n <= 10")
    return _revisit_seq_table(instance)[(v, with_depot)]
