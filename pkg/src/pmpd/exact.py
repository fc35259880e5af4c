"""Budgeted exact minimisation of revisit time over k-visit PMP-D walks.

Depth-first search over the interior visits ``v_1 .. v_{k-1}`` with a
per-target record of first and last arrival times. Because the depot sits
once per cycle, a target's revisit sequences are exactly the stretches
between its consecutive occurrences in the repeated walk, so the objective
is the largest such stretch over all targets.
"""

from __future__ import annotations

import math
import time
from typing import Optional

from .bounds import lower_bound
from .builder import build
from .errors import KTooSmall, KTooSmallForPlan
from .evaluator import revisit_time
from .instance import DEPOT, Instance
from .results import Certificate, SolveResult, Status
from .seeds import SeedWalks, compute_seeds
from .walk import Walk, WalkKind, is_valid

DEFAULT_BUDGET_MS = 60_000
_CHECK_EVERY = 2048


class _Timeout(Exception):
    pass


def _tol(x: float) -> float:
    return 1e-9 + 1e-9 * abs(x) if math.isfinite(x) else 0.0


def solve_exact(instance: Instance, k: int, budget_ms: float = DEFAULT_BUDGET_MS,
                incumbent: Optional[Walk] = None, seeds: Optional[SeedWalks] = None,
                node_limit: Optional[int] = None, stop_at_bound: bool = True) -> SolveResult:
    """Least revisit time over all k-visit PMP-D walks.

    ``incumbent`` (any valid walk) tightens pruning from the start; when
    omitted and k is large enough, the constructed walk is used. The search
    stops early once it meets a certified lower bound unless
    ``stop_at_bound`` is off, in which case optimality is by exhaustion alone.
    """
    n = instance.n
    if k < n + 1:
        raise KTooSmall(f"k={k} is below n+1={n + 1}")
    t0 = time.perf_counter()
    deadline = t0 + budget_ms / 1000.0
    D = instance.time.tolist()
    if seeds is None:
        seeds = compute_seeds(instance, budget_ms=budget_ms / 4)
    bound = lower_bound(seeds, k)
    lb = bound.lb if bound.certified else None
    stop_lb = lb if stop_at_bound else None

    best_walk: Optional[Walk] = None
    best = math.inf
    if incumbent is not None and incumbent.k == k and is_valid(incumbent, instance):
        best_walk, best = incumbent, revisit_time(incumbent, instance)
    elif k >= n * n + n + 1:
        try:
            res = build(instance, seeds, k)
            best_walk, best = res.walk, res.ub
        except KTooSmallForPlan:
            pass

    def done() -> bool:
        return stop_lb is not None and best <= stop_lb + _tol(stop_lb)

    m = k - 1  # interior slots
    first = [-1.0] * (n + 1)
    last = [-1.0] * (n + 1)
    seq = [0] * m
    nodes = 0
    targets = list(range(1, n + 1))

    def dfs(pos: int, cur: int, tau: float, closed: float, unvisited: int) -> None:
        nonlocal best, best_walk, nodes
        nodes += 1
        if nodes % _CHECK_EVERY == 0:
            if time.perf_counter() > deadline:
                raise _Timeout
        if node_limit is not None and nodes > node_limit:
            raise _Timeout
        if pos == m:
            if unvisited or seq[0] > seq[-1]:
                return  # mirror image of a walk already covered
            total = tau + D[cur][DEPOT]
            worst = closed
            for t in targets:
                g = total - last[t] + first[t]
                if g > worst:
                    worst = g
            if worst < best - _tol(best):
                best = worst
                best_walk = Walk(WalkKind.PMPD, (DEPOT, *seq, DEPOT))
            return
        if m - pos < unvisited:
            return
        row = D[cur]
        for v in targets:
            if v == cur:
                continue
            if pos == m - 1 and seq[0] > v:
                continue
            nt = tau + row[v]
            nc = closed
            lv = last[v]
            if lv >= 0.0:
                g = nt - lv
                if g > nc:
                    nc = g
            # optimistic completion: every open stretch must still close
            est = nc
            rv = D[v]
            for t in targets:
                if t == v:
                    continue
                lt = last[t]
                if lt >= 0.0:
                    g = nt - lt + rv[t]
                else:
                    g = nt + rv[t] + D[t][DEPOT]
                if g > est:
                    est = g
            if est >= best - _tol(best):
                continue
            pf, pl = first[v], last[v]
            if pf < 0.0:
                first[v] = nt
            last[v] = nt
            seq[pos] = v
            dfs(pos + 1, v, nt, nc, unvisited - (1 if pf < 0.0 else 0))
            first[v], last[v] = pf, pl
            if done():
                return

    complete = True
    if not done():
        try:
            dfs(0, DEPOT, 0.0, 0.0, n)
        except _Timeout:
            complete = False
    elapsed = time.perf_counter() - t0
    stats = {"nodes": nodes, "seconds": elapsed, "k": k, "n": n, "early_stop": complete and done()}
    if best_walk is None:
        status = Status.BEST_FOUND if not complete else Status.INFEASIBLE
        return SolveResult(None, math.inf, lb, Certificate(status, None), stats)
    ub = revisit_time(best_walk, instance)
    if complete:
        cert = Certificate.optimal()
    else:
        cert = Certificate.best_found(ub, lb)
    return SolveResult(best_walk, ub, lb, cert, stats)

