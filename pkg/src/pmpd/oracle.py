"""Brute-force reference computations for tiny instances.

These are deliberately naive and exist to cross-check the fast paths.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import InvalidWalk, TooLarge
from .evaluator import revisit_time
from .instance import DEPOT, Instance, close
from .results import Certificate, SolveResult, Status
from .walk import Walk, WalkKind, validate

MAX_DEF_K = 20


def definition_revisit_time(walk: Walk, instance: Instance) -> float:
    """Maximum travel time over every revisit sequence of the repeated walk.

    Unrolls three periods and checks every contiguous window ``(v_i .. v_j)``
    against the revisit-sequence rules: a target terminus at both ends, the
    terminus absent from the interior, at most one depot, ``j - i <= k``.
    """
    bad = validate(walk, instance)
    if bad:
        raise InvalidWalk(bad)
    k = walk.k
    if k > MAX_DEF_K:
        raise TooLarge(f"definitional evaluation is limited to k <= {MAX_DEF_K}")
    line = list(walk.open) * 3
    t = instance.time
    best = -math.inf
    for i in range(k, 2 * k):
        head = line[i]
        if head == DEPOT:
            continue
        for j in range(i + 1, i + k + 1):
            if line[j] != head:
                continue
            window = line[i : j + 1]
            interior = window[1:-1]
            if head in interior or interior.count(DEPOT) > 1:
                continue
            tt = sum(float(t[a, b]) for a, b in zip(window, window[1:]))
            best = max(best, tt)
    return best


def _pmpd_walks(n: int, k: int):
    """All valid k-visit PMP-D walks in lexicographic order."""
    targets = range(1, n + 1)
    full = set(targets)
    for mid in itertools.product(targets, repeat=k - 1):
        if any(a == b for a, b in zip(mid, mid[1:])):
            continue
        if set(mid) != full:
            continue
        yield (DEPOT, *mid, DEPOT)


def brute_force_optimal(instance: Instance, k: int) -> SolveResult:
    """Enumerate every k-visit PMP-D walk; lexicographically first optimum wins."""
    n = instance.n
    if n > 4 or k > 10:
        raise TooLarge("brute force is limited to n <= 4 and k <= 10")
    best_val = math.inf
    best = None
    count = 0
    for seq in _pmpd_walks(n, k):
        count += 1
        w = Walk(WalkKind.PMPD, seq)
        val = revisit_time(w, instance, check=False)
        if val < best_val and not close(val, best_val):
            best_val, best = val, w
    if best is None:
        return SolveResult(None, math.inf, None, Certificate(Status.INFEASIBLE), {"walks": count})
    return SolveResult(best, best_val, best_val, Certificate.optimal(), {"walks": count})



def random_walk(rng, n: int, k: int, kind: WalkKind = WalkKind.PMPD) -> Walk:
    """Uniform-ish random valid walk: a shuffled tour padded with extra visits.

    ``rng`` is a ``numpy.random.Generator``.
    """
    if kind is WalkKind.PMPD:
        if k < n + 1:
            raise ValueError("a PMP-D walk needs k >= n+1")
        body = [int(t) for t in rng.permutation(np.arange(1, n + 1))]
        while len(body) < k - 1:
            gap = int(rng.integers(0, len(body) + 1))
            left = body[gap - 1] if gap > 0 else None
            right = body[gap] if gap < len(body) else None
            choices = [t for t in range(1, n + 1) if t not in (left, right)]
            body.insert(gap, int(rng.choice(choices)))
        return Walk(WalkKind.PMPD, (DEPOT, *body, DEPOT))
    if k < n:
        raise ValueError("a PMP walk needs k >= n")
    body = [int(t) for t in rng.permutation(np.arange(1, n + 1))]
    while len(body) < k:
        gap = int(rng.integers(0, len(body)))
        left, right = body[gap], body[(gap + 1) % len(body)]
        choices = [t for t in range(1, n + 1) if t not in (left, right)]
        body.insert(gap + 1, int(rng.choice(choices)))
    return Walk(WalkKind.PMP, (*body, body[0]))
