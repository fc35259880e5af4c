"""Exact and heuristic engines for short closed walks.

Every routine here works on the same shape of problem: a closed walk that
starts and ends at ``home``, visits every node in ``others`` at least once,
never repeats a node back to back, and makes exactly ``extra`` additional
visits (0 or 1) to nodes of ``others``. ``home`` appears only at the ends.

With ``extra=0`` this is the TSP; with ``extra=1`` it covers the seed walks
that visit one target twice.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

TOL_ABS = 1e-9
TOL_REL = 1e-9


def _tol(x: float) -> float:
    return TOL_ABS + TOL_REL * abs(x) if math.isfinite(x) else 0.0


def seq_cost(D: np.ndarray, seq: Sequence[int]) -> float:
    total = 0.0
    for a, b in zip(seq, seq[1:]):
        total += D[a, b]
    return float(total)


# -- exact subset DP ----------------------------------------------------------


def _popcounts(size: int) -> np.ndarray:
    pop = np.zeros(size, dtype=np.int64)
    for b in range(max(size.bit_length() - 1, 0)):
        pop += (np.arange(size) >> b) & 1
    return pop


def closed_walk_dp(D: np.ndarray, home: int, others: Sequence[int], extra: int = 0):
    """Optimal closed walk by dynamic programming over visited subsets.

    Returns ``(cost, seq)``; among optimal walks ``seq`` is the
    lexicographically smallest (ties judged within a 1e-9 tolerance).
    """
    others = sorted(others)
    m = len(others)
    if m == 0 or (extra and m < 2):
        raise ValueError("not enough nodes for a closed walk")
    O = np.asarray(others)
    Dmo = np.asarray(D, dtype=float)[np.ix_(O, O)]
    Dh = np.asarray(D, dtype=float)[O, home]
    size = 1 << m
    masks = np.arange(size)
    pop = _popcounts(size)
    inmask = ((masks[:, None] >> np.arange(m)[None, :]) & 1).astype(bool)

    # G[f, mask, j]: cheapest completion from node j having visited `mask`
    # with f duplicate visits already spent.
    G = np.full((extra + 1, size, m), np.inf)
    for s in range(m, 0, -1):
        M = masks[pop == s]
        inM = inmask[M]
        for f in range(extra, -1, -1):
            val = np.full((len(M), m), np.inf)
            if s == m:
                if f == extra:
                    val[:] = Dh[None, :]
            else:
                for j in range(m):
                    rows = ~inM[:, j]
                    if not rows.any():
                        continue
                    nxt = M[rows] | (1 << j)
                    cand = Dmo[:, j][None, :] + G[f, nxt, j][:, None]
                    val[rows] = np.minimum(val[rows], cand)
            if f < extra:
                for j in range(m):
                    rows = inM[:, j]
                    if not rows.any():
                        continue
                    cand = Dmo[:, j][None, :] + G[f + 1, M[rows], j][:, None]
                    cand[:, j] = np.inf
                    val[rows] = np.minimum(val[rows], cand)
            val[~inM] = np.inf
            G[f, M] = val

    Dhome = np.asarray(D, dtype=float)[home, O]
    starts = Dhome + G[0, 1 << np.arange(m), np.arange(m)]
    best = float(starts.min())
    if not math.isfinite(best):
        raise ValueError("no feasible closed walk")

    # lexicographic reconstruction: take the smallest label that stays optimal
    j = int(np.flatnonzero(starts <= best + _tol(best))[0])
    seq = [home, others[j]]
    mask, f = 1 << j, 0
    remaining = float(G[0, mask, j])
    while not (mask == size - 1 and f == extra):
        chosen = None
        for nj in range(m):
            if not (mask >> nj) & 1:
                val = Dmo[j, nj] + G[f, mask | (1 << nj), nj]
                nstate = (mask | (1 << nj), f)
            elif f < extra and nj != j:
                val = Dmo[j, nj] + G[f + 1, mask, nj]
                nstate = (mask, f + 1)
            else:
                continue
            if val <= remaining + _tol(remaining):
                chosen = (nj, nstate)
                break
        assert chosen is not None, "DP reconstruction lost the optimum"
        j, (mask, f) = chosen[0], chosen[1]
        seq.append(others[j])
        remaining = float(G[f, mask, j])
    seq.append(home)
    return seq_cost(D, seq), seq


# -- heuristics -----------------------------------------------------------------


def _valid(seq: Sequence[int]) -> bool:
    return all(a != b for a, b in zip(seq, seq[1:]))


def nearest_neighbour(D: np.ndarray, home: int, others: Sequence[int]) -> list[int]:
    left = set(others)
    seq = [home]
    cur = home
    while left:
        nxt = min(left, key=lambda v: (D[cur, v], v))
        seq.append(nxt)
        left.remove(nxt)
        cur = nxt
    seq.append(home)
    return seq


def _two_opt_pass(D, s) -> bool:
    L = len(s) - 1
    improved = False
    for i in range(1, L - 1):
        a, b = s[i - 1], s[i]
        dab = D[a, b]
        for j in range(i + 1, L):
            c, e = s[j], s[j + 1]
            delta = D[a, c] + D[b, e] - dab - D[c, e]
            if delta < -1e-10 and a != c and b != e:
                s[i : j + 1] = s[i : j + 1][::-1]
                improved = True
                a, b = s[i - 1], s[i]
                dab = D[a, b]
    return improved


def _or_opt_pass(D, s) -> bool:
    improved = False
    for seglen in (1, 2, 3):
        i = 1
        while i + seglen < len(s):
            seg = s[i : i + seglen]
            prev, nxt = s[i - 1], s[i + seglen]
            if prev == nxt:
                i += 1
                continue
            removed_gain = D[prev, seg[0]] + D[seg[-1], nxt] - D[prev, nxt]
            rest = s[:i] + s[i + seglen :]
            best = (-1e-10, None, None)
            for p in range(len(rest) - 1):
                u, v = rest[p], rest[p + 1]
                for piece in (seg, seg[::-1]):
                    if u == piece[0] or piece[-1] == v:
                        continue
                    delta = D[u, piece[0]] + D[piece[-1], v] - D[u, v] - removed_gain
                    if delta < best[0]:
                        best = (delta, p, piece)
            if best[1] is not None:
                p, piece = best[1], best[2]
                cand = rest[: p + 1] + list(piece) + rest[p + 1 :]
                if _valid(cand):
                    s[:] = cand
                    improved = True
                    continue
            i += 1
    return improved


def local_search(D: np.ndarray, seq: list[int], deadline: Optional[float] = None) -> list[int]:
    s = list(seq)
    while True:
        if deadline is not None and _time.perf_counter() > deadline:
            break
        a = _two_opt_pass(D, s)
        b = _or_opt_pass(D, s)
        if not (a or b):
            break
    return s


def _best_duplicate_insertion(D, s, others, home):
    best = (math.inf, None, None)
    for p in range(len(s) - 1):
        u, v = s[p], s[p + 1]
        for j in others:
            if j in (u, v):
                continue
            delta = D[u, j] + D[j, v] - D[u, v]
            if delta < best[0] - 1e-12:
                best = (delta, p, j)
    _, p, j = best
    return s[: p + 1] + [j] + s[p + 1 :]


def heuristic_walk(D: np.ndarray, home: int, others: Sequence[int], extra: int = 0,
                   deadline: Optional[float] = None):
    """Nearest neighbour, 2-opt and or-opt; a duplicate visit is added by cheapest insertion."""
    D = np.asarray(D, dtype=float)
    others = sorted(others)
    s = local_search(D, nearest_neighbour(D, home, others), deadline)
    if extra:
        s = _best_duplicate_insertion(D, s, others, home)
        s = local_search(D, s, deadline)
        # try re-placing the duplicate after the route settled
        counts = {v: s[1:-1].count(v) for v in others}
        dup = next(v for v, c in counts.items() if c == 2)
        for p in [i for i in range(1, len(s) - 1) if s[i] == dup]:
            if s[p - 1] == s[p + 1]:
                continue
            trial = _best_duplicate_insertion(D, s[:p] + s[p + 1 :], others, home)
            trial = local_search(D, trial, deadline)
            if seq_cost(D, trial) < seq_cost(D, s) - 1e-10:
                s = trial
                break
    assert _valid(s)
    return seq_cost(D, s), s


# -- lower bounds ---------------------------------------------------------------


def mst_weight(D: np.ndarray, nodes: Sequence[int]) -> float:
    nodes = list(nodes)
    if len(nodes) <= 1:
        return 0.0
    sub = D[np.ix_(nodes, nodes)]
    s = len(nodes)
    in_tree = np.zeros(s, dtype=bool)
    in_tree[0] = True
    best = sub[0].copy()
    best[0] = np.inf
    total = 0.0
    for _ in range(s - 1):
        cand = np.where(in_tree, np.inf, best)
        v = int(np.argmin(cand))
        total += cand[v]
        in_tree[v] = True
        best = np.minimum(best, sub[v])
    return float(total)


def held_karp_bound(D: np.ndarray, nodes: Sequence[int], iterations: int = 200,
                    upper: Optional[float] = None) -> float:
    """Lagrangian 1-tree lower bound on the shortest Hamiltonian cycle over ``nodes``."""
    nodes = list(nodes)
    s = len(nodes)
    if s < 3:
        return 2.0 * float(D[nodes[0], nodes[-1]]) if s == 2 else 0.0
    C0 = np.asarray(D, dtype=float)[np.ix_(nodes, nodes)]
    pi = np.zeros(s)
    best = -math.inf
    if upper is None:
        upper = seq_cost(C0, nearest_neighbour(C0, 0, range(1, s)))
    step_scale = 2.0
    stall = 0
    for _ in range(iterations):
        C = C0 + pi[:, None] + pi[None, :]
        # MST over nodes 1..s-1 with parent tracking for degrees
        deg = np.zeros(s, dtype=np.int64)
        in_tree = np.zeros(s, dtype=bool)
        in_tree[0] = True
        in_tree[1] = True
        best_w = C[1].copy()
        parent = np.full(s, 1)
        total = 0.0
        for _k in range(s - 2):
            cand = np.where(in_tree, np.inf, best_w)
            v = int(np.argmin(cand))
            total += cand[v]
            deg[v] += 1
            deg[parent[v]] += 1
            in_tree[v] = True
            upd = C[v] < best_w
            best_w = np.where(upd, C[v], best_w)
            parent = np.where(upd, v, parent)
        row = C[0, 1:]
        two = np.argsort(row, kind="stable")[:2] + 1
        total += C[0, two[0]] + C[0, two[1]]
        deg[0] = 2
        deg[two] += 1
        val = total - 2.0 * pi.sum()
        if val > best + 1e-12:
            best = val
            stall = 0
        else:
            stall += 1
            if stall >= 10:
                step_scale *= 0.5
                stall = 0
        g = deg - 2
        norm = float((g * g).sum())
        if norm == 0 or step_scale < 1e-6:
            break
        step = step_scale * (upper - val) / norm
        pi = pi + step * g
    return float(best)


# -- branch and bound -----------------------------------------------------------


@dataclass
class BnBOutcome:
    cost: float
    seq: list
    complete: bool
    nodes: int


def closed_walk_bnb(D: np.ndarray, home: int, others: Sequence[int], extra: int = 0,
                    incumbent: Optional[Sequence[int]] = None,
                    deadline: Optional[float] = None,
                    node_limit: Optional[int] = None) -> BnBOutcome:
    """Depth-first branch and bound with a spanning-tree bound on the unfinished part.

    The search is complete (and the result optimal) when ``complete`` is true;
    otherwise the best walk found before the deadline is returned.
    """
    D = np.asarray(D, dtype=float)
    others = sorted(others)
    idx = {v: i for i, v in enumerate(others)}
    m = len(others)
    full = (1 << m) - 1
    if incumbent is not None:
        best_seq = list(incumbent)
        best = seq_cost(D, best_seq)
    else:
        best, best_seq = math.inf, None
    nodes = 0
    aborted = False
    path = [home]
    order = {v: sorted(others, key=lambda u: (D[v, u], u)) for v in [home, *others]}
    min_back = {v: min((D[v, u] + D[u, home] for u in others if u != v), default=math.inf)
                for v in others}

    def bound(last: int, mask: int, f: int) -> float:
        if mask == full:
            return D[last, home] if f == extra else min_back[last]
        rest = [others[i] for i in range(m) if not (mask >> i) & 1]
        return mst_weight(D, [last, *rest, home])

    def dfs(last: int, cost: float, mask: int, f: int) -> None:
        nonlocal best, best_seq, nodes, aborted
        if aborted:
            return
        nodes += 1
        if (nodes & 255) == 0:
            if deadline is not None and _time.perf_counter() > deadline:
                aborted = True
                return
            if node_limit is not None and nodes > node_limit:
                aborted = True
                return
        if mask == full and f == extra:
            total = cost + D[last, home]
            if path[1] <= path[-1] and total < best - _tol(best):
                best = total
                best_seq = path + [home]
            return
        if cost + bound(last, mask, f) >= best - _tol(best):
            return
        for v in order[last]:
            if v == last:
                continue
            bit = 1 << idx[v]
            if not mask & bit:
                nf = f
            elif f < extra:
                nf = f + 1
            else:
                continue
            path.append(v)
            dfs(v, cost + D[last, v], mask | bit, nf)
            path.pop()
            if aborted:
                return

    dfs(home, 0.0, 0, 0)
    if best_seq is None:
        raise ValueError("branch and bound found no feasible walk")
    return BnBOutcome(seq_cost(D, best_seq), best_seq, not aborted, nodes)
