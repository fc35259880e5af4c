"""Long PMP-D walks assembled from the seed walks.

A construction uses three kinds of blocks, all rotated to start at a common
target that each of them visits exactly once:

* a *base* block that contains the depot (n+1 or n+2 visits),
* a *small* block with n visits that is a shortcut of the other two,
* optionally a *big* block with n+1 visits.

They are chained as ``base, small, big * y, small * (x - 1)`` so that the
base and the big blocks never touch, and the result is rotated to start at
the depot. The reported upper bound is always the measured revisit time of
the assembled walk.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from .bounds import BoundReport, lower_bound, q_decompose
from .errors import (
    H1Unavailable,
    InfeasibleInsertion,
    InfeasibleShortcut,
    KTooSmallForPlan,
    NoPivot,
    NotApplicable,
    WalkError,
)
from .evaluator import revisit_time, travel_time
from .instance import DEPOT, Instance, close
from .results import Certificate, SolveResult
from .seeds import SeedWalks
from .walk import (
    Walk,
    WalkKind,
    concatenate,
    insert,
    permute,
    positions_of,
    shortcut,
    singly_visited_targets,
    visit_counts,
    walk_to_dict,
)


class Scheme(str, enum.Enum):
    O1 = "O1"
    O2 = "O2"
    H1 = "H1"
    H2 = "H2"
    H3 = "H3"


H_ORDER = (Scheme.H1, Scheme.H2, Scheme.H3)


# -- block derivation ---------------------------------------------------------


def rotate_to(walk: Walk, pos: int) -> Walk:
    """Rotate the closed walk so that open-form position ``pos`` becomes v_0."""
    seq = walk.open
    rot = seq[pos:] + seq[:pos]
    kind = WalkKind.PMPD if rot[0] == DEPOT else WalkKind.PMP
    return Walk(kind, rot + (rot[0],))


def drop_cyclic(walk: Walk, positions) -> Walk:
    """Shortcut open-form positions of a closed walk, v_0 included.

    The result starts at the first kept element after position 0 in cyclic
    order.
    """
    pos = set(positions)
    k = walk.k
    start = next(i for i in range(k) if i not in pos)
    rot = rotate_to(walk, start)
    shifted = {(p - start) % k for p in pos}
    return shortcut(Walk(WalkKind.PMP, rot.visits), shifted)


def shortcut_depot(walk: Walk) -> Walk:
    return drop_cyclic(walk, positions_of(walk, DEPOT))


def duplicated_target(walk: Walk) -> int:
    dups = [t for t, c in visit_counts(walk).items() if c > 1]
    if len(dups) != 1:
        raise WalkError(f"expected exactly one repeated target in {walk}")
    return dups[0]


def _argmin_walk(options, instance: Instance) -> Optional[Walk]:
    """First walk of minimum travel time (ties keep the earliest option)."""
    best, best_t = None, math.inf
    for w in options:
        t = travel_time(w, instance)
        if t < best_t and not close(t, best_t):
            best, best_t = w, t
    return best


def _try(fn, *args):
    try:
        return fn(*args)
    except (InfeasibleShortcut, InfeasibleInsertion):
        return None


def best_depot_insertion(walk: Walk, instance: Instance) -> Walk:
    opts = (_try(insert, walk, g, DEPOT) for g in range(walk.k))
    return _argmin_walk((w for w in opts if w is not None), instance)


def best_target_insertion(walk: Walk, instance: Instance) -> Walk:
    opts = (_try(insert, walk, g, t) for g in range(walk.k) for t in instance.targets)
    return _argmin_walk((w for w in opts if w is not None), instance)


@dataclass
class IntermediateSet:
    tag: Scheme
    base: Walk
    small: Walk
    big: Optional[Walk] = None
    named: dict = field(default_factory=dict)  # every derived walk, by its usual name

    def blocks(self) -> list[Walk]:
        return [w for w in (self.base, self.big, self.small) if w is not None]

    def pivot(self) -> int:
        common = set(singly_visited_targets(self.base))
        for w in self.blocks()[1:]:
            common &= set(singly_visited_targets(w))
        if not common:
            raise NoPivot(f"no target is visited exactly once in every block of {self.tag.value}")
        return min(common)

    def to_dict(self, instance: Optional[Instance] = None) -> dict:
        out = {"tag": self.tag.value, "walks": {}}
        for name, w in self.named.items():
            entry = walk_to_dict(w)
            if instance is not None:
                entry["travel_time"] = travel_time(w, instance)
            out["walks"][name] = entry
        return out


def _wd2_shortcuts(seeds: SeedWalks, instance: Instance) -> dict:
    """ST / SD / STD shortcut walks of the (n+2)-visit seed."""
    wd2 = seeds.wd_n2
    t = duplicated_target(wd2)
    sd = _try(shortcut_depot, wd2)
    options = []
    for p in positions_of(wd2, t):
        st = _try(shortcut, wd2, {p})
        std = _try(drop_cyclic, wd2, {p, 0})
        options.append((p, st, std))
    out = {"repeated": t, "sd": sd}
    # O2 only needs STD; H1 needs all three from one choice of occurrence
    std_only = _argmin_walk((o[2] for o in options if o[2] is not None), instance)
    out["std_any"] = std_only
    h1 = [(st, std) for _, st, std in options if st is not None and std is not None]
    if sd is not None and h1:
        st = _argmin_walk((o[0] for o in h1), instance)
        std = next(o[1] for o in h1 if o[0] == st)
        out["st"], out["std"] = st, std
    else:
        out["st"] = _argmin_walk((o[1] for o in options if o[1] is not None), instance)
        out["std"] = None
    return out


def derive_intermediates(seeds: SeedWalks, tag: Scheme | str, instance: Instance) -> IntermediateSet:
    tag = Scheme(tag)
    if tag is Scheme.O1 or tag is Scheme.H3:
        wd1 = seeds.wd_n1
        sd = shortcut_depot(wd1)
        if tag is Scheme.O1:
            return IntermediateSet(tag, wd1, sd, None, {"WD*(n+1)": wd1, "WD1_SD": sd})
        sdit = best_target_insertion(sd, instance)
        return IntermediateSet(tag, wd1, sd, sdit,
                               {"WD*(n+1)": wd1, "WD1_SD": sd, "WD1_SDIT": sdit})
    if tag is Scheme.O2:
        parts = _wd2_shortcuts(seeds, instance)
        std = parts["std_any"]
        if std is None:
            raise WalkError("no feasible repeated-target-and-depot shortcut of WD*(n+2)")
        return IntermediateSet(tag, seeds.wd_n2, std, None,
                               {"WD*(n+2)": seeds.wd_n2, "WD2_STD": std})
    if tag is Scheme.H1:
        parts = _wd2_shortcuts(seeds, instance)
        named = {"WD*(n+2)": seeds.wd_n2}
        if parts["st"] is not None:
            named["WD2_ST"] = parts["st"]
        if parts["sd"] is None or parts["std"] is None:
            raise H1Unavailable("the depot cannot be shortcut from WD*(n+2) alongside a repeated-target shortcut")
        named.update({"WD2_SD": parts["sd"], "WD2_STD": parts["std"]})
        return IntermediateSet(tag, parts["st"], parts["std"], parts["sd"], named)
    # H2
    w1 = seeds.w_n1
    t = duplicated_target(w1)
    st = _argmin_walk((o for o in (_try(drop_cyclic, w1, {p}) for p in positions_of(w1, t))
                       if o is not None), instance)
    stid = best_depot_insertion(st, instance)
    return IntermediateSet(tag, stid, st, w1,
                           {"W*(n+1)": w1, "W1_ST": st, "W1_STID": stid})


# -- planning -------------------------------------------------------------------


@dataclass(frozen=True)
class ConstructionPlan:
    k: int
    n: int
    base_len: int
    x: int  # n-visit blocks
    y: int  # (n+1)-visit blocks
    arrangement: tuple
    cyclic_adjacency: bool  # base and big touch across the wrap (x == 1, y >= 1)
    below_guaranteed: bool  # n^2+n+1 <= k < n^2+2n+1
    pivot: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "k": self.k, "n": self.n, "base_len": self.base_len, "x": self.x, "y": self.y,
            "arrangement": list(self.arrangement), "cyclic_adjacency": self.cyclic_adjacency,
            "below_guaranteed": self.below_guaranteed, "pivot": self.pivot,
        }


def plan(k: int, n: int, base_len: int) -> ConstructionPlan:
    """Split ``k - base_len`` into x blocks of n visits and y blocks of n+1."""
    if k < n * n + n + 1:
        raise KTooSmallForPlan(f"k={k} is below n^2+n+1={n * n + n + 1}")
    rest = k - base_len
    y = rest % n
    x, r = divmod(rest - y * (n + 1), n)
    if r or x < 1:
        raise KTooSmallForPlan(f"k={k} cannot be split into a base of {base_len} plus n/n+1 blocks")
    arrangement = ("base", "small") + ("big",) * y + ("small",) * (x - 1)
    return ConstructionPlan(
        k=k, n=n, base_len=base_len, x=x, y=y, arrangement=arrangement,
        cyclic_adjacency=(x == 1 and y >= 1),
        below_guaranteed=k < n * n + 2 * n + 1,
    )


def assemble(iset: IntermediateSet, k: int, n: int) -> tuple[Walk, ConstructionPlan]:
    pl = plan(k, n, iset.base.k)
    if pl.y and iset.big is None:
        raise KTooSmallForPlan(f"{iset.tag.value} has no (n+1)-visit block but the plan needs {pl.y}")
    pivot = iset.pivot()
    blocks = {
        "base": permute(iset.base, pivot),
        "small": permute(iset.small, pivot),
        "big": permute(iset.big, pivot) if iset.big is not None else None,
    }
    chained = concatenate(*(blocks[name] for name in pl.arrangement))
    walk = permute(chained, DEPOT)
    pl = ConstructionPlan(**{**pl.__dict__, "pivot": pivot})
    return walk, pl


# -- selection ------------------------------------------------------------------


@dataclass
class ConstructionResult(SolveResult):
    scheme: Optional[Scheme] = None
    plan: Optional[ConstructionPlan] = None
    bound: Optional[BoundReport] = None
    r1: Optional[float] = None
    r2: Optional[float] = None
    r2_alt: Optional[float] = None
    r3: Optional[float] = None
    candidates: dict = field(default_factory=dict)  # scheme -> evaluated revisit time

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update({
            "scheme": self.scheme.value if self.scheme else None,
            "plan": self.plan.to_dict() if self.plan else None,
            "bound": self.bound.to_dict() if self.bound else None,
            "r1": self.r1, "r2": self.r2, "r2_alt": self.r2_alt, "r3": self.r3,
            "candidates": {s.value: v for s, v in self.candidates.items()},
        })
        return d


def r_values(seeds: SeedWalks, sets: dict, instance: Instance) -> dict:
    """Predicted revisit times of the H constructions (r2 both as printed and via STID)."""
    h1, h2, h3 = sets.get(Scheme.H1), sets[Scheme.H2], sets[Scheme.H3]
    tt = lambda w: travel_time(w, instance)  # noqa: E731
    r1 = max(tt(h1.base), tt(h1.big)) if h1 is not None else None
    return {
        "r1": r1,
        "r2": max(seeds.r_n1, tt(h2.small)),
        "r2_alt": max(seeds.r_n1, tt(h2.base)),
        "r3": max(seeds.rd_n1, tt(h3.big)),
    }


def choose_scheme(seeds: SeedWalks, k: int) -> Scheme | None:
    """Scheme fixed by the selection rules, or None when the H candidates compete."""
    _, q = q_decompose(k, seeds.n)
    if q == 0:
        return Scheme.O1
    trimodal = seeds.r_n1 > seeds.rd_n2 and not close(seeds.r_n1, seeds.rd_n2)
    if trimodal:
        return Scheme.O2 if q == 1 else Scheme.H2
    return None


def build(instance: Instance, seeds: SeedWalks, k: int) -> ConstructionResult:
    """Construct a k-visit PMP-D walk for ``k >= n^2+n+1``."""
    n = instance.n
    bound = lower_bound(seeds, k)
    if k < n * n + n + 1:
        raise KTooSmallForPlan(f"k={k} is below n^2+n+1={n * n + n + 1}")
    sets: dict = {}
    built: dict = {}
    for tag in H_ORDER:
        try:
            sets[tag] = derive_intermediates(seeds, tag, instance)
            built[tag] = assemble(sets[tag], k, n)
        except (H1Unavailable, KTooSmallForPlan):
            pass
    fixed = choose_scheme(seeds, k)
    if fixed in (Scheme.O1, Scheme.O2):
        sets[fixed] = derive_intermediates(seeds, fixed, instance)
        built[fixed] = assemble(sets[fixed], k, n)
    candidates = {tag: revisit_time(w, instance, check=False) for tag, (w, _) in built.items()}

    if fixed is not None:
        scheme = fixed
    else:
        avail = [t for t in H_ORDER if t in candidates]
        if not avail:
            raise KTooSmallForPlan(f"no construction fits k={k}")
        scheme = min(avail, key=lambda t: (candidates[t], H_ORDER.index(t)))
        # exact ties resolved by tag order; near-ties within tolerance too
        best = candidates[scheme]
        scheme = next(t for t in avail if close(candidates[t], best) or candidates[t] < best)
    if scheme not in built:
        raise KTooSmallForPlan(f"scheme {scheme.value} cannot realise k={k}")
    walk, pl = built[scheme]
    ub = revisit_time(walk, instance)
    if bound.certified and close(ub, bound.lb):
        cert = Certificate.optimal()
    else:
        cert = Certificate.best_found(ub, bound.lb)
    rv = r_values(seeds, sets, instance)
    return ConstructionResult(
        walk=walk, ub=ub, lb=bound.lb, certificate=cert,
        stats={"k": k, "n": n, "q": bound.q},
        scheme=scheme, plan=pl, bound=bound, candidates=candidates, **rv,
    )


def build_scheme(instance: Instance, seeds: SeedWalks, k: int, tag: Scheme | str) -> tuple[Walk, ConstructionPlan]:
    """Build one specific scheme regardless of the selection rules."""
    iset = derive_intermediates(seeds, tag, instance)
    return assemble(iset, k, instance.n)


# -- conjecture audit -----------------------------------------------------------


@dataclass(frozen=True)
class ConjectureCheck:
    r_n1: float
    rd_n2: float
    t_stid: float
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def conjecture1_check(seeds: SeedWalks, instance: Instance) -> ConjectureCheck:
    """Is the depot-inserted shortcut of W*(n+1) no longer than W*(n+1) itself?

    Only meaningful when R*(n+1) > RD*(n+2).
    """
    if not (seeds.r_n1 > seeds.rd_n2 and not close(seeds.r_n1, seeds.rd_n2)):
        raise NotApplicable("requires R*(n+1) > RD*(n+2)")
    stid = derive_intermediates(seeds, Scheme.H2, instance).base
    t = travel_time(stid, instance)
    return ConjectureCheck(seeds.r_n1, seeds.rd_n2, t, t <= seeds.r_n1 or close(t, seeds.r_n1))
