"""Command-line entry point (``pmpd``)."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import bench as benchmod
from .bounds import classify_asymptotic, lower_bound
from .builder import build
from .errors import PMPDError
from .evaluator import revisit_time, target_gaps, travel_time
from .exact import solve_exact
from .instance import load_instance, random_instance, save_instance, instance_to_dict
from .seeds import DEFAULT_BUDGET_MS, DP_THRESHOLD, compute_seeds
from .walk import from_sequence, walk_from_dict, walk_to_dict


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, default=str))


def _read_walk(spec: str):
    path = Path(spec)
    if path.exists():
        data = json.loads(path.read_text())
        return walk_from_dict(data) if isinstance(data, dict) else from_sequence(data)
    return from_sequence([v.strip() for v in spec.split(",") if v.strip()])


def _seeds(args, inst):
    return compute_seeds(inst, args.budget_ms, args.dp_threshold)


def cmd_gen(args) -> int:
    inst = random_instance(args.seed, args.n, args.box)
    if args.out:
        save_instance(inst, args.out)
    else:
        _dump(instance_to_dict(inst))
    return 0


def cmd_eval(args) -> int:
    inst = load_instance(args.instance)
    walk = _read_walk(args.walk)
    gaps = target_gaps(walk, inst)
    _dump({
        "walk": walk_to_dict(walk),
        "travel_time": travel_time(walk, inst),
        "revisit_time": revisit_time(walk, inst),
        "target_gaps": {str(t): g for t, g in sorted(gaps.items())},
    })
    return 0


def cmd_seeds(args) -> int:
    inst = load_instance(args.instance)
    _dump(_seeds(args, inst).to_dict())
    return 0


def cmd_bound(args) -> int:
    inst = load_instance(args.instance)
    _dump(lower_bound(_seeds(args, inst), args.k).to_dict())
    return 0


def cmd_construct(args) -> int:
    inst = load_instance(args.instance)
    res = build(inst, _seeds(args, inst), args.k)
    if args.emit:
        Path(args.emit).write_text(json.dumps(walk_to_dict(res.walk), indent=2))
    _dump(res.to_dict())
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    if args.oracle:
        from .oracle import brute_force_optimal

        _dump(brute_force_optimal(inst, args.k).to_dict())
        return 0
    res = solve_exact(inst, args.k, args.budget_ms, seeds=_seeds(args, inst))
    _dump(res.to_dict())
    return 0


def cmd_classify(args) -> int:
    inst = load_instance(args.instance)
    seeds = _seeds(args, inst)
    modality = classify_asymptotic(seeds)
    _dump({"modality": modality.value, "rd_n1": seeds.rd_n1, "rd_n2": seeds.rd_n2, "r_n1": seeds.r_n1})
    return 0


def cmd_sweep(args) -> int:
    inst = load_instance(args.instance)
    res = benchmod.sweep_rd(inst, args.k_min, args.k_max, args.budget_ms)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "value", "status", "gap"])
            for p in res.points:
                w.writerow([p.k, p.value, p.status, "" if p.gap is None else p.gap])
    _dump(res.to_dict())
    return 0


def cmd_bench(args) -> int:
    cfg = benchmod.BenchConfig(
        count=args.count, n_plus_1_min=args.n_min, n_plus_1_max=args.n_max,
        base_seed=args.seed, box_size=args.box, ks=args.k or None,
        budget_ms=args.budget_ms, dp_threshold=args.dp_threshold, threads=args.threads,
    )
    rows, summary = benchmod.run_bench(cfg)
    if args.out:
        benchmod.save_bench(rows, summary, args.out)
    else:
        sys.stdout.write(benchmod.rows_to_csv(rows))
    _dump(summary)
    return 2 if summary["failures"] else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pmpd", description="Persistent monitoring with a depot: bounds, constructions, exact search.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_instance(sp):
        sp.add_argument("--instance", required=True, help="instance JSON file")

    def with_budget(sp):
        sp.add_argument("--budget-ms", type=float, default=DEFAULT_BUDGET_MS)
        sp.add_argument("--dp-threshold", type=int, default=DP_THRESHOLD)

    sp = sub.add_parser("gen", help="generate a seeded random Euclidean instance")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--n", type=int, required=True, help="number of targets")
    sp.add_argument("--box", type=float, default=100.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("eval", help="travel time, revisit time and per-target gaps of a walk")
    with_instance(sp)
    sp.add_argument("--walk", required=True, help="walk JSON file or comma list like d,1,2,3,d")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("seeds", help="compute the three seed walks")
    with_instance(sp)
    with_budget(sp)
    sp.set_defaults(func=cmd_seeds)

    sp = sub.add_parser("bound", help="lower bound on the optimal revisit time")
    with_instance(sp)
    sp.add_argument("--k", type=int, required=True)
    with_budget(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("construct", help="build a k-visit walk for large k")
    with_instance(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--emit", help="write the built walk to this JSON file")
    with_budget(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("solve", help="budgeted exact search")
    with_instance(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)
    with_budget(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("classify", help="asymptotic modality of the optimal revisit time")
    with_instance(sp)
    with_budget(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("sweep", help="optimal revisit time over a range of k")
    with_instance(sp)
    sp.add_argument("--k-min", type=int, required=True)
    sp.add_argument("--k-max", type=int, required=True)
    sp.add_argument("--budget-ms", type=float, default=DEFAULT_BUDGET_MS)
    sp.add_argument("--csv", help="also write plot-ready CSV here")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("bench", help="batch benchmark over seeded instances")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--n-min", type=int, default=4, help="smallest n+1")
    sp.add_argument("--n-max", type=int, default=12, help="largest n+1")
    sp.add_argument("--seed", type=int, default=0, help="first instance seed")
    sp.add_argument("--box", type=float, default=100.0)
    sp.add_argument("--k", type=int, action="append", help="fixed k (repeatable); default picks q >= 2")
    sp.add_argument("--threads", type=int)
    sp.add_argument("--out", help="directory for bench.csv and summary.json")
    with_budget(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PMPDError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
