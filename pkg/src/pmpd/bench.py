"""Batch benchmark over seeded instances and revisit-time sweeps over k."""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from .bounds import Modality, classify_asymptotic
from .builder import build, conjecture1_check
from .errors import NotApplicable, PMPDError
from .exact import solve_exact
from .instance import Instance, close, random_instance
from .seeds import DP_THRESHOLD, compute_seeds


@dataclass
class BenchRow:
    instance_id: str
    n_plus_1: int
    k: int
    q: Optional[int] = None
    r_n1: Optional[float] = None
    rd_n1: Optional[float] = None
    rd_n2: Optional[float] = None
    r1: Optional[float] = None
    r2: Optional[float] = None
    r2_alt: Optional[float] = None
    r3: Optional[float] = None
    scheme: str = ""
    seed_seconds: Optional[float] = None
    build_seconds: Optional[float] = None
    ub: Optional[float] = None
    lb: Optional[float] = None
    gap_pct: Optional[float] = None
    certified: bool = False
    modality: str = ""
    conj_applicable: bool = False
    conj_holds: Optional[bool] = None
    t_stid: Optional[float] = None
    error: str = ""


COLUMNS = [f.name for f in fields(BenchRow)]


@dataclass
class BenchConfig:
    count: int = 100
    n_plus_1_min: int = 4
    n_plus_1_max: int = 12
    base_seed: int = 0
    box_size: float = 100.0
    ks: Optional[list] = None  # explicit k values per instance; default policy otherwise
    budget_ms: float = 60_000
    dp_threshold: int = DP_THRESHOLD
    threads: Optional[int] = None


def default_k(n: int, seed: int) -> int:
    """k >= n^2+2n+1 with q >= 2 (k - 1 = pn + q)."""
    q = 2 + seed % (n - 2)
    return n * n + 2 * n + 1 + q


def instance_size(cfg: BenchConfig, i: int) -> int:
    span = cfg.n_plus_1_max - cfg.n_plus_1_min + 1
    return cfg.n_plus_1_min + i % span - 1


def bench_instance(inst: Instance, ks, budget_ms: float, dp_threshold: int) -> list[BenchRow]:
    rows = []
    t0 = time.perf_counter()
    try:
        seeds = compute_seeds(inst, budget_ms, dp_threshold)
    except PMPDError as exc:
        return [BenchRow(inst.name, inst.n + 1, k, error=f"{type(exc).__name__}: {exc}") for k in ks]
    seed_s = time.perf_counter() - t0
    try:
        modality = classify_asymptotic(seeds, strict=False).value
    except PMPDError:
        modality = ""
    conj = None
    try:
        conj = conjecture1_check(seeds, inst)
    except NotApplicable:
        pass
    for k in ks:
        row = BenchRow(
            inst.name, inst.n + 1, k, r_n1=seeds.r_n1, rd_n1=seeds.rd_n1, rd_n2=seeds.rd_n2,
            seed_seconds=seed_s, certified=seeds.certified, modality=modality,
            conj_applicable=conj is not None,
            conj_holds=conj.holds if conj else None, t_stid=conj.t_stid if conj else None,
        )
        try:
            t1 = time.perf_counter()
            res = build(inst, seeds, k)
            row.build_seconds = time.perf_counter() - t1
            row.q = res.bound.q
            row.r1, row.r2, row.r2_alt, row.r3 = res.r1, res.r2, res.r2_alt, res.r3
            row.scheme = res.scheme.value
            row.ub, row.lb = res.ub, res.lb
            row.gap_pct = res.gap_pct
            row.certified = res.bound.certified
            if row.certified and row.ub < row.lb and not close(row.ub, row.lb):
                row.error = "UB below certified LB"
        except PMPDError as exc:
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def _job(args):
    seed, n, ks, box, budget_ms, dp_threshold = args
    inst = random_instance(seed, n, box)
    return bench_instance(inst, ks, budget_ms, dp_threshold)


def max_workers(requested: Optional[int] = None) -> int:
    cap = os.environ.get("PMPD_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(requested or limit, limit))


def run_bench(cfg: BenchConfig) -> tuple[list[BenchRow], dict]:
    jobs = []
    for i in range(cfg.count):
        seed = cfg.base_seed + i
        n = instance_size(cfg, i)
        ks = list(cfg.ks) if cfg.ks else [default_k(n, seed)]
        jobs.append((seed, n, ks, cfg.box_size, cfg.budget_ms, cfg.dp_threshold))
    workers = max_workers(cfg.threads)
    t0 = time.perf_counter()
    if workers == 1 or len(jobs) <= 1:
        chunks = [_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_job, jobs))  # map keeps instance order
    rows = [r for chunk in chunks for r in chunk]
    return rows, summarize(rows, time.perf_counter() - t0)


def summarize(rows: list[BenchRow], wall_seconds: float = 0.0) -> dict:
    ok = [r for r in rows if not r.error and r.gap_pct is not None]
    gaps = [r.gap_pct for r in ok]
    wins: dict = {}
    for r in ok:
        wins[r.scheme] = wins.get(r.scheme, 0) + 1
    seen = {}
    for r in rows:
        seen.setdefault(r.instance_id, r)
    conj = [r for r in seen.values() if r.conj_applicable]
    return {
        "rows": len(rows),
        "failures": sum(1 for r in rows if r.error),
        "mean_gap_pct": statistics.fmean(gaps) if gaps else None,
        "max_gap_pct": max(gaps) if gaps else None,
        "zero_gap_rows": sum(1 for g in gaps if g <= 1e-7),
        "ub_ge_lb": all(r.ub >= r.lb or close(r.ub, r.lb) for r in ok),
        "scheme_wins": wins,
        "conjecture": {
            "applicable": len(conj),
            "holds": sum(1 for r in conj if r.conj_holds),
            "counterexamples": [r.instance_id for r in conj if not r.conj_holds],
        },
        "timing": {
            "wall_seconds": wall_seconds,
            "mean_seed_seconds": statistics.fmean([r.seed_seconds for r in seen.values()
                                                   if r.seed_seconds is not None] or [0.0]),
            "mean_build_seconds": statistics.fmean([r.build_seconds for r in ok
                                                    if r.build_seconds is not None] or [0.0]),
        },
    }


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.2f}"
    if v is None:
        return ""
    return v


def write_csv(rows: list[BenchRow], out, precise: bool = False) -> None:
    """Fixed column order; floats rounded to 2 decimals unless ``precise``."""
    w = csv.writer(out)
    w.writerow(COLUMNS)
    for r in rows:
        d = asdict(r)
        w.writerow([d[c] if precise else _fmt(d[c]) for c in COLUMNS])


def rows_to_csv(rows: list[BenchRow], precise: bool = False) -> str:
    buf = io.StringIO()
    write_csv(rows, buf, precise)
    return buf.getvalue()


def save_bench(rows: list[BenchRow], summary: dict, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = out / "bench.csv", out / "summary.json"
    with open(csv_path, "w", newline="") as fh:
        write_csv(rows, fh)
    payload = {"summary": summary, "rows": [asdict(r) for r in rows]}
    json_path.write_text(json.dumps(payload, indent=2))
    return csv_path, json_path


# -- sweeps ---------------------------------------------------------------------


@dataclass
class SweepPoint:
    k: int
    value: float
    status: str
    gap: Optional[float] = None


@dataclass
class SweepResult:
    instance: str
    n: int
    points: list = field(default_factory=list)
    predicted: Optional[str] = None
    observed_values: list = field(default_factory=list)
    periodic: Optional[bool] = None
    matches_prediction: Optional[bool] = None

    def to_dict(self) -> dict:
        return asdict(self)


def distinct_values(values) -> list[float]:
    out: list = []
    for v in sorted(values):
        if not out or not close(out[-1], v):
            out.append(v)
    return out


def sweep_rd(instance: Instance, k_min: int, k_max: int, budget_ms: float = 60_000,
             stop_at_bound: bool = False) -> SweepResult:
    """Optimal revisit time for each k in ``[k_min, k_max]``.

    Points in the asymptotic range (k >= n^2+n+1) feed the periodicity check
    and the observed count of distinct values; the prediction holds when that
    count does not exceed the classifier's (seed values may coincide).
    """
    n = instance.n
    seeds = compute_seeds(instance, budget_ms)
    res = SweepResult(instance.name, n)
    try:
        res.predicted = classify_asymptotic(seeds).value
    except PMPDError:
        res.predicted = None
    values = {}
    for k in range(k_min, k_max + 1):
        out = solve_exact(instance, k, budget_ms, seeds=seeds, stop_at_bound=stop_at_bound)
        res.points.append(SweepPoint(k, out.ub, out.certificate.status.value, out.certificate.gap))
        if out.certificate.is_optimal:
            values[k] = out.ub
    tail = {k: v for k, v in values.items() if k >= n * n + n + 1}
    pairs = [(k, k + n) for k in tail if k + n in tail]
    res.periodic = all(close(tail[a], tail[b]) for a, b in pairs) if pairs else None
    if len(tail) >= n:
        res.observed_values = distinct_values(tail.values())
        if res.predicted is not None:
            res.matches_prediction = len(res.observed_values) <= Modality(res.predicted).count
    return res

