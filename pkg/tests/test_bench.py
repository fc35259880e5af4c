import csv
import json

from pmpd.bench import (
    COLUMNS,
    BenchConfig,
    bench_instance,
    default_k,
    max_workers,
    rows_to_csv,
    run_bench,
    save_bench,
    summarize,
    sweep_rd,
)
from pmpd.instance import random_instance


def test_default_k_policy():
    for n in range(3, 12):
        for seed in range(10):
            k = default_k(n, seed)
            assert k >= n * n + 2 * n + 1
            assert (k - 1) % n >= 2


def test_empty_bench_has_header_only():
    rows, summary = run_bench(BenchConfig(count=0))
    assert rows_to_csv(rows).strip() == ",".join(COLUMNS)
    assert summary["rows"] == 0 and summary["mean_gap_pct"] is None


def test_small_bench(tmp_path):
    rows, summary = run_bench(BenchConfig(count=6, threads=1))
    assert len(rows) == 6 and summary["failures"] == 0
    assert [r.instance_id for r in rows] == [f"rand-s{i}-n{3 + i}" for i in range(6)]
    assert all(r.ub >= r.lb - 1e-9 for r in rows)
    csv_path, json_path = save_bench(rows, summary, tmp_path)
    table = list(csv.reader(open(csv_path)))
    assert table[0] == COLUMNS and len(table) == 7
    assert json.loads(json_path.read_text())["summary"]["rows"] == 6


def test_parallel_matches_serial():
    cfg = dict(count=5, base_seed=40)
    a, _ = run_bench(BenchConfig(threads=1, **cfg))
    b, _ = run_bench(BenchConfig(threads=2, **cfg))
    strip = lambda rows: [(r.instance_id, r.ub, r.lb, r.scheme) for r in rows]  # noqa: E731
    assert strip(a) == strip(b)


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("PMPD_THREADS", "2")
    assert max_workers() == 2
    assert max_workers(8) == 2


def test_fixture_bench_gaps(fixture_instance):
    rows = bench_instance(fixture_instance, [36, 37, 38], 60_000, 16)
    assert [r.gap_pct for r in rows] == [0.0, 0.0, 0.0]
    assert [r.scheme for r in rows] == ["O1", "O2", "H2"]
    assert rows[0].modality == "trimodal" and rows[0].conj_holds


def test_row_failure_recorded(fixture_instance):
    rows = bench_instance(fixture_instance, [10], 60_000, 16)
    assert rows[0].error.startswith("KTooSmallForPlan")
    assert summarize(rows)["failures"] == 1


def test_two_decimal_csv():
    rows = bench_instance(random_instance(0, 4), [27], 60_000, 16)
    line = rows_to_csv(rows).splitlines()[1]
    ub = line.split(",")[COLUMNS.index("ub")]
    assert len(ub.split(".")[1]) == 2
    assert rows_to_csv(rows, precise=True) != rows_to_csv(rows)


def test_sweep_periodic():
    res = sweep_rd(random_instance(100, 3), 13, 19)
    assert len(res.points) == 7 and all(p.status == "optimal" for p in res.points)
    assert res.periodic and res.matches_prediction
    assert res.predicted == "bimodal" and len(res.observed_values) == 2


def test_sweep_unimodal_constant():
    res = sweep_rd(random_instance(101, 3), 13, 19)
    assert res.predicted == "unimodal"
    assert len(res.observed_values) == 1
