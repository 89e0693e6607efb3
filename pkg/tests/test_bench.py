"""Timing harness: table shape and the cross-worker determinism assertion."""

import pytest

from abckit.bench import bench_rules, bench_solver, render_table, run_bench
from abckit.rules import RULE_IDS


def test_rules_suite_covers_every_rule():
    rows = bench_rules(sizes=(40,), seed=1)
    assert [r.label for r in rows] == list(RULE_IDS)
    assert all(r.seconds >= 0 for r in rows)


def test_solver_suite_repeats_per_worker_count():
    rows = bench_solver("sp-cc", sizes=(80,), workers=(1, 2, 4), seed=1)
    assert [r.workers for r in rows] == [1, 2, 4]
    assert len({r.result for r in rows}) == 1  # identical coverage at every width


def test_table_is_aligned():
    table = run_bench("sc-cc", sizes=(60,), workers=(1,), seed=0)
    lines = table.splitlines()
    assert lines[0].split() == ["suite", "label", "size", "workers", "seconds", "result"]
    assert set(lines[1]) <= {"-", " "}
    assert len(lines) == 3


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_bench("sorting")
