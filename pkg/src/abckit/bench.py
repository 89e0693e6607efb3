"""Timing harness for the rule engine and the interval-coverage solvers.

Two suites:

* ``rules`` — every committee rule over seeded random elections of growing
  voter counts, timed one rule at a time.
* ``sp-cc`` / ``sc-cc`` — the corresponding coverage solver over directly
  generated interval instances, timed at each requested worker count.  The
  solver results must be identical at every worker count; the suite asserts
  this rather than trusting it.

Everything is seeded, so repeated runs time the same work.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .core import make_election
from .rules import RULE_IDS, ThieleWeight, compute_rule
from .verify import random_interval_instance
from .restricted import solve_sccc, solve_spcc

BENCH_SUITES = ("rules", "sp-cc", "sc-cc")


@dataclass(frozen=True)
class BenchRow:
    suite: str
    label: str
    size: int
    workers: int
    seconds: float
    result: str


def render_table(rows: list[BenchRow]) -> str:
    headers = ("suite", "label", "size", "workers", "seconds", "result")
    cells = [headers] + [
        (r.suite, r.label, str(r.size), str(r.workers), f"{r.seconds:.4f}", r.result)
        for r in rows
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _bench_election(rng: random.Random, n: int):
    m = 20
    k = 8
    ballots = []
    for _ in range(n):
        size = rng.randint(1, 5)
        ballots.append(frozenset(rng.sample(range(1, m + 1), size)))
    return make_election(m, k, ballots)


def bench_rules(sizes: tuple[int, ...] = (100, 400, 1600), seed: int = 0) -> list[BenchRow]:
    rows = []
    for n in sizes:
        e = _bench_election(random.Random(seed * 7919 + n), n)
        for rule in RULE_IDS:
            weights = None
            if rule in ("seq-thiele", "rev-seq-thiele"):
                weights = ThieleWeight.harmonic(e.m)
            start = time.perf_counter()
            first = compute_rule(rule, e, weights=weights)
            elapsed = time.perf_counter() - start
            again = compute_rule(rule, e, weights=weights)
            if again.committee != first.committee:
                raise AssertionError(f"{rule} is not deterministic at n={n}")
            rows.append(
                BenchRow("rules", rule, n, 1, elapsed, first.committee.render())
            )
    return rows


def bench_solver(
    suite: str,
    sizes: tuple[int, ...] = (200, 500, 1000),
    workers: tuple[int, ...] = (1, 2, 4, 8),
    seed: int = 0,
) -> list[BenchRow]:
    kind = "sp" if suite == "sp-cc" else "sc"
    solver = solve_spcc if kind == "sp" else solve_sccc
    rows = []
    for size in sizes:
        rng = random.Random(seed * 7919 + size)
        inst = random_interval_instance(
            rng, kind, universe=size, count=size, budget=min(25, max(5, size // 40))
        )
        baseline = None
        for w in workers:
            start = time.perf_counter()
            value, witness = solver(inst, workers=w)
            elapsed = time.perf_counter() - start
            if baseline is None:
                baseline = (value, witness)
            elif (value, witness) != baseline:
                raise AssertionError(
                    f"{suite} result changed between worker counts at size={size}"
                )
            rows.append(BenchRow(suite, "coverage", size, w, elapsed, str(value)))
    return rows


def run_bench(
    suite: str,
    sizes: tuple[int, ...] | None = None,
    workers: tuple[int, ...] = (1, 2, 4, 8),
    seed: int = 0,
) -> str:
    if suite == "rules":
        rows = bench_rules(sizes or (100, 400, 1600), seed=seed)
    elif suite in ("sp-cc", "sc-cc"):
        rows = bench_solver(suite, sizes or (200, 500, 1000), workers=workers, seed=seed)
    else:
        raise ValueError(f"unknown bench suite {suite!r}; expected one of {', '.join(BENCH_SUITES)}")
    return render_table(rows)
