"""Paired-oracle verification harness.

Every check here runs two independent routes to the same answer — a graph
oracle against a reduction's committee, a deterministic solver against a
brute-force or path-enumeration oracle — over seeded random (and, where
feasible, exhaustive) instances, and reports agreement counts, concrete
disagreements, and tie events.

Reports are bit-reproducible: each trial derives its own integer seed from
(seed, trial index), so results are identical regardless of how trials are
batched over workers.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .core import Election, PreconditionError, make_election, tie_events
from .graphs import (
    Graph,
    all_graphs,
    lfmis,
    ovr_decide,
    random_graph,
    random_regular_graph,
)
from .reductions import (
    ReductionOutput,
    build_reduction,
    detie_seqcc,
    reduce_ovr_to_seqcc,
    tree_gadget_roles,
)
from .restricted import (
    IntervalInstance,
    brute_cc,
    find_axis,
    optl_enumerate,
    optl_paths,
    solve_sccc,
    solve_spcc,
    to_intervals,
)
from .rules import (
    ThieleWeight,
    greedy_monroe,
    mes_phase1,
    mes_seqp,
    rev_seq_thiele,
    seq_phragmen,
    seq_thiele,
)

THEOREM_IDS = (
    "thm2",
    "thm3",
    "thiele",
    "rev-thiele",
    "phragmen",
    "monroe",
    "mes",
    "mes-notie",
    "mes-seqp",
    "spcc",
    "sccc",
    "optl",
)


@dataclass(frozen=True)
class Disagreement:
    case: str
    vertex: int
    expected: str
    got: str


@dataclass(frozen=True)
class VerifyReport:
    theorem_id: str
    trials: int
    cases: int
    agreements: int
    disagreements: tuple[Disagreement, ...]
    tie_events: int

    def __post_init__(self) -> None:
        if self.agreements + len(self.disagreements) != self.cases:
            raise ValueError("agreements and disagreements must partition the cases")

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def render(self) -> str:
        lines = [
            f"theorem={self.theorem_id} trials={self.trials} cases={self.cases} "
            f"agreements={self.agreements} disagreements={len(self.disagreements)} "
            f"tie_events={self.tie_events}"
        ]
        for d in self.disagreements:
            lines.append(f"  MISMATCH {d.case} vertex={d.vertex} expected={d.expected} got={d.got}")
        return "\n".join(lines)


def _trial_seed(seed: int, trial: int) -> int:
    return seed * 1_000_003 + trial


# --- seeded generators --------------------------------------------------------


def random_election(rng: random.Random, m_max: int = 8, n_max: int = 12) -> Election:
    m = rng.randint(1, m_max)
    k = rng.randint(1, m)
    n = rng.randint(1, n_max)
    ballots = [
        frozenset(c for c in range(1, m + 1) if rng.random() < 0.4) for _ in range(n)
    ]
    return make_election(m, k, ballots)


def random_sp_election(rng: random.Random, m_max: int = 7, n_max: int = 7) -> Election:
    """Every ballot is an interval on a hidden candidate order."""
    m = rng.randint(2, m_max)
    n = rng.randint(1, n_max)
    k = rng.randint(1, m)
    perm = list(range(1, m + 1))
    rng.shuffle(perm)
    ballots = []
    for _ in range(n):
        if rng.random() < 0.1:
            ballots.append(frozenset())
            continue
        lo = rng.randint(1, m)
        hi = rng.randint(lo, m)
        ballots.append(frozenset(perm[p - 1] for p in range(lo, hi + 1)))
    return make_election(m, k, ballots)


def random_sc_election(rng: random.Random, m_max: int = 7, n_max: int = 7) -> Election:
    """Every candidate's approver set is an interval on the identity voter order."""
    m = rng.randint(1, m_max)
    n = rng.randint(1, n_max)
    k = rng.randint(1, m)
    spans: list[tuple[int, int] | None] = []
    for _ in range(m):
        if rng.random() < 0.15:
            spans.append(None)
            continue
        lo = rng.randint(1, n)
        spans.append((lo, rng.randint(lo, n)))
    ballots = [
        frozenset(c for c, span in enumerate(spans, start=1) if span and span[0] <= i <= span[1])
        for i in range(1, n + 1)
    ]
    return make_election(m, k, ballots)


def random_interval_instance(
    rng: random.Random, kind: str, universe: int, count: int, budget: int
) -> IntervalInstance:
    """Direct interval instance for large-scale solver runs."""
    intervals: list[tuple[int, int] | None] = []
    for _ in range(count):
        if rng.random() < 0.05:
            intervals.append(None)
            continue
        lo = rng.randint(1, universe)
        intervals.append((lo, min(universe, lo + rng.randint(0, max(1, universe // 8)))))
    if kind == "sc":
        nonempty = sorted(
            (iv, lab) for lab, iv in enumerate(intervals, start=1) if iv is not None
        )
        empties = [lab for lab, iv in enumerate(intervals, start=1) if iv is None]
        ordered = [iv for iv, _ in nonempty] + [None] * len(empties)
        labels = [lab for _, lab in nonempty] + empties
        return IntervalInstance("sc", universe, budget, tuple(ordered), tuple(labels))
    return IntervalInstance(
        "sp", universe, budget, tuple(intervals), tuple(range(1, count + 1))
    )


def _graph_label(g: Graph, note: str = "") -> str:
    edges = ";".join(f"{u}-{v}" for u, v in sorted(g.edges))
    suffix = f" {note}" if note else ""
    return f"graph(m={g.num_vertices} edges={edges}){suffix}"


# --- per-theorem checkers -----------------------------------------------------


def _check_ovr_cases(g: Graph, tag: str):
    cases = agreements = ties = 0
    bad: list[Disagreement] = []
    for k in range(0, g.num_vertices):
        out = reduce_ovr_to_seqcc(g, 1, k)
        committee, trace = seq_thiele(out.election, ThieleWeight.coverage(out.election.k))
        ties += tie_events(trace)
        for v in range(1, g.num_vertices + 1):
            cases += 1
            expected = ovr_decide(g, v, k)
            got = v in committee
            if expected == got:
                agreements += 1
            else:
                bad.append(
                    Disagreement(f"{tag} {_graph_label(g, f'k={k}')}", v, str(expected), str(got))
                )
    return cases, agreements, bad, ties


def _thm2_exhaustive(max_vertices: int):
    cases = agreements = ties = 0
    bad: list[Disagreement] = []
    for n in range(1, max_vertices + 1):
        for g in all_graphs(n):
            c, a, b, t = _check_ovr_cases(g, "exhaustive")
            cases += c
            agreements += a
            bad += b
            ties += t
    return cases, agreements, bad, ties


def _thm2_trial(trial: int, max_size: int, seed: int):
    rng = random.Random(_trial_seed(seed, trial))
    g = random_graph(rng.randint(2, max_size), rng)
    return _check_ovr_cases(g, f"trial={trial}")


def _thm3_trial(trial: int, max_size: int, seed: int):
    rng = random.Random(_trial_seed(seed, trial))
    e = random_election(rng, m_max=min(8, max_size), n_max=12)
    w = ThieleWeight.coverage(e.k)
    committee, trace = seq_thiele(e, w)
    padded = detie_seqcc(e)
    padded_committee, padded_trace = seq_thiele(padded, w)
    ties = tie_events(padded_trace)
    same_order = [t.chosen for t in trace] == [t.chosen for t in padded_trace]
    ok = padded_committee == committee and same_order and ties == 0
    bad = []
    if not ok:
        bad.append(
            Disagreement(
                f"trial={trial} m={e.m} k={e.k} n={e.n}",
                0,
                f"committee={committee.render()} order preserved, 0 ties",
                f"committee={padded_committee.render()} same_order={same_order} ties={ties}",
            )
        )
    return 1, int(ok), bad, ties


_LFMIS_SIZES = (4, 6, 8, 10, 12)


def _weight_family(epsilon: Fraction, length: int) -> ThieleWeight:
    if epsilon == 0:
        return ThieleWeight.coverage(length)
    if epsilon == Fraction(1, 2):
        return ThieleWeight.harmonic(length)
    return ThieleWeight.from_epsilon(epsilon, length)


_LFMIS_CONFIGS: dict[str, list[tuple[str, Fraction | None]]] = {
    "thiele": [
        ("lfmis-seq-thiele", Fraction(0)),
        ("lfmis-seq-thiele", Fraction(1, 2)),
        ("lfmis-seq-thiele", Fraction(3, 4)),
    ],
    "rev-thiele": [
        ("lfmis-rev-seq-thiele", Fraction(0)),
        ("lfmis-rev-seq-thiele", Fraction(1, 2)),
    ],
    "phragmen": [("lfmis-seq-phragmen", None)],
    "monroe": [("lfmis-greedy-monroe", None)],
    "mes": [("lfmis-mes", None)],
    "mes-seqp": [("lfmis-mes-phragmen", None)],
    "mes-notie": [("lfmis-mes-notie", None)],
}


def _run_reduction(out: ReductionOutput):
    e = out.election
    rule = out.expected_rule
    if rule == "seq-cc":
        return seq_thiele(e, ThieleWeight.coverage(e.k))
    if rule == "seq-thiele":
        return seq_thiele(e, _weight_family(out.epsilon, e.k))
    if rule == "rev-seq-thiele":
        return rev_seq_thiele(e, _weight_family(out.epsilon, e.m))
    if rule == "seq-phragmen":
        committee, _, trace = seq_phragmen(e)
        return committee, trace
    if rule == "greedy-monroe":
        return greedy_monroe(e)
    if rule == "mes":
        committee, _, trace = mes_phase1(e)
        return committee, trace
    if rule == "mes-phragmen":
        return mes_seqp(e)
    raise AssertionError(f"no runner for rule {rule}")


def _mes_seqp_structure(g: Graph, committee, trace) -> str | None:
    """The two-phase construction must elect roots + the greedy independent
    set in phase 1 and fill every remaining seat with middle-layer tree
    candidates at load exactly 1/12."""
    m = g.num_vertices
    roots, children, _ = tree_gadget_roles(m)
    mis = lfmis(g)
    phase1_len = m + len(mis)
    phase1 = {t.chosen for t in trace[:phase1_len]}
    phase2 = trace[phase1_len:]
    if phase1 != set(roots) | mis:
        return f"phase-1 winners {sorted(phase1)} != roots+mis"
    if any(t.chosen not in set(children) for t in phase2):
        return "phase-2 winner outside the middle layer"
    if any(t.value != Fraction(1, 12) for t in phase2):
        return "phase-2 load != 1/12"
    if len(committee) != len(phase1) + len(phase2):
        return "committee size != phase-1 + phase-2 winners"
    return None


def _lfmis_trial(theorem_id: str, trial: int, max_size: int, seed: int):
    rng = random.Random(_trial_seed(seed, trial))
    if theorem_id == "mes-notie":
        sizes = tuple(s for s in (12, 14) if s <= max_size) or (12,)
    else:
        sizes = tuple(s for s in _LFMIS_SIZES if 4 <= s <= max_size) or (4,)
    m = sizes[trial % len(sizes)]
    g = random_regular_graph(m, 3, rng)
    mis = lfmis(g)
    cases = agreements = ties = 0
    bad: list[Disagreement] = []
    for name, epsilon in _LFMIS_CONFIGS[theorem_id]:
        out = build_reduction(name, g, 1, epsilon=epsilon)
        committee, trace = _run_reduction(out)
        ties += tie_events(trace)
        shift = 1 if name == "lfmis-mes-notie" else 0
        for v in range(1, m + 1):
            cases += 1
            in_mis = v in mis
            expected = in_mis if out.sense == "yes" else not in_mis
            got = (v + shift) in committee
            if expected == got:
                agreements += 1
            else:
                label = f"trial={trial} {name}" + (f" eps={epsilon}" if epsilon is not None else "")
                bad.append(
                    Disagreement(f"{label} {_graph_label(g)}", v, str(expected), str(got))
                )
        if theorem_id == "mes-notie":
            cases += 1
            front = [t.chosen for t in trace[:2]]
            if front == [1, 2]:
                agreements += 1
            else:
                bad.append(
                    Disagreement(
                        f"trial={trial} {name} {_graph_label(g)}",
                        0,
                        "dedicated candidate then vertex 1 elected first",
                        f"first rounds elected {front}",
                    )
                )
        if theorem_id == "mes-seqp":
            cases += 1
            problem = _mes_seqp_structure(g, committee, trace)
            if problem is None:
                agreements += 1
            else:
                bad.append(
                    Disagreement(f"trial={trial} {name} {_graph_label(g)}", 0, "phase split holds", problem)
                )
    return cases, agreements, bad, ties


def _coverage_of(e: Election, members) -> int:
    members = set(members)
    return sum(1 for b in e.ballots if b & members)


def _spcc_trial(trial: int, max_size: int, seed: int):
    rng = random.Random(_trial_seed(seed, trial))
    e = random_sp_election(rng, m_max=min(7, max_size), n_max=min(7, max_size))
    axis = find_axis(e, "sp")
    if axis is None:
        return 1, 0, [Disagreement(f"trial={trial}", 0, "an sp axis", "not recognized")], 0
    inst = to_intervals(e, axis)
    best, positions = solve_spcc(inst)
    oracle, _ = brute_cc(e)
    witness = {axis.order[p - 1] for p in positions}
    ok = best == oracle and _coverage_of(e, witness) == best
    bad = []
    if not ok:
        bad.append(
            Disagreement(
                f"trial={trial} m={e.m} k={e.k} n={e.n}",
                0,
                f"coverage {oracle} with a matching witness",
                f"coverage {best} witness covers {_coverage_of(e, witness)}",
            )
        )
    return 1, int(ok), bad, 0


def _sccc_trial(trial: int, max_size: int, seed: int):
    rng = random.Random(_trial_seed(seed, trial))
    e = random_sc_election(rng, m_max=min(7, max_size), n_max=min(7, max_size))
    axis = find_axis(e, "sc")
    if axis is None:
        return 1, 0, [Disagreement(f"trial={trial}", 0, "an sc axis", "not recognized")], 0
    inst = to_intervals(e, axis)
    best, committee = solve_sccc(inst)
    oracle, _ = brute_cc(e)
    ok = best == oracle and _coverage_of(e, committee) == best and len(committee) == e.k
    bad = []
    if not ok:
        bad.append(
            Disagreement(
                f"trial={trial} m={e.m} k={e.k} n={e.n}",
                0,
                f"coverage {oracle} with a matching witness",
                f"coverage {best} witness covers {_coverage_of(e, committee)}",
            )
        )
    return 1, int(ok), bad, 0


def _optl_trial(trial: int, max_size: int, seed: int):
    rng = random.Random(_trial_seed(seed, trial))
    cap = min(5, max_size)
    if trial % 2 == 0:
        e = random_sp_election(rng, m_max=cap, n_max=cap)
        kind, variant, solver = "sp", "spcc", solve_spcc
    else:
        e = random_sc_election(rng, m_max=cap, n_max=cap)
        kind, variant, solver = "sc", "sccc", solve_sccc
    axis = find_axis(e, kind)
    if axis is None:
        return 1, 0, [Disagreement(f"trial={trial}", 0, f"an {kind} axis", "not recognized")], 0
    inst = to_intervals(e, axis)
    if variant == "sccc" and inst.budget > len(inst.nonempty()):
        inst = IntervalInstance(
            inst.kind,
            inst.universe_size,
            max(1, len(inst.nonempty())),
            inst.intervals,
            inst.labels,
        )
        if not inst.nonempty():
            return 1, 1, [], 0  # nothing approvable: nothing to cross-check
    best, _ = solver(inst)
    _, (optv, _), _ = optl_enumerate(inst, variant)
    ordered = _ordering_lemma_holds(inst, variant)
    ok = optv == best and ordered
    bad = []
    if not ok:
        bad.append(
            Disagreement(
                f"trial={trial} {variant} m={e.m} k={inst.budget} n={e.n}",
                0,
                f"decoded target {best} and ordered outputs",
                f"decoded target {optv} ordered={ordered}",
            )
        )
    return 1, int(ok), bad, 0


def _ordering_lemma_holds(inst: IntervalInstance, variant: str) -> bool:
    """Among accepting paths, a strictly larger guessed target must yield a
    strictly larger output value."""
    accepted = [p for p in optl_paths(inst, variant) if p.accepted]
    for a in accepted:
        for b in accepted:
            if a.optv > b.optv and a.output_value <= b.output_value:
                return False
    return True


_TRIAL_RUNNERS = {
    "thm2": _thm2_trial,
    "thm3": _thm3_trial,
    "spcc": _spcc_trial,
    "sccc": _sccc_trial,
    "optl": _optl_trial,
}


def _run_trial(theorem_id: str, trial: int, max_size: int, seed: int):
    runner = _TRIAL_RUNNERS.get(theorem_id)
    if runner is not None:
        return runner(trial, max_size, seed)
    return _lfmis_trial(theorem_id, trial, max_size, seed)


def _run_trial_batch(args):
    theorem_id, trials, max_size, seed = args
    cases = agreements = ties = 0
    bad: list[Disagreement] = []
    for trial in trials:
        c, a, b, t = _run_trial(theorem_id, trial, max_size, seed)
        cases += c
        agreements += a
        bad += b
        ties += t
    return cases, agreements, bad, ties


def run_verify(
    theorem_id: str,
    trials: int = 100,
    max_size: int = 8,
    seed: int = 0,
    workers: int = 1,
) -> VerifyReport:
    """Run one equivalence suite and report agreements, disagreements, and
    tie events.  Identical (theorem, trials, max_size, seed) inputs produce
    identical reports for any worker count."""
    if theorem_id not in THEOREM_IDS:
        raise PreconditionError(
            f"unknown theorem {theorem_id!r}; expected one of {', '.join(THEOREM_IDS)}"
        )
    cases = agreements = ties = 0
    bad: list[Disagreement] = []
    if theorem_id == "thm2":
        c, a, b, t = _thm2_exhaustive(min(5, max_size))
        cases += c
        agreements += a
        bad += b
        ties += t

    trial_ids = list(range(trials))
    if workers > 1 and trials > 1:
        batches = [
            (theorem_id, trial_ids[i::workers], max_size, seed) for i in range(workers)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_trial_batch, batches))
    else:
        parts = [_run_trial_batch((theorem_id, trial_ids, max_size, seed))]
    for c, a, b, t in parts:
        cases += c
        agreements += a
        bad += b
        ties += t
    bad.sort(key=lambda d: (d.case, d.vertex))
    return VerifyReport(theorem_id, trials, cases, agreements, tuple(bad), ties)
