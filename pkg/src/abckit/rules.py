"""Exact implementations of the eight polynomial-time ABC rules.

Every sequential rule emits one :class:`~abckit.core.RoundTrace` per round so
callers can assert when lexicographic tie-breaking fired.  All arithmetic is
`fractions.Fraction`; comparisons are exact.

Internally the sequential rules group identical ballots into classes with
multiplicities.  This is exact by symmetry: voters with equal ballots (and
equal initial loads/budgets) receive identical updates under every rule here,
so a class evolves as one unit.  Greedy Monroe is the exception and stays
per-voter, because its quota removal depends on voter indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    Committee,
    Election,
    PreconditionError,
    RoundTrace,
    approval_scores,
    committee_of,
    lex_min_argopt,
)

RULE_IDS = (
    "av",
    "sav",
    "seq-cc",
    "seq-pav",
    "seq-thiele",
    "rev-seq-cc",
    "rev-seq-pav",
    "rev-seq-thiele",
    "seq-phragmen",
    "greedy-monroe",
    "mes",
    "mes-phragmen",
)


@dataclass(frozen=True)
class ThieleWeight:
    """Marginal gains of a nondecreasing weight function with w(0) = 0.

    ``marginal_gains[x-1]`` is ``Δw(x) = w(x) - w(x-1)``.  The sequential
    variant needs gains up to the committee size; the reverse variant scores
    the full candidate set and needs gains up to the candidate count.
    """

    marginal_gains: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.marginal_gains:
            raise ValueError("need at least one marginal gain")
        if any(g < 0 for g in self.marginal_gains):
            raise ValueError("weight function must be nondecreasing")

    def __len__(self) -> int:
        return len(self.marginal_gains)

    def gain(self, x: int) -> Fraction:
        """Δw(x) for 1-based x."""
        return self.marginal_gains[x - 1]

    @classmethod
    def coverage(cls, length: int) -> "ThieleWeight":
        """w(x) = min(1, x): gains (1, 0, 0, ...)."""
        return cls(tuple([Fraction(1)] + [Fraction(0)] * (length - 1)))

    @classmethod
    def harmonic(cls, length: int) -> "ThieleWeight":
        """w(x) = 1 + 1/2 + ... + 1/x: gains (1, 1/2, ..., 1/length)."""
        return cls(tuple(Fraction(1, x) for x in range(1, length + 1)))

    @classmethod
    def from_epsilon(cls, epsilon: Fraction, length: int) -> "ThieleWeight":
        """Any member of the w(1)=1, w(2)=1+eps family: gains (1, eps, eps, ...)."""
        if not 0 <= epsilon < 1:
            raise PreconditionError(f"epsilon {epsilon} outside [0, 1)")
        if length < 2:
            return cls((Fraction(1),))
        return cls(tuple([Fraction(1)] + [Fraction(epsilon)] * (length - 1)))


@dataclass(frozen=True)
class MESState:
    """Budgets x_r(i) per voter, elected order, and rounds executed."""

    budgets: tuple[Fraction, ...]
    elected: tuple[int, ...]
    round: int


@dataclass(frozen=True)
class PhragmenState:
    """Loads y_r(i) per voter and elected order."""

    loads: tuple[Fraction, ...]
    elected: tuple[int, ...]


@dataclass(frozen=True)
class MonroeState:
    """Unrepresented voters, the quota schedule, and elected order."""

    unrepresented: frozenset[int]
    quota_schedule: tuple[int, ...]
    elected: tuple[int, ...]


# --- ballot classes ----------------------------------------------------------


def _ballot_classes(ballots: Sequence[frozenset[int]]) -> list[tuple[frozenset[int], int]]:
    """Distinct ballots with multiplicities, in deterministic order."""
    counts: dict[frozenset[int], int] = {}
    for b in ballots:
        counts[b] = counts.get(b, 0) + 1
    return sorted(counts.items(), key=lambda item: sorted(item[0]))


def _classes_by_candidate(
    m: int, classes: Sequence[tuple[frozenset[int], int]]
) -> list[list[int]]:
    by_cand: list[list[int]] = [[] for _ in range(m + 1)]
    for idx, (ballot, _) in enumerate(classes):
        for c in ballot:
            by_cand[c].append(idx)
    return by_cand


# --- AV and SAV ---------------------------------------------------------------


def av(e: Election) -> tuple[Committee, list[tuple[int, int]]]:
    """Approval voting: the k candidates with the most approvals.

    Computed twice — once with the constant-working-set rank-counting loop
    (a candidate is selected when it beats at least m - k others, where
    "c beats d" means more votes or equal votes and smaller index) and once
    by naive sorting — and the two routes must agree.
    """
    scores = approval_scores(e)

    selected: list[int] = []
    for c, cvotes in scores:
        rank = 0
        for d, dvotes in scores:
            if cvotes > dvotes or (cvotes == dvotes and c < d):
                rank += 1
        if rank >= e.m - e.k:
            selected.append(c)

    by_rank = sorted(scores, key=lambda item: (-item[1], item[0]))
    naive = sorted(c for c, _ in by_rank[: e.k])
    if selected != naive:
        raise AssertionError(f"rank-count route {selected} != naive route {naive}")
    return committee_of(selected), scores


def sav_scores(e: Election) -> list[tuple[int, Fraction]]:
    """Satisfaction scores: each voter splits one point over its ballot."""
    totals = [Fraction(0)] * (e.m + 1)
    for ballot in e.ballots:
        if ballot:
            share = Fraction(1, len(ballot))
            for c in ballot:
                totals[c] += share
    return [(c, totals[c]) for c in e.candidates()]


def sav(e: Election) -> tuple[Committee, list[tuple[int, Fraction]]]:
    """Satisfaction approval voting: top k by exact fractional score."""
    scores = sav_scores(e)
    by_rank = sorted(scores, key=lambda item: (-item[1], item[0]))
    return committee_of(c for c, _ in by_rank[: e.k]), scores


# --- sequential Thiele -------------------------------------------------------


def seq_thiele(e: Election, w: ThieleWeight) -> tuple[Committee, list[RoundTrace]]:
    """Greedy Thiele: k rounds, each adding the candidate with the largest
    marginal gain sum(Δw(|W ∩ v| + 1) for ballots v containing it)."""
    if len(w) < e.k:
        raise PreconditionError(f"weight supplies {len(w)} gains, need {e.k}")
    classes = _ballot_classes(e.ballots)
    by_cand = _classes_by_candidate(e.m, classes)
    overlap = [0] * len(classes)
    remaining = set(e.candidates())
    elected: list[int] = []
    trace: list[RoundTrace] = []
    for r in range(1, e.k + 1):
        scored = [
            (
                c,
                sum(
                    (classes[i][1] * w.gain(overlap[i] + 1) for i in by_cand[c]),
                    Fraction(0),
                ),
            )
            for c in sorted(remaining)
        ]
        chosen, tied = lex_min_argopt(scored, "max")
        value = dict(scored)[chosen]
        trace.append(RoundTrace(round=r, chosen=chosen, value=Fraction(value), tied=tuple(tied)))
        elected.append(chosen)
        remaining.remove(chosen)
        for i in by_cand[chosen]:
            overlap[i] += 1
    return committee_of(elected), trace


def rev_seq_thiele(e: Election, w: ThieleWeight) -> tuple[Committee, list[RoundTrace]]:
    """Reverse greedy Thiele: start from all candidates and perform m - k
    removal rounds, each removing the candidate whose removal decreases the
    total score the least.  The trace's ``chosen`` is the removed candidate."""
    if len(w) < e.m:
        raise PreconditionError(f"weight supplies {len(w)} gains, need {e.m} (full committee is scored)")
    classes = _ballot_classes(e.ballots)
    by_cand = _classes_by_candidate(e.m, classes)
    overlap = [len(ballot) for ballot, _ in classes]
    current = set(e.candidates())
    trace: list[RoundTrace] = []
    for r in range(1, e.m - e.k + 1):
        scored = [
            (
                c,
                sum(
                    (classes[i][1] * w.gain(overlap[i]) for i in by_cand[c]),
                    Fraction(0),
                ),
            )
            for c in sorted(current)
        ]
        removed, tied = lex_min_argopt(scored, "min")
        value = dict(scored)[removed]
        trace.append(RoundTrace(round=r, chosen=removed, value=Fraction(value), tied=tuple(tied)))
        current.remove(removed)
        for i in by_cand[removed]:
            overlap[i] -= 1
    return committee_of(current), trace


# --- sequential Phragmen -----------------------------------------------------


def seq_phragmen(
    e: Election,
    initial_loads: Sequence[Fraction] | None = None,
    seats: int | None = None,
    *,
    candidates: Iterable[int] | None = None,
    first_round: int = 1,
) -> tuple[Committee, PhragmenState, list[RoundTrace]]:
    """Load-balancing rule: per round elect the candidate minimizing

        l_r(c) = (1 + sum of approver loads) / |N(c)|

    then set every approver's load to that value.  Candidates nobody approves
    are skipped (their load is undefined and they can never bear load).

    ``initial_loads`` defaults to all zeros; the equal-shares second phase
    passes negated leftover budgets.  ``candidates`` restricts the eligible
    pool; ``seats`` defaults to ``e.k``.
    """
    seats = e.k if seats is None else seats
    pool = set(e.candidates()) if candidates is None else set(candidates)
    if initial_loads is None:
        initial_loads = [Fraction(0)] * e.n
    if len(initial_loads) != e.n:
        raise PreconditionError(f"got {len(initial_loads)} initial loads for {e.n} voters")

    # Class voters by (ballot, initial load); both stay uniform per class.
    index: dict[tuple[frozenset[int], Fraction], int] = {}
    counts: list[int] = []
    loads: list[Fraction] = []
    ballots: list[frozenset[int]] = []
    voter_class: list[int] = []
    for ballot, load in zip(e.ballots, initial_loads):
        key = (ballot, Fraction(load))
        if key not in index:
            index[key] = len(counts)
            ballots.append(ballot)
            loads.append(Fraction(load))
            counts.append(0)
        voter_class.append(index[key])
        counts[index[key]] += 1

    by_cand: list[list[int]] = [[] for _ in range(e.m + 1)]
    for idx, ballot in enumerate(ballots):
        for c in ballot:
            by_cand[c].append(idx)
    supporters = {c: sum(counts[i] for i in by_cand[c]) for c in pool}
    electable = {c for c in pool if supporters[c] > 0}
    if len(electable) < seats:
        raise PreconditionError(
            f"only {len(electable)} candidates have approvers, need {seats} seats"
        )

    elected: list[int] = []
    trace: list[RoundTrace] = []
    for r in range(first_round, first_round + seats):
        scored = []
        for c in sorted(electable):
            load_sum = sum((counts[i] * loads[i] for i in by_cand[c]), Fraction(0))
            scored.append((c, (1 + load_sum) / supporters[c]))
        chosen, tied = lex_min_argopt(scored, "min")
        value = dict(scored)[chosen]
        trace.append(RoundTrace(round=r, chosen=chosen, value=value, tied=tuple(tied)))
        elected.append(chosen)
        electable.remove(chosen)
        for i in by_cand[chosen]:
            loads[i] = value
    state = PhragmenState(
        loads=tuple(loads[voter_class[i]] for i in range(e.n)),
        elected=tuple(elected),
    )
    return committee_of(elected), state, trace


# --- Greedy Monroe -----------------------------------------------------------


def monroe_quotas(n: int, k: int) -> tuple[int, ...]:
    """Round quotas: with d = n mod k, ceil(n/k) for rounds 1..d, then floor."""
    d = n % k
    return tuple([n // k + 1] * d + [n // k] * (k - d))


def greedy_monroe(e: Election) -> tuple[Committee, list[RoundTrace]]:
    """Monroe-style greedy: per round elect the candidate approved by the most
    unrepresented voters, then mark (up to) a quota of its lowest-index
    approvers as represented.

    When every remaining candidate has zero unrepresented approvers, rounds
    degrade to pure index tie-breaks and nobody is removed (the definition
    leaves this case open; see the package notes).
    """
    quotas = monroe_quotas(e.n, e.k)
    unrepresented = set(range(1, e.n + 1))
    remaining = set(e.candidates())
    elected: list[int] = []
    trace: list[RoundTrace] = []
    for r in range(1, e.k + 1):
        counts = {c: 0 for c in remaining}
        for i in sorted(unrepresented):
            for c in e.ballots[i - 1]:
                if c in counts:
                    counts[c] += 1
        scored = [(c, counts[c]) for c in sorted(remaining)]
        chosen, tied = lex_min_argopt(scored, "max")
        trace.append(
            RoundTrace(round=r, chosen=chosen, value=Fraction(counts[chosen]), tied=tuple(tied))
        )
        supporters = sorted(i for i in unrepresented if chosen in e.ballots[i - 1])
        for i in supporters[: quotas[r - 1]]:
            unrepresented.remove(i)
        elected.append(chosen)
        remaining.remove(chosen)
    return committee_of(elected), trace


# --- Method of Equal Shares ---------------------------------------------------


def _min_price(groups: Sequence[tuple[Fraction, int]]) -> Fraction:
    """Minimal rho with sum(count * min(budget, rho)) = 1, budgets >= 0.

    Solved exactly on the sorted-budget linear pieces: with groups sorted by
    budget, try each split point j where groups 1..j pay their full budget
    and the rest pay rho.
    """
    groups = sorted(groups)
    total = sum(cnt for _, cnt in groups)
    paid = Fraction(0)
    payers = total
    for j in range(len(groups) + 1):
        floor = groups[j - 1][0] if j else Fraction(0)
        if payers:
            rho = (1 - paid) / payers
            ceiling = groups[j][0] if j < len(groups) else None
            if rho >= floor and (ceiling is None or rho <= ceiling):
                return rho
        elif paid == 1:
            return floor
        if j < len(groups):
            budget, cnt = groups[j]
            paid += cnt * budget
            payers -= cnt
    raise AssertionError("no price found: approvers cannot afford the candidate")


def mes_phase1(e: Election) -> tuple[Committee, MESState, list[RoundTrace]]:
    """Equal-shares rounds: approvers jointly pay cost 1, electing the
    candidate minimizing the per-voter price rho_c.

    Budgets start at ``k/n``.  Stops when k candidates are elected or no
    candidate is affordable; the committee may then be short of k and callers
    choose how to complete it (see :func:`mes_seqp`).
    """
    classes = _ballot_classes(e.ballots)
    by_cand = _classes_by_candidate(e.m, classes)
    budgets = [Fraction(e.k, e.n) if e.n else Fraction(0) for _ in classes]
    remaining = set(e.candidates())
    elected: list[int] = []
    trace: list[RoundTrace] = []
    rounds = 0
    while len(elected) < e.k:
        priced = []
        for c in sorted(remaining):
            pool = sum((classes[i][1] * budgets[i] for i in by_cand[c]), Fraction(0))
            if pool >= 1:
                priced.append((c, _min_price([(budgets[i], classes[i][1]) for i in by_cand[c]])))
        if not priced:
            break
        rounds += 1
        chosen, tied = lex_min_argopt(priced, "min")
        rho = dict(priced)[chosen]
        trace.append(RoundTrace(round=rounds, chosen=chosen, value=rho, tied=tuple(tied)))
        elected.append(chosen)
        remaining.remove(chosen)
        for i in by_cand[chosen]:
            budgets[i] = budgets[i] - rho if budgets[i] >= rho else Fraction(0)

    class_of: dict[frozenset[int], int] = {ballot: i for i, (ballot, _) in enumerate(classes)}
    state = MESState(
        budgets=tuple(budgets[class_of[b]] for b in e.ballots),
        elected=tuple(elected),
        round=rounds,
    )
    return committee_of(elected), state, trace


def mes_seqp(e: Election) -> tuple[Committee, list[RoundTrace]]:
    """Two-phase equal shares: phase 1 as above; if it stops at k' < k seats,
    finish with the load-balancing rule over the unelected candidates, with
    voter loads initialized to the negated leftover budgets."""
    committee, state, trace = mes_phase1(e)
    if len(committee) == e.k:
        return committee, trace
    leftover = [-x for x in state.budgets]
    pool = set(e.candidates()) - committee.members
    _, _, phase2_trace = seq_phragmen(
        e,
        initial_loads=leftover,
        seats=e.k - len(committee),
        candidates=pool,
        first_round=state.round + 1,
    )
    members = set(committee.members) | {t.chosen for t in phase2_trace}
    return committee_of(members), trace + phase2_trace


# --- registry ----------------------------------------------------------------


@dataclass(frozen=True)
class RuleResult:
    """Uniform wrapper for CLI/service consumption."""

    rule: str
    committee: Committee
    trace: tuple[RoundTrace, ...]
    scores: tuple[tuple[int, Fraction], ...] | None = None
    warnings: tuple[str, ...] = ()


def compute_rule(rule: str, e: Election, weights: ThieleWeight | None = None) -> RuleResult:
    """Run a rule by its CLI-facing identifier."""
    if rule not in RULE_IDS:
        raise PreconditionError(f"unknown rule {rule!r}; expected one of {', '.join(RULE_IDS)}")
    if rule == "av":
        committee, counts = av(e)
        return RuleResult(rule, committee, (), tuple((c, Fraction(s)) for c, s in counts))
    if rule == "sav":
        committee, scores = sav(e)
        return RuleResult(rule, committee, (), tuple(scores))
    if rule == "seq-cc":
        committee, trace = seq_thiele(e, ThieleWeight.coverage(e.k))
        return RuleResult(rule, committee, tuple(trace))
    if rule == "seq-pav":
        committee, trace = seq_thiele(e, ThieleWeight.harmonic(e.k))
        return RuleResult(rule, committee, tuple(trace))
    if rule == "seq-thiele":
        if weights is None:
            raise PreconditionError("seq-thiele needs a weight table")
        committee, trace = seq_thiele(e, weights)
        return RuleResult(rule, committee, tuple(trace))
    if rule == "rev-seq-cc":
        committee, trace = rev_seq_thiele(e, ThieleWeight.coverage(e.m))
        return RuleResult(rule, committee, tuple(trace))
    if rule == "rev-seq-pav":
        committee, trace = rev_seq_thiele(e, ThieleWeight.harmonic(e.m))
        return RuleResult(rule, committee, tuple(trace))
    if rule == "rev-seq-thiele":
        if weights is None:
            raise PreconditionError("rev-seq-thiele needs a weight table")
        committee, trace = rev_seq_thiele(e, weights)
        return RuleResult(rule, committee, tuple(trace))
    if rule == "seq-phragmen":
        committee, _, trace = seq_phragmen(e)
        return RuleResult(rule, committee, tuple(trace))
    if rule == "greedy-monroe":
        committee, trace = greedy_monroe(e)
        return RuleResult(rule, committee, tuple(trace))
    if rule == "mes":
        committee, _, trace = mes_phase1(e)
        warnings = ()
        if len(committee) < e.k:
            warnings = (f"short committee: {len(committee)} of {e.k} seats filled",)
        return RuleResult(rule, committee, tuple(trace), warnings=warnings)
    if rule == "mes-phragmen":
        committee, trace = mes_seqp(e)
        return RuleResult(rule, committee, tuple(trace))
    raise AssertionError(f"unhandled rule {rule}")
