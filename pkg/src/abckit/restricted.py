"""Domain-restriction recognition and exact coverage solvers.

Two restrictions are recognized: candidate-interval elections (every ballot
is a contiguous block under some candidate order) and voter-interval
elections (every candidate's approver set is a contiguous block under some
voter order).  On either restriction, maximum coverage is solved exactly by
a layered dynamic program whose per-layer cells are independent and can be
evaluated by a worker pool with bit-identical results for any worker count.

`optl_paths`/`optl_enumerate` run the nondeterministic guess-and-check
counterparts of those programs literally, path by path, emitting each path's
unary-coded output value; the maximum over accepting paths decodes back to
the optimum.  They exist as a cross-check for the deterministic solvers and
are capped to small instances.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import Committee, Election, PreconditionError, committee_of

from .pqtree import consecutive_ones_order

_NEG = -(1 << 40)  # effectively -inf for int64 DP cells, safe to add twice


@dataclass(frozen=True)
class Axis:
    """A recognized ordering: of candidates (kind "sp") or voters (kind "sc")."""

    kind: str
    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("sp", "sc"):
            raise ValueError(f"kind must be 'sp' or 'sc', got {self.kind!r}")
        if sorted(self.order) != list(range(1, len(self.order) + 1)):
            raise ValueError("order must be a permutation of 1..len")

    def positions(self) -> dict[int, int]:
        """Item -> 1-based position."""
        return {item: i + 1 for i, item in enumerate(self.order)}


@dataclass(frozen=True)
class IntervalInstance:
    """Interval view of a restricted election.

    kind "sp": universe = candidate positions, one interval per ballot
    (None for an empty ballot), labels = voter indices.
    kind "sc": universe = voter positions, one interval per candidate
    (None for a candidate nobody approves), nonempty entries sorted by
    (start, end, candidate), labels = candidate indices.
    """

    kind: str
    universe_size: int
    budget: int
    intervals: tuple[tuple[int, int] | None, ...]
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("sp", "sc"):
            raise ValueError(f"kind must be 'sp' or 'sc', got {self.kind!r}")
        if len(self.labels) != len(self.intervals):
            raise ValueError("labels and intervals must align")
        for iv in self.intervals:
            if iv is not None:
                s, t = iv
                if not 1 <= s <= t <= self.universe_size:
                    raise ValueError(f"interval {iv} outside universe 1..{self.universe_size}")

    def nonempty(self) -> list[tuple[int, int]]:
        return [iv for iv in self.intervals if iv is not None]


def _is_contiguous(positions: Sequence[int]) -> bool:
    return max(positions) - min(positions) + 1 == len(positions)


def axis_is_valid(e: Election, axis: Axis) -> bool:
    """Does every ballot (sp) / approver set (sc) form one contiguous block?"""
    pos = axis.positions()
    if axis.kind == "sp":
        groups = [b for b in e.ballots if b]
    else:
        groups = [e.approvers(c) for c in e.candidates() if e.approvers(c)]
    return all(_is_contiguous([pos[x] for x in g]) for g in groups)


def find_axis(e: Election, kind: str) -> Axis | None:
    """Recognize a candidate order (sp) or voter order (sc), or certify none
    exists.  A returned axis is always re-verified against the contiguity
    requirement before being handed back."""
    if kind == "sp":
        order = consecutive_ones_order(e.m, [b for b in e.ballots if b])
    elif kind == "sc":
        if e.n == 0:
            return Axis("sc", ())
        order = consecutive_ones_order(e.n, [e.approvers(c) for c in e.candidates()])
    else:
        raise PreconditionError(f"kind must be 'sp' or 'sc', got {kind!r}")
    if order is None:
        return None
    axis = Axis(kind, tuple(order))
    if not axis_is_valid(e, axis):
        raise AssertionError("recognizer produced an order that fails the contiguity check")
    return axis


def to_intervals(e: Election, axis: Axis) -> IntervalInstance:
    """Interval view of an election under a valid axis."""
    pos = axis.positions()
    if axis.kind == "sp":
        intervals: list[tuple[int, int] | None] = []
        for i, ballot in enumerate(e.ballots, start=1):
            if not ballot:
                intervals.append(None)
                continue
            ps = [pos[c] for c in ballot]
            if not _is_contiguous(ps):
                raise PreconditionError(f"axis fails contiguity on voter {i}'s ballot")
            intervals.append((min(ps), max(ps)))
        return IntervalInstance("sp", e.m, e.k, tuple(intervals), tuple(range(1, e.n + 1)))

    entries: list[tuple[int, int, int]] = []
    empties: list[int] = []
    for c in e.candidates():
        approvers = e.approvers(c)
        if not approvers:
            empties.append(c)
            continue
        ps = [pos[i] for i in approvers]
        if not _is_contiguous(ps):
            raise PreconditionError(f"axis fails contiguity on candidate {c}'s approvers")
        entries.append((min(ps), max(ps), c))
    entries.sort()
    intervals = [(s, t) for s, t, _ in entries] + [None] * len(empties)
    labels = [c for _, _, c in entries] + empties
    return IntervalInstance("sc", e.n, e.k, tuple(intervals), tuple(labels))


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    parts = min(max(workers, 1), total) or 1
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def solve_spcc(inst: IntervalInstance, workers: int = 1) -> tuple[int, tuple[int, ...]]:
    """Exact maximum number of voter intervals hit by k candidate positions,
    plus a witness position set (ascending).

    Layered search over (chosen-count, last-chosen-position): the transition
    weight from position `prev` to `pos` counts intervals with s > prev that
    contain pos, so every interval is counted exactly at its first hit.
    Layer cells are independent given the previous layer; `workers` threads
    split the position axis, and results are identical for any split.
    """
    if inst.kind != "sp":
        raise PreconditionError("solve_spcc needs a candidate-interval (sp) instance")
    m, k = inst.universe_size, inst.budget
    if not 1 <= k <= m:
        raise PreconditionError(f"budget {k} outside [1, {m}]")

    diff = np.zeros((m + 1, m + 2), dtype=np.int64)
    for s, t in inst.nonempty():
        diff[0:s, s] += 1
        diff[0:s, t + 1] -= 1
    gains = np.cumsum(diff, axis=1)[:, : m + 1]
    gains[np.tril(np.ones((m + 1, m + 1), dtype=bool))] = _NEG  # force pos > prev

    dp = np.full(m + 1, _NEG, dtype=np.int64)
    dp[0] = 0
    parents = np.zeros((k + 1, m + 1), dtype=np.int32)
    spans = _chunks(m + 1, workers)

    def _layer_chunk(prev_dp: np.ndarray, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
        cells = prev_dp[:, None] + gains[:, lo:hi]
        return cells.max(axis=0), cells.argmax(axis=0)

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        for c in range(1, k + 1):
            pieces = list(pool.map(lambda span: _layer_chunk(dp, *span), spans))
            dp = np.concatenate([p[0] for p in pieces])
            parents[c] = np.concatenate([p[1] for p in pieces])

    pos = int(dp.argmax())
    best = int(dp[pos])
    chosen = [pos]
    for c in range(k, 1, -1):
        pos = int(parents[c][pos])
        chosen.append(pos)
    assert len(chosen) == k and best >= 0
    return best, tuple(sorted(chosen))


def solve_sccc(inst: IntervalInstance, workers: int = 1) -> tuple[int, tuple[int, ...]]:
    """Exact maximum number of voters covered by k candidate intervals, plus
    a witness committee (candidate labels, ascending).

    Take-or-skip over intervals in (start, end, label) order with state
    (chosen-count, last-covered-voter); the gain of taking [s, t] from state
    v is the number of voters in (max(v, s-1), t].  Candidates nobody
    approves can fill leftover seats and contribute zero.  Skips are
    preferred on exact ties, so the witness is deterministic; per-interval
    row updates are independent across chosen-counts and are split over
    `workers` threads with bit-identical results.
    """
    if inst.kind != "sc":
        raise PreconditionError("solve_sccc needs a voter-interval (sc) instance")
    n, k = inst.universe_size, inst.budget
    if not 1 <= k <= len(inst.intervals):
        raise PreconditionError(f"budget {k} outside [1, {len(inst.intervals)}]")

    entries = sorted(
        (s, t, lab)
        for (iv, lab) in zip(inst.intervals, inst.labels)
        if iv is not None
        for (s, t) in [iv]
    )
    spare = sorted(lab for iv, lab in zip(inst.intervals, inst.labels) if iv is None)
    total = len(entries)
    k_eff = min(k, total)
    if k_eff == 0:
        return 0, tuple(spare[:k])

    dp = np.full((k_eff + 1, n + 1), _NEG, dtype=np.int64)
    dp[0, 0] = 0
    took = np.zeros((total, k_eff + 1, n + 1), dtype=bool)
    prior = np.zeros((total, k_eff + 1), dtype=np.int32)
    voters = np.arange(n + 1, dtype=np.int64)

    def _rows(prev_dp, new_dp, j, s, t, gain, c_lo, c_hi):
        for c in range(c_lo, c_hi):
            prefix = prev_dp[c - 1, : t + 1] + gain[: t + 1]
            at = int(prefix.argmax())
            val = prefix[at]
            prior[j, c] = at
            if val > new_dp[c, t]:
                new_dp[c, t] = val
                took[j, c, t] = True
            tail = prev_dp[c - 1, t + 1 :]
            better = tail > new_dp[c, t + 1 :]
            new_dp[c, t + 1 :][better] = tail[better]
            took[j, c, t + 1 :] = better

    spans = _chunks(k_eff, workers)  # chunks of the chosen-count axis, 1-based below
    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        for j, (s, t, _) in enumerate(entries):
            gain = np.maximum(0, t - np.maximum(voters, s - 1))
            new_dp = dp.copy()
            if workers > 1:
                list(
                    pool.map(
                        lambda span: _rows(dp, new_dp, j, s, t, gain, span[0] + 1, span[1] + 1),
                        spans,
                    )
                )
            else:
                _rows(dp, new_dp, j, s, t, gain, 1, k_eff + 1)
            dp = new_dp

    v = int(dp[k_eff].argmax())
    best = int(dp[k_eff, v])
    chosen: list[int] = []
    c = k_eff
    for j in range(total - 1, -1, -1):
        if c == 0:
            break
        if took[j, c, v]:
            s, t, lab = entries[j]
            chosen.append(lab)
            v = int(prior[j, c]) if v == t else v
            c -= 1
    assert c == 0 and v == 0 and best >= 0
    committee = sorted(chosen) + spare[: k - k_eff]
    assert len(committee) == k
    return best, tuple(sorted(committee))


def brute_cc(e: Election, cap: int = 2_000_000) -> tuple[int, Committee]:
    """Exhaustive maximum-coverage oracle: the lexicographically smallest
    k-subset maximizing the number of voters with an approved member."""
    if math.comb(e.m, e.k) > cap:
        raise PreconditionError(f"C({e.m},{e.k}) exceeds the enumeration cap {cap}")
    masks = [0] * (e.m + 1)
    for i, ballot in enumerate(e.ballots):
        for c in ballot:
            masks[c] |= 1 << i
    best = -1
    best_combo: tuple[int, ...] = ()
    for combo in itertools.combinations(range(1, e.m + 1), e.k):
        union = 0
        for c in combo:
            union |= masks[c]
        covered = union.bit_count()
        if covered > best:
            best, best_combo = covered, combo
    return best, committee_of(best_combo)


# --- literal guess-and-check enumeration --------------------------------------


@dataclass(frozen=True)
class OptLPath:
    """One guess sequence: the guessed target, the per-round choices, whether
    the final check accepted, and the emitted 1/0 string read as a binary
    numeral."""

    optv: int
    choices: tuple[int, ...]
    accepted: bool
    output_value: int


def _emit(value: int, ones: int) -> int:
    """Append 1^ones 0 to the bit string `value`."""
    return (value << (ones + 1)) | (((1 << ones) - 1) << 1)


def optl_output_multiplier(inst: IntervalInstance, variant: str) -> int:
    """Length of one target-guess block: chosen so that the whole per-round
    suffix is always shorter, making output values ordered by the guess."""
    if variant == "spcc":
        m = inst.universe_size
    else:
        m = len(inst.nonempty())
    return m * (m + 1)


def optl_paths(inst: IntervalInstance, variant: str, cap: int = 1_000_000) -> Iterator[OptLPath]:
    """Run the guess-and-check program literally over every guess sequence.

    Both variants guess a coverage target, then k strictly increasing
    indices (candidate positions for spcc, sorted-interval indices for
    sccc), accumulate coverage exactly as the deterministic solvers do, and
    accept iff the accumulated coverage equals the guessed target.  Every
    completed or dead-ended path is yielded.
    """
    if variant not in ("spcc", "sccc"):
        raise PreconditionError(f"variant must be 'spcc' or 'sccc', got {variant!r}")
    if variant == "spcc" and inst.kind != "sp":
        raise PreconditionError("spcc enumeration needs an sp instance")
    if variant == "sccc" and inst.kind != "sc":
        raise PreconditionError("sccc enumeration needs an sc instance")

    k = inst.budget
    voters = len(inst.intervals) if variant == "spcc" else inst.universe_size
    if variant == "spcc":
        m = inst.universe_size
        entries = [iv for iv in inst.intervals if iv is not None]
    else:
        m = len(inst.nonempty())
        entries = sorted(
            (s, t)
            for (iv, lab) in zip(inst.intervals, inst.labels)
            if iv is not None
            for (s, t) in [iv]
        )
    if (voters + 1) * math.comb(max(m, k), k) > cap:
        raise PreconditionError("instance too large for full path enumeration")
    mult = optl_output_multiplier(inst, variant)

    def walk(optv: int) -> Iterator[OptLPath]:
        counted: set[int] = set()

        def rec(numc: int, lastc: int, lastv: int, numv: int, value: int, choices: tuple[int, ...]):
            if numc > k:
                yield OptLPath(optv, choices, numv == optv, value)
                return
            if lastc >= m:
                yield OptLPath(optv, choices, False, value)
                return
            for nextc in range(lastc + 1, m + 1):
                if variant == "spcc":
                    hits = [
                        i
                        for i, (s, t) in enumerate(entries)
                        if s > lastc and s <= nextc <= t
                    ]
                    assert not counted & set(hits), "an interval was counted twice"
                    counted.update(hits)
                    gained = len(hits)
                    nv, lv = numv + gained, lastv
                    emitted = _emit(value, nextc)
                else:
                    s, t = entries[nextc - 1]
                    gained = max(0, t - max(lastv, s - 1))
                    nv, lv = numv + gained, max(lastv, t)
                    emitted = _emit(value, nextc)
                yield from rec(numc + 1, nextc, lv, nv, emitted, choices + (nextc,))
                if variant == "spcc":
                    counted.difference_update(hits)

        yield from rec(1, 0, 0, 0, _emit(0, optv * mult), ())

    for optv in range(voters + 1):
        yield from walk(optv)


def optl_decode(output_value: int, mult: int) -> tuple[int, tuple[int, ...]]:
    """Parse an emitted bit string (as an integer) back into the guessed
    target and the per-round choices.  Leading zero bits are absorbed by the
    integer reading, which is harmless: per-round runs are shorter than one
    guess block, so the leading run length determines the target."""
    bits = bin(output_value)[2:] if output_value else "0"
    runs = [len(r) for r in bits.split("0") if r]
    lead = len(bits) - len(bits.lstrip("1"))
    if lead >= mult:
        assert lead % mult == 0
        optv = lead // mult
        runs = runs[1:]
    else:
        optv = 0
    assert all(r < mult for r in runs)
    return optv, tuple(runs)


def optl_enumerate(
    inst: IntervalInstance, variant: str, cap: int = 1_000_000
) -> tuple[int, tuple[int, tuple[int, ...]], int]:
    """Maximum output value over accepting paths, its decoding (target,
    choices), and the number of accepting paths."""
    best: OptLPath | None = None
    accepting = 0
    for path in optl_paths(inst, variant, cap=cap):
        if not path.accepted:
            continue
        accepting += 1
        if best is None or path.output_value > best.output_value:
            best = path
    if best is None:
        raise PreconditionError("no accepting path (budget exceeds the usable intervals)")
    decoded = optl_decode(best.output_value, optl_output_multiplier(inst, variant))
    assert decoded == (best.optv, best.choices)
    return best.output_value, decoded, accepting
