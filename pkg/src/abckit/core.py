"""Election data model, exact rational arithmetic, ordering, serialization.

Everything downstream (rules, reductions, solvers) works on the immutable
:class:`Election` value defined here.  All scores, budgets and loads are
:class:`fractions.Fraction` instances; there is no floating point anywhere
in rule logic and no tolerance parameter anywhere in the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Sequence


class ParseError(ValueError):
    """Malformed input text.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(Exception):
    """An operation was invoked outside its stated preconditions."""


_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or ``p`` into an exact rational.

    Only integer-over-integer forms are accepted; decimal notation is
    rejected so files can never smuggle in binary-float rounding.
    """
    stripped = text.strip()
    if not _RATIONAL_RE.fullmatch(stripped):
        raise ParseError(f"not a rational: {text!r}")
    try:
        return Fraction(stripped)
    except ZeroDivisionError as exc:
        raise ParseError(f"zero denominator: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Render in lowest terms as ``p/q``, or ``p`` when the denominator is 1."""
    return str(Fraction(value))


@dataclass(frozen=True)
class Election:
    """An approval election.

    Attributes:
        m: number of candidates; candidates are the integers ``1..m`` and
           lexicographic order means ascending index order.
        k: committee size, ``1 <= k <= m``.
        ballots: one approval set per voter, in file order.  Voter ``i``
           (1-based) is position ``i``; ballot order is significant.
           Empty ballots are legal and never contribute to any count.
    """

    m: int
    k: int
    ballots: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"need at least one candidate, got m={self.m}")
        if not 1 <= self.k <= self.m:
            raise ValueError(f"committee size k={self.k} outside [1, {self.m}]")
        for pos, ballot in enumerate(self.ballots, start=1):
            for c in ballot:
                if not 1 <= c <= self.m:
                    raise ValueError(f"ballot {pos}: candidate {c} outside [1, {self.m}]")

    @property
    def n(self) -> int:
        """Number of voters."""
        return len(self.ballots)

    def candidates(self) -> range:
        return range(1, self.m + 1)

    def approvers(self, c: int) -> tuple[int, ...]:
        """1-based voter indices approving candidate ``c`` (the set N(c))."""
        return tuple(i for i, ballot in enumerate(self.ballots, start=1) if c in ballot)


def make_election(m: int, k: int, ballots: Iterable[Iterable[int]]) -> Election:
    """Convenience constructor from any iterables."""
    return Election(m=m, k=k, ballots=tuple(frozenset(b) for b in ballots))


@dataclass(frozen=True)
class Committee:
    """A winning committee; at most ``k`` members, rendered in ascending order.

    May be smaller than ``k`` only when produced by the first phase of the
    equal-shares rule (early termination).
    """

    members: frozenset[int]

    def __contains__(self, candidate: int) -> bool:
        return candidate in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def render(self) -> str:
        return " ".join(str(c) for c in self.sorted())


def committee_of(members: Iterable[int]) -> Committee:
    return Committee(members=frozenset(members))


@dataclass(frozen=True)
class RoundTrace:
    """Per-round record for a sequential rule.

    ``value`` is the round's deciding score/load/price.  ``tied`` lists every
    candidate that attained the round optimum before lexicographic
    tie-breaking; tie-breaking fired in the round iff ``len(tied) >= 2``,
    and ``chosen == min(tied)`` always holds.
    """

    round: int
    chosen: int
    value: Fraction
    tied: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.tied and self.chosen != min(self.tied):
            raise ValueError("chosen candidate must be the smallest tied index")

    @property
    def tie_fired(self) -> bool:
        return len(self.tied) >= 2

    def render(self) -> str:
        tied = ",".join(str(c) for c in self.tied)
        return f"round={self.round} chosen={self.chosen} value={format_rational(self.value)} tied={tied}"


def tie_events(trace: Sequence[RoundTrace]) -> int:
    """Number of rounds in which lexicographic tie-breaking fired."""
    return sum(1 for t in trace if t.tie_fired)


def lex_min_argopt(
    items: Sequence[tuple[int, Fraction | int]],
    sense: Literal["min", "max"],
) -> tuple[int, list[int]]:
    """Pick the optimum of ``(index, value)`` pairs with ascending-index ties.

    Returns ``(winner, tied)`` where ``tied`` holds every index attaining the
    optimum (sorted ascending) and ``winner == min(tied)``.  The result is
    invariant under permutation of the input list.
    """
    if not items:
        raise ValueError("argopt of empty list")
    values = [v for _, v in items]
    best = min(values) if sense == "min" else max(values)
    tied = sorted(idx for idx, v in items if v == best)
    return tied[0], tied


def approval_scores(e: Election) -> list[tuple[int, int]]:
    """``(candidate, approval count)`` for every candidate 1..m."""
    counts = [0] * (e.m + 1)
    for ballot in e.ballots:
        for c in ballot:
            counts[c] += 1
    return [(c, counts[c]) for c in e.candidates()]


# --- `abce 1` file format ---------------------------------------------------
#
# line 1: `abce 1`
# line 2: `candidates: <m>`
# line 3: `committee: <k>`
# line 4: `ballots: <n>`
# lines 5..4+n: space-separated ascending candidate indices; an empty line
# is an empty ballot.

_ABCE_MAGIC = "abce 1"


def _header_int(lines: list[str], idx: int, key: str) -> int:
    if idx >= len(lines):
        raise ParseError(f"missing `{key}:` header", line=idx + 1)
    raw = lines[idx]
    prefix = key + ":"
    if not raw.startswith(prefix):
        raise ParseError(f"expected `{key}: <int>`, got {raw!r}", line=idx + 1)
    try:
        return int(raw[len(prefix):].strip())
    except ValueError as exc:
        raise ParseError(f"non-integer value in `{key}:` header", line=idx + 1) from exc


def parse_election(text: str | bytes) -> Election:
    """Parse the ``abce 1`` format; errors carry the offending line number."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()  # trailing newline
    if not lines or lines[0].strip() != _ABCE_MAGIC:
        raise ParseError(f"missing `{_ABCE_MAGIC}` header", line=1)
    m = _header_int(lines, 1, "candidates")
    k = _header_int(lines, 2, "committee")
    n = _header_int(lines, 3, "ballots")
    if m < 1:
        raise ParseError("candidate count must be positive", line=2)
    if not 1 <= k <= m:
        raise ParseError(f"committee size {k} outside [1, {m}]", line=3)
    if n < 0:
        raise ParseError("ballot count must be nonnegative", line=4)
    if len(lines) != 4 + n:
        raise ParseError(f"expected {n} ballot lines, found {len(lines) - 4}", line=len(lines))
    ballots = []
    for offset, raw in enumerate(lines[4:4 + n]):
        lineno = 5 + offset
        approved: list[int] = []
        if raw.strip():
            for token in raw.split():
                try:
                    c = int(token)
                except ValueError as exc:
                    raise ParseError(f"non-integer token {token!r}", line=lineno) from exc
                if not 1 <= c <= m:
                    raise ParseError(f"candidate index {c} outside [1, {m}]", line=lineno)
                approved.append(c)
            if approved != sorted(set(approved)):
                raise ParseError("indices must be strictly ascending", line=lineno)
        ballots.append(frozenset(approved))
    return Election(m=m, k=k, ballots=tuple(ballots))


def serialize_election(e: Election) -> str:
    lines = [
        _ABCE_MAGIC,
        f"candidates: {e.m}",
        f"committee: {e.k}",
        f"ballots: {e.n}",
    ]
    for ballot in e.ballots:
        lines.append(" ".join(str(c) for c in sorted(ballot)))
    return "\n".join(lines) + "\n"
