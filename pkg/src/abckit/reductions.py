"""Graph-to-election constructors whose committees answer graph questions.

Each constructor turns a graph query (greedy deletion order, greedy maximal
independent set) into an election for a specific rule such that the
distinguished candidate sits in the committee iff the graph query answers yes
(or no, for the reverse-Thiele construction).  Constructors assert their own
arithmetic identities — ballot counts, committee sizes, starting budgets and
quotas — so a malformed build fails immediately rather than producing a
subtly wrong election.

All constructors emit ballots in a canonical order (edge ballots sorted by
edge, then singleton ballots ascending by candidate) so emitted files are
bit-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Election, PreconditionError, make_election
from .graphs import Graph

SENSE_YES = "yes"  # distinguished in committee  <=>  graph query answers yes
SENSE_NO = "no"  # distinguished in committee  <=>  graph query answers no


@dataclass(frozen=True)
class ReductionOutput:
    """A constructed election plus the metadata needed to state (and test)
    the membership equivalence it encodes."""

    election: Election
    distinguished: int
    expected_rule: str
    sense: str
    epsilon: Fraction | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.distinguished <= self.election.m:
            raise ValueError(f"distinguished candidate {self.distinguished} out of range")
        if self.sense not in (SENSE_YES, SENSE_NO):
            raise ValueError(f"sense must be {SENSE_YES!r} or {SENSE_NO!r}")


def _require_vertex(g: Graph, v: int) -> None:
    if not 1 <= v <= g.num_vertices:
        raise PreconditionError(f"vertex {v} not in graph with {g.num_vertices} vertices")


def _require_regular(g: Graph, name: str) -> None:
    if not g.is_regular(3):
        raise PreconditionError(f"{name} needs a 3-regular graph")


def _edge_ballots(g: Graph, copies: int, shift: int = 0) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []
    for u, w in sorted(g.edges):
        ballot = frozenset({u + shift, w + shift})
        out.extend([ballot] * copies)
    return out


def _singletons(counts: list[tuple[int, int]]) -> list[frozenset[int]]:
    """(candidate, copies) pairs, emitted ascending by candidate."""
    out: list[frozenset[int]] = []
    for cand, copies in sorted(counts):
        out.extend([frozenset({cand})] * copies)
    return out


def reduce_ovr_to_seqcc(g: Graph, v: int, k: int) -> ReductionOutput:
    """Greedy deletion order query -> greedy coverage election.

    One candidate per vertex, one two-candidate ballot per edge, committee
    size |V| - k.  The distinguished candidate is elected iff at least k
    vertices remain after v's deletion.
    """
    _require_vertex(g, v)
    if not 0 <= k <= g.num_vertices:
        raise PreconditionError(f"k={k} outside [0, {g.num_vertices}]")
    if k == g.num_vertices:
        raise PreconditionError("k equal to the vertex count needs a size-0 committee")
    m = g.num_vertices
    ballots = _edge_ballots(g, 1)
    assert len(ballots) == len(g.edges)
    election = make_election(m, m - k, ballots)
    return ReductionOutput(election, v, "seq-cc", SENSE_YES)


def detie_seqcc(e: Election) -> Election:
    """Tie-eliminating padding for greedy coverage.

    Duplicates every ballot m times and adds m - c singleton ballots for each
    candidate c.  Round gains become m * (old gain) + (m - c): equal old gains
    now differ by the index gap, in the same direction the index tie-break
    would have resolved them, so the committee and election order survive
    while every round winner becomes unique.
    """
    ballots: list[frozenset[int]] = []
    for b in e.ballots:
        ballots.extend([b] * e.m)
    ballots.extend(_singletons([(c, e.m - c) for c in e.candidates()]))
    padded = make_election(e.m, e.k, ballots)
    assert padded.n == e.m * e.n + e.m * (e.m - 1) // 2
    return padded


def _epsilon_scale(epsilon: Fraction) -> int:
    if not 0 <= epsilon < 1:
        raise PreconditionError(f"epsilon {epsilon} outside [0, 1)")
    return math.ceil(Fraction(4) / (1 - epsilon))


def reduce_lfmis_to_seq_thiele(g: Graph, v: int, epsilon: Fraction) -> ReductionOutput:
    """Greedy independent set -> greedy Thiele election, for any weight with
    w(1) = 1 and w(2) = 1 + epsilon.

    With p = ceil(4 / (1 - epsilon)): p*m ballots per edge, m - a singletons
    per vertex-candidate a, and m filler candidates with 3pm - j singletons
    each; committee size m.  Round gains are 3pm + m - a for unblocked
    vertices, 3pm - j for fillers, and at most 3pm - 3m - 1 for blocked
    vertices, so every round winner is unique.
    """
    _require_vertex(g, v)
    _require_regular(g, "the greedy-Thiele construction")
    epsilon = Fraction(epsilon)
    p = _epsilon_scale(epsilon)
    m = g.num_vertices
    ballots = _edge_ballots(g, p * m)
    ballots += _singletons([(a, m - a) for a in range(1, m + 1)])
    ballots += _singletons([(m + j, 3 * p * m - j) for j in range(1, m + 1)])
    election = make_election(2 * m, m, ballots)
    assert election.n == p * m * len(g.edges) + m * (m - 1) // 2 + 3 * p * m * m - m * (m + 1) // 2
    return ReductionOutput(election, v, "seq-thiele", SENSE_YES, epsilon=epsilon)


def reduce_lfmis_to_revseq_thiele(g: Graph, v: int, epsilon: Fraction) -> ReductionOutput:
    """Greedy independent set -> reverse greedy Thiele election (complement
    sense: the distinguished candidate survives iff v is NOT selected).

    p*m ballots per edge; a singletons for every candidate a in [1, 3m]; 2m
    filler candidates in pairs sharing 3pm two-candidate ballots; committee
    size 2m (m removals).  Removal losses are label + 3pm*epsilon for active
    candidates and jump by at least p*m*(1-epsilon) >= 4m once a neighbor or
    pair partner is removed, so removals are unique: the independent-set
    vertices in greedy order, then the first member of each filler pair.
    """
    _require_vertex(g, v)
    _require_regular(g, "the reverse greedy-Thiele construction")
    epsilon = Fraction(epsilon)
    p = _epsilon_scale(epsilon)
    m = g.num_vertices
    ballots = _edge_ballots(g, p * m)
    pairs = [(m + 2 * t - 1, m + 2 * t) for t in range(1, m + 1)]
    for lo, hi in pairs:
        ballots.extend([frozenset({lo, hi})] * (3 * p * m))
    ballots += _singletons([(a, a) for a in range(1, 3 * m + 1)])
    election = make_election(3 * m, 2 * m, ballots)
    assert election.n == p * m * len(g.edges) + 3 * p * m * m + 3 * m * (3 * m + 1) // 2
    return ReductionOutput(election, v, "rev-seq-thiele", SENSE_NO, epsilon=epsilon)


def reduce_lfmis_to_seq_phragmen(g: Graph, v: int) -> ReductionOutput:
    """Greedy independent set -> load-balancing election.

    m^2 ballots per edge, m - a singletons per vertex-candidate, m fillers
    with 3m^2 - j singletons; committee size m.  Approver counts are pairwise
    distinct and blocked vertices carry strictly more load than any
    zero-load candidate, so every round minimum is unique.
    """
    _require_vertex(g, v)
    _require_regular(g, "the load-balancing construction")
    m = g.num_vertices
    if m < 3:
        raise PreconditionError("the load-balancing construction needs at least 3 vertices")
    ballots = _edge_ballots(g, m * m)
    ballots += _singletons([(a, m - a) for a in range(1, m + 1)])
    ballots += _singletons([(m + j, 3 * m * m - j) for j in range(1, m + 1)])
    election = make_election(2 * m, m, ballots)
    assert election.n == m * m * len(g.edges) + m * (m - 1) // 2 + 3 * m * m * m - m * (m + 1) // 2
    return ReductionOutput(election, v, "seq-phragmen", SENSE_YES)


def reduce_lfmis_to_greedy_monroe(g: Graph, v: int) -> ReductionOutput:
    """Greedy independent set -> quota-removal election.

    2m ballots per edge, m - a singletons per vertex-candidate, m fillers
    with 5m + j singletons; n = 9m^2 and k = m, so every round quota is
    exactly 9m — more than any candidate's approver count, hence a winner's
    approvers are always removed entirely.

    Note: when the highest-labeled vertex m belongs to the independent set,
    its 6m approvals tie filler m's 6m approvals in the round electing it
    (the index tie-break still elects vertex m, so membership is unaffected,
    but that round is a genuine tie).  Every other round has a unique winner.
    """
    _require_vertex(g, v)
    _require_regular(g, "the quota-removal construction")
    m = g.num_vertices
    ballots = _edge_ballots(g, 2 * m)
    ballots += _singletons([(a, m - a) for a in range(1, m + 1)])
    ballots += _singletons([(m + j, 5 * m + j) for j in range(1, m + 1)])
    election = make_election(2 * m, m, ballots)
    assert election.n == 9 * m * m
    assert election.n % election.k == 0 and election.n // election.k == 9 * m
    return ReductionOutput(election, v, "greedy-monroe", SENSE_YES)


def reduce_lfmis_to_mes(g: Graph, v: int) -> ReductionOutput:
    """Greedy independent set -> equal-shares election.

    One ballot per edge and m fillers with three singletons each; k = 3m/2,
    n = 9m/2, so the starting budget is exactly 1/3 and every first-round
    price is 1/3.  A vertex stays affordable iff no neighbor was elected
    before it; the committee may end short of k.
    """
    _require_vertex(g, v)
    _require_regular(g, "the equal-shares construction")
    m = g.num_vertices
    ballots = _edge_ballots(g, 1)
    ballots += _singletons([(m + j, 3) for j in range(1, m + 1)])
    election = make_election(2 * m, 3 * m // 2, ballots)
    assert election.n == 9 * m // 2
    assert Fraction(election.k, election.n) == Fraction(1, 3)
    return ReductionOutput(election, v, "mes", SENSE_YES)


def reduce_lfmis_to_mes_notie(g: Graph, v: int) -> ReductionOutput:
    """Greedy independent set -> equal-shares election with a tie-free trace.

    A dedicated first candidate (index 1) holds m^3 singletons; vertex a maps
    to candidate a + 1 with m^2 ballots per edge and m - a singletons;
    k = m + 1.  Candidate 1 is elected first at price 1/m^3, then unblocked
    vertices ascending at pairwise-distinct prices 1/(3m^2 + m - a); for
    m >= 12 blocked vertices become unaffordable, so no round ever ties.
    """
    _require_vertex(g, v)
    _require_regular(g, "the tie-free equal-shares construction")
    m = g.num_vertices
    if m < 12:
        raise PreconditionError("the tie-free equal-shares construction needs at least 12 vertices")
    ballots = _edge_ballots(g, m * m, shift=1)
    ballots += _singletons([(a + 1, m - a) for a in range(1, m + 1)])
    ballots += _singletons([(1, m**3)])
    election = make_election(m + 1, m + 1, ballots)
    n = 3 * m**3 // 2 + m * (m - 1) // 2 + m**3
    assert election.n == n
    assert Fraction(election.k, election.n) == Fraction(m + 1, n)
    return ReductionOutput(election, v + 1, "mes", SENSE_YES)


def _tree_gadget_edges(base: int) -> list[tuple[int, int]]:
    """Edges of one 13-candidate tree gadget rooted at base + 1.

    The root (base+1) has four children (base+2 .. base+5); child i has two
    leaves (base+4+2i and base+5+2i).
    """
    edges = [(base + 1, base + 1 + i) for i in range(1, 5)]
    for i in range(1, 5):
        child = base + 1 + i
        edges += [(child, base + 4 + 2 * i), (child, base + 5 + 2 * i)]
    return edges


def tree_gadget_roles(m: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Root, middle-layer, and leaf candidate indices of the m tree gadgets
    attached by the two-phase equal-shares construction."""
    roots, children, leaves = [], [], []
    for t in range(m):
        base = m + 13 * t
        roots.append(base + 1)
        children.extend(base + 1 + i for i in range(1, 5))
        leaves.extend(base + 4 + 2 * i + d for i in range(1, 5) for d in (0, 1))
    return tuple(roots), tuple(children), tuple(leaves)


def reduce_lfmis_to_mes_seqp(g: Graph, v: int) -> ReductionOutput:
    """Greedy independent set -> two-phase equal-shares election.

    One ballot per graph edge plus m disjoint 13-candidate tree gadgets
    (root, four children, eight leaves; one ballot per tree edge); k = 9m/2,
    n = 27m/2, starting budget exactly 1/3.  Phase 1 elects every root at
    price 1/4 and then the greedy independent set at price 1/3; phase 2
    fills all remaining seats with middle-layer tree candidates at load 1/12,
    so vertex membership is decided entirely in phase 1.
    """
    _require_vertex(g, v)
    _require_regular(g, "the two-phase equal-shares construction")
    m = g.num_vertices
    ballots = _edge_ballots(g, 1)
    for t in range(m):
        for u, w in _tree_gadget_edges(m + 13 * t):
            ballots.append(frozenset({u, w}))
    election = make_election(14 * m, m // 2 + 4 * m, ballots)
    assert election.n == 27 * m // 2
    assert Fraction(election.k, election.n) == Fraction(1, 3)
    return ReductionOutput(election, v, "mes-phragmen", SENSE_YES)


REDUCTION_IDS = (
    "ovr-seqcc",
    "detie",
    "lfmis-seq-thiele",
    "lfmis-rev-seq-thiele",
    "lfmis-seq-phragmen",
    "lfmis-greedy-monroe",
    "lfmis-mes",
    "lfmis-mes-notie",
    "lfmis-mes-phragmen",
)


def build_reduction(
    name: str,
    g: Graph,
    v: int,
    k: int | None = None,
    epsilon: Fraction | None = None,
) -> ReductionOutput:
    """Dispatch a reduction by its CLI-facing identifier."""
    if name == "ovr-seqcc":
        if k is None:
            raise PreconditionError("ovr-seqcc needs k")
        return reduce_ovr_to_seqcc(g, v, k)
    if name == "lfmis-seq-thiele":
        if epsilon is None:
            raise PreconditionError("lfmis-seq-thiele needs epsilon")
        return reduce_lfmis_to_seq_thiele(g, v, epsilon)
    if name == "lfmis-rev-seq-thiele":
        if epsilon is None:
            raise PreconditionError("lfmis-rev-seq-thiele needs epsilon")
        return reduce_lfmis_to_revseq_thiele(g, v, epsilon)
    if name == "lfmis-seq-phragmen":
        return reduce_lfmis_to_seq_phragmen(g, v)
    if name == "lfmis-greedy-monroe":
        return reduce_lfmis_to_greedy_monroe(g, v)
    if name == "lfmis-mes":
        return reduce_lfmis_to_mes(g, v)
    if name == "lfmis-mes-notie":
        return reduce_lfmis_to_mes_notie(g, v)
    if name == "lfmis-mes-phragmen":
        return reduce_lfmis_to_mes_seqp(g, v)
    raise PreconditionError(f"unknown reduction {name!r}; expected one of {', '.join(REDUCTION_IDS)}")
