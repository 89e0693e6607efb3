"""Cross-cutting invariants checked with hypothesis."""

from fractions import Fraction as F
from itertools import combinations, permutations

from hypothesis import given, settings
from hypothesis import strategies as st

from abckit.core import (
    format_rational,
    lex_min_argopt,
    make_election,
    parse_election,
    parse_rational,
    serialize_election,
    tie_events,
)
from abckit.graphs import (
    lfmis,
    make_graph,
    ovr_decide,
    parse_graph,
    regularize_to_3,
    serialize_graph,
)
from abckit.pqtree import consecutive_ones_order
from abckit.reductions import detie_seqcc
from abckit.restricted import brute_cc, find_axis, solve_sccc, solve_spcc, to_intervals
from abckit.rules import (
    ThieleWeight,
    av,
    greedy_monroe,
    mes_phase1,
    monroe_quotas,
    seq_thiele,
)

rationals = st.fractions()


@st.composite
def elections(draw, m_max=6, n_min=0, n_max=8):
    m = draw(st.integers(1, m_max))
    k = draw(st.integers(1, m))
    n = draw(st.integers(n_min, n_max))
    ballots = [draw(st.frozensets(st.integers(1, m), max_size=m)) for _ in range(n)]
    return make_election(m, k, ballots)


@st.composite
def graphs(draw, n_max=8):
    n = draw(st.integers(1, n_max))
    pairs = list(combinations(range(1, n + 1), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return make_graph(n, edges)


@st.composite
def sp_elections(draw, m_max=6, n_max=6):
    m = draw(st.integers(2, m_max))
    k = draw(st.integers(1, m))
    hidden = draw(st.permutations(list(range(1, m + 1))))
    n = draw(st.integers(1, n_max))
    ballots = []
    for _ in range(n):
        lo = draw(st.integers(1, m))
        hi = draw(st.integers(lo, m))
        ballots.append(frozenset(hidden[lo - 1 : hi]))
    return make_election(m, k, ballots)


@st.composite
def sc_elections(draw, m_max=6, n_max=6):
    m = draw(st.integers(1, m_max))
    k = draw(st.integers(1, m))
    n = draw(st.integers(1, n_max))
    ballots = [set() for _ in range(n)]
    for c in range(1, m + 1):
        if draw(st.booleans()):
            continue
        lo = draw(st.integers(1, n))
        hi = draw(st.integers(lo, n))
        for i in range(lo, hi + 1):
            ballots[i - 1].add(c)
    return make_election(m, k, ballots)


@given(rationals)
def test_rational_roundtrip(f):
    assert parse_rational(format_rational(f)) == f


@given(elections())
def test_election_file_roundtrip(e):
    assert parse_election(serialize_election(e)) == e


@given(graphs())
def test_graph_file_roundtrip(g):
    assert parse_graph(serialize_graph(g)) == g


@given(st.lists(st.tuples(st.integers(1, 20), rationals), min_size=1, unique_by=lambda p: p[0]))
def test_argopt_invariants(items):
    for sense, pick in (("min", min), ("max", max)):
        winner, tied = lex_min_argopt(items, sense)
        best = pick(v for _, v in items)
        assert tied == sorted(i for i, v in items if v == best)
        assert winner == tied[0]
        shuffled = list(reversed(items))
        assert lex_min_argopt(shuffled, sense) == (winner, tied)


@given(elections())
def test_av_committee_size(e):
    committee, scores = av(e)  # raises internally if its two routes disagree
    assert len(committee) == e.k
    assert len(scores) == e.m


@given(elections(n_min=1))
def test_seq_thiele_structure(e):
    committee, trace = seq_thiele(e, ThieleWeight.harmonic(e.k))
    assert len(committee) == e.k
    assert [t.round for t in trace] == list(range(1, e.k + 1))
    assert {t.chosen for t in trace} == set(committee)


@given(elections(n_min=1))
def test_mes_budget_accounting(e):
    committee, state, trace = mes_phase1(e)
    start = F(e.k, e.n)
    assert all(0 <= b <= start for b in state.budgets)
    assert start * e.n - sum(state.budgets, F(0)) == len(committee)
    # round prices are what the trace says: per-round payments sum to 1
    assert len(trace) == len(committee)


@given(elections(n_min=1))
def test_greedy_monroe_quota_accounting(e):
    committee, trace = greedy_monroe(e)
    assert len(committee) == e.k
    assert sum(monroe_quotas(e.n, e.k)) == e.n
    # round scores never exceed the voters still unrepresented
    remaining = e.n
    for t, quota in zip(trace, monroe_quotas(e.n, e.k)):
        assert t.value <= remaining
        remaining -= min(quota, remaining)


@settings(max_examples=40)
@given(elections(m_max=6, n_min=1, n_max=9))
def test_detie_preserves_seqcc(e):
    w = ThieleWeight.coverage(e.k)
    committee, trace = seq_thiele(e, w)
    padded = detie_seqcc(e)
    committee2, trace2 = seq_thiele(padded, w)
    assert committee2 == committee
    assert [t.chosen for t in trace2] == [t.chosen for t in trace]
    assert tie_events(trace2) == 0


@settings(max_examples=60)
@given(graphs())
def test_ovr_survivor_count(g):
    n = g.num_vertices
    for k in (0, 1, n // 2, n):
        survivors = sum(1 for v in g.vertices() if ovr_decide(g, v, k))
        assert survivors == max(0, n - k)


@settings(max_examples=60)
@given(graphs(n_max=7))
def test_regularize_preserves_greedy_set(g):
    if any(g.degree(v) > 3 for v in g.vertices()):
        return
    padded, _ = regularize_to_3(g, 1)
    assert padded.is_regular(3)
    assert lfmis(padded) & set(g.vertices()) == lfmis(g)


@settings(max_examples=50)
@given(st.integers(2, 5), st.lists(st.frozensets(st.integers(1, 5), min_size=2), max_size=4))
def test_pqtree_agrees_with_permutation_search(m, raw_sets):
    sets = [s for s in raw_sets if s <= frozenset(range(1, m + 1))]

    def ok(perm):
        pos = {c: i for i, c in enumerate(perm)}
        return all(max(pos[x] for x in s) - min(pos[x] for x in s) == len(s) - 1 for s in sets)

    got = consecutive_ones_order(m, sets)
    if got is None:
        assert not any(ok(p) for p in permutations(range(1, m + 1)))
    else:
        assert ok(got)


@settings(max_examples=50, deadline=None)
@given(sp_elections())
def test_spcc_equals_brute_force(e):
    ax = find_axis(e, "sp")
    assert ax is not None
    best, positions = solve_spcc(to_intervals(e, ax))
    oracle, _ = brute_cc(e)
    assert best == oracle
    members = {ax.order[p - 1] for p in positions}
    assert sum(1 for b in e.ballots if b & members) == best


@settings(max_examples=50, deadline=None)
@given(sc_elections())
def test_sccc_equals_brute_force(e):
    ax = find_axis(e, "sc")
    assert ax is not None
    best, members = solve_sccc(to_intervals(e, ax))
    oracle, _ = brute_cc(e)
    assert best == oracle
    assert sum(1 for b in e.ballots if b & set(members)) == best
