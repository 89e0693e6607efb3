"""Committee rules: worked examples, hand simulations, and cross-checks."""

import random
from fractions import Fraction as F

import pytest

from abckit.core import PreconditionError, make_election, tie_events
from abckit.rules import (
    RULE_IDS,
    ThieleWeight,
    av,
    compute_rule,
    greedy_monroe,
    mes_phase1,
    mes_seqp,
    monroe_quotas,
    rev_seq_thiele,
    sav,
    sav_scores,
    seq_phragmen,
    seq_thiele,
)
from abckit.verify import random_election


class TestThieleWeight:
    def test_families(self):
        assert ThieleWeight.coverage(3).marginal_gains == (F(1), F(0), F(0))
        assert ThieleWeight.harmonic(3).marginal_gains == (F(1), F(1, 2), F(1, 3))
        assert ThieleWeight.from_epsilon(F(3, 4), 3).marginal_gains == (F(1), F(3, 4), F(3, 4))

    def test_gain_is_one_based(self):
        w = ThieleWeight.harmonic(4)
        assert w.gain(1) == F(1)
        assert w.gain(4) == F(1, 4)

    def test_negative_gain_rejected(self):
        with pytest.raises(ValueError):
            ThieleWeight((F(1), F(-1, 2)))

    def test_all_zero_gains_are_legal(self):
        # the contract only asks for nondecreasing w; a flat table is valid
        # and simply makes every round a pure label tie-break
        committee, trace = seq_thiele(
            make_election(3, 2, [{2}, {3}]), ThieleWeight((F(0), F(0)))
        )
        assert committee.sorted() == (1, 2)
        assert trace[0].tied == (1, 2, 3)


class TestAV:
    def test_worked_example(self, six_voter_election):
        committee, scores = av(six_voter_election)
        assert committee.sorted() == (1, 3)
        assert scores == [(1, 3), (2, 3), (3, 4)]

    def test_empty_ballots_fall_back_to_labels(self):
        e = make_election(4, 2, [set(), set()])
        committee, _ = av(e)
        assert committee.sorted() == (1, 2)

    def test_streaming_rank_agrees_with_sort_on_randoms(self):
        # av() runs both routes internally and raises if they ever diverge
        rng = random.Random(17)
        for _ in range(300):
            av(random_election(rng))


class TestSAV:
    def test_worked_example_three_way_tie(self, six_voter_election):
        committee, scores = sav(six_voter_election)
        assert [s for _, s in scores] == [F(2), F(2), F(2)]
        assert committee.sorted() == (1, 2)

    def test_split_weights(self):
        e = make_election(3, 1, [{1, 2, 3}, {3}])
        scores = dict(sav_scores(e))
        assert scores[1] == F(1, 3)
        assert scores[3] == F(4, 3)


class TestSeqThiele:
    def test_coverage_worked_example(self, six_voter_election):
        committee, trace = seq_thiele(six_voter_election, ThieleWeight.coverage(2))
        assert committee.sorted() == (1, 3)
        assert [(t.chosen, t.value) for t in trace] == [(3, F(4)), (1, F(1))]
        assert trace[1].tied == (1, 2)
        assert tie_events(trace) == 1

    def test_weight_table_must_cover_k(self, six_voter_election):
        with pytest.raises(PreconditionError):
            seq_thiele(six_voter_election, ThieleWeight((F(1),)))

    def test_against_score_recomputation_oracle(self):
        """Replay each round by brute-force rescoring every candidate."""

        def total_score(e, members, w):
            score = F(0)
            for ballot in e.ballots:
                overlap = len(ballot & members)
                score += sum((w.gain(i) for i in range(1, overlap + 1)), F(0))
            return score

        rng = random.Random(29)
        for _ in range(120):
            e = random_election(rng, m_max=6, n_max=9)
            w = ThieleWeight.harmonic(e.k) if e.k % 2 else ThieleWeight.coverage(e.k)
            committee, trace = seq_thiele(e, w)
            chosen: set[int] = set()
            for t in trace:
                base = total_score(e, chosen, w)
                gains = {
                    c: total_score(e, chosen | {c}, w) - base
                    for c in e.candidates()
                    if c not in chosen
                }
                best = max(gains.values())
                assert t.value == best
                assert t.chosen == min(c for c, gain in gains.items() if gain == best)
                chosen.add(t.chosen)
            assert committee.sorted() == tuple(sorted(chosen))


class TestRevSeqThiele:
    def test_removes_cheapest_loss_first(self, six_voter_election):
        committee, trace = rev_seq_thiele(six_voter_election, ThieleWeight.coverage(3))
        # dropping candidate 3 costs no coverage: voters 2-5 keep 1 or 2
        assert [(t.chosen, t.value) for t in trace] == [(3, F(0))]
        assert committee.sorted() == (1, 2)

    def test_weight_table_must_cover_m(self, six_voter_election):
        with pytest.raises(PreconditionError):
            rev_seq_thiele(six_voter_election, ThieleWeight((F(1), F(1, 2))))

    def test_result_always_k_members(self):
        rng = random.Random(31)
        for _ in range(80):
            e = random_election(rng, m_max=6, n_max=8)
            committee, trace = rev_seq_thiele(e, ThieleWeight.harmonic(e.m))
            assert len(committee) == e.k
            assert len(trace) == e.m - e.k


class TestSeqPhragmen:
    def test_load_balancing_hand_example(self):
        e = make_election(2, 2, [{1}, {1}, {2}])
        committee, state, trace = seq_phragmen(e)
        assert committee.sorted() == (1, 2)
        assert [(t.chosen, t.value) for t in trace] == [(1, F(1, 2)), (2, F(1))]
        assert state.loads == (F(1, 2), F(1, 2), F(1))

    def test_symmetric_tie_recorded(self):
        e = make_election(2, 1, [{1}, {2}])
        _, _, trace = seq_phragmen(e)
        assert trace[0].tied == (1, 2)
        assert trace[0].chosen == 1

    def test_zero_approval_candidates_skipped(self):
        e = make_election(3, 2, [{1}, {1}, {3}])
        committee, _, _ = seq_phragmen(e)
        assert committee.sorted() == (1, 3)

    def test_not_enough_supported_candidates(self):
        e = make_election(3, 2, [{2}])
        with pytest.raises(PreconditionError):
            seq_phragmen(e)

    def test_resumable_state_matches_single_run(self):
        e = make_election(3, 3, [{1, 2}, {2}, {1, 3}, {3}])
        full_committee, full_state, full_trace = seq_phragmen(e)
        first, mid_state, head = seq_phragmen(e, seats=1)
        rest, end_state, tail = seq_phragmen(
            e,
            initial_loads=list(mid_state.loads),
            seats=2,
            candidates=[c for c in e.candidates() if c not in first],
            first_round=2,
        )
        assert set(first) | set(rest) == set(full_committee)
        assert head + tail == full_trace
        assert end_state.loads == full_state.loads

    def test_max_load_is_nondecreasing(self):
        rng = random.Random(37)
        for _ in range(60):
            e = random_election(rng, m_max=6, n_max=9)
            try:
                _, _, trace = seq_phragmen(e)
            except PreconditionError:
                continue
            values = [t.value for t in trace]
            assert values == sorted(values)


class TestGreedyMonroe:
    def test_quota_schedule(self):
        assert monroe_quotas(7, 3) == (3, 2, 2)
        assert monroe_quotas(6, 3) == (2, 2, 2)
        assert monroe_quotas(2, 3) == (1, 1, 0)

    def test_hand_example(self):
        e = make_election(2, 2, [{1}, {1}, {2}])
        committee, trace = greedy_monroe(e)
        assert committee.sorted() == (1, 2)
        assert [(t.chosen, t.value) for t in trace] == [(1, F(2)), (2, F(1))]

    def test_quota_removes_lowest_indexed_approvers(self):
        # round 1 quota is 2: voters 1 and 2 are charged, voter 3 still
        # approves candidate 1 but candidate 2 wins round 2 on tie-break
        e = make_election(2, 2, [{1}, {1}, {1, 2}])
        committee, trace = greedy_monroe(e)
        assert committee.sorted() == (1, 2)
        assert trace[1].tied == (2,)

    def test_all_empty_ballots(self):
        e = make_election(3, 2, [set(), set()])
        committee, trace = greedy_monroe(e)
        assert committee.sorted() == (1, 2)
        assert all(t.value == F(0) for t in trace)


class TestEqualShares:
    def test_worked_example_exact(self, equal_shares_election):
        committee, state, trace = mes_phase1(equal_shares_election)
        assert committee.sorted() == (1, 2)
        assert [t.value for t in trace] == [F(1, 3), F(7, 12)]
        assert state.budgets == (F(5, 12), F(5, 12), F(0), F(1, 6))

    def test_phragmen_completion(self, equal_shares_election):
        committee, trace = mes_seqp(equal_shares_election)
        assert committee.sorted() == (1, 2, 3)
        assert trace[2].chosen == 3
        assert trace[2].value == F(1, 12)

    def test_budgets_never_go_negative(self):
        rng = random.Random(41)
        for _ in range(120):
            e = random_election(rng, m_max=6, n_max=9)
            committee, state, _ = mes_phase1(e)
            assert all(b >= 0 for b in state.budgets)
            # each elected candidate costs one unit in total
            spent = F(e.k, e.n) * e.n - sum(state.budgets, F(0))
            assert spent == len(committee)

    def test_unaffordable_candidates_left_out(self):
        # lone voter cannot fund two seats from a budget of 2/1... they can:
        # k=2, n=1 -> budget 2; both seats affordable
        e = make_election(2, 2, [{1, 2}])
        committee, state, _ = mes_phase1(e)
        assert committee.sorted() == (1, 2)
        assert state.budgets == (F(0),)

    def test_short_committee(self):
        e = make_election(2, 2, [{1}, {2}, set(), set()])
        committee, state, _ = mes_phase1(e)
        assert committee.sorted() == ()
        assert state.budgets == (F(1, 2),) * 4


class TestComputeRule:
    def test_rule_registry(self):
        assert set(RULE_IDS) == {
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
        }

    def test_unknown_rule(self, six_voter_election):
        with pytest.raises(PreconditionError):
            compute_rule("borda", six_voter_election)

    def test_thiele_rules_need_weights(self, six_voter_election):
        with pytest.raises(PreconditionError):
            compute_rule("seq-thiele", six_voter_election)
        with pytest.raises(PreconditionError):
            compute_rule("rev-seq-thiele", six_voter_election)

    def test_seq_pav_equals_explicit_harmonic(self, six_voter_election):
        via_id = compute_rule("seq-pav", six_voter_election)
        explicit = compute_rule(
            "seq-thiele", six_voter_election, weights=ThieleWeight.harmonic(2)
        )
        assert via_id.committee == explicit.committee
        assert via_id.trace == explicit.trace

    def test_short_committee_warning(self):
        e = make_election(2, 2, [{1}, {2}, set(), set()])
        result = compute_rule("mes", e)
        assert result.warnings == ("short committee: 0 of 2 seats filled",)

    def test_every_rule_runs_on_randoms(self):
        rng = random.Random(43)
        for _ in range(25):
            e = random_election(rng, m_max=5, n_max=8)
            for rule in RULE_IDS:
                weights = None
                if rule == "seq-thiele":
                    weights = ThieleWeight.from_epsilon(F(1, 4), e.k)
                elif rule == "rev-seq-thiele":
                    weights = ThieleWeight.from_epsilon(F(1, 4), e.m)
                try:
                    result = compute_rule(rule, e, weights=weights)
                except PreconditionError:
                    continue  # e.g. seq-phragmen without enough supported candidates
                assert len(result.committee) <= e.k
