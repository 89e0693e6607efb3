"""The paired-oracle harness itself: report shape, determinism, fan-out."""

import random

import pytest

from abckit.core import PreconditionError
from abckit.verify import (
    THEOREM_IDS,
    Disagreement,
    VerifyReport,
    random_election,
    random_interval_instance,
    run_verify,
)


class TestReport:
    def test_partition_invariant_enforced(self):
        with pytest.raises(ValueError):
            VerifyReport("thm2", 1, 10, 8, (Disagreement("c", 1, "a", "b"),), 0)

    def test_ok_and_render(self):
        good = VerifyReport("thm2", 1, 4, 4, (), 2)
        assert good.ok
        assert good.render() == (
            "theorem=thm2 trials=1 cases=4 agreements=4 disagreements=0 tie_events=2"
        )
        bad = VerifyReport("thm2", 1, 4, 3, (Disagreement("case x", 2, "True", "False"),), 0)
        assert not bad.ok
        assert "MISMATCH case x vertex=2 expected=True got=False" in bad.render()


class TestRunVerify:
    def test_unknown_theorem(self):
        with pytest.raises(PreconditionError):
            run_verify("thm99", trials=1)

    def test_every_theorem_runs_small(self):
        for theorem in THEOREM_IDS:
            report = run_verify(theorem, trials=2, max_size=5, seed=3)
            assert report.ok, report.render()
            assert report.theorem_id == theorem

    def test_seeded_reproducibility(self):
        a = run_verify("mes", trials=6, max_size=8, seed=11)
        b = run_verify("mes", trials=6, max_size=8, seed=11)
        assert a == b

    def test_worker_count_does_not_change_the_report(self):
        sequential = run_verify("phragmen", trials=8, max_size=8, seed=2)
        fanned_out = run_verify("phragmen", trials=8, max_size=8, seed=2, workers=3)
        assert sequential == fanned_out

    def test_different_seeds_differ(self):
        # same counts, but tie totals separate the underlying instances
        a = run_verify("thm2", trials=5, max_size=6, seed=1)
        b = run_verify("thm2", trials=5, max_size=6, seed=2)
        assert a.tie_events != b.tie_events


class TestGenerators:
    def test_random_election_bounds(self):
        rng = random.Random(0)
        for _ in range(200):
            e = random_election(rng, m_max=8, n_max=12)
            assert 1 <= e.m <= 8 and 1 <= e.k <= e.m and 1 <= e.n <= 12

    def test_interval_instance_shapes(self):
        rng = random.Random(1)
        sp = random_interval_instance(rng, "sp", universe=50, count=40, budget=7)
        assert sp.kind == "sp" and sp.universe_size == 50 and len(sp.intervals) == 40
        sc = random_interval_instance(rng, "sc", universe=50, count=40, budget=7)
        # sc instances keep nonempty intervals sorted with labels tracking
        nonempty = [iv for iv in sc.intervals if iv is not None]
        assert nonempty == sorted(nonempty)
        assert sorted(sc.labels) == list(range(1, 41))
