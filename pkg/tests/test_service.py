"""HTTP facade: JSON contracts and the parse/precondition error mapping."""

import pytest
from fastapi.testclient import TestClient

from abckit.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


E1 = {
    "m": 3,
    "k": 2,
    "ballots": [[1], [1, 3], [1, 3], [2, 3], [2, 3], [2]],
}
MES = {"m": 4, "k": 3, "ballots": [[1, 3], [1, 3], [1, 2], [2, 4]]}
K4 = {"num_vertices": 4, "edges": [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]}


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


class TestCompute:
    def test_seq_cc(self, client):
        r = client.post("/compute", json={"rule": "seq-cc", "election": E1})
        assert r.status_code == 200
        body = r.json()
        assert body["committee"] == [1, 3]
        assert body["tie_events"] == 1
        assert body["trace"][0] == {"round": 1, "chosen": 3, "value": "4", "tied": [3]}
        assert body["trace"][1]["tied"] == [1, 2]

    def test_mes_short_committee_warning(self, client):
        body = client.post("/compute", json={"rule": "mes", "election": MES}).json()
        assert body["committee"] == [1, 2]
        assert body["warnings"] == ["short committee: 2 of 3 seats filled"]
        assert body["trace"][1]["value"] == "7/12"

    def test_explicit_weights(self, client):
        body = client.post(
            "/compute",
            json={"rule": "seq-thiele", "election": E1, "weights": ["1", "1/2"]},
        ).json()
        assert body["committee"] == [1, 3]

    def test_av_scores(self, client):
        body = client.post("/compute", json={"rule": "av", "election": E1}).json()
        assert body["scores"] == [
            {"candidate": 1, "score": "3"},
            {"candidate": 2, "score": "3"},
            {"candidate": 3, "score": "4"},
        ]

    def test_unknown_rule_is_precondition(self, client):
        r = client.post("/compute", json={"rule": "borda", "election": E1})
        assert r.status_code == 422
        assert r.json()["error"] == "precondition"

    def test_invalid_election_is_parse(self, client):
        bad = {"m": 2, "k": 1, "ballots": [[5]]}
        r = client.post("/compute", json={"rule": "av", "election": bad})
        assert r.status_code == 400
        assert r.json()["error"] == "parse"

    def test_malformed_body_is_parse(self, client):
        r = client.post("/compute", json={"rule": "av"})
        assert r.status_code == 400
        assert r.json()["error"] == "parse"


class TestReduce:
    def test_graph_reduction(self, client):
        r = client.post("/reduce", json={"name": "lfmis-mes", "graph": K4, "vertex": 2})
        body = r.json()
        assert body["distinguished"] == 2
        assert body["expected_rule"] == "mes"
        assert body["sense"] == "yes"
        assert body["election"]["m"] == 8

    def test_epsilon_passthrough(self, client):
        r = client.post(
            "/reduce",
            json={"name": "lfmis-seq-thiele", "graph": K4, "vertex": 1, "epsilon": "1/2"},
        )
        assert r.json()["epsilon"] == "1/2"

    def test_detie(self, client):
        r = client.post("/reduce", json={"name": "detie", "election": E1})
        body = r.json()
        assert body["distinguished"] is None
        assert body["expected_rule"] == "seq-cc"
        assert len(body["election"]["ballots"]) == 21

    def test_missing_pieces(self, client):
        assert client.post("/reduce", json={"name": "detie"}).status_code == 422
        assert (
            client.post("/reduce", json={"name": "lfmis-mes", "vertex": 1}).status_code == 422
        )
        assert client.post("/reduce", json={"name": "nope", "graph": K4, "vertex": 1}).status_code == 422


class TestAxisAndRestricted:
    def test_axis_found(self, client):
        body = client.post("/axis", json={"kind": "sp", "election": E1}).json()
        assert body["found"] is True
        assert sorted(body["order"]) == [1, 2, 3]

    def test_axis_not_found(self, client):
        tri = {"m": 3, "k": 2, "ballots": [[1, 2], [2, 3], [1, 3]]}
        body = client.post("/axis", json={"kind": "sp", "election": tri}).json()
        assert body == {"kind": "sp", "found": False, "order": None}

    def test_restricted_solves(self, client):
        body = client.post("/restricted", json={"variant": "sp-cc", "election": E1}).json()
        assert body["coverage"] == 6
        assert len(body["committee"]) == 2

    def test_restricted_optl(self, client):
        body = client.post(
            "/restricted", json={"variant": "sp-cc", "election": E1, "optl": True}
        ).json()
        assert body["optl"]["optv"] == 6
        assert len(body["optl"]["witness"]) == 2
        assert body["optl"]["accepting_paths"] >= 1

    def test_restricted_rejects_unstructured(self, client):
        tri = {"m": 3, "k": 2, "ballots": [[1, 2], [2, 3], [1, 3]]}
        r = client.post("/restricted", json={"variant": "sp-cc", "election": tri})
        assert r.status_code == 422
        assert "not-single-peaked" in r.json()["detail"]


class TestOracles:
    def test_ovr(self, client):
        body = client.post("/oracle/ovr", json={"graph": K4, "vertex": 3, "k": 2}).json()
        assert body["deletion_order"] == [1, 2, 3, 4]
        assert body["result"] is False

    def test_lfmis(self, client):
        assert client.post("/oracle/lfmis", json={"graph": K4}).json()["members"] == [1]

    def test_cc(self, client):
        body = client.post("/oracle/cc", json={"election": E1}).json()
        assert body == {"coverage": 6, "committee": [1, 2]}


def test_verify_endpoint(client):
    body = client.post(
        "/verify", json={"theorem": "thm3", "trials": 5, "max_size": 6, "seed": 1}
    ).json()
    assert body["ok"] is True
    assert body["agreements"] == body["cases"] == 5
    assert body["theorem_id"] == "thm3"
    assert "disagreements=0" in body["text"]


def test_bench_endpoint(client):
    body = client.post(
        "/bench", json={"suite": "sp-cc", "sizes": [60], "threads": [1, 2]}
    ).json()
    lines = body["table"].splitlines()
    assert lines[0].split() == ["suite", "label", "size", "workers", "seconds", "result"]
    assert len(lines) == 4  # header, rule, two worker rows
