import pytest
from fastapi.testclient import TestClient

from basestock.instance import instance_doc
from basestock.fixtures import fixture
from basestock.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def doc_for(fid: str) -> dict:
    return instance_doc(fixture(fid).network)


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_fixture_listing_and_export(client):
    listing = client.get("/fixtures").json()
    assert "serial.case3" in listing["fixtures"]
    assert "mixed" in listing["sets"]

    body = client.get("/fixtures/serial.case3").json()
    assert body["instance"]["horizon"] == 10
    refs = {r["method"]: r for r in body["references"]}
    assert refs["analytical"]["cost"] == 47.65
    assert refs["analytical"]["ouls"]["0->1"] == 10.69

    assert client.get("/fixtures/nope.case1").status_code == 404


def test_validate_endpoint(client):
    out = client.post("/validate", json={"instance": doc_for("mixed.fig1")})
    assert out.status_code == 200
    body = out.json()
    assert body["ordering"] == [1, 2, 3, 4, 5]
    assert len(body["decision_edges"]) == 7
    assert body["priming_levels"]["1"] == pytest.approx(40.0)


def test_validate_rejects_cycles(client):
    doc = doc_for("serial.case3")
    doc["edges"].append({"from": 3, "to": 2, "lead_time": 1})
    out = client.post("/validate", json={"instance": doc})
    assert out.status_code == 400
    detail = out.json()["detail"]
    assert detail["kind"] == "validation"


def test_validate_names_bad_cost_kind(client):
    doc = doc_for("serial.case3")
    doc["edges"][0]["holding"] = {"kind": "bogus"}
    out = client.post("/validate", json={"instance": doc})
    assert out.status_code == 400
    assert "edges[0].holding" in out.json()["detail"]["message"]


def test_simulate_endpoint(client):
    payload = {
        "instance": doc_for("table1.case1"),
        "ouls": [10.6745],
        "trials": 4,
        "horizon": 2000,
        "seed": 0,
    }
    body = client.post("/simulate", json=payload).json()
    assert body["mean_cost_per_period"] == pytest.approx(12.71, rel=0.05)
    assert len(body["per_trial"]) == 4
    assert body["trace"] is None


def test_simulate_trace_rows(client):
    payload = {
        "instance": doc_for("serial.case3"),
        "ouls": [10.69, 5.53, 6.49],
        "trials": 2,
        "horizon": 500,
        "seed": 0,
        "include_trace": True,
    }
    body = client.post("/simulate", json=payload).json()
    rows = body["trace"]
    assert rows, "expected trace rows"
    assert set(rows[0]) == {"period", "entity", "IL", "ILr", "IT", "BO", "S", "D", "c_t"}
    totals = [r for r in rows if r["entity"] == "total"]
    assert len(totals) == 10


def test_simulate_dimension_mismatch(client):
    payload = {"instance": doc_for("serial.case3"), "ouls": [1.0], "trials": 2, "horizon": 100}
    out = client.post("/simulate", json=payload)
    assert out.status_code == 400


def test_optimize_endpoint_dfo(client):
    payload = {
        "instance": doc_for("serial.case3"),
        "method": "dfo",
        "seed": 0,
        "params": {"budget": 8, "episodes_per_eval": 50},
    }
    body = client.post("/optimize", json=payload).json()
    assert body["method"] == "dfo"
    assert set(body["best_ouls"]) == {"0->1", "1->2", "2->3"}
    assert body["training_interactions"] == 400
    assert body["trace"]


def test_optimize_endpoint_adam_small(client):
    payload = {
        "instance": doc_for("table1.case1"),
        "method": "adam",
        "seed": 0,
        "params": {"episodes": 400, "checkpoint_every": 100, "test_episodes": 20},
    }
    body = client.post("/optimize", json=payload).json()
    assert body["training_interactions"] == 400
    assert [c["episodes"] for c in body["trace"]] == [0, 100, 200, 300, 400]


def test_optimize_unknown_method(client):
    out = client.post(
        "/optimize", json={"instance": doc_for("table1.case1"), "method": "sorcery"}
    )
    assert out.status_code == 400


def test_optimize_enum_grid_too_large_is_optimizer_error(client):
    payload = {
        "instance": doc_for("complex.fig5"),
        "method": "enum",
        "params": {"tie_echelons": False},
    }
    out = client.post("/optimize", json=payload)
    assert out.status_code == 422
    assert out.json()["detail"]["kind"] == "optimizer"


def test_bench_endpoint(client):
    payload = {
        "fixtures": ["table1.case1", "bogus.case0"],
        "methods": ["enum"],
        "seed": 0,
    }
    body = client.post("/bench", json=payload).json()
    rows = body["rows"]
    assert len(rows) == 2
    good = rows[0]
    assert good["fixture"] == "table1.case1"
    assert good["cost"] is not None
    assert rows[1]["error"] == "unknown fixture"
