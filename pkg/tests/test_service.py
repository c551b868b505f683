import pytest
from fastapi.testclient import TestClient

from uqonline.core import Pip
from uqonline.service.app import app
from uqonline.ski_rental import dsr_pip_buy_day

client = TestClient(app)


def test_healthz():
    res = client.get("/healthz")
    assert res.status_code == 200
    assert res.json()["status"] == "ok"


def test_solve_ski_randomized_roundtrip():
    res = client.post(
        "/solve/ski-rental",
        json={"ell": 1, "u": 1, "delta": 1.0, "buy_cost": 2},
    )
    assert res.status_code == 200
    body = res.json()
    assert body["drcr"] == pytest.approx(4 / 3, abs=1e-9)
    assert body["support"] == [1, 2]
    assert sum(body["mass"]) == pytest.approx(1.0)
    assert body["buy_day"] is None


def test_solve_ski_deterministic_roundtrip():
    res = client.post(
        "/solve/ski-rental",
        json={"ell": 3, "u": 5, "delta": 0.2, "buy_cost": 2, "deterministic": True},
    )
    assert res.status_code == 200
    body = res.json()
    assert body["buy_day"] == pytest.approx(dsr_pip_buy_day(Pip(3, 5, 0.2), 2))
    assert body["support"] is None


def test_solve_ski_validation_errors():
    res = client.post(
        "/solve/ski-rental", json={"ell": 4, "u": 2, "delta": 0.1, "buy_cost": 2}
    )
    assert res.status_code == 422
    res = client.post(
        "/solve/ski-rental", json={"ell": 1, "u": 2, "delta": 1.7, "buy_cost": 2}
    )
    assert res.status_code == 422


def test_solve_search_roundtrip():
    res = client.post(
        "/solve/online-search",
        json={"ell": 2.0, "u": 3.0, "delta": 0.3, "m": 1.0, "M": 4.0, "eps": 0.1},
    )
    assert res.status_code == 200
    body = res.json()
    assert body["eta_hat"] <= body["gamma_hat"]
    mix = 0.7 * body["eta_hat"] + 0.3 * body["gamma_hat"]
    assert body["drcr"] == pytest.approx(mix, abs=1e-9)
    assert len(body["grid"]) == len(body["cumulative"])
    assert body["cumulative"] == sorted(body["cumulative"])


def test_solve_search_rejects_interval_outside_range():
    res = client.post(
        "/solve/online-search",
        json={"ell": 0.5, "u": 3.0, "delta": 0.3, "m": 1.0, "M": 4.0, "eps": 0.1},
    )
    assert res.status_code == 422


def test_oracle_check_endpoint():
    res = client.post(
        "/oracle-check", json={"problem": "ski-rental", "trials": 4, "seed": 1}
    )
    assert res.status_code == 200
    body = res.json()
    assert body["passed"] is True
    assert all(c["passed"] for c in body["checks"])


def test_experiment_endpoint(tmp_path):
    res = client.post(
        "/experiments/run",
        json={
            "out_dir": str(tmp_path),
            "T": 25,
            "runs": 1,
            "seed": 2,
            "algorithms": ["WOA", "RSR-PIP"],
        },
    )
    assert res.status_code == 200
    body = res.json()
    assert body["records_csv"].endswith("records.csv")
    algs = {row["algorithm"] for row in body["summary"]}
    assert algs == {"WOA", "RSR-PIP"}
