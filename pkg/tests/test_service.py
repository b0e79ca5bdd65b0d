import numpy as np
import pytest
from fastapi.testclient import TestClient

from diracsig.service import app

SMALL = {"model": "drum", "n_max": 2, "quad": {"surface_order": 64, "volume_order": 64}}


@pytest.fixture()
def client():
    with TestClient(app) as c:
        yield c


def test_healthz(client):
    assert client.get("/healthz").json() == {"status": "ok"}


def test_assemble_and_cache(client):
    r1 = client.post("/assemble", json={"config": SMALL})
    assert r1.status_code == 200
    body = r1.json()
    assert body["cache_hit"] is False
    doc = body["document"]
    assert doc["schema"] == "sigop-matrix/1"
    assert len(doc["basis_labels"]) == 8
    assert len(doc["matrix"]["re"]) == 8 and len(doc["gram"]["re"]) == 8
    assert doc["content_hash"] == body["content_hash"]

    r2 = client.post("/assemble", json={"config": SMALL})
    assert r2.json()["cache_hit"] is True
    assert r2.json()["canonical"] == body["canonical"]  # byte identical


def test_assemble_dimensions_drum8(client):
    cfg = {"model": "drum", "n_max": 8, "quad": {"surface_order": 128, "volume_order": 160}}
    doc = client.post("/assemble", json={"config": cfg}).json()["document"]
    assert len(doc["matrix"]["re"]) == 32  # 4N modes


def test_spectrum_endpoint(client):
    doc = client.post("/assemble", json={"config": SMALL}).json()["document"]
    sp = client.post("/spectrum", json={"document": doc})
    assert sp.status_code == 200
    lam = np.array(sp.json()["eigenvalues"])
    assert np.abs(lam + lam[::-1]).max() < 1e-8 * np.abs(lam).max()  # +- pairs
    csv = sp.json()["csv"]
    assert csv.splitlines()[0] == "# schema: sigop-spectrum/1"
    assert "index,eigenvalue" in csv

    zero = {**doc, "matrix": {"re": np.zeros((8, 8)).tolist(), "im": np.zeros((8, 8)).tolist()}}
    res = client.post("/spectrum", json={"document": zero}).json()
    assert max(abs(v) for v in res["eigenvalues"]) == 0.0


def test_error_mapping(client):
    bad = client.post("/assemble", json={"config": {"model": "wedge"}})
    assert bad.status_code == 400
    assert bad.json()["detail"]["kind"] == "config"
    garbage = client.post("/spectrum", json={"document": {"schema": "nope"}})
    assert garbage.status_code == 400
    assert garbage.json()["detail"]["kind"] == "config"


def test_verify_endpoint(client):
    cfg = {"model": "drum", "n_max": 2, "quad": {"surface_order": 64, "volume_order": 64}}
    res = client.post("/verify", json={"config": cfg}).json()
    assert res["all_pass"] is True
    assert res["jsonl"].splitlines()[0].startswith('{"anchor":"run-metadata"')
    assert res["csv"].startswith("name,anchor,value")

    fault = client.post("/verify", json={"config": cfg, "inject_fault": True}).json()
    assert fault["all_pass"] is False

    unknown = client.post("/verify", json={"config": {"model": "wedge"}}).json()
    assert unknown["all_pass"] is False
    assert unknown["reports"][0]["name"] == "suite-setup"


def test_report_endpoint(client):
    cfg = {"model": "drum", "n_max": 2, "quad": {"surface_order": 64, "volume_order": 64}}
    ver = client.post("/verify", json={"config": cfg}).json()
    rep = client.post("/report", json={"jsonl": ver["jsonl"]}).json()
    assert rep["all_pass"] is True
    assert rep["csv"].splitlines()[0] == "name,anchor,value,tol,pass"
    assert "verdict" in rep["table"].splitlines()[0]
    bad = client.post("/report", json={"jsonl": "not json"})
    assert bad.status_code == 400
