import pytest
from fastapi.testclient import TestClient

from api.server import app

client = TestClient(app)


@pytest.fixture(scope="module")
def constant_certificate():
    response = client.post("/certify", json={"spec": "constant", "start": 2})
    assert response.status_code == 200
    return response.json()


def test_list_specs():
    response = client.get("/specs")
    assert response.status_code == 200
    assert {"baxter", "h", "constant"} <= set(response.json())


def test_terms():
    response = client.post("/terms", json={"spec": "baxter", "lo": 0, "hi": 4})
    assert response.status_code == 200
    assert [row["a"] for row in response.json()["terms"]] == ["1", "1", "2", "6", "22"]


def test_terms_from_an_inline_document():
    document = {
        "schema": "turancert-spec/1",
        "name": "powers_of_three",
        "order": 1,
        "coeffs": ["-3", "1"],
        "initial": {"start": 0, "values": ["1"]},
        "positivity_from": 0,
    }
    response = client.post("/terms", json={"document": document, "hi": 3})
    assert response.status_code == 200
    assert [row["a"] for row in response.json()["terms"]] == ["1", "3", "9", "27"]


def test_invalid_inline_document():
    response = client.post("/terms", json={"document": {"name": "broken"}})
    assert response.status_code == 422


def test_spec_is_required():
    assert client.post("/terms", json={}).status_code == 422


def test_check():
    response = client.post("/check", json={"spec": "h", "property": "laguerre2", "lo": 1, "hi": 10})
    assert response.status_code == 200
    assert {o["status"] for o in response.json()["outcomes"]} == {"holds"}


def test_certify(constant_certificate):
    assert constant_certificate["schema"] == "turancert/1"
    assert constant_certificate["initial_window"]["from"] == 2
    assert constant_certificate["stages"]["criterion"]["coverage_from"] == 3


def test_certify_refusal_is_a_conflict():
    response = client.post("/certify", json={"spec": "geometric2", "start": 2})
    assert response.status_code == 409
    assert "u_bounds" in response.json()["detail"]


def test_verify_cert(constant_certificate):
    response = client.post("/verify-cert", json={"spec": "constant", "certificate": constant_certificate})
    assert response.status_code == 200
    assert response.json() == {"is_valid": True, "failures": []}


def test_verify_cert_with_a_malformed_certificate(constant_certificate):
    broken = dict(constant_certificate)
    del broken["stages"]
    response = client.post("/verify-cert", json={"spec": "constant", "certificate": broken})
    assert response.status_code == 422


def test_oeis_check():
    response = client.post("/oeis-check", json={"spec": "h", "limit": 20})
    assert response.status_code == 200
    body = response.json()
    assert body["confirmed"] == 21
    assert body["ok"] is True


def test_oeis_check_needs_an_id():
    assert client.post("/oeis-check", json={"spec": "constant"}).status_code == 422
