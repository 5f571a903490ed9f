"""HTTP service endpoints."""

import json

import pytest
from fastapi.testclient import TestClient

from glspectra.levy import model_to_dict
from glspectra.presets import PRESETS
from glspectra.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app, raise_server_exceptions=False)


def wire(name: str) -> dict:
    return model_to_dict(PRESETS[name])


class TestModelEndpoint:
    def test_scalars(self, client):
        resp = client.post("/model", json=wire("sawtooth"))
        assert resp.status_code == 200
        body = resp.json()
        assert body["rho"] == pytest.approx(1.0)
        assert body["n_rho"] == 0
        assert "N_inf_c" in body["class_flags"]

    def test_infinite_rho_encoded_as_string(self, client):
        body = client.post("/model", json=wire("classical_m1")).json()
        assert body["rho"] == "inf"

    def test_invalid_model_rejected(self, client):
        spec = {"sigma2": 0.0, "m": 1.0, "jumps": {"kind": "empty"}}
        resp = client.post("/model", json=spec)
        assert resp.status_code == 422
        assert resp.json()["error"] == "ModelSpecError"

    def test_malformed_payload_rejected(self, client):
        resp = client.post("/model", json={"sigma2": "lots"})
        assert resp.status_code == 422


class TestComputeEndpoints:
    def test_wphi(self, client):
        resp = client.post("/wphi", json={"model": wire("gamma"),
                                          "z": [[4.0, 0.0]]})
        row = resp.json()["rows"][0]
        assert row["w_re"] == pytest.approx(6.0, rel=1e-9)
        assert row["w_im"] == pytest.approx(0.0, abs=1e-9)

    def test_density(self, client):
        resp = client.post("/density", json={
            "model": wire("classical_m1"), "x": [1.0], "op": "nu"})
        body = resp.json()
        assert body["values"][0] == pytest.approx(0.36787944117144233)
        assert body["source"].startswith("closed-form")

    def test_density_smoothness_error_mapped(self, client):
        resp = client.post("/density", json={
            "model": wire("sawtooth"), "x": [0.5], "op": "w", "n": 1})
        assert resp.status_code == 422
        assert resp.json()["error"] == "SmoothnessError"

    def test_spectrum_coeffs(self, client):
        resp = client.post("/spectrum", json={
            "model": wire("classical_m1"), "op": "coeffs", "N": 2})
        rows = resp.json()["coeffs"]
        assert rows[2] == pytest.approx([1.0, -1.0, 1.0 / 6.0])

    def test_spectrum_gram_membership_conflict(self, client):
        resp = client.post("/spectrum", json={
            "model": wire("sawtooth"), "op": "gram", "N": 3})
        assert resp.status_code == 422
        assert resp.json()["error"] == "MembershipWarning"

    def test_heatkernel_reports_last_term(self, client):
        resp = client.post("/heatkernel", json={
            "model": wire("classical_m1"), "t": 0.5,
            "x": [1.0], "y": [1.0], "N": 25})
        row = resp.json()["rows"][0]
        assert row["value"] > 0
        assert row["last_term"] < 1e-4

    def test_simulate_eigen(self, client):
        resp = client.post("/simulate", json={
            "model": wire("classical_m1"), "x0": 1.0, "t": 0.5,
            "paths": 4000, "dt": 1e-3, "seed": 0, "horizon": 20.0,
            "check": "eigen:1"})
        rows = resp.json()["rows"]
        assert len(rows) == 1
        assert abs(rows[0]["z"]) < 5.0

    def test_simulate_bad_check_kind(self, client):
        resp = client.post("/simulate", json={
            "model": wire("classical_m1"), "x0": 1.0, "t": 0.5,
            "check": "wavelets:2"})
        assert resp.status_code == 422
        assert resp.json()["error"] == "ConfigError"


class TestVerifyEndpoint:
    def test_narrowed_run_is_deterministic(self, client):
        payload = {"models": ["gamma"], "seed": 0, "mc_paths": 2000}
        a = client.post("/verify", json=payload).json()
        b = client.post("/verify", json=payload).json()
        assert json.dumps(a["report"], sort_keys=True) \
            == json.dumps(b["report"], sort_keys=True)
        assert a["passed"]

    def test_unknown_preset_rejected(self, client):
        resp = client.post("/verify", json={"models": ["nonesuch"]})
        assert resp.status_code == 422
        assert resp.json()["error"] == "ConfigError"
