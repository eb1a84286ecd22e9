"""Endpoint contracts of the HTTP service."""

import pytest
from fastapi.testclient import TestClient

from chanscat import __version__
from chanscat.service import app

client = TestClient(app)

RESONANT = """
particle.E_MeV = 50
laser.omega0_eV = 0.4826
laser.xi = 0.1
scan.theta_rad = 0:0.004:5
scan.phi_rad = 0
scan.delta_s = 0
"""

HARD_FAIL = """
particle.E_MeV = 50
laser.omega0_eV = 0.4826
laser.xi = 0.01
scan.theta_rad = 0:0.004:3
scan.phi_rad = 0
scan.delta_s = 0
"""


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "version": __version__}


def test_presets_endpoint():
    resp = client.get("/presets")
    assert resp.status_code == 200
    presets = resp.json()["presets"]
    assert presets["si-planar"]["U0_eV"] == 20.0


def test_lambda_endpoint_both_methods():
    resp = client.post(
        "/lambda",
        json={"r": 0, "N": 1, "alpha": 2.0, "beta": 0.0, "method": "both"},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["quad"] == pytest.approx(0.5767248077568734, abs=1e-10)
    assert abs(body["difference"]) < 1e-10
    assert body["nodes"] >= 128


def test_lambda_endpoint_rejects_bad_r():
    resp = client.post("/lambda", json={"r": 5, "N": 0, "alpha": 0.0, "beta": 0.0})
    assert resp.status_code == 422  # pydantic field constraint


def test_lambda_endpoint_numeric_error():
    resp = client.post("/lambda", json={"r": 0, "N": 0, "alpha": 1e7, "beta": 0.0})
    assert resp.status_code == 422
    assert resp.json()["error_kind"] == "numeric"


def test_frequency_endpoint_compton_anchor():
    resp = client.post(
        "/frequency",
        json={
            "E_MeV": 50.0,
            "omega0_eV": 20.0,
            "xi": 0.0,
            "l": 1,
            "theta_rad": 0.0,
            "compton_limit": True,
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    assert not body["forbidden"]
    # channeled ground state: E_perp ~ 0.46 eV trims the free-particle Doppler
    # factor by ~2e-4, so the free anchor holds at that level
    assert body["omega_eV"] == pytest.approx(765891.5864447535, rel=5e-4)


def test_frequency_endpoint_forbidden():
    resp = client.post(
        "/frequency",
        json={"E_MeV": 50.0, "omega0_eV": 1.0, "xi": 0.0, "l": -1, "compton_limit": True},
    )
    assert resp.status_code == 200
    assert resp.json()["forbidden"]


def test_validate_endpoint():
    resp = client.post("/validate", json={"scenario": {"text": RESONANT}})
    assert resp.status_code == 200
    body = resp.json()
    assert body["verdict"] in ("pass", "warn", "fail")
    names = {c["name"] for c in body["conditions"]}
    assert "intensity_vs_detuning" in names
    assert body["map"]["resonance_detuning"]["verdict"] == "pass"
    assert "applicability report" in body["text"]


def test_validate_config_error():
    resp = client.post("/validate", json={"scenario": {"text": "laser.xi = 0.1\n"}})
    assert resp.status_code == 400
    body = resp.json()
    assert body["error_kind"] == "config"
    assert "particle.E_MeV" in body["message"]


def test_spectrum_endpoint_and_manifest():
    resp = client.post("/spectrum", json={"scenario": {"text": RESONANT}})
    assert resp.status_code == 200
    body = resp.json()
    lines = body["csv"].splitlines()
    assert lines[0] == "N,s0,s,theta_rad,phi_rad,omega_eV,dW,intensity,valid,note"
    assert len(lines) == 1 + body["summary"]["n_points"]
    assert "scenario.laser.omega0_eV" in body["manifest"]
    assert body["summary"]["peak_omega_eV"] > 0


def test_spectrum_validity_gate_and_force():
    resp = client.post("/spectrum", json={"scenario": {"text": HARD_FAIL}})
    assert resp.status_code == 409
    assert resp.json()["error_kind"] == "validity"
    forced = client.post(
        "/spectrum", json={"scenario": {"text": HARD_FAIL}, "force": True}
    )
    assert forced.status_code == 200
    # outside the resonant-dominance regime the negative brackets are flagged
    body = forced.json()
    assert body["summary"]["n_valid"] < body["summary"]["n_points"]
    assert "negative_bracket" in body["csv"]


def test_spectrum_overrides_apply():
    resp = client.post(
        "/spectrum",
        json={"scenario": {"text": RESONANT, "overrides": ["scan.N = 1"]}},
    )
    assert resp.status_code == 200
    assert resp.json()["summary"]["n_points"] == 5  # one N, five thetas


def test_sweep_endpoint():
    resp = client.post(
        "/sweep",
        json={"scenario": {"text": RESONANT}, "axis": "delta0", "values": [0.1, 0.01]},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["rows"]) == 2
    assert body["csv"].splitlines()[0].startswith("axis,value,")


def test_spectrum_threads_do_not_change_bytes():
    one = client.post("/spectrum", json={"scenario": {"text": RESONANT}, "threads": 1})
    four = client.post("/spectrum", json={"scenario": {"text": RESONANT}, "threads": 4})
    assert one.json()["csv"] == four.json()["csv"]
