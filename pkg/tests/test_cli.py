"""CLI behaviour, exit codes and golden reports."""
import json
import os
from pathlib import Path

import pytest

from conftest import B, EX21, QP, X27
from ratsym.cli import main, run

GOLDEN = Path(__file__).parent / "golden"
VOLATILE = {"wall_ms"}

CASES = {
    "analyze_example": ["analyze", EX21],
    "analyze_b": ["analyze", B],
    "analyze_x27": ["analyze", X27, "--assert-indecomposable"],
    "sigma_quasi_power": ["sigma-infinity", QP, "--kmax", "4"],
    "sigma_power_map": ["sigma-infinity", "z^2"],
    "aut_d12": ["aut-infinity", "z*(z^6-2)/(2*z^6-1)"],
    "axis_b": ["axis-group", B],
    "s_set_example": ["s-set", EX21, "--kmax", "1"],
    "chebyshev_5": ["chebyshev", "5"],
    "normal_form": ["normal-form", "2*z^2+4*z"],
    "shares_t3": ["shares-iterate", "4*z^3-3*z", "-4*z^3+3*z"],
}


def strip(report):
    return {k: v for k, v in report.items() if k not in VOLATILE and not k.startswith("_")}


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, report = run(CASES[name])
    got = strip(report)
    path = GOLDEN / f"{name}.json"
    if os.environ.get("RATSYM_REGEN_GOLDEN"):
        path.parent.mkdir(exist_ok=True)
        path.write_text(json.dumps({"exit": code, "report": got}, indent=1, ensure_ascii=False) + "\n")
    want = json.loads(path.read_text())
    assert code == want["exit"]
    assert json.loads(json.dumps(got)) == want["report"]


def test_required_keys():
    code, report = run(["analyze", EX21])
    for key in ("input", "tower", "groups", "limits", "checks", "status", "wall_ms"):
        assert key in report
    for g in ("G", "Sigma", "Aut", "Ghat"):
        assert set(report["groups"][g]) >= {"order", "class", "elements", "certificates"}
    assert set(report["limits"]) == {"sigma_infinity", "aut_infinity"}
    assert set(report["checks"]) >= {"burnside", "order_bound", "critical_value_inclusion", "seq0"}


def test_analyze_example(capsys):
    code, report = run(["analyze", EX21])
    g = report["groups"]["G"]
    assert g["order"] == 2 and "-8/z" in [e["text"] for e in g["elements"]]


def test_sigma_infinity_exit_codes():
    code, report = run(["sigma-infinity", QP, "--kmax", "4"])
    lim = report["limits"]["sigma_infinity"]
    assert code == 0 and lim["group"]["class"] == "D8" and lim["stabilized_at"] == 3
    code, report = run(["sigma-infinity", "z^2"])
    assert code == 0 and report["limits"]["sigma_infinity"]["status"] == "InfinitePowerMap"


def test_input_errors():
    code, report = run(["analyze", "z^2 +"])
    assert code == 1 and report["error"]["offset"] == 5
    code, report = run(["analyze", "y+1"])
    assert code == 1 and report["error"]["type"] == "UnknownSymbol"
    assert run(["analyze", "z^2", "--kmax", "0"])[0] == 1
    assert run(["nonsense", "z"])[0] == 1
    assert run(["chebyshev", "z"])[0] == 1


def test_budget_exit_code(monkeypatch):
    monkeypatch.setenv("RATSYM_BUDGET", "3")
    code, report = run(["iterate-groups", "z^2+1", "--kmax", "3"])
    assert code == 2 and report["status"] == "budget-exhausted"


def test_degraded_exit_code():
    # Aut∞ of B stays unproven at the default levels
    code, report = run(["aut-infinity", B, "--kmax", "2"])
    assert code == 3 and report["status"] == "degraded"


def test_out_file_and_verify(tmp_path, capsys):
    out = tmp_path / "b.json"
    assert main(["analyze", B, "--out", str(out)]) in (0, 3)
    data = json.loads(out.read_text())
    assert data["groups"]["G"]["class"] == "S4"
    code, report = run(["verify", str(out)])
    assert code == 0 and report["verification"]["ok"] and report["verification"]["checked"] > 24
    data["groups"]["G"]["certificates"][1]["nu"]["matrix"][0] = [[1, "7"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, report = run(["verify", str(bad)])
    assert code == 1 and report["verification"]["failed"] == ["/groups/G/certificates/1"]


def test_no_floats_without_approx():
    _, report = run(["analyze", B])
    assert "approx" not in json.dumps(report)
    _, report = run(["axis-group", B, "--approx"])
    assert "approx" in json.dumps(report)


def test_tower_option():
    _, report = run(["normal-form", "z^2+1", "--tower", "i,sqrt2"])
    assert report["tower"]["label"] == "Q(i, sqrt(2))"
