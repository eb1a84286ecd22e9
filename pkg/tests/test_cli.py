"""CLI contract: subcommands, exit codes, files written, determinism."""

import pytest

from chanscat.cli import main

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


def write_scenario(tmp_path, text, name="scen.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_lambda_both_methods(capsys):
    code = main(
        ["lambda", "-r", "0", "-N", "1", "--alpha", "2.0", "--beta", "0", "--method", "both"]
    )
    out = capsys.readouterr().out
    assert code == 0
    quad_line = next(line for line in out.splitlines() if line.startswith("quad"))
    series_line = next(line for line in out.splitlines() if line.startswith("series"))
    quad = float(quad_line.split()[1])
    series = float(series_line.split()[1])
    assert quad == pytest.approx(0.5767248078, abs=1e-9)
    assert abs(quad - series) < 1e-10


def test_lambda_trivial_value(capsys):
    code = main(["lambda", "-r", "0", "-N", "0", "--alpha", "0", "--beta", "0"])
    out = capsys.readouterr().out
    assert code == 0
    assert float(out.split()[1]) == pytest.approx(1.0, abs=1e-13)


def test_lambda_usage_error_on_bad_r():
    with pytest.raises(SystemExit) as exc:
        main(["lambda", "-r", "5", "-N", "1", "--alpha", "2.0", "--beta", "0"])
    assert exc.value.code == 2  # argparse usage error


def test_lambda_numeric_error_exit_code(capsys):
    code = main(["lambda", "-r", "0", "-N", "0", "--alpha", "1e7", "--beta", "0"])
    assert code == 2
    assert "numeric" in capsys.readouterr().err


def test_spectrum_writes_files(tmp_path, capsys):
    scen = write_scenario(tmp_path, RESONANT)
    out_csv = str(tmp_path / "spec.csv")
    code = main(["spectrum", scen, "--output", out_csv])
    assert code == 0
    printed = capsys.readouterr().out
    assert "peak omega_eV" in printed and "validity" in printed
    csv_text = (tmp_path / "spec.csv").read_text()
    assert csv_text.startswith("N,s0,s,theta_rad,phi_rad,omega_eV,dW,intensity,valid,note\n")
    manifest = (tmp_path / "spec.csv.manifest").read_text()
    assert "scenario.particle.E_MeV" in manifest


def test_spectrum_missing_scenario_file(tmp_path, capsys):
    missing = str(tmp_path / "nope.cfg")
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", missing])
    assert exc.value.code == 1
    assert missing in capsys.readouterr().err


def test_spectrum_validity_exit_and_force(tmp_path):
    scen = write_scenario(tmp_path, HARD_FAIL)
    code = main(["spectrum", scen, "--output", str(tmp_path / "a.csv")])
    assert code == 3
    code2 = main(["spectrum", scen, "--force", "--output", str(tmp_path / "b.csv")])
    assert code2 == 0
    assert (tmp_path / "b.csv").exists()


def test_spectrum_round_trip_via_manifest_echo(tmp_path):
    scen = write_scenario(tmp_path, RESONANT)
    first = str(tmp_path / "one.csv")
    assert main(["spectrum", scen, "--output", first]) == 0
    manifest = (tmp_path / "one.csv.manifest").read_text()
    echoed = [
        line.removeprefix("scenario.")
        for line in manifest.splitlines()
        if line.startswith("scenario.")
    ]
    scen2 = write_scenario(tmp_path, "\n".join(echoed), name="echo.cfg")
    second = str(tmp_path / "two.csv")
    assert main(["spectrum", scen2, "--output", second]) == 0
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "two.csv").read_bytes()


def test_spectrum_set_overrides(tmp_path):
    scen = write_scenario(tmp_path, RESONANT)
    out_csv = str(tmp_path / "ovr.csv")
    assert main(["spectrum", scen, "--set", "scan.N = 1", "--output", out_csv]) == 0
    lines = (tmp_path / "ovr.csv").read_text().splitlines()
    assert len(lines) == 1 + 5  # header + one N times five thetas


def test_spectrum_threads_byte_identical(tmp_path):
    scen = write_scenario(tmp_path, RESONANT)
    a = str(tmp_path / "t1.csv")
    b = str(tmp_path / "t4.csv")
    assert main(["spectrum", scen, "--threads", "1", "--output", a]) == 0
    assert main(["spectrum", scen, "--threads", "4", "--output", b]) == 0
    assert (tmp_path / "t1.csv").read_bytes() == (tmp_path / "t4.csv").read_bytes()


def test_validate_exit_codes(tmp_path, capsys):
    ok = write_scenario(tmp_path, RESONANT, name="ok.cfg")
    assert main(["validate", ok]) == 0
    capsys.readouterr()
    bad = write_scenario(tmp_path, HARD_FAIL, name="bad.cfg")
    assert main(["validate", bad]) == 3
    assert "intensity_vs_detuning" in capsys.readouterr().out


def test_validate_json_output(tmp_path, capsys):
    import json

    scen = write_scenario(tmp_path, RESONANT)
    assert main(["validate", scen, "--json"]) == 0
    mapping = json.loads(capsys.readouterr().out)
    assert mapping["resonance_detuning"]["verdict"] == "pass"


def test_sweep_writes_csv(tmp_path, capsys):
    scen = write_scenario(tmp_path, RESONANT)
    out_csv = str(tmp_path / "sweep.csv")
    code = main(
        ["sweep", scen, "--axis", "delta0", "--values", "0.1,0.05,0.01", "--output", out_csv]
    )
    assert code == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("axis,value,")


def test_sweep_bad_values_list(tmp_path, capsys):
    scen = write_scenario(tmp_path, RESONANT)
    assert main(["sweep", scen, "--axis", "xi", "--values", "a,b"]) == 1
    assert "bad --values" in capsys.readouterr().err


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    assert "si-planar" in out and "U0_eV=20.0" in out


def test_frequency_command(capsys):
    code = main(
        [
            "frequency",
            "--e-mev", "50",
            "--omega0-ev", "20",
            "--xi", "0",
            "--l", "1",
            "--compton-limit",
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    omega_line = next(line for line in out.splitlines() if line.startswith("omega_eV"))
    assert float(omega_line.split()[1]) == pytest.approx(765891.59, rel=5e-4)


def test_config_error_exit_code(tmp_path, capsys):
    scen = write_scenario(tmp_path, "particle.E_MeV = 50\n")  # missing laser block
    assert main(["spectrum", scen]) == 1
    assert "config" in capsys.readouterr().err
