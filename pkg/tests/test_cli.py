"""Command-line client: output contracts, exit codes, config resolution."""

import csv
import io
import json

import pytest

from atomlink import cli


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _parse_csv(text):
    comments = [l for l in text.splitlines() if l.startswith("#")]
    rows = [l for l in text.splitlines() if l and not l.startswith("#")]
    return comments, list(csv.reader(io.StringIO("\n".join(rows))))


def test_rate_csv_contract(capsys):
    code, out, err = _run(
        ["rate", "--config", "campaign-101km", "--lengths", "5,50,101"], capsys
    )
    assert code == 0
    comments, rows = _parse_csv(out)
    assert rows[0] == ["L_km", "T_us", "R_hz", "eta", "r_per_s"]
    assert len(rows) == 4
    assert float(rows[3][0]) == 101.0
    assert float(rows[3][2]) == pytest.approx(909.4968002248937, rel=1e-9)
    assert float(rows[1][4]) == pytest.approx(0.6897108276110486, rel=1e-9)
    assert any("length_km" in c for c in comments)  # config echo rides along


def test_rate_length_range_syntax(capsys):
    code, out, _ = _run(["rate", "--lengths", "10:20:3", "--format", "json"], capsys)
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["L_km"] for r in rows] == [10.0, 15.0, 20.0]


def test_snr_csv_contract(capsys):
    code, out, _ = _run(
        ["snr", "--config", "campaign-101km", "--lengths", "50,101"], capsys
    )
    assert code == 0
    _, rows = _parse_csv(out)
    assert rows[0] == ["L_km", "p_signal", "p_qfc", "p_dc", "snr"]
    assert float(rows[1][4]) == pytest.approx(60.299998482962025, rel=1e-9)
    assert float(rows[2][4]) == pytest.approx(11.799999391621904, rel=1e-9)


def test_snr_dark_count_override(capsys):
    code, out, _ = _run(
        ["snr", "--lengths", "101", "--dark-counts", "1.0", "--format", "json"], capsys
    )
    assert code == 0
    assert json.loads(out)["rows"][0]["snr"] == pytest.approx(46.69993884005469)


def test_raman_csv_contract(capsys):
    code, out, _ = _run(["raman", "--points", "11"], capsys)
    assert code == 0
    _, rows = _parse_csv(out)
    assert rows[0] == ["delta_mhz", "p_target", "p_blocked"]
    assert len(rows) == 12


def test_simulate_writes_a_record_log(tmp_path, capsys):
    out_file = tmp_path / "run.csv"
    code, _, _ = _run(
        ["simulate", "--config", "campaign-101km", "--stop", "40", "--seed", "5",
         "--out", str(out_file)], capsys
    )
    assert code == 0
    comments, rows = _parse_csv(out_file.read_text())
    assert rows[0] == ["time_us", "attempt_idx", "photon_port", "atom_outcome", "truth_tag"]
    assert len(rows) == 41
    assert {r[4] for r in rows[1:]} <= {"signal", "qfc", "dark"}
    assert any(c.startswith("# config") or "length_km" in c for c in comments)
    assert any("n_events" in c for c in comments)


def test_simulate_json_then_analyze(tmp_path, capsys):
    sim_file = tmp_path / "campaign.json"
    code, _, _ = _run(
        ["simulate", "--config", "campaign-101km", "--stop", "60", "--seed", "9",
         "--format", "json", "--out", str(sim_file)], capsys
    )
    assert code == 0
    doc = json.loads(sim_file.read_text())
    assert doc["report"]["n_events"] == 60

    code, out, _ = _run(
        ["analyze", "--input", str(sim_file), "--format", "json"], capsys
    )
    assert code == 0
    report = json.loads(out)["report"]
    assert report["n_events"] == 60
    assert report["fidelity_lower_bound"] == doc["report"]["fidelity_lower_bound"]


def test_analyze_csv_lists_per_setting_counts(tmp_path, capsys):
    sim_file = tmp_path / "campaign.json"
    _run(["simulate", "--config", "campaign-101km", "--stop", "30", "--seed", "2",
          "--format", "json", "--out", str(sim_file)], capsys)
    code, out, _ = _run(["analyze", "--input", str(sim_file)], capsys)
    assert code == 0
    comments, rows = _parse_csv(out)
    assert rows[0][0] == "setting"
    assert len(rows) == 4  # header + Z, X, Y
    assert any("fidelity_lower_bound" in c for c in comments)


def test_simulate_output_is_deterministic(tmp_path, capsys):
    args = ["simulate", "--config", "campaign-101km", "--stop", "25", "--seed", "3",
            "--format", "json"]
    code_a, out_a, _ = _run(args, capsys)
    code_b, out_b, _ = _run(args, capsys)
    assert code_a == code_b == 0
    assert out_a == out_b


def test_coherence_csv_and_fit_comment(capsys):
    code, out, _ = _run(
        ["coherence", "--basis", "initial", "--delays", "0:1000:11", "--seed", "9"],
        capsys,
    )
    assert code == 0
    comments, rows = _parse_csv(out)
    assert rows[0] == ["delay_us", "visibility"]
    assert len(rows) == 12
    assert any("t2" in c for c in comments)


def test_coherence_single_delay_still_succeeds(capsys):
    code, out, _ = _run(["coherence", "--delays", "500"], capsys)
    assert code == 0
    assert "fit_error" in out


def test_unknown_preset_is_a_config_error(capsys):
    code, _, err = _run(["rate", "--config", "campaign-404km"], capsys)
    assert code == 2
    assert "campaign-404km" in err


def test_malformed_scenario_file_is_a_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("[link\nlength_km = 3")
    code, _, err = _run(["rate", "--config", str(bad)], capsys)
    assert code == 2
    assert err


def test_invalid_scenario_values_fail_before_any_request(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("[link]\nlength_km = -4.0\n")
    code, _, err = _run(["rate", "--config", str(bad)], capsys)
    assert code == 2


def test_descending_length_range_is_a_config_error(capsys):
    code, _, err = _run(["rate", "--lengths", "50:5:3"], capsys)
    assert code == 2


def test_unreachable_server_is_a_runtime_error(capsys):
    code, _, err = _run(
        ["rate", "--lengths", "5", "--server", "http://127.0.0.1:9"], capsys
    )
    assert code == 3
    assert err


def test_env_config_dir_resolves_named_scenarios(tmp_path, capsys, monkeypatch):
    (tmp_path / "bench.toml").write_text("[link]\nlength_km = 12.0\n")
    monkeypatch.setenv("ATOMLINK_CONFIG_DIR", str(tmp_path))
    code, out, _ = _run(["rate", "--config", "bench", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["rows"][0]["L_km"] == 12.0


def test_out_file_matches_stdout(tmp_path, capsys):
    out_file = tmp_path / "rows.csv"
    code, stdout_text, _ = _run(["snr", "--lengths", "50"], capsys)
    code2, _, _ = _run(["snr", "--lengths", "50", "--out", str(out_file)], capsys)
    assert code == code2 == 0
    assert out_file.read_text() == stdout_text
