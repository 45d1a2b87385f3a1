import json
import subprocess
import sys

import numpy as np
import pytest

from lueders.cli import main
from lueders.effects import build_effect_set, generate_noncommuting_resolution
from lueders.serialize import dump_effect_set, dump_operator

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def _pinching_file(tmp_path):
    path = tmp_path / "pinching.json"
    dump_effect_set(path, build_effect_set([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))
    return str(path)


def _out(capsys):
    return capsys.readouterr().out


def test_gen_validate_round_trip(tmp_path, capsys):
    path = tmp_path / "set.json"
    code = main(
        ["gen", "--flavor", "commuting-resolution", "--d", "4", "--n", "3",
         "--seed", "5", "--out", str(path)]
    )
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["d"] == 4 and doc["n"] == 3 and doc["seed"] == 5
    assert doc["flavor"] == "commuting-resolution"

    assert main(["validate", str(path)]) == 0
    report = json.loads(_out(capsys))
    assert report["valid"] and report["commuting"]
    assert report["normalization"] == "resolution"
    assert report["sum_of_squares"]["frobenius_distance_to_identity"] < 1e-10


def test_gen_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["gen", "--flavor", "commuting-subnormalized", "--d", "5", "--n", "2",
            "--seed", "7", "--unit-fraction", "0.4"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["unit_fraction"] == 0.4


def test_gen_argument_errors(capsys):
    assert main(["gen", "--flavor", "commuting-resolution", "--d", "100", "--n", "2"]) == 3
    assert main(
        ["gen", "--flavor", "commuting-subnormalized", "--d", "3", "--n", "2",
         "--unit-fraction", "1.5"]
    ) == 3
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--flavor", "bogus", "--d", "2", "--n", "2"])
    assert exc.value.code == 3
    capsys.readouterr()


def test_no_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 3
    capsys.readouterr()


def test_validate_reports_violation_with_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"d": 1, "n": 1, "effects": [[[[1.5, 0]]]]}')
    assert main(["validate", str(path)]) == 1
    report = json.loads(_out(capsys))
    assert report["valid"] is False
    assert report["violation"] == "SpectrumAboveOne"


def test_validate_parse_error_and_missing_file(tmp_path, capsys):
    path = tmp_path / "garbage.json"
    path.write_text("not json at all")
    assert main(["validate", str(path)]) == 3
    assert main(["validate", str(tmp_path / "absent.json")]) == 3
    capsys.readouterr()


def test_analyze_pinching(tmp_path, capsys):
    assert main(["analyze", _pinching_file(tmp_path)]) == 0
    report = json.loads(_out(capsys))
    assert report["fixed_dim"] == 2 and report["commutant_dim"] == 2
    assert abs(report["channel_norm"] - 1.0) < 1e-12
    assert report["joint_block_dims"] == [1, 1]


def test_verify_resolution_and_subnormalized(tmp_path, capsys):
    assert main(["verify", _pinching_file(tmp_path)]) == 0
    rep = json.loads(_out(capsys))
    assert rep["theorem"] == "3.1" and rep["verdict"] is True
    assert set(rep) == {"theorem", "fixed_dim", "target_dim", "distance", "verdict"}

    sub = tmp_path / "sub.json"
    dump_effect_set(sub, build_effect_set([np.diag([1.0, 0.5])]))
    assert main(["verify", str(sub)]) == 0
    rep2 = json.loads(_out(capsys))
    assert rep2["theorem"] == "3.2" and rep2["verdict"] is True
    assert rep2["fixed_dim"] == rep2["target_dim"] == 1


def test_verify_noncommuting_subnormalized_is_an_input_error(tmp_path, capsys):
    scaled = [0.9 * e for e in generate_noncommuting_resolution(3, 3, seed=2).matrices]
    path = tmp_path / "nc.json"
    dump_effect_set(path, build_effect_set(scaled))
    assert main(["verify", str(path)]) == 3
    capsys.readouterr()


def test_witness_finds_pair_and_handles_commuting(tmp_path, capsys):
    es_path = _pinching_file(tmp_path)
    op_path = tmp_path / "sx.json"
    dump_operator(op_path, SIGMA_X)
    assert main(["witness", es_path, str(op_path)]) == 0
    cert = json.loads(_out(capsys))
    assert (cert["m"], cert["k"], cert["j"]) == (2, -1, 1)
    assert "left_projector" not in cert

    assert main(["witness", es_path, str(op_path), "--full"]) == 0
    assert "left_projector" in json.loads(_out(capsys))

    diag_path = tmp_path / "diag.json"
    dump_operator(diag_path, np.diag([3.0, -1.0]))
    assert main(["witness", es_path, str(diag_path)]) == 2
    assert json.loads(_out(capsys))["result"] == "commutes-no-witness"

    assert main(["witness", es_path, str(op_path), "--index", "3"]) == 3
    capsys.readouterr()


def test_bound_output(capsys):
    assert main(["bound", "--n", "1", "--m", "2", "--p", "100"]) == 0
    text = _out(capsys)
    assert "0.1149750" in text
    assert "p* = " in text

    assert main(["bound", "--n", "1", "--m", "1"]) == 0
    assert _out(capsys).strip() == "p* = 5"

    assert main(["bound", "--n", "1", "--m", "1", "--p", "0"]) == 3
    capsys.readouterr()


def test_nagy_resolution(tmp_path, capsys):
    path = _pinching_file(tmp_path)
    assert main(["nagy", path]) == 0
    rep = json.loads(_out(capsys))
    assert rep["half_identity_distance"] <= 1e-10
    assert rep["is_effect"] is True
    assert "solution" not in rep

    assert main(["nagy", path, "--full"]) == 0
    full = json.loads(_out(capsys))
    assert np.abs(np.array(full["solution"])[:, :, 0] - 0.5 * np.eye(2)).max() < 1e-10


def test_suite_quick(capsys):
    assert main(["suite", "--quick"]) == 0
    rep = json.loads(_out(capsys))
    assert rep["all_passed"] is True
    assert len(rep["criteria"]) == 10


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "lueders.cli", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "lueders" in proc.stdout

    out = tmp_path / "gen.json"
    proc = subprocess.run(
        [sys.executable, "-m", "lueders.cli", "gen", "--flavor",
         "noncommuting-resolution", "--d", "3", "--n", "3", "--seed", "1",
         "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(out.read_text())["d"] == 3
