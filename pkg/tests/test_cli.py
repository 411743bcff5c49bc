"""End-to-end command-line behavior through files and JSON/CSV outputs."""

import json
import math

import pytest

from chswitch.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_matrix_gen_and_classify(tmp_path, capsys):
    path = tmp_path / "f4.json"
    code, out, _ = run_cli(capsys, "matrix", "gen", "--family", "fourier", "--d", "4", "--out", str(path))
    assert code == 0
    assert json.loads(out)["written"] == str(path)
    code, out, _ = run_cli(capsys, "matrix", "classify", str(path))
    assert code == 0
    assert json.loads(out) == {"butson": 4}


def test_matrix_validate_and_mindim(tmp_path, capsys):
    path = tmp_path / "m.json"
    run_cli(capsys, "matrix", "gen", "--family", "f4", "--a-turn", "1/8", "--out", str(path))
    code, out, _ = run_cli(capsys, "matrix", "validate", str(path))
    assert code == 0
    assert json.loads(out)["ok"] is True
    code, out, _ = run_cli(capsys, "matrix", "mindim", str(path))
    assert json.loads(out) == {"min_dimension": 8, "cv_required": False}


def test_matrix_classify_irrational(tmp_path, capsys):
    path = tmp_path / "irr.json"
    a = (2 * math.pi / math.sqrt(2)) % math.pi
    run_cli(capsys, "matrix", "gen", "--family", "f4", "--a", str(a), "--out", str(path))
    code, out, _ = run_cli(capsys, "matrix", "classify", str(path), "--d-max", "512")
    assert code == 0
    payload = json.loads(out)
    assert payload["butson"] is None
    assert payload["witness"] == [1, 1]


def test_matrix_dephase_roundtrip(tmp_path, capsys):
    src = tmp_path / "m.json"
    out_path = tmp_path / "deph.json"
    run_cli(capsys, "matrix", "gen", "--family", "fourier", "--d", "3", "--out", str(src))
    code, out, _ = run_cli(capsys, "matrix", "dephase", str(src), "--out", str(out_path))
    assert code == 0
    payload = json.loads(out)
    assert payload["written"] == str(out_path)
    assert all(f == {"num": 0, "den": 1} for f in payload["row_factors"])


def test_promise_build_verify_run_qudit(tmp_path, capsys):
    mat = tmp_path / "m.json"
    inst = tmp_path / "inst.json"
    run_cli(capsys, "matrix", "gen", "--family", "fourier", "--d", "3", "--out", str(mat))
    code, out, _ = run_cli(
        capsys, "promise", "build", "--matrix", str(mat), "--column", "2",
        "--target", "qudit", "--out", str(inst),
    )
    assert code == 0
    code, out, _ = run_cli(capsys, "promise", "verify", "--instance", str(inst))
    assert code == 0
    assert json.loads(out) == {"column": 2, "claimed_column": 2}
    code, out, _ = run_cli(capsys, "switch", "run", "--instance", str(inst))
    assert code == 0
    payload = json.loads(out)
    assert payload["argmax"] == 2
    assert payload["deterministic"] is True
    assert payload["distribution"][2] == pytest.approx(1.0)


def test_promise_build_cv_and_run_with_sample(tmp_path, capsys):
    mat = tmp_path / "m.json"
    inst = tmp_path / "inst.json"
    run_cli(capsys, "matrix", "gen", "--family", "f4", "--a", "0.6", "--out", str(mat))
    run_cli(
        capsys, "promise", "build", "--matrix", str(mat), "--column", "1",
        "--target", "cv", "--alpha", "0.5", "--out", str(inst),
    )
    code, out, _ = run_cli(capsys, "switch", "run", "--instance", str(inst), "--sample", "7")
    assert code == 0
    payload = json.loads(out)
    assert payload["argmax"] == 1
    assert payload["sample"] == 1


def test_promise_build_minimal(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    code, _, _ = run_cli(
        capsys, "promise", "build", "--target", "minimal", "--a", "0.9",
        "--column", "3", "--out", str(inst),
    )
    assert code == 0
    code, out, _ = run_cli(capsys, "promise", "verify", "--instance", str(inst))
    assert code == 0
    assert json.loads(out)["column"] == 3


def test_switch_run_psi_file(tmp_path, capsys):
    mat = tmp_path / "m.json"
    inst = tmp_path / "inst.json"
    psi = tmp_path / "psi.json"
    run_cli(capsys, "matrix", "gen", "--family", "fourier", "--d", "2", "--out", str(mat))
    run_cli(
        capsys, "promise", "build", "--matrix", str(mat), "--column", "1",
        "--target", "qudit", "--out", str(inst),
    )
    s = 1 / math.sqrt(2)
    psi.write_text(json.dumps([[s, 0.0], [0.0, s]]))
    code, out, _ = run_cli(capsys, "switch", "run", "--instance", str(inst), "--psi", str(psi))
    assert code == 0
    assert json.loads(out)["argmax"] == 1


def test_switch_run_psi_rejected_for_cv(tmp_path, capsys):
    mat = tmp_path / "m.json"
    inst = tmp_path / "inst.json"
    psi = tmp_path / "psi.json"
    run_cli(capsys, "matrix", "gen", "--family", "f4", "--a", "0.4", "--out", str(mat))
    run_cli(
        capsys, "promise", "build", "--matrix", str(mat), "--column", "2",
        "--target", "cv", "--out", str(inst),
    )
    psi.write_text(json.dumps([[1.0, 0.0], [0.0, 0.0]]))
    code, _, err = run_cli(capsys, "switch", "run", "--instance", str(inst), "--psi", str(psi))
    assert code == 1
    assert json.loads(err)["code"] == "domain_error"


def test_switch_run_random_psi(tmp_path, capsys):
    mat = tmp_path / "m.json"
    inst = tmp_path / "inst.json"
    run_cli(capsys, "matrix", "gen", "--family", "sylvester", "--k", "2", "--out", str(mat))
    run_cli(
        capsys, "promise", "build", "--matrix", str(mat), "--column", "3",
        "--target", "qudit", "--dim", "2", "--out", str(inst),
    )
    code, out, _ = run_cli(capsys, "switch", "run", "--instance", str(inst), "--random-psi", "42")
    assert code == 0
    assert json.loads(out)["argmax"] == 3


def test_switch_sweep_families(capsys):
    code, out, _ = run_cli(capsys, "switch", "sweep", "--family", "fourier", "--dmax", "4", "--target", "qudit")
    assert code == 0
    payload = json.loads(out)
    assert payload["all_deterministic"] is True
    assert [s["d"] for s in payload["sweeps"]] == [2, 3, 4]
    code, out, _ = run_cli(
        capsys, "switch", "sweep", "--family", "f4", "--a", "0.0,1.5707963,0.3", "--target", "cv"
    )
    assert code == 0
    assert len(json.loads(out)["sweeps"]) == 3


def test_scs_solve_with_witness(capsys):
    code, out, _ = run_cli(capsys, "scs", "solve", "--perms", "012,102,120", "--witness")
    assert code == 0
    payload = json.loads(out)
    assert payload["length"] == 5
    assert payload["witness_order"] == "application"
    assert len(payload["witness"]) == 5


def test_scs_census_stdout_row(capsys):
    code, out, _ = run_cli(capsys, "scs", "census", "--n", "3", "--p", "4")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("N,p,combos")
    fields = lines[1].split(",")
    assert fields[:6] == ["3", "4", "10", "exhaustive", "5", "6"]
    assert fields[6] == "5.400000"


def test_scs_sweep_csv_file(tmp_path, capsys):
    path = tmp_path / "rows.csv"
    code, out, _ = run_cli(
        capsys, "scs", "sweep", "--n", "3", "--p-min", "2", "--p-max", "6", "--out", str(path)
    )
    assert code == 0
    text = path.read_text()
    assert text.startswith("N,p,combos")
    assert len(text.strip().split("\n")) == 6


def test_scs_census_budget_error(capsys):
    code, out, err = run_cli(capsys, "scs", "census", "--n", "4", "--p", "12")
    assert code == 1
    payload = json.loads(err)
    assert payload["code"] == "budget_exceeded"
    assert payload["required"] == 1352078
    # sampling is the suggested way out
    code, out, _ = run_cli(capsys, "scs", "census", "--n", "4", "--p", "12", "--sample", "25", "--seed", "3")
    assert code == 0
    assert out.strip().split("\n")[1].split(",")[3] == "sample"


def test_cli_outputs_are_reproducible(tmp_path, capsys):
    mat = tmp_path / "m.json"
    run_cli(capsys, "matrix", "gen", "--family", "fourier", "--d", "5", "--out", str(mat))
    _, out1, _ = run_cli(capsys, "matrix", "classify", str(mat))
    _, out2, _ = run_cli(capsys, "matrix", "classify", str(mat))
    assert out1 == out2
    _, c1, _ = run_cli(capsys, "scs", "census", "--n", "4", "--p", "3", "--sample", "20", "--seed", "11")
    _, c2, _ = run_cli(capsys, "scs", "census", "--n", "4", "--p", "3", "--sample", "20", "--seed", "11")
    assert c1 == c2


def test_cli_domain_error_is_structured(tmp_path, capsys):
    mat = tmp_path / "m.json"
    a = (2 * math.pi / math.sqrt(2)) % math.pi
    run_cli(capsys, "matrix", "gen", "--family", "f4", "--a", str(a), "--out", str(mat))
    code, _, err = run_cli(
        capsys, "promise", "build", "--matrix", str(mat), "--column", "0", "--target", "qudit"
    )
    assert code == 1
    payload = json.loads(err)
    assert payload["code"] == "not_butson"
    assert payload["witness"] == [1, 1]


def test_cli_usage_error_exit_code(capsys):
    assert main(["matrix", "gen"]) == 2  # missing required --family
    capsys.readouterr()
    assert main(["unknown-group"]) == 2
    capsys.readouterr()


def test_cli_pretty_flag(tmp_path, capsys):
    mat = tmp_path / "m.json"
    run_cli(capsys, "matrix", "gen", "--family", "fourier", "--d", "2", "--out", str(mat))
    _, out, _ = run_cli(capsys, "matrix", "classify", str(mat), "--pretty")
    assert out.startswith("{\n")
