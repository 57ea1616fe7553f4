import json
import math

import pytest

from grover_perceptron.cli import main
from grover_perceptron.qasm import parse_qasm
from grover_perceptron.specfile import example_path, expected_strings_path


def write_spec(tmp_path, **changes):
    doc = json.loads(example_path("example1").read_text())
    doc.update(changes)
    for k, v in list(doc.items()):
        if v is None:
            del doc[k]
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc))
    return path


def test_synth(tmp_path, capsys):
    out = tmp_path / "c.qasm"
    assert main(["synth", "example1", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("OPENQASM 2.0;")
    assert parse_qasm(text).qubit_count == 44
    assert "wrote" in capsys.readouterr().out


def test_run_json_and_csv(tmp_path, capsys):
    out = tmp_path / "h.json"
    assert main(["run", "example1", "--shots", "4096", "--seed", "11", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["shots"] == 4096 and doc["seed"] == 11
    assert doc["metadata"]["decode_order"] == ["w3", "w2", "w1"]
    table = capsys.readouterr().out
    for s in ("010010", "110100", "011100", "100001"):
        assert s in table
    csv_out = tmp_path / "h.csv"
    assert main(["run", "example1", "--shots", "10", "--out", str(csv_out)]) == 0
    assert csv_out.read_text().startswith("bitstring,count\n")


def test_run_env_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("GROVER_PERCEPTRON_SEED", "99")
    out = tmp_path / "h.json"
    main(["run", "example1", "--shots", "64", "--out", str(out)])
    assert json.loads(out.read_text())["seed"] == 99
    main(["run", "example1", "--shots", "64", "--seed", "3", "--out", str(out)])
    assert json.loads(out.read_text())["seed"] == 3


def test_run_rejects_zero_shots(tmp_path, capsys):
    assert main(["run", "example1", "--shots", "0", "--out", str(tmp_path / "h.json")]) == 2
    assert "shots" in capsys.readouterr().err


@pytest.mark.parametrize("n", [1, 2, 3])
def test_verify_examples_with_fixture(tmp_path, n, capsys):
    report = tmp_path / "r.json"
    rc = main(["verify", f"example{n}", "--expected", str(expected_strings_path(f"example{n}")),
               "--report", str(report)])
    assert rc == 0, capsys.readouterr().out
    assert json.loads(report.read_text())["status"] == "PASS"


def test_verify_two_iterations(capsys):
    assert main(["verify", "example1", "--iterations", "2"]) == 0
    out = capsys.readouterr().out
    theta = math.asin(math.sqrt(4 / 64))
    assert f"{math.sin(5 * theta) ** 2:.6f}" in out


def test_verify_wrong_threshold_fails(tmp_path, capsys):
    spec = write_spec(tmp_path, threshold=7)
    rc = main(["verify", str(spec), "--expected", str(expected_strings_path("example1"))])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out


def test_decode(capsys):
    assert main(["decode", "010010", "example1"]) == 0
    out = capsys.readouterr().out
    assert "01(1)" in out and "00(0)" in out and "10(2)" in out
    assert main(["decode", "0100", "example1"]) == 2


@pytest.mark.parametrize("changes,fragment", [
    ({"threshold": None}, "threshold"),
    ({"condition": "ge"}, "condition"),
    ({"inputs": [3, -1]}, "inputs[1]"),
    ({"extra": 1}, "extra"),
])
def test_schema_errors(tmp_path, capsys, changes, fragment):
    assert main(["verify", str(write_spec(tmp_path, **changes))]) == 2
    assert fragment in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["synth", "/nonexistent/spec.json", "--out", "/dev/null"]) == 2
