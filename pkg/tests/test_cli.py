import csv
import io
import json
import subprocess
import sys

import pytest

from clonekit import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv_rows(text):
    body = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(body))))


def test_fidelity_table_cell(capsys):
    code, out, _ = run(capsys, "fidelity-table", "--N-max", "2", "--M-max", "4", "--d", "2", "3")
    assert code == 0
    first = out.splitlines()[0]
    assert first.startswith("# config: ")
    cfg = json.loads(first[len("# config: "):])
    assert cfg["command"] == "fidelity-table" and cfg["d"] == [2, 3]
    rows = _csv_rows(out)
    assert rows[0] == ["N", "M", "d", "fidelity", "eta", "trivial_fidelity"]
    cell = [r for r in rows[1:] if r[:3] == ["1", "2", "2"]]
    assert cell[0][3] == "0.833333333333"


def test_json_output(capsys):
    code, out, _ = run(capsys, "clone", "--machine", "buzek-hillery", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["machine"] == "buzek-hillery"
    assert doc["columns"][:3] == ["output", "target", "fidelity"]
    fids = {r[0]: r[2] for r in doc["rows"]}
    assert fids["clone0"] == pytest.approx(5 / 6)


@pytest.mark.parametrize("machine", cli.MACHINES)
def test_every_machine_runs(capsys, machine):
    code, out, _ = run(capsys, "clone", "--machine", machine, "--theta", "0.7", "--phi", "1.1")
    assert code == 0
    assert len(_csv_rows(out)) > 1


def test_deterministic_output(capsys, monkeypatch):
    argv = ("clone", "--machine", "measure-prepare", "--samples", "500", "--seed", "7", "--random-state")
    _, a, _ = run(capsys, *argv)
    monkeypatch.setenv(cli.THREADS_ENV, "1")
    _, b, _ = run(capsys, *argv)
    assert a == b
    _, c, _ = run(capsys, *argv[:-2], "--seed", "8", "--random-state")
    assert c != a


def test_threads_do_not_change_output(capsys, monkeypatch):
    argv = ("qkd-sweep", "--points", "5")
    monkeypatch.setenv(cli.THREADS_ENV, "1")
    _, a, _ = run(capsys, *argv)
    monkeypatch.setenv(cli.THREADS_ENV, "4")
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_bad_thread_setting(capsys, monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "zero")
    code, _, err = run(capsys, "qkd-sweep", "--points", "3")
    assert code == 1 and cli.THREADS_ENV in err


def test_qkd_sweep_reports_thresholds(capsys):
    code, out, _ = run(capsys, "qkd-sweep", "--points", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert "Dc_incoh" in doc["columns"] and "Dc_coll" in doc["columns"]
    i = doc["columns"].index("Dc_incoh")
    assert doc["rows"][0][i] == pytest.approx(0.1464, abs=1e-4)


def test_cv_network(capsys):
    code, out, _ = run(capsys, "cv-network", "--N", "2", "--M", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert "fidelity" in doc["columns"]
    i = doc["columns"].index("fidelity")
    assert doc["rows"][0][i] == pytest.approx(6 / 7)


@pytest.mark.parametrize("argv", [
    ("bogus",),
    ("clone", "--N", "3", "--M", "2"),
    ("clone", "--machine", "nope"),
    ("cv-network", "--N", "2", "--M", "2"),
    ("fidelity-table", "--N-max", "0"),
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert err.startswith("clonekit") or "usage" in err


def test_output_file(capsys, tmp_path):
    target = tmp_path / "t.csv"
    code, out, _ = run(capsys, "fidelity-table", "--N-max", "1", "--M-max", "2", "-o", str(target))
    assert code == 0 and out == ""
    text = target.read_text()
    assert "output" not in text.splitlines()[0]
    assert "0.833333333333" in text


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rows"]) == 10


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "clonekit", "fidelity-table", "--N-max", "1", "--M-max", "2", "--d", "2"],
                       capture_output=True, text=True, check=False)
    assert p.returncode == 0
    assert "1,2,2,0.833333333333" in p.stdout
