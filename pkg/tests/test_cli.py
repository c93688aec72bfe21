import csv
import io
import json
import subprocess
import sys

import pytest

from entanglemetry.cli import main, round3, table_rows
from entanglemetry.report import deserialize


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_named_ghz4_json(capsys):
    code, out, _ = run(capsys, "analyze", "--named", "ghz4", "--format", "json")
    assert code == 0
    env = deserialize(out)
    assert round3(env.payload.f) == "1.000"
    assert round3(env.payload.f1) == "1.000"


def test_analyze_ket_text(capsys):
    code, out, _ = run(capsys, "analyze", "--state", "1/2(|0001>+|0010>+|0100>+|1000>)")
    assert code == 0
    assert "F  = 0.645497224368" in out
    assert "F1 = 0.816496580928" in out


def test_analyze_three_qubits_reports_fill(capsys):
    code, out, _ = run(capsys, "analyze", "--named", "ghz3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "state,fill"
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(1.0, abs=1e-12)


def test_analyze_csv_columns(capsys):
    _, out, _ = run(capsys, "analyze", "--named", "hs", "--measure", "f1", "--format", "csv")
    header, row = out.splitlines()
    assert header == "state,f1"
    assert row.startswith("hs,1.088")


def test_analyze_family(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "gabcd:1,0,0,1", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1][0] == "gabcd:1,0,0,1"
    assert float(rows[1][1]) == pytest.approx(1.0, abs=1e-12)


def test_state_file(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"n_qubits": 4, "amplitudes": [[1, 0]] + [[0, 0]] * 14 + [[1, 0]]}))
    code, out, _ = run(capsys, "analyze", "--state-file", str(path), "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].startswith(str(path))


def test_profile_csv(capsys):
    _, out, _ = run(capsys, "profile", "--named", "cluster4", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "state,cut,c,c2"
    assert len(lines) == 8
    assert lines[6].split(",")[1] == "AC|BD"
    assert float(lines[6].split(",")[3]) == pytest.approx(1.5)


def test_table_shares_analyze_path(capsys):
    _, out, _ = run(capsys, "table", "--format", "csv")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    names = {"W4": "w4", "GHZ4": "ghz4", "Cluster4": "cluster4", "HS": "hs"}
    for title, f, f1 in rows:
        _, a, _ = run(capsys, "analyze", "--named", names[title], "--format", "json")
        rep = deserialize(a).payload
        assert (round3(rep.f), round3(rep.f1)) == (f, f1)
    assert [r[0] for r in rows] == ["W4", "GHZ4", "Cluster4", "HS"]
    assert len(table_rows()) == 4


def test_round3_is_half_even():
    assert round3(0.0625) == "0.062"
    assert round3(0.0635) == "0.064"
    assert round3(1.0000000000000009) == "1.000"


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--state", "|01> + |1>"],
        ["analyze", "--state", "|0000"],
        ["analyze", "--named", "unknown"],
        ["analyze", "--named", "basis:00000"],
        ["analyze", "--family", "gabcd:1,2"],
        ["analyze", "--state-file", "/nonexistent/file.json"],
        ["verify", "--samples", "0"],
        ["verify", "--ensemble", "nope"],
        ["verify", "--checks", "t9"],
        ["verify", "--tolerance", "0"],
        ["export-geometry", "--named", "ghz3"],
    ],
)
def test_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")
    assert out == ""


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["analyze", "--named", "ghz4", "--state", "|0000>"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["analyze"])
    assert info.value.code == 2


def test_verify_pass_and_fail_codes(capsys):
    code, out, _ = run(capsys, "verify", "--ensemble", "haar4", "--samples", "50", "--seed", "7", "--quiet")
    assert code == 0
    assert deserialize(out).payload.passed
    code, out, _ = run(capsys, "verify", "--ensemble", "product22", "--checks", "fig3", "--samples", "200", "--quiet")
    assert code == 0


def test_verify_reports_violations_with_exit_1(capsys):
    # a tolerance below rounding noise turns LU deviations into violations
    code, out, err = run(capsys, "verify", "--samples", "200", "--checks", "lu", "--tolerance", "1e-30")
    assert code == 1
    assert "FAIL LU_invariance" in err
    assert deserialize(out).payload["LU_invariance"].failures > 0


def test_verify_threads_env(monkeypatch, capsys):
    args = ["verify", "--samples", "2100", "--checks", "theorems", "--seed", "3", "--quiet"]
    monkeypatch.setenv("ENTANGLEMETRY_THREADS", "1")
    _, a, _ = run(capsys, *args)
    monkeypatch.setenv("ENTANGLEMETRY_THREADS", "4")
    _, b, _ = run(capsys, *args)
    assert a == b
    monkeypatch.setenv("ENTANGLEMETRY_THREADS", "many")
    code, _, _ = run(capsys, *args)
    assert code == 2


def test_sample_out(tmp_path, capsys):
    path = tmp_path / "samples.jsonl"
    code, _, _ = run(capsys, "sample", "--ensemble", "product13", "--samples", "5", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 5
    assert json.loads(lines[0])["n_qubits"] == 4


def test_export_geometry_json(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, _, _ = run(capsys, "export-geometry", "--named", "bellxbell", "--out", str(path))
    assert code == 0
    quads = deserialize(path.read_text()).payload
    assert quads[0].diagonal_cut == "AB|CD"
    assert quads[0].degenerate == (True, True)


def test_export_geometry_svg(capsys):
    code, out, _ = run(capsys, "export-geometry", "--named", "ghz4", "--format", "svg", "--mode", "concurrence")
    assert code == 0
    assert out.startswith("<svg")
    assert out.count("<polygon") == 6
    for label in ("AB|CD", "AC|BD", "AD|BC", "C[A|BCD]"):
        assert label in out
    assert "href" not in out


def test_export_geometry_io_error(capsys):
    code, _, err = run(capsys, "export-geometry", "--named", "ghz4", "--out", "/nonexistent/dir/x.svg")
    assert code == 2
    assert "cannot write" in err


def test_output_is_deterministic(capsys):
    _, a, _ = run(capsys, "analyze", "--named", "cluster4", "--format", "json")
    _, b, _ = run(capsys, "analyze", "--named", "cluster4", "--format", "json")
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "entanglemetry", "analyze", "--named", "ghz4", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("state,f,f1\nghz4,")
    bad = subprocess.run(
        [sys.executable, "-m", "entanglemetry", "verify", "--samples", "0"], capture_output=True, text=True
    )
    assert bad.returncode == 2
