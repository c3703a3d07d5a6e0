"""Command-line interface: exit codes, output files, report wiring."""
import json
import subprocess
import sys

import numpy as np
import pytest

from pweno.cli import main

CSV_HEADER = "level,region,error,order,method,r,grid,seed"


def write_linear_data(tmp_path, J=16):
    nodes = np.linspace(0.0, 1.0, J + 1)
    data = {"axes": [nodes.tolist()], "values": (2.0 * nodes + 1.0).tolist()}
    path = tmp_path / "data.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def write_spiky_data(tmp_path, J=16):
    # alternating huge values overflow the smoothness integrals -> fallback
    nodes = np.linspace(0.0, 1.0, J + 1)
    values = [1e160 * (-1.0) ** k for k in range(J + 1)]
    data = {"axes": [nodes.tolist()], "values": values}
    path = tmp_path / "data.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def write_query(tmp_path, points):
    path = tmp_path / "query.json"
    path.write_text(json.dumps(points), encoding="utf-8")
    return path


class TestBench1D:
    def test_csv_to_file(self, tmp_path):
        out = tmp_path / "report.csv"
        code = main(["bench1d", "--function", "f1", "--levels", "5..6",
                     "--eval-points", "900", "--out", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 2 * 9
        assert lines[1].endswith(",progressive,3,uniform,0")

    def test_csv_to_stdout(self, capsys):
        code = main(["bench1d", "--function", "f1", "--levels", "5..5",
                     "--eval-points", "900"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 9

    def test_json_format(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["bench1d", "--function", "f2", "--method", "classical",
                     "--r", "2", "--levels", "5..6", "--eval-points", "900",
                     "--format", "json", "--out", str(out)])
        assert code == 0
        obj = json.loads(out.read_text(encoding="utf-8"))
        assert obj["method"] == "classical"
        assert obj["r"] == 2
        assert len(obj["rows"]) == 2 * 9

    def test_repeat_runs_byte_identical(self, tmp_path):
        args = ["bench1d", "--function", "f1", "--grid", "random", "--seed", "14",
                "--levels", "5..6", "--eval-points", "900"]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(p1)]) == 0
        assert main(args + ["--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_unknown_function_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["bench1d", "--function", "f9", "--levels", "5..6"])
        assert exc.value.code == 2

    def test_bad_level_syntax_exits_2(self, capsys):
        assert main(["bench1d", "--function", "f1", "--levels", "abc"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_empty_level_range_exits_2(self, capsys):
        assert main(["bench1d", "--function", "f1", "--levels", "7..6"]) == 2
        capsys.readouterr()

    def test_window_violation_exits_2(self, capsys):
        assert main(["bench1d", "--function", "f1", "--r", "4",
                     "--levels", "3..5", "--eval-points", "900"]) == 2
        capsys.readouterr()


class TestBench2D:
    def test_region_csv(self, tmp_path):
        out = tmp_path / "report.csv"
        code = main(["bench2d", "--function", "f4", "--r", "2",
                     "--levels", "5..5", "--eval-points", "1", "--out", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 11 * 9

    def test_smooth_global_rows(self, capsys):
        code = main(["bench2d", "--function", "f3", "--r", "2",
                     "--levels", "4..5", "--eval-points", "1"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert [ln.split(",")[1] for ln in lines[1:]] == ["global", "global"]

    def test_bad_eval_points_exits_2(self, capsys):
        assert main(["bench2d", "--function", "f3", "--levels", "4..4",
                     "--eval-points", "2"]) == 2
        capsys.readouterr()


class TestInterp:
    def test_values_json(self, tmp_path):
        data = write_linear_data(tmp_path)
        query = write_query(tmp_path, [0.31, 0.5, 0.69])
        out = tmp_path / "vals.json"
        code = main(["interp", "--data", str(data), "--query", str(query),
                     "--out", str(out)])
        assert code == 0
        obj = json.loads(out.read_text(encoding="utf-8"))
        assert [entry["point"] for entry in obj] == [[0.31], [0.5], [0.69]]
        for entry in obj:
            assert entry["value"] == pytest.approx(2.0 * entry["point"][0] + 1.0,
                                                   abs=1e-12)

    def test_strict_flags_fallback(self, tmp_path, capsys):
        data = write_spiky_data(tmp_path)
        query = write_query(tmp_path, [0.5])
        code = main(["interp", "--data", str(data), "--query", str(query),
                     "--strict", "--out", str(tmp_path / "vals.json")])
        assert code == 3
        assert "fallback" in capsys.readouterr().err

    def test_fallback_without_strict_is_ok(self, tmp_path, capsys):
        data = write_spiky_data(tmp_path)
        query = write_query(tmp_path, [0.5])
        code = main(["interp", "--data", str(data), "--query", str(query)])
        assert code == 0
        capsys.readouterr()

    def test_missing_data_file_exits_2(self, tmp_path, capsys):
        query = write_query(tmp_path, [0.5])
        assert main(["interp", "--data", str(tmp_path / "none.json"),
                     "--query", str(query)]) == 2
        capsys.readouterr()

    def test_out_of_window_query_exits_2(self, tmp_path, capsys):
        data = write_linear_data(tmp_path)
        query = write_query(tmp_path, [0.01])
        assert main(["interp", "--data", str(data), "--query", str(query)]) == 2
        capsys.readouterr()


def test_module_entry_point(tmp_path):
    out = tmp_path / "report.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "pweno.cli", "bench1d", "--function", "f1",
         "--levels", "5..5", "--eval-points", "900", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert out.read_text(encoding="utf-8").startswith(CSV_HEADER)
