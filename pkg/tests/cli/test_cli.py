import io
import json
import logging
import os
import sys
import threading

import numpy as np
import pandas as pd
import pytest

from ptolab.cli import RunConfig, build_parser, config_from_args, main
from ptolab.errors import PreconditionError
from ptolab.parsing.parse_matrix import parse_matrix

TEST_DIR = os.path.dirname(os.path.abspath(__file__))
MATRICES_DIR = os.path.join(TEST_DIR, "..", "example_matrices")
SQUARE = os.path.join(MATRICES_DIR, "square.csv")
C4 = os.path.join(MATRICES_DIR, "c4.csv")


@pytest.fixture(autouse=True)
def isolated_session(tmp_path, monkeypatch):
    """Keeps log files in tmp_path and undoes the global hooks main() installs."""
    monkeypatch.setenv("PTOLAB_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(sys, "excepthook", sys.excepthook)
    monkeypatch.setattr(sys, "unraisablehook", sys.unraisablehook)
    monkeypatch.setattr(threading, "excepthook", threading.excepthook)
    root = logging.getLogger()
    before = list(root.handlers)
    level = root.level
    yield
    for h in list(root.handlers):
        if h not in before:
            root.removeHandler(h)
            h.close()
    root.setLevel(level)


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_check_passes_on_the_square(capsys):
    code, out = run_cli(capsys, "check", SQUARE, "--all")
    body = json.loads(out)
    assert code == 0
    assert body["schema"] == "ptolab.check/1"
    assert body["passed"] is True
    assert [f["name"] for f in body["findings"]] == ["metric", "quasi", "ptolemy", "involution", "normal-form"]


def test_check_fails_on_the_four_cycle(capsys):
    code, out = run_cli(capsys, "check", C4, "--ptolemy")
    assert code == 1
    assert json.loads(out)["findings"][0]["details"]["worst_quadruple"] == ["v0", "v1", "v2", "v3"]


def test_text_report(capsys):
    code, out = run_cli(capsys, "check", SQUARE, "--format", "text")
    assert code == 0
    assert "Overall: PASS" in out
    assert "End of Report" in out


def test_bad_inputs_exit_with_usage_status(capsys, tmp_path):
    assert run_cli(capsys, "check", str(tmp_path / "missing.csv"))[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n0,1\n2,0\n")
    assert run_cli(capsys, "check", str(bad))[0] == 2


def test_text_format_is_check_only(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["examples", "path", "--format", "text"])
    assert exc.value.code == 2


def test_run_config_validation():
    with pytest.raises(PreconditionError):
        RunConfig(command="nope")
    with pytest.raises(PreconditionError):
        RunConfig(command="check", seed=-1)
    cfg = config_from_args(build_parser().parse_args(["cube", "--m", "3", "--threads", "2"]))
    assert cfg.param("m") == 3
    assert cfg.param("q", 0.8) == 0.8
    assert cfg.threads == 2
    assert cfg.inputs == []


def test_matrix_from_stdin(capsys, monkeypatch):
    data = b'{"labels": ["a", "b", "c"], "d": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}'
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))
    code, out = run_cli(capsys, "check", "-")
    assert code == 0
    assert json.loads(out)["n"] == 3


def test_reports_are_byte_identical_across_runs_and_threads(capsys, tmp_path):
    path = tmp_path / "random.json"
    assert run_cli(capsys, "examples", "random", "--n", "12", "--seed", "3", "--out", str(path))[0] == 0
    first = path.read_bytes()
    run_cli(capsys, "examples", "random", "--n", "12", "--seed", "3", "--out", str(path))
    assert path.read_bytes() == first

    _, one = run_cli(capsys, "check", str(path), "--all", "--threads", "1")
    _, four = run_cli(capsys, "check", str(path), "--all", "--threads", "4")
    assert one == four


def test_examples_csv_reads_back(capsys):
    code, out = run_cli(capsys, "examples", "glued", "--format", "csv")
    assert code == 0
    D = parse_matrix(out.encode())
    assert D.labels == ("y1", "y2", "y3", "y4")
    assert D.value("y1", "y3") == 1.0


def test_six_point_scan_with_pdf(capsys, tmp_path):
    pdf = tmp_path / "scan.pdf"
    code, out = run_cli(capsys, "examples", "six-point", "--scan", "3", "--pdf", str(pdf))
    body = json.loads(out)
    assert code == 0
    assert body["grid"] == [0.5, 1.25, 2.0]
    assert len(body["rows"]) == 27
    assert pdf.read_bytes()[:5] == b"%PDF-"


def test_metrize_squared_path(capsys, tmp_path):
    path = tmp_path / "path.json"
    run_cli(capsys, "examples", "path", "--n", "4", "--out", str(path))
    code, out = run_cli(capsys, "metrize", str(path), "--power", "2")
    body = json.loads(out)
    assert code == 0
    assert body["distortion"] == pytest.approx(4.0)
    assert body["witness_pair"] == ["0", "4"]


def test_metrize_frink_skips_large_constants(capsys, tmp_path):
    path = tmp_path / "path.json"
    run_cli(capsys, "examples", "path", "--n", "4", "--out", str(path))
    code, out = run_cli(capsys, "metrize", str(path), "--power", "3", "--frink")
    assert code == 0
    assert json.loads(out)["frink_ok"] is None


def test_distortion_curve_for_a_family(capsys, tmp_path):
    pdf = tmp_path / "curve.pdf"
    code, out = run_cli(capsys, "distortion-curve", "--family", "path", "--sizes", "4,8,16",
                        "--s-grid", "0.5,1,2", "--threshold", "1.05", "--pdf", str(pdf))
    body = json.loads(out)
    assert code == 0
    assert body["lower"] == 1.0 and body["upper"] == 2.0
    assert body["sizes"] == [5, 9, 17]
    assert pdf.exists()


def test_distortion_curve_needs_input(capsys):
    assert run_cli(capsys, "distortion-curve")[0] == 2


def test_hyperbolicity_of_the_four_cycle(capsys):
    code, out = run_cli(capsys, "hyperbolicity", C4, "--basepoint", "v0", "--basepoint2", "v2")
    body = json.loads(out)
    assert code == 0
    assert body["report"]["delta_global"] == 1.0
    assert body["basepoint"]["k_bound_ok"] is True
    assert body["basepoint"]["identity_defect"] <= 1e-12


def test_cube_short_diagonal(capsys):
    code, out = run_cli(capsys, "cube", "--m", "2")
    body = json.loads(out)
    assert code == 0
    assert body["n"] == 5
    assert body["qualifies"] is True


def test_cube_experiment_table(capsys):
    code, out = run_cli(capsys, "cube", "--experiment", "1,2", "--format", "csv")
    assert code in (0, 1)
    lines = out.strip().splitlines()
    assert lines[0].startswith("m,n,c,b,best_diagonal")
    assert lines[0].endswith("required_c,implied_c")
    assert len(lines) == 3


def test_embed(capsys):
    code, out = run_cli(capsys, "embed", "--points", "20", "-N", "64", "--quadruples", "50")
    body = json.loads(out)
    assert code == 0
    assert body["ptolemy"]["satisfied"] is True
    assert body["cross_ratio_defect"] < 1e-9
    assert body["stereographic_roundtrip_error"] < 1e-12
    assert len(body["pairs"]) == 20
    assert set(body["pairs"][0]) == {"i", "j", "l1", "image", "ratio"}


def test_embed_csv_is_a_sampled_pair_table(capsys):
    argv = ("embed", "--points", "12", "-N", "64", "--quadruples", "20", "--pairs", "7", "--format", "csv")
    code, out = run_cli(capsys, *argv)
    assert code == 0
    df = pd.read_csv(io.StringIO(out))
    assert list(df.columns) == ["i", "j", "l1", "image", "ratio"]
    assert len(df) == 7
    assert (df["l1"] > 0).all() and (df["image"] > 0).all()
    assert np.allclose(df["ratio"], df["image"] / np.sqrt(df["l1"]))
    assert run_cli(capsys, *argv) == (code, out)


def test_check_involution_centers(capsys):
    code, out = run_cli(capsys, "check", SQUARE, "--involution", "--involution-centers", "1")
    body = json.loads(out)
    assert code == 0
    assert body["findings"][0]["details"]["centers_checked"] == 1


def test_involute_and_snowflake(capsys):
    code, out = run_cli(capsys, "involute", SQUARE, "--at", "a")
    body = json.loads(out)
    assert code == 0
    assert body["matrix"]["labels"] == ["b", "c", "d"]
    assert body["is_metric"] is True

    code, out = run_cli(capsys, "snowflake", C4, "--q", "0.5")
    body = json.loads(out)
    assert code == 0
    assert body["is_metric"] is True
    assert body["ptolemaic"] is True


def test_mobius(capsys, tmp_path):
    scaled = tmp_path / "scaled.json"
    scaled.write_text(json.dumps({"labels": ["d", "c", "b", "a"],
                                  "d": [[0, 3, 4.242640687119285, 3], [3, 0, 3, 4.242640687119285],
                                        [4.242640687119285, 3, 0, 3], [3, 4.242640687119285, 3, 0]]}))
    assert run_cli(capsys, "mobius", SQUARE, str(scaled))[0] == 0
    assert run_cli(capsys, "mobius", SQUARE, C4)[0] == 2


def test_suite(capsys):
    code, out = run_cli(capsys, "suite", "bourdon-limit", "--count", "5", "--seed", "1")
    body = json.loads(out)
    assert code == 0
    assert body["result"]["count"] == 5
    assert body["passed"] is True
