"""Command-line interface: outputs, formats and exit codes."""
import csv
import io
import json
import subprocess
import sys

import pytest

from nctorus.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_omega1_taylor():
    code, text = run("functions", "omega1", "taylor", "--order", "5")
    assert code == 0
    assert text.strip() == "[-1/2, 1/4, -1/6, 1/16, -1/45, 1/160]"


def test_two_variable_taylor_csv():
    code, text = run("functions", "omega2", "taylor", "--order", "1")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0] == ["i", "j", "coeff"]
    assert ["0", "0", "1/4"] in rows and ["1", "0", "-3/8"] in rows and ["0", "1", "1/24"] in rows


def test_k_eval_at_zero():
    code, text = run("functions", "k", "eval", "--s", "0")
    assert code == 0 and float(text) == -1.0


def test_eval_two_variables():
    code, text = run("functions", "H", "eval", "--s", "0", "--t", "0")
    assert code == 0 and float(text) == pytest.approx(0.5)


def test_unknown_function_is_usage_error(capsys):
    code, _ = run("functions", "nosuch", "eval", "--s", "1")
    assert code == 2
    assert "unknown function" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ("curvature", "--form", "weird"),
        ("functions", "k", "eval"),
        ("projection",),
        ("verify", "--suite", "identities", "--dims", "x..y"),
        ("functions", "k", "plot-data", "--min", "1", "--max", "0", "--step", "0.1"),
        (),
    ],
)
def test_malformed_flags(argv):
    assert run(*argv)[0] == 2


def test_plot_data_one_variable():
    code, text = run("functions", "f2", "plot-data", "--min", "-1", "--max", "1", "--step", "0.5")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0] == ["s", "value"] and len(rows) == 6
    assert float(rows[3][1]) == 0.0


def test_plot_data_surface():
    code, text = run("functions", "omega2", "plot-data", "--min", "-1", "--max", "1", "--step", "1")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0] == ["s", "t", "value"] and len(rows) == 10


def test_curvature_outputs():
    code, text = run("curvature")
    assert code == 0 and text.count("\\[") == 3
    code, text = run("curvature", "--form", "raw", "--format", "json", "--normalize", "2pi2")
    obj = json.loads(text)
    assert code == 0 and obj["form"] == "raw" and obj["prefactor"] == "2pi2"
    code, text = run("curvature", "--format", "json")
    obj = json.loads(text)
    assert obj["pi2"] is True and obj["constant"]["inverse"] == "2*pi^2"


def test_curvature_output_is_deterministic():
    assert run("curvature", "--format", "json") == run("curvature", "--format", "json")


def test_projection_json():
    code, text = run("projection", "--s", "1.0")
    obj = json.loads(text)
    assert code == 0
    assert obj["normalization"] == "2"
    assert obj["printed_matches"] == [True, True, False, False]
    assert obj["statement_scale"][1] == pytest.approx(obj["printed_f"][1])


def test_gradient_outputs():
    code, text = run("gradient", "--format", "json")
    obj = json.loads(text)
    assert code == 0
    assert obj["omega1_taylor"] == ["-1/2", "1/4", "-1/6", "1/16", "-1/45", "1/160"]
    assert obj["omega2_taylor"]["0,0"] == "1/4"
    code, text = run("gradient", "--omega2", "corrected", "--format", "json")
    assert json.loads(text)["omega2_taylor"]["1,0"] == "-1/3"


def test_verify_pass_and_report_schema():
    code, text = run("verify", "--suite", "identities", "--trials", "3", "--seed", "7", "--dims", "2..5")
    report = json.loads(text)
    assert code == 0 and report["verdict"] == "pass"
    assert {"suite", "seed", "trials", "dims", "max_error", "verdict"} <= set(report)


def test_verify_failure_exit_code():
    code, text = run("verify", "--suite", "gradient", "--trials", "5", "--dims", "3..5", "--seed", "0")
    assert code == 1 and json.loads(text)["verdict"] == "fail"
    code, _ = run("verify", "--suite", "gradient", "--trials", "5", "--dims", "3..5", "--omega2", "corrected")
    assert code == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nctorus", "functions", "k", "eval", "--s", "0"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and float(proc.stdout) == -1.0
