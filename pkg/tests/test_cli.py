import io
import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from qcsums.cli import run

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    doc = json.loads(out)
    assert set(doc) == {"command", "input", "value", "attained", "certificate", "citations"}
    return doc


def test_maxsum_six_vertex():
    doc = ok("maxsum", "-i", str(DATA / "six_vertex.txt"))
    assert doc["value"] == 3 and doc["attained"] is False
    assert doc["certificate"]["witness_value"] <= 3 + 1e-3
    assert doc["citations"]


def test_minsum_mutual_star():
    doc = ok("minsum", "-i", str(DATA / "mutual_star.txt"))
    assert doc["value"] == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert doc["attained"] is True
    assert doc["certificate"]["blocks"] == [["1", "2"], ["3"]]


def test_girth_and_components():
    assert ok("girth", "-i", str(DATA / "six_vertex.txt"))["value"] == 3
    doc = ok("components", "-i", str(DATA / "mutual_star.txt"))
    assert doc["value"] == 1 and [sorted(c) for c in doc["certificate"]["final"]] == [["1", "2", "3"]]


def test_girth_acyclic(tmp_path):
    f = tmp_path / "path.txt"
    f.write_text("a b\nb c\n")
    assert ok("girth", "-i", str(f))["value"] == "acyclic"


def test_gp_weighted_json():
    doc = ok("gp", "-i", str(DATA / "mavlo_x2.json"), "--pin", "A=1")
    assert doc["value"] == pytest.approx(15.0, rel=1e-12)
    assert doc["certificate"]["minimizer"]["A"] == pytest.approx(1.0)


def test_funceq_commands():
    assert ok("funceq", "F", "--x", "2022")["value"] == pytest.approx(18.99798, abs=1e-5)
    assert ok("funceq", "f", "--x", str(math.e**2))["value"] == pytest.approx(2 * math.e)
    doc = ok("funceq", "shallit", "--n", "6")
    assert doc["value"] <= 17
    doc = ok("funceq", "anstar", "--n", "3", "--bruteforce")
    assert doc["certificate"]["bruteforce"] == pytest.approx(doc["value"], abs=1e-6)


def test_shapiro_and_mavlo():
    assert ok("shapiro", "--n", "7", "--k", "2", "--p", "inf")["value"] == 4
    assert ok("shapiro", "--n", "5", "--k", "3", "--p", "-1")["value"] == 5
    doc = ok("shapiro", "--n", "3", "--k", "2", "--starts", "4")
    assert doc["value"] == pytest.approx(3.0, abs=1e-9)
    doc = ok("mavlo", "--samples", "500", "--x", "2")
    assert doc["certificate"]["holds"] is True and doc["value"] == 1.0


def test_extremal_ks_game():
    doc = ok("extremal", "--n", "40", "--threshold", "9.8")
    assert doc["value"] == pytest.approx(9.865303, abs=1e-6)
    assert doc["certificate"]["below_threshold_possible"] is False
    assert ok("ks", "--r", "41")["value"] > 0
    assert ok("ks", "--r", "41", "--sharp")["value"] > 0
    assert ok("game", "--n", "40", "--k", "12")["value"] == 4


def test_fifteen_significant_digits():
    doc = ok("minsum", "-i", str(DATA / "mutual_star.txt"))
    assert repr(doc["value"]) == repr(float(f"{2 * math.sqrt(2):.15g}"))


def test_deterministic_output():
    argv = ("shapiro", "--n", "6", "--k", "3", "--starts", "8", "--seed", "5")
    assert call(*argv)[1] == call(*argv)[1]
    argv = ("mavlo", "--samples", "300", "--seed", "2")
    assert call(*argv)[1] == call(*argv)[1]


def test_usage_errors_exit_1():
    assert call("nosuch")[0] == 1
    assert call("girth")[0] == 1
    assert call("shapiro", "--n", "3", "--k", "2", "--bogus")[0] == 1
    assert call("funceq", "F")[0] == 1


def test_validation_errors_exit_1(tmp_path):
    assert call("girth", "-i", str(tmp_path / "missing.txt"))[0] == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("a b c d\n")
    code, _, err = call("girth", "-i", str(bad))
    assert code == 1 and json.loads(err)["error"] == "validation"
    assert call("shapiro", "--n", "3", "--k", "5")[0] == 1
    assert call("maxsum", "-i", str(DATA / "six_vertex.txt"), "--epsilon", "0")[0] == 1


def test_capacity_exit_2(tmp_path):
    f = tmp_path / "c9.txt"
    f.write_text("".join(f"{i} {i % 9 + 1}\n" for i in range(1, 10)))
    code, _, err = call("minsum", "-i", str(f))
    assert code == 2 and json.loads(err)["error"] == "capacity"
    assert call("funceq", "anstar", "--n", "6", "--bruteforce")[0] == 2
    assert call("funceq", "F", "--x", "5e5", "--csv", str(tmp_path / "F.csv"))[0] == 2


def test_csv_output(tmp_path):
    path = tmp_path / "F.csv"
    doc = ok("funceq", "F", "--x", "50", "--csv", str(path))
    assert path.read_text().startswith("x,F")
    assert doc["certificate"]["table_value"] == pytest.approx(doc["value"], abs=1e-6)


def test_console_script_entry_point():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "qcsums.cli", "game", "--n", "6", "--k", "2"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 3
