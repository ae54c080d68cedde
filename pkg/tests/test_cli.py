import csv
import io
import json

import pytest

from conftest import EXAMPLE_QUINTIC, PURE_CUBIC, QUINTIC_CURVE
from frobdiv.classpoly import default_cache
from frobdiv.cli import gauss_row, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def json_rows(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def summary(err):
    lines = [json.loads(l) for l in err.splitlines() if l.startswith("{")]
    return lines[-1]["summary"]


def test_frob_single_prime(capsys):
    code, out, err = run(capsys, "frob", "--curve", QUINTIC_CURVE, "--q", "5", "--p", "1259")
    assert code == 0
    (row,) = json_rows(out)
    assert (row["delta"], row["bp"]) == (-31, 10)
    assert row["matrix"] == [[27, 10], [-80, 17]]
    assert row["matrix_mod_q"] == [[2, 0], [0, 2]] and row["agree"]


def test_frob_sweep_agrees(capsys):
    code, out, err = run(capsys, "frob", "--curve", QUINTIC_CURVE, "--q", "5", "--pmax", "2000")
    rows = json_rows(out)
    assert code == 0 and len(rows) > 290 and all(r["agree"] for r in rows)
    assert summary(err)["mismatches"] == 0


def test_frob_csv(capsys, tmp_path):
    path = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "frob", "--curve", QUINTIC_CURVE, "--q", "3", "--pmax", "50",
                       "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert rows[0]["p"] == "5" and json.loads(rows[0]["matrix"])
    assert all(r["agree"] == "True" for r in rows)


@pytest.mark.parametrize("argv", [
    ["frob", "--curve", "1,2,3", "--q", "5", "--p", "11"],
    ["frob", "--curve", "0,0", "--q", "5", "--p", "11"],
    ["frob", "--q", "5", "--p", "11"],
    ["frob", "--curve", QUINTIC_CURVE, "--q", "5", "--p", "11", "--pmax", "20"],
    ["density", "--curve", QUINTIC_CURVE, "--q", "11", "--pmax", "100"],
    ["density", "--curve", QUINTIC_CURVE, "--q", "5", "--pmax", "2000000"],
    ["hilbert", "--disc", "-6"],
    ["nosuch"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_quintic_single_prime_roots(capsys):
    code, out, _ = run(capsys, "quintic", "--poly", EXAMPLE_QUINTIC, "--p", "1259", "--show-roots")
    (row,) = json_rows(out)
    assert code == 0 and row["predicted"] == row["observed"] == "(1)^5"
    assert {(-r) % 1259 for r in row["roots"]} == {734, 322, 26, 851, 585}


def test_quintic_sweep(capsys):
    code, out, err = run(capsys, "quintic", "--poly", EXAMPLE_QUINTIC, "--pmax", "3000")
    rows = json_rows(out)
    assert code == 0 and all(r["agree"] for r in rows)
    s = summary(err)
    assert s["mismatches"] == 0 and s["kind"] == "brioschi" and s["t"] == "-9/6400"


def test_quintic_with_given_curve(capsys):
    code, out, err = run(capsys, "quintic", "--poly", EXAMPLE_QUINTIC, "--curve", QUINTIC_CURVE,
                         "--pmax", "2000")
    assert code == 0 and summary(err)["curve"] == QUINTIC_CURVE


def test_quintic_inapplicable(capsys):
    code, _, err = run(capsys, "quintic", "--poly", "0,0,5,0,1", "--p", "11")
    assert code == 2 and "sqrt(5D) not rational" in err


def test_density(capsys):
    code, out, err = run(capsys, "density", "--curve", PURE_CUBIC, "--q", "2", "--pmax", "10000")
    rows = json_rows(out)
    assert code == 0 and len(rows) == 3
    assert all(abs(r["rel_dev"]) < 0.15 for r in rows)
    assert summary(err)["group_order"] == 6


def test_density_tiny_bound(capsys):
    code, out, err = run(capsys, "density", "--curve", QUINTIC_CURVE, "--q", "5", "--pmax", "10")
    rows = json_rows(out)
    assert code == 0 and len(rows) == 24 and sum(r["count"] for r in rows) == 1


def test_cm_demo(capsys):
    code, out, err = run(capsys, "cm-demo", "--pmax", "3000")
    rows = json_rows(out)
    assert code == 0 and summary(err)["mismatches"] == 0
    assert rows[0]["p"] == 5
    assert {r["p"] for r in rows if r["x3_minus_2_splits"]} >= {31, 43, 109}


def test_gauss_row():
    row = gauss_row(31)
    assert row["x3_minus_2_splits"] and row["x2_27y2"] and row["frobenius_prediction"]
    assert not gauss_row(7)["x3_minus_2_splits"]


def test_hilbert(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FROBDIV_CACHE", str(tmp_path))
    code, out, _ = run(capsys, "hilbert", "--disc", "-23")
    (row,) = json_rows(out)
    assert code == 0 and row["degree"] == 3
    assert row["coeffs"] == ["1", "3491750", "-5151296875", "12771880859375"]


def test_main_restores_default_cache(capsys):
    before = default_cache()
    run(capsys, "hilbert", "--disc", "-7")
    assert default_cache() is before
