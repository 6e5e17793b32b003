import csv
import json

import pytest

from liftlab.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exact(capsys):
    code, out, err = invoke(capsys, "exact", "--n", "3", "--l", "2", "--method", "both")
    assert code == 0
    doc = json.loads(out)
    assert doc["payload"]["probability"]["fraction"] == "13/18"
    assert err.startswith("13/18 = 0.7222")


def test_barbell_exhaustive(capsys):
    code, out, _ = invoke(capsys, "barbell", "--k", "3", "--n", "2", "--exhaustive")
    assert code == 0 and json.loads(out)["payload"]["assignments"] == 8192


def test_bad_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["transitive", "--n", "3", "--l", "2", "--bogus"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_bad_family_exits_two(capsys):
    code, _, err = invoke(capsys, "connectivity", "--family", "blob:3", "--n", "2")
    assert code == 2 and "unknown graph family" in err


def test_csv_output(capsys, tmp_path):
    path = tmp_path / "rows.csv"
    code, _, _ = invoke(
        capsys, "connectivity", "--family", "cycle:3", "--ns", "2,3", "--trials", "2000", "--csv", str(path)
    )
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert [r["n"] for r in rows] == ["2", "3"]
    assert set(rows[0]) == {"n", "p_hat", "ci_low", "ci_high", "formula_value"}


def test_failed_check_exits_one(capsys):
    code, out, err = invoke(
        capsys, "regular", "--d", "2", "--n", "8", "--trials", "500", "--expansion-trials", "200"
    )
    assert code == 1 and "check failed" in err
    assert json.loads(out)["payload"]["checks"]["sym_or_alt_expansion_at_least_one"] is False


def test_seed_controls_output(capsys):
    args = ("transitive", "--n", "5", "--l", "2", "--trials", "3000")
    a = json.loads(invoke(capsys, *args, "--seed", "1")[1])
    b = json.loads(invoke(capsys, *args, "--seed", "1", "--workers", "2")[1])
    c = json.loads(invoke(capsys, *args, "--seed", "2")[1])
    assert a["payload"] == b["payload"] != c["payload"]
