import csv
import io
import json
from importlib import resources

import pytest

from dysongas.cli import EXIT_CHECK, EXIT_CONVERGENCE, EXIT_OK, EXIT_USAGE, run
from dysongas.exact import ConstExpr
from dysongas.montecarlo import MCEstimate

FIGURE1 = [
    [4, 24, 192, 1920, 23040],
    [15, 114, 1152, 14400, 213120],
    [36, 332, 4056, 60720, 1064640],
    [70, 760, 10890, 189720, 3838200],
    [120, 1500, 24660, 489744, 11218320],
    [189, 2674, 49602, 1105608, 28268520],
]


def call(capsys, *argv):
    status = run(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def call_json(capsys, *argv):
    status, out, _ = call(capsys, *argv, "--format", "json")
    return status, json.loads(out)


@pytest.fixture
def golden(tmp_path):
    src = resources.files("dysongas").joinpath("golden")
    for name in ("figure1.csv", "mc_table.json"):
        (tmp_path / name).write_text(src.joinpath(name).read_text())
    return tmp_path


def test_e_table_csv_figure1(capsys):
    status, out, _ = call(capsys, "e-table", "--n-max", "7", "--eps-max", "5", "--format", "csv")
    assert status == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["N", "eps=1", "eps=2", "eps=3", "eps=4", "eps=5"]
    assert [[int(v) for v in r[1:]] for r in rows[1:]] == FIGURE1
    assert [int(r[0]) for r in rows[1:]] == list(range(2, 8))


def test_e_table_single_eps(capsys):
    status, doc = call_json(capsys, "e-table", "--n-max", "5", "--eps", "0")
    assert status == EXIT_OK
    assert [r["values"] for r in doc["rows"]] == [[1], [3], [6], [10]]


def test_energy_rescaled_five(capsys):
    status, out, _ = call(capsys, "energy", "--n", "5", "--digits", "19", "--rescaled")
    assert status == EXIT_OK
    assert "0.249831865576454075" in out
    assert "5831/384" in out


def test_energy_json_exact_fields(capsys):
    status, doc = call_json(capsys, "energy", "--n", "3")
    assert status == EXIT_OK
    assert ConstExpr.from_json(doc["exact"]) == ConstExpr("29/8", -3, 3)
    assert doc["digits"] == 20 and doc["decimal"].startswith("3.97")


def test_exact_part_independent_of_digits(capsys):
    _, a = call_json(capsys, "energy", "--n", "12", "--digits", "5", "--rescaled")
    _, b = call_json(capsys, "energy", "--n", "12", "--digits", "40", "--rescaled")
    assert a["exact"] == b["exact"]
    assert a["decimal"] != b["decimal"]
    assert b["decimal"].startswith(a["decimal"][:5])


def test_energy_table(capsys):
    status, out, _ = call(capsys, "energy-table", "--n-max", "6", "--format", "csv")
    assert status == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert [r[0] for r in rows] == ["N", "2", "3", "4", "5", "6"]


def test_verify_recursions(capsys):
    status, doc = call_json(capsys, "verify-recursions", "--n-max", "25")
    assert status == EXIT_OK
    assert doc["ok"] and not doc["failures"]
    assert all(r["residual"] == "0" for r in doc["e_residuals"])
    assert len(doc["e_residuals"]) == 24 * 7


def test_hyp3f2_check(capsys):
    status, doc = call_json(capsys, "hyp3f2-check", "--n-max", "6")
    assert status == EXIT_OK and doc["ok"]
    assert [r["n"] for r in doc["rows"]] == [2, 3, 4, 5, 6]


def test_asymptotics_csv(capsys):
    status, out, _ = call(capsys, "asymptotics", "--n", "50", "--n", "100", "--format", "csv")
    assert status == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert float(rows[1][3]) < 1e-4 and float(rows[2][3]) < float(rows[1][3])


def test_mc_estimate_deterministic(capsys):
    args = ("mc-estimate", "--n", "3", "--sweeps", "10000", "--chains", "2", "--seed", "7")
    status, a = call_json(capsys, *args)
    _, b = call_json(capsys, *args)
    assert status == EXIT_OK
    assert a == b
    est = MCEstimate.from_json(a["estimate"])
    assert est.to_json() == a["estimate"]


def test_paper_tables_clean(capsys, golden):
    status, doc = call_json(capsys, "paper-tables", "--golden", str(golden))
    assert status == EXIT_OK and doc["ok"]
    assert call(capsys, "paper-tables")[0] == EXIT_OK


@pytest.mark.parametrize("row,col", [(0, 1), (3, 3), (5, 5)])
def test_paper_tables_perturbed_figure_cell(capsys, golden, row, col):
    path = golden / "figure1.csv"
    lines = path.read_text().splitlines()
    cells = lines[row + 1].split(",")
    cells[col] = str(int(cells[col]) + 1)
    lines[row + 1] = ",".join(cells)
    path.write_text("\n".join(lines) + "\n")
    status, out, _ = call(capsys, "paper-tables", "--golden", str(golden))
    assert status == EXIT_CHECK
    assert f"N={row + 2},eps={col}" in out


@pytest.mark.parametrize("index", range(5))
def test_paper_tables_perturbed_decimal(capsys, golden, index):
    path = golden / "mc_table.json"
    doc = json.loads(path.read_text())
    row = doc["rows"][index]
    s = row["decimal"]
    last = int(s[-1])
    row["decimal"] = s[:-1] + str(last + 1 if last < 9 else last - 1)
    path.write_text(json.dumps(doc))
    status, out, _ = call(capsys, "paper-tables", "--golden", str(golden))
    assert status == EXIT_CHECK
    assert f"N={row['n']},decimal" in out


def test_paper_tables_perturbed_coefficient(capsys, golden):
    path = golden / "mc_table.json"
    doc = json.loads(path.read_text())
    row = next(r for r in doc["rows"] if "gamma" in r)
    row["gamma"] = str(int(row["gamma"]) + 1)
    path.write_text(json.dumps(doc))
    status, out, _ = call(capsys, "paper-tables", "--golden", str(golden))
    assert status == EXIT_CHECK
    assert f"N={row['n']},gamma" in out


def test_json_round_trip_all_reports(capsys):
    for argv in (
        ("e-table",),
        ("energy", "--n", "7"),
        ("energy-table", "--n-max", "4"),
        ("asymptotics", "--n", "30"),
        ("paper-tables",),
    ):
        _, out, _ = call(capsys, *argv, "--format", "json")
        doc = json.loads(out)
        assert json.loads(json.dumps(doc, indent=2)) == doc
        assert json.dumps(doc, indent=2) == out.rstrip("\n")


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    assert run(["energy", "--n", "4", "--format", "json", "--output", str(target)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["n"] == 4


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["energy"],
        ["energy", "--n", "1"],
        ["energy", "--n", "5", "--digits", "51"],
        ["energy", "--n", "5", "--format", "csv"],
        ["e-table", "--n-max", "1"],
        ["asymptotics", "--truncate-power", "-5/2"],
        ["mc-estimate", "--n", "5", "--sweeps", "10"],
        ["verify-recursions", "--n-max", "3"],
        ["paper-tables", "--format", "csv"],
        ["paper-tables", "--golden", "/nonexistent/dir"],
    ],
)
def test_usage_errors(capsys, argv):
    assert call(capsys, *argv)[0] == EXIT_USAGE


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_CONVERGENCE}) == 4
