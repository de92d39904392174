"""Regenerate the two published tables and diff them against golden copies."""
from __future__ import annotations

import csv
import json
from decimal import ROUND_DOWN, Decimal, localcontext
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from .closed_form import energy_rescaled
from .correlator import e_table
from .exact import ConstExpr, eval_const


def _golden_text(name: str, golden_dir: Optional[Path]) -> str:
    if golden_dir is not None:
        return (Path(golden_dir) / name).read_text()
    return resources.files("dysongas").joinpath("golden", name).read_text()


def load_figure1(golden_dir: Optional[Path] = None) -> dict[int, list[int]]:
    reader = csv.reader(_golden_text("figure1.csv", golden_dir).splitlines())
    next(reader)
    return {int(row[0]): [int(v) for v in row[1:]] for row in reader if row}


def load_mc_table(golden_dir: Optional[Path] = None) -> list[dict]:
    return json.loads(_golden_text("mc_table.json", golden_dir))["rows"]


def check_figure1(golden_dir: Optional[Path] = None) -> dict:
    golden = load_figure1(golden_dir)
    n_max = max(golden)
    eps_max = max(len(v) for v in golden.values())
    table = e_table(n_max, eps_max)
    mismatches = []
    for n, row in golden.items():
        for eps, expected in enumerate(row, start=1):
            got = table[n - 2][eps - 1]
            if got != expected:
                mismatches.append({"cell": f"N={n},eps={eps}", "expected": expected, "got": got})
    return {
        "rows": [{"n": n, "values": table[n - 2]} for n in sorted(golden)],
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def _printed_unit(s: str) -> Decimal:
    d = Decimal(s)
    return Decimal(1).scaleb(d.as_tuple().exponent)


def significant_digits(s: str) -> int:
    digits = s.lstrip("-").replace(".", "").lstrip("0")
    return len(digits)


def truncate_to(value: Decimal, printed: str) -> str:
    """``value`` cut (toward zero) to the decimal places of ``printed``."""
    with localcontext() as ctx:
        ctx.prec = 60
        return str(value.quantize(_printed_unit(printed), rounding=ROUND_DOWN))


def check_mc_table(golden_dir: Optional[Path] = None) -> dict:
    rows = []
    mismatches = []
    for g in load_mc_table(golden_dir):
        n = g["n"]
        exact = energy_rescaled(n)
        value = eval_const(exact, 30).value
        expected = Decimal(g["decimal"])
        rendered = truncate_to(value, g["decimal"])
        unit = _printed_unit(g["decimal"])
        row = {
            "n": n,
            "exact": exact.to_json(),
            "decimal": rendered,
            "golden_decimal": g["decimal"],
            "raw_gap_units": float(abs(value - expected) / unit),
        }
        if rendered != g["decimal"]:
            mismatches.append({"cell": f"N={n},decimal", "expected": g["decimal"], "got": rendered})
        if "published_decimal" in g:
            pub = g["published_decimal"]
            row["published_decimal"] = pub
            row["published_gap_units"] = float(abs(value - Decimal(pub)) / _printed_unit(pub))
        if "exact" in g:
            if ConstExpr.from_json(g["exact"]) != exact:
                mismatches.append({"cell": f"N={n},exact", "expected": g["exact"], "got": exact.to_json()})
        for key, attr in (("gamma", "qgamma"), ("ln2", "qln2"), ("lnN", "qlnN")):
            if key in g and Fraction(g[key]) != getattr(exact, attr):
                mismatches.append(
                    {"cell": f"N={n},{key}", "expected": g[key], "got": str(getattr(exact, attr))}
                )
        if "mc_mean" in g:
            err = Decimal(g["mc_error"])
            row["published_mc"] = {"mean": g["mc_mean"], "error": g["mc_error"]}
            row["published_mc_z"] = float((Decimal(g["mc_mean"]) - value) / err)
        rows.append(row)
    return {"rows": rows, "mismatches": mismatches, "ok": not mismatches}


def paper_tables(golden_dir: Optional[Path] = None) -> dict:
    fig = check_figure1(golden_dir)
    mc = check_mc_table(golden_dir)
    return {"figure1": fig, "mc_table": mc, "ok": fig["ok"] and mc["ok"]}
