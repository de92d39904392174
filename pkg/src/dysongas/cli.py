"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 convergence failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from . import asymptotics, closed_form, correlator, montecarlo, recursion, tables
from .exact import MAX_DIGITS, PrecisionError, eval_const

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK = 2
EXIT_CONVERGENCE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")

    p = _Parser(prog="dysongas", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("e-table", parents=[common], help="table of e_N(eps)")
    s.add_argument("--n-max", type=int, default=7)
    s.add_argument("--eps-max", type=int, default=5)
    s.add_argument("--eps", type=int, help="single column instead of 1..eps-max")

    s = sub.add_parser("energy", parents=[common], help="exact mean energy at one N")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--digits", type=int, default=20)
    s.add_argument("--rescaled", action="store_true")

    s = sub.add_parser("energy-table", parents=[common], help="exact mean energies for N = 2..n-max")
    s.add_argument("--n-max", type=int, default=10)
    s.add_argument("--digits", type=int, default=20)
    s.add_argument("--rescaled", action="store_true")

    s = sub.add_parser("verify-recursions", parents=[common], help="check both recursions exactly")
    s.add_argument("--n-max", type=int, default=25)
    s.add_argument("--eps-max", type=int, default=6)

    s = sub.add_parser("hyp3f2-check", parents=[common], help="check the 3F2 form of the pair sum")
    s.add_argument("--n-max", type=int, default=50)
    s.add_argument("--n", type=int)
    s.add_argument("--digits", type=int, default=25)

    s = sub.add_parser("asymptotics", parents=[common], help="large-N expansion vs exact energy")
    s.add_argument("--n", type=int, action="append", help="repeatable; default sweep 20..100")
    s.add_argument("--truncate-power", type=Fraction, default=Fraction(-2))
    s.add_argument("--digits", type=int, default=20)

    s = sub.add_parser("mc-estimate", parents=[common], help="Metropolis estimate of the rescaled energy")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--sweeps", type=int, default=montecarlo.DEFAULT_SWEEPS)
    s.add_argument("--chains", type=int, default=montecarlo.DEFAULT_CHAINS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--burn-in", type=int)
    s.add_argument("--digits", type=int, default=20)

    s = sub.add_parser("paper-tables", parents=[common], help="regenerate and diff the published tables")
    s.add_argument("--golden", type=Path, help="directory with figure1.csv and mc_table.json")
    return p


def _validate(args) -> None:
    def need(cond, msg):
        if not cond:
            raise UsageError(msg)

    if hasattr(args, "digits"):
        need(1 <= args.digits <= MAX_DIGITS, f"--digits must be in 1..{MAX_DIGITS}")
    if args.format == "csv":
        need(
            args.command in ("e-table", "energy-table", "asymptotics", "hyp3f2-check", "verify-recursions"),
            f"csv output is not available for {args.command}",
        )
    cmd = args.command
    if cmd == "e-table":
        need(args.n_max >= 2, "--n-max must be >= 2")
        need(args.eps_max >= 0, "--eps-max must be >= 0")
        need(args.eps is None or args.eps >= 0, "--eps must be >= 0")
    elif cmd in ("energy", "mc-estimate"):
        need(args.n >= 2, "--n must be >= 2")
    elif cmd == "energy-table":
        need(args.n_max >= 2, "--n-max must be >= 2")
    elif cmd == "verify-recursions":
        need(args.n_max >= 5, "--n-max must be >= 5")
        need(args.eps_max >= 0, "--eps-max must be >= 0")
    elif cmd == "hyp3f2-check":
        need(args.n_max >= 2, "--n-max must be >= 2")
        need(args.n is None or args.n >= 2, "--n must be >= 2")
    elif cmd == "asymptotics":
        need(args.truncate_power in asymptotics.POWERS, f"--truncate-power must be one of "
             f"{', '.join(str(p) for p in asymptotics.POWERS)}")
        need(all(n >= 2 for n in (args.n or [])), "--n must be >= 2")
    if cmd == "mc-estimate":
        need(args.sweeps >= 10_000, "--sweeps must be >= 10000")
        need(args.chains >= 1, "--chains must be >= 1")
        need(args.burn_in is None or args.burn_in >= 0, "--burn-in must be >= 0")


# --------------------------------------------------------------------------
# commands: each returns (status, report dict, csv rows or None, human text)
# --------------------------------------------------------------------------


def _cmd_e_table(args):
    if args.eps is not None:
        eps_values = [args.eps]
        rows = [[n, correlator.e_formula(correlator.CorrelatorQuery(n, args.eps))]
                for n in range(2, args.n_max + 1)]
    else:
        eps_values = list(range(1, args.eps_max + 1))
        table = correlator.e_table(args.n_max, args.eps_max)
        rows = [[n] + table[n - 2] for n in range(2, args.n_max + 1)]
    header = ["N"] + [f"eps={e}" for e in eps_values]
    report = {"n_max": args.n_max, "eps": eps_values,
              "rows": [{"n": r[0], "values": r[1:]} for r in rows]}
    width = max([len(str(v)) for r in rows for v in r] + [len(h) for h in header]) + 2
    text = "".join(h.rjust(width) for h in header) + "\n"
    text += "\n".join("".join(str(v).rjust(width) for v in r) for r in rows)
    return EXIT_OK, report, [header] + rows, text


def _energy_entry(n, digits, rescaled):
    exact = closed_form.energy_rescaled(n) if rescaled else closed_form.energy_exact(n)
    value = eval_const(exact, digits)
    return {"n": n, "rescaled": rescaled, "exact": exact.to_json(), "decimal": value.render(),
            "digits": digits}, exact, value


def _cmd_energy(args):
    entry, exact, value = _energy_entry(args.n, args.digits, args.rescaled)
    label = "E~" if args.rescaled else "E"
    return EXIT_OK, entry, None, f"{label}_{args.n}(1) = {exact}\n  = {value.render()}"


def _cmd_energy_table(args):
    entries = []
    lines = []
    for n in range(2, args.n_max + 1):
        entry, exact, value = _energy_entry(n, args.digits, args.rescaled)
        entries.append(entry)
        lines.append(f"N={n:<4d} {value.render():>32s}   {exact}")
    rows = [["N", "decimal"]] + [[e["n"], e["decimal"]] for e in entries]
    return EXIT_OK, {"rescaled": args.rescaled, "rows": entries}, rows, "\n".join(lines)


def _cmd_verify_recursions(args):
    failures = []
    e_rows = []
    for eps in range(args.eps_max + 1):
        seq = {n: correlator.e_formula(correlator.CorrelatorQuery(n, eps)) for n in range(2, args.n_max + 4)}
        for n in range(2, args.n_max + 1):
            r = recursion.e_recursion_residual(n, eps, [seq[n + i] for i in range(4)])
            e_rows.append({"n": n, "eps": eps, "residual": str(r)})
            if r != 0:
                failures.append(f"e-recursion N={n} eps={eps}: residual {r}")
    energies = {n: closed_form.energy_exact(n) for n in range(2, args.n_max + 4)}
    E_rows = []
    for n in range(2, args.n_max + 1):
        r = recursion.energy_recursion_residual(n, [energies[n + i] for i in range(4)])
        E_rows.append({"n": n, "residual": str(r)})
        if not r.is_zero():
            failures.append(f"E-recursion N={n}: residual {r}")
    forward = recursion.solve_energy_forward(args.n_max)
    for n, value in forward.items():
        if value != energies[n]:
            failures.append(f"forward solve N={n}: {value} != closed form {energies[n]}")
    eps_checks = []
    for n in range(2, args.n_max + 1):
        chk = recursion.epsilon_expansion_check(n)
        eps_checks.append({"n": n, "ok": chk["ok"]})
        if not chk["ok"]:
            failures.append(f"eps-expansion N={n}: {chk}")
    report = {"n_max": args.n_max, "eps_max": args.eps_max, "e_residuals": e_rows,
              "energy_residuals": E_rows, "epsilon_expansion": eps_checks,
              "failures": failures, "ok": not failures}
    rows = [["kind", "N", "eps", "residual"]]
    rows += [["e", r["n"], r["eps"], r["residual"]] for r in e_rows]
    rows += [["E", r["n"], "", r["residual"]] for r in E_rows]
    n_checked = len(e_rows) + len(E_rows)
    text = (f"checked {n_checked} recursion windows (N = 2..{args.n_max}, eps = 0..{args.eps_max}), "
            f"forward solve and eps-expansion: " + ("all residuals zero" if not failures else "FAILED"))
    if failures:
        text += "\n" + "\n".join(failures)
    return (EXIT_OK if not failures else EXIT_CHECK), report, rows, text


def _cmd_hyp3f2(args):
    ns = [args.n] if args.n is not None else list(range(2, args.n_max + 1))
    tol = Decimal(10) ** -(args.digits - 2)
    rows = []
    failures = []
    for n in ns:
        res = closed_form.hyp3f2_identity_residual(n, args.digits)
        f = closed_form.hyp3f2(closed_form.Hyp3F2Query(n, args.digits))
        ok = abs(res.value) < tol
        rows.append({"n": n, "hyp3f2": f.render(), "residual": f"{res.value:.3E}", "ok": ok})
        if not ok:
            failures.append(n)
    report = {"digits": args.digits, "tolerance": str(tol), "rows": rows, "ok": not failures}
    text = "\n".join(f"N={r['n']:<4d} 3F2={r['hyp3f2']}  residual={r['residual']}" for r in rows)
    csv_rows = [["N", "hyp3f2", "residual"]] + [[r["n"], r["hyp3f2"], r["residual"]] for r in rows]
    return (EXIT_OK if not failures else EXIT_CHECK), report, csv_rows, text


def _cmd_asymptotics(args):
    ns = args.n or [20, 30, 40, 50, 60, 80, 100]
    rows = []
    for n in ns:
        approx = asymptotics.energy_asymptotic(n, args.truncate_power, args.digits)
        exact = eval_const(closed_form.energy_exact(n), args.digits)
        err = asymptotics.asymptotic_error(n, args.truncate_power)
        rows.append({"n": n, "asymptotic": approx.render(), "exact": exact.render(), "abs_error": f"{err:.6E}"})
    report = {"truncate_power": str(args.truncate_power), "rows": rows}
    csv_rows = [["N", "asymptotic", "exact", "abs_error"]] + [
        [r["n"], r["asymptotic"], r["exact"], r["abs_error"]] for r in rows
    ]
    text = "\n".join(f"N={r['n']:<5d} asym={r['asymptotic']:>28s} exact={r['exact']:>28s} "
                     f"err={r['abs_error']}" for r in rows)
    return EXIT_OK, report, csv_rows, text


def _cmd_mc(args):
    est = montecarlo.estimate_energy(args.n, args.sweeps, args.chains, args.seed, args.burn_in)
    exact = eval_const(closed_form.energy_rescaled(args.n), args.digits)
    z = (est.mean - float(exact.value)) / est.stderr
    report = {"estimate": est.to_json(), "exact_rescaled": exact.render(), "z_score": z,
              "backend": montecarlo.BACKEND}
    text = (f"N={args.n}: MC {est.mean:.6f} +/- {est.stderr:.6f} "
            f"(acceptance {est.acceptance_rate:.3f}, {est.n_chains} chains x {est.n_sweeps} sweeps)\n"
            f"exact {exact.render()}  z = {z:+.2f}")
    if not est.mixing_ok:
        text += "\nmixing failure: chains disagree beyond 6 sigma"
    return (EXIT_OK if est.mixing_ok else EXIT_CHECK), report, None, text


def _cmd_paper_tables(args):
    report = tables.paper_tables(args.golden)
    lines = ["e_N(eps) table: " + ("ok" if report["figure1"]["ok"] else "MISMATCH")]
    for row in report["figure1"]["rows"]:
        lines.append(f"  N={row['n']}: " + " ".join(str(v) for v in row["values"]))
    lines.append("Monte-Carlo table (exact column): " + ("ok" if report["mc_table"]["ok"] else "MISMATCH"))
    for row in report["mc_table"]["rows"]:
        lines.append(f"  N={row['n']}: {row['decimal']}")
        if "published_decimal" in row:
            lines.append(f"    printed as {row['published_decimal']} "
                         f"({row['published_gap_units']:.2f} units from the exact value)")
    for m in report["figure1"]["mismatches"] + report["mc_table"]["mismatches"]:
        lines.append(f"  mismatch at {m['cell']}: expected {m['expected']}, got {m['got']}")
    return (EXIT_OK if report["ok"] else EXIT_CHECK), report, None, "\n".join(lines)


_COMMANDS = {
    "e-table": _cmd_e_table,
    "energy": _cmd_energy,
    "energy-table": _cmd_energy_table,
    "verify-recursions": _cmd_verify_recursions,
    "hyp3f2-check": _cmd_hyp3f2,
    "asymptotics": _cmd_asymptotics,
    "mc-estimate": _cmd_mc,
    "paper-tables": _cmd_paper_tables,
}


def _serialize(fmt, command, report, rows, text) -> str:
    if fmt == "json":
        return json.dumps({"command": command, **report}, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue().rstrip("\n")
    return text


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        status, report, rows, text = _COMMANDS[args.command](args)
    except (UsageError, PrecisionError) as exc:
        print(f"dysongas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except closed_form.ConvergenceError as exc:
        print(f"dysongas: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (FileNotFoundError, ValueError) as exc:
        print(f"dysongas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = _serialize(args.format, args.command, report, rows, text)
    if args.output:
        args.output.write_text(out + "\n")
    else:
        print(out)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
