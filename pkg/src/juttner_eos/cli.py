"""Command-line front end.

Commands: ``bessel``, ``table``, ``invert``, ``sound-speed``, ``verify``.
Every command writes either CSV (header + rows, LF endings) or a JSON object
``{"command", "params", "rows"}``; reals always carry 17 significant digits.

Exit codes: 0 success, 2 domain/usage error, 3 inversion failure,
4 verification failure, 5 verification inconclusive at double precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import bessel, eos, verify
from .errors import AccuracyError, BracketError, DomainError, JuttnerError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVERSION = 3
EXIT_VERIFY_FAIL = 4
EXIT_INCONCLUSIVE = 5


def format_real(v) -> str:
    return "%.17g" % v


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_real(float(v))
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return format_real(v) if math.isfinite(v) else "null"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    return json.dumps(str(v), ensure_ascii=False)


def render(command: str, params: dict, fields: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        body = ",\n".join("  " + _json_value({f: row[f] for f in fields}) for row in rows)
        rows_text = "[\n" + body + "\n]" if rows else "[]"
        return (
            "{"
            + f'"command": {json.dumps(command)}, "params": {_json_value(params)},\n"rows": {rows_text}'
            + "}\n"
        )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_csv_cell(row[f]) for f in fields])
    return buf.getvalue()


def _constants(args) -> eos.PhysicalConstants:
    return eos.PhysicalConstants(m0=args.m0, c=args.c, kB=args.kB, h=args.h)


def _grid(args) -> np.ndarray:
    return verify.GridSpec(args.beta_min, args.beta_max, args.points).values()


def cmd_bessel(args):
    v = bessel.besselK(args.order, args.beta)
    fields = ["order", "beta", "value", "scaled_value", "log_value"]
    row = dict(order=v.order, beta=v.argument, value=v.value, scaled_value=v.scaled_value, log_value=v.log_value)
    params = {"order": args.order, "beta": args.beta}
    return EXIT_OK, render("bessel", params, fields, [row], args.format)


def cmd_table(args):
    constants = _constants(args)
    fields = ["beta", "theta", "p", "rho", "eta", "psi", "cs2"]
    rows = []
    for b in _grid(args):
        st = eos.thermo_state(args.n, float(b), constants)
        rows.append(dict(beta=st.beta, theta=st.theta, p=st.p, rho=st.rho, eta=st.eta, psi=st.psi, cs2=st.cs2))
    params = {
        "beta_min": args.beta_min, "beta_max": args.beta_max, "points": args.points, "n": args.n,
        "m0": args.m0, "c": args.c, "kB": args.kB, "h": args.h,
    }
    return EXIT_OK, render("table", params, fields, rows, args.format)


def cmd_invert(args):
    constants = _constants(args)
    res = eos.invert_map(args.eta, args.rho, constants, args.tol)
    fields = ["eta", "rho", "n", "beta", "p", "residual_eta", "residual_rho", "iterations", "bracket_used"]
    row = dict(
        eta=args.eta, rho=args.rho, n=res.n, beta=res.beta, p=eos.pressure(res.n, res.beta, constants),
        residual_eta=res.residual_eta, residual_rho=res.residual_rho,
        iterations=res.iterations, bracket_used=res.bracket_used,
    )
    params = {"eta": args.eta, "rho": args.rho, "tol": args.tol, "m0": args.m0, "c": args.c, "kB": args.kB, "h": args.h}
    return EXIT_OK, render("invert", params, fields, [row], args.format)


def cmd_sound_speed(args):
    if args.beta is not None:
        betas = [args.beta]
        params = {"beta": args.beta}
    else:
        betas = _grid(args)
        params = {"beta_min": args.beta_min, "beta_max": args.beta_max, "points": args.points}
    fields = ["beta", "cs2", "cs_over_c"]
    rows = []
    for b in betas:
        cs2 = eos.sound_speed_squared(float(b))
        rows.append(dict(beta=float(b), cs2=cs2, cs_over_c=math.sqrt(cs2)))
    return EXIT_OK, render("sound-speed", params, fields, rows, args.format)


def cmd_verify(args):
    checks = verify.CHECK_NAMES if args.checks is None else tuple(c.strip() for c in args.checks.split(",") if c.strip())
    report = verify.sweep(verify.GridSpec(args.beta_min, args.beta_max, args.points), checks)
    params = {
        "beta_min": args.beta_min, "beta_max": args.beta_max, "points": args.points,
        "checks": ",".join(checks), "records": args.records,
    }
    if args.records:
        fields = ["check", "beta", "value", "margin", "error", "passed", "inconclusive", "note"]
        rows = [
            dict(check=r.check_name, beta=r.beta, value=r.value, margin=r.margin, error=r.error,
                 passed=r.passed, inconclusive=r.inconclusive, note=r.note)
            for r in report.records
        ]
    else:
        fields = ["check", "records", "passed", "failed", "inconclusive", "worst_beta", "worst_margin"]
        rows = report.summary()
    text = render("verify", params, fields, rows, args.format)
    if report.failures:
        code = EXIT_VERIFY_FAIL
    elif report.inconclusive:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    return code, text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_format(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_constants(p):
    for name in ("m0", "c", "kB", "h"):
        p.add_argument(f"--{name}", type=float, default=1.0, help=f"physical constant {name} (default 1)")


def _add_grid(p, beta_min, beta_max, points):
    p.add_argument("--beta-min", type=float, default=beta_min)
    p.add_argument("--beta-max", type=float, default=beta_max)
    p.add_argument("--points", type=int, default=points)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="juttner-eos", description="Kinetic equation of state of a Juttner gas.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bessel", help="K0, K1 or K2 at one beta")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    _add_format(p)
    p.set_defaults(func=cmd_bessel)

    p = sub.add_parser("table", help="tabulate the EOS on a log-spaced beta grid")
    _add_grid(p, 0.1, 10.0, 11)
    p.add_argument("--n", type=float, default=1.0, help="number density")
    _add_constants(p)
    _add_format(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("invert", help="recover (n, beta) and p from (eta, rho)")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--tol", type=float, default=eos.MIN_INVERSION_TOL)
    _add_constants(p)
    _add_format(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("sound-speed", help="squared sound speed over c^2")
    p.add_argument("--beta", type=float, default=None, help="single beta (overrides the grid)")
    _add_grid(p, 0.01, 100.0, 5)
    _add_format(p)
    p.set_defaults(func=cmd_sound_speed)

    p = sub.add_parser("verify", help="check every inequality over a beta grid")
    _add_grid(p, 1e-3, 1e3, 10_000)
    p.add_argument("--checks", default=None, help=f"comma-separated subset of: {','.join(verify.CHECK_NAMES)}")
    p.add_argument("--records", action="store_true", help="emit every record instead of per-check summaries")
    _add_format(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, text = args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BracketError, AccuracyError) as exc:
        if args.command == "invert":
            print(f"inversion failed: {exc}", file=sys.stderr)
            return EXIT_INVERSION
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAIL if args.command == "verify" else EXIT_USAGE
    except JuttnerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
