"""Command-line front end: ``zeta4 {verify,table,discover,zeta}``.

Exit status is 0 when everything passed, 1 when a verification, table row
or fit failed, and 2 for usage errors.  ``--format json`` wraps results in
an envelope ``{tool_version, command, config, elapsed_s, timings, payload}``;
only ``elapsed_s`` and ``timings`` carry wall-clock data, so payloads are
byte-identical across runs with the same inputs.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import decimal
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .discovery import P_CEILING, coefficient_table, conjecture_check, fit_ratio_pattern
from .errors import UsageError, Zeta4Error
from .identities import expand_ids, verify
from .numctx import PrecisionContext, format_rational, make_context
from .quadrature import QuadConfig
from .special import ZetaMethod, zeta

DIGITS_ENV = "ZETA4_DIGITS"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunConfig:
    digits: int = 50
    max_level: int = 12
    output_format: str = "text"
    output_path: str | None = None

    def context(self) -> PrecisionContext:
        return make_context(self.digits)

    def quad(self) -> QuadConfig:
        return QuadConfig(max_level=self.max_level, initial_level=min(3, self.max_level))


@dataclass
class ReportEnvelope:
    tool_version: str
    command: str
    config: dict
    elapsed_s: float
    timings: dict
    payload: list


class _Usage(Exception):
    pass


# -- rendering -------------------------------------------------------------------


def render_decimal(x, digits: int) -> str:
    """Exactly ``digits`` significant digits, rounded to nearest (ties to even)."""
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (bool, int, str)):
        return str(x)
    if not mpmath.isfinite(x):
        return mpmath.nstr(x)
    if not x:
        return "0.0"
    # the binary value is an exact finite decimal; round that once, half to even
    sign, man, exp, _ = x._mpf_
    man = int(man)
    if exp >= 0:
        exact = decimal.Decimal(man << exp)
    else:
        exact = decimal.Decimal((0, tuple(map(int, str(man * 5 ** -exp))), exp))
    with decimal.localcontext() as dc:
        dc.prec, dc.rounding = digits, decimal.ROUND_HALF_EVEN
        d = +exact
    mantissa = "".join(map(str, d.as_tuple().digits)).ljust(digits, "0")
    point = d.adjusted()
    if -5 <= point < digits:
        if point < 0:
            body = "0." + "0" * (-point - 1) + mantissa
        else:
            head, tail = mantissa[: point + 1], mantissa[point + 1 :]
            body = head + "." + (tail or "0")
    else:
        body = mantissa[0] + "." + (mantissa[1:] or "0") + f"e{point:+d}"
    return ("-" if sign else "") + body


def _cell(v, digits):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, (list, tuple)):
        return [_cell(i, digits) for i in v]
    if isinstance(v, dict):
        return {k: _cell(i, digits) for k, i in v.items()}
    return render_decimal(v, digits)


def _rows_for_output(records, digits, drop=()):
    rows = []
    for rec in records:
        data = {f.name: getattr(rec, f.name) for f in dataclasses.fields(rec) if f.name not in drop}
        rows.append({k: _cell(v, digits) for k, v in data.items()})
    return rows


def _csv_text(rows) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else ("" if v is None else v) for k, v in row.items()})
    return buf.getvalue()


def _text_table(rows, columns) -> str:
    table = [[str("" if row.get(c) is None else row.get(c)) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in table)) if table else len(c) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in table]
    return "\n".join(lines) + "\n"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _envelope_json(command, cfg, started, timings, payload) -> str:
    env = ReportEnvelope(
        tool_version=__version__,
        command=command,
        config=dataclasses.asdict(cfg),
        elapsed_s=round(time.perf_counter() - started, 6),
        timings=timings,
        payload=payload,
    )
    return json.dumps(dataclasses.asdict(env), indent=2) + "\n"


# -- commands --------------------------------------------------------------------


def cmd_verify(ids, cfg: RunConfig) -> int:
    started = time.perf_counter()
    try:
        selected = expand_ids(ids)
    except UsageError as exc:
        raise _Usage(str(exc)) from None
    ctx, quad = cfg.context(), cfg.quad()
    reports = [verify(i, ctx, quad) for i in selected]
    timings = {r.id: round(r.elapsed, 6) for r in reports}
    rows = _rows_for_output(reports, cfg.digits, drop=("elapsed",))
    if cfg.output_format == "json":
        _emit(_envelope_json("verify", cfg, started, timings, rows), cfg)
    elif cfg.output_format == "csv":
        _emit(_csv_text(rows), cfg)
    else:
        text = _text_table(rows, ["id", "passed", "abs_residual", "tolerance", "evaluations", "lhs_value", "rhs_value"])
        notes = [f"{r.id}: {r.note}" for r in reports if r.note]
        passed = sum(r.passed for r in reports)
        text += f"\n{passed}/{len(reports)} identities passed at {cfg.digits} digits\n"
        text += "".join(n + "\n" for n in notes)
        _emit(text, cfg)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_table(p_max: int, cfg: RunConfig) -> int:
    started = time.perf_counter()
    if not 0 <= p_max <= P_CEILING:
        raise _Usage(f"--pmax must lie in [0, {P_CEILING}], got {p_max}")
    ctx = cfg.context()
    records = coefficient_table(p_max, ctx, cfg.quad())
    rows = _rows_for_output(records, cfg.digits)
    if cfg.output_format == "json":
        _emit(_envelope_json("table", cfg, started, {}, rows), cfg)
    elif cfg.output_format == "csv":
        _emit(_csv_text(rows), cfg)
    else:
        _emit(_text_table(rows, ["p", "coeff_zeta", "coeff_eta", "residual_zeta", "residual_eta", "value", "note"]), cfg)
    return EXIT_OK if all(r.ok for r in records) else EXIT_FAIL


def cmd_discover(p_fit: int, p_check: int, cfg: RunConfig) -> int:
    started = time.perf_counter()
    if p_check <= p_fit:
        raise _Usage(f"--pcheck must exceed --pfit, got pfit={p_fit}, pcheck={p_check}")
    if not 0 <= p_fit <= P_CEILING or p_check > P_CEILING:
        raise _Usage(f"--pfit and --pcheck must lie in [0, {P_CEILING}]")
    degree_max = 4
    if p_fit + 1 < degree_max + 1:
        raise _Usage(f"--pfit {p_fit} gives {p_fit + 1} rows; a degree-{degree_max} fit needs at least {degree_max + 1}")
    ctx, quad = cfg.context(), cfg.quad()
    table = coefficient_table(p_fit, ctx, quad)
    fit = fit_ratio_pattern(table, degree_max)
    checks = []
    if fit.closed_form is not None:
        checks = conjecture_check(fit.closed_form, range(p_fit + 1, p_check + 1), ctx, quad)
        fit.validated_range = [c.p for c in checks if c.passed]
    ok = fit.found and fit.closed_form is not None and all(c.passed for c in checks)

    record = {
        "found": fit.found,
        "ratio_polynomial": fit.ratio_polynomial.factored() if fit.ratio_polynomial else None,
        "ratio_polynomial_expanded": fit.ratio_polynomial.expanded() if fit.ratio_polynomial else None,
        "closed_form": fit.closed_form.integral_form() if fit.closed_form else None,
        "fit_range": fit.fit_range,
        "validated_range": fit.validated_range,
        "ratios": [[p, format_rational(r)] for p, r in fit.ratios],
        "message": fit.message,
        "checks": _rows_for_output(checks, cfg.digits),
    }
    if cfg.output_format == "json":
        _emit(_envelope_json("discover", cfg, started, {}, [record]), cfg)
    elif cfg.output_format == "csv":
        _emit(_csv_text(record["checks"]), cfg)
    else:
        lines = [] if fit.found else [fit.message]
        if fit.ratio_polynomial:
            lines.append(f"ratio polynomial: q(p) = {record['ratio_polynomial']} = {record['ratio_polynomial_expanded']}")
        if fit.closed_form:
            lines.append(f"closed form: {record['closed_form']}")
        lines.append(f"fit range: {fit.fit_range}")
        lines.append("ratios: " + ", ".join(f"r_{p} = {r}" for p, r in record["ratios"]))
        text = "\n".join(lines) + "\n"
        if checks:
            text += "\n" + _text_table(record["checks"], ["p", "passed", "residual", "tolerance", "value", "predicted", "note"])
            text += f"validated range: {fit.validated_range}\n"
        _emit(text, cfg)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_s(raw: str):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        float(raw)
    except ValueError:
        raise _Usage(f"--s must be a number, got {raw!r}") from None
    return raw


def cmd_zeta(s, method: str, cfg: RunConfig) -> int:
    started = time.perf_counter()
    ctx = cfg.context()
    s = _parse_s(str(s))
    try:
        result = zeta(s if isinstance(s, int) else ctx.mpf(s), method, ctx, cfg.quad())
    except UsageError as exc:
        raise _Usage(str(exc)) from None
    value = render_decimal(result.value, cfg.digits)
    coeff = f"{format_rational(result.pi_coefficient)} * pi^{s}" if result.pi_coefficient is not None else None
    row = {
        "argument": str(s),
        "value": value,
        "method": ZetaMethod(result.method).value,
        "pi_coefficient": format_rational(result.pi_coefficient) if result.pi_coefficient is not None else None,
    }
    if cfg.output_format == "json":
        _emit(_envelope_json("zeta", cfg, started, {}, [row]), cfg)
    elif cfg.output_format == "csv":
        _emit(_csv_text([row]), cfg)
    else:
        _emit((f"zeta({s}) = {coeff}\n" if coeff else "") + f"zeta({s}) = {value}\n", cfg)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------


def _default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None:
        return 50
    try:
        return int(raw)
    except ValueError:
        raise _Usage(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None,
                        help=f"decimal digits (default 50, or ${DIGITS_ENV})")
    common.add_argument("--max-level", type=int, default=12, help="deepest quadrature level (default 12)")
    common.add_argument("--format", choices=FORMATS, default="text", dest="output_format")
    common.add_argument("--out", default=None, dest="output_path", metavar="PATH", help="write output here")

    ap = argparse.ArgumentParser(prog="zeta4", description="High-precision verification of integral identities for zeta(4).")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="verify catalog identities")
    p.add_argument("--id", action="append", dest="ids", required=True,
                   help="identity id, group (EULER_REP, MELLIN_REP) or 'all'; repeatable")

    p = sub.add_parser("table", parents=[common], help="moment-integral coefficient table")
    p.add_argument("--pmax", type=int, required=True)

    p = sub.add_parser("discover", parents=[common], help="fit and validate a closed form for the moments")
    p.add_argument("--pfit", type=int, required=True)
    p.add_argument("--pcheck", type=int, required=True)

    p = sub.add_parser("zeta", parents=[common], help="evaluate zeta(s)")
    p.add_argument("--s", required=True)
    p.add_argument("--method", choices=[m.value for m in ZetaMethod], default="bernoulli")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        digits = args.digits if args.digits is not None else _default_digits()
        try:
            make_context(digits)
            cfg = RunConfig(digits, args.max_level, args.output_format, args.output_path)
            cfg.quad()
        except UsageError as exc:
            raise _Usage(str(exc)) from None
        if args.command == "verify":
            return cmd_verify(args.ids, cfg)
        if args.command == "table":
            return cmd_table(args.pmax, cfg)
        if args.command == "discover":
            return cmd_discover(args.pfit, args.pcheck, cfg)
        return cmd_zeta(args.s, args.method, cfg)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"zeta4: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Zeta4Error as exc:
        print(f"zeta4: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
