"""Command-line front end.

One command per process invocation; results print to stdout as pretty
text, ``--json`` documents or ``--csv`` tables, diagnostics go to stderr.
Real numbers are serialized as decimal strings at the full working
precision so downstream consumers never see binary-float truncation.

Exit codes: 0 success, 2 validation error (bad flags, config, expression
or input data), 3 resource guard, 4 internal invariant violation (a
proven inequality failed numerically, non-convergence, or inconsistent
catalog data).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__, analysis
from .config import GroupConfig, load_config
from .errors import (
    InternalInvariantError,
    MultisetMismatchError,
    QdimError,
    ResourceGuardError,
    ValidationError,
)
from .numerics import Scalar, as_scalar, set_precision
from .repexpr import evaluate, parse_rep, to_text
from .spectra import DtProfile, d_t, is_symmetric, symmetric_by_newton

ENV_PRECISION = "QDIM_PRECISION"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdim",
        description=(
            "Eigenvalue-multiset calculus for representations of compact "
            "quantum groups."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="catalog config file")
    common.add_argument(
        "--expr",
        metavar="STRING",
        default="fund",
        help="representation expression (default: fund)",
    )
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--csv", action="store_true", help="CSV output")
    common.add_argument(
        "--precision",
        type=int,
        metavar="INT",
        help="working precision in decimal digits (>= 30)",
    )

    sub.add_parser("spectrum", parents=[common], help="eigenvalue list")

    p = sub.add_parser("dt", parents=[common], help="power-sum functionals")
    p.add_argument("--t", required=True, metavar="CSV", help="probe exponents")

    sub.add_parser("symmetry", parents=[common], help="symmetry verdict")

    p = sub.add_parser("decompose", parents=[common], help="tensor-power table")
    p.add_argument("--power", type=int, required=True, metavar="INT")

    p = sub.add_parser("growth", parents=[common], help="growth table and rate")
    p.add_argument("--max-n", type=int, dest="max_n", metavar="INT")

    p = sub.add_parser("audit", parents=[common], help="proof-bound audit")
    p.add_argument("--max-n", type=int, dest="max_n", metavar="INT")
    p.add_argument("--t", default="1.5,2,3", metavar="CSV", help="probes > 1")

    p = sub.add_parser(
        "counterexample", help="asymmetric diagonal family diag(y, x, x)"
    )
    p.add_argument("--y", required=True, metavar="DECIMAL")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--precision", type=int, metavar="INT")

    return parser


def entry() -> None:
    sys.exit(main())


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except ValidationError as exc:
        return _fail(exc, 2)
    except ResourceGuardError as exc:
        return _fail(exc, 3)
    except MultisetMismatchError as exc:
        return _fail(exc, 4)
    except InternalInvariantError as exc:
        return _fail(exc, 4)
    except QdimError as exc:
        return _fail(exc, 2)


def _fail(exc: Exception, code: int) -> int:
    print(f"qdim: error: {exc}", file=sys.stderr)
    return code


def _resolve_precision(args, cfg: GroupConfig | None) -> int:
    if args.precision is not None:
        value = args.precision
    elif os.environ.get(ENV_PRECISION):
        raw = os.environ[ENV_PRECISION]
        try:
            value = int(raw)
        except ValueError:
            raise ValidationError(f"{ENV_PRECISION} must be an integer, got {raw!r}")
    elif cfg is not None:
        value = cfg.precision
    else:
        value = 60
    if value < 30:
        raise ValidationError("precision must be at least 30 digits")
    return value


def _run(args) -> int:
    if args.json and args.csv:
        raise ValidationError("choose at most one of --json and --csv")

    if args.command == "counterexample":
        precision = _resolve_precision(args, None)
        set_precision(precision)
        report = analysis.build_counterexample(_parse_scalar(args.y, "--y"))
        document = {
            "group": {
                "kind": "au",
                "construction": "diag(y,x,x)",
                "y": report.y.decimal_str(),
            },
            "expr": None,
            "command": "counterexample",
            "result": _counterexample_result(report),
            "precision": precision,
            "version": __version__,
        }
        table = _counterexample_table(report)
        lines = _counterexample_lines(report)
        _emit(args, document, table, lines)
        return 0

    if not args.config:
        raise ValidationError(f"command {args.command!r} needs --config PATH")
    cfg = load_config(args.config)
    precision = _resolve_precision(args, cfg)
    set_precision(precision)
    ring = cfg.build_ring()
    expr = parse_rep(args.expr, cfg)
    rep = evaluate(expr, ring)

    handler = {
        "spectrum": _cmd_spectrum,
        "dt": _cmd_dt,
        "symmetry": _cmd_symmetry,
        "decompose": _cmd_decompose,
        "growth": _cmd_growth,
        "audit": _cmd_audit,
    }[args.command]
    result, table, lines = handler(args, ring, rep)
    document = {
        "group": cfg.summary(),
        "expr": to_text(expr),
        "command": args.command,
        "result": result,
        "precision": precision,
        "version": __version__,
    }
    _emit(args, document, table, lines)
    return 0


def _parse_scalar(text: str, flag: str) -> Scalar:
    try:
        return as_scalar(text)
    except ValidationError as exc:
        raise ValidationError(f"{flag}: {exc}") from exc


def _parse_probe_list(text: str) -> list[Scalar]:
    items = [piece.strip() for piece in text.split(",") if piece.strip()]
    if not items:
        raise ValidationError("--t needs a comma-separated list of numbers")
    return [_parse_scalar(piece, "--t") for piece in items]


def _s(x: Scalar) -> str:
    return x.decimal_str()


# -- command handlers ------------------------------------------------------


def _cmd_spectrum(args, ring, rep):
    s = rep.spectrum()
    result = {
        "eigenvalues": [_s(lam) for lam in s],
        "dim": s.dim,
        "normalized": s.normalized,
    }
    table = [["index", "eigenvalue"]] + [
        [str(i), _s(lam)] for i, lam in enumerate(s)
    ]
    lines = [
        f"dim        : {s.dim}",
        f"normalized : {'yes' if s.normalized else 'no'}",
        "eigenvalues (descending):",
    ] + [f"  {_s(lam)}" for lam in s]
    return result, table, lines


def _cmd_dt(args, ring, rep):
    ts = _parse_probe_list(args.t)
    s = rep.spectrum()
    profile = DtProfile.compute(s, ts)
    rows = []
    for t, value in zip(profile.exponents, profile.values):
        opposite = d_t(s, -t)
        rows.append(
            {
                "t": _s(t),
                "d_t": _s(value),
                "d_minus_t": _s(opposite),
                "ratio": _s(value / opposite),
            }
        )
    result = {"dim": s.dim, "rows": rows}
    table = [["t", "d_t", "d_minus_t", "ratio"]] + [
        [r["t"], r["d_t"], r["d_minus_t"], r["ratio"]] for r in rows
    ]
    lines = [f"dim: {s.dim}"] + [
        f"t = {r['t']}: d_t = {r['d_t']}, d_-t = {r['d_minus_t']}, "
        f"ratio = {r['ratio']}"
        for r in rows
    ]
    return result, table, lines


def _cmd_symmetry(args, ring, rep):
    s = rep.spectrum()
    verdict = is_symmetric(s)
    newton = symmetric_by_newton(s)
    if bool(verdict) != newton:
        raise InternalInvariantError(
            "sorted-list and power-sum symmetry decisions disagree"
        )
    witness = None
    if verdict.witness is not None:
        index, lam, mu = verdict.witness
        witness = {"index": index, "value": _s(lam), "inverse_value": _s(mu)}
    result = {
        "symmetric": bool(verdict),
        "witness": witness,
        "newton_agrees": True,
    }
    table = [
        ["symmetric", "witness_index", "witness_value", "witness_inverse"],
        [
            str(bool(verdict)),
            "" if witness is None else str(witness["index"]),
            "" if witness is None else witness["value"],
            "" if witness is None else witness["inverse_value"],
        ],
    ]
    lines = [f"symmetric: {'yes' if verdict else 'no'}"]
    if witness is not None:
        lines.append(
            f"witness: index {witness['index']}, value {witness['value']} "
            f"vs inverse {witness['inverse_value']}"
        )
    lines.append("newton cross-check agrees: yes")
    return result, table, lines


def _cmd_decompose(args, ring, rep):
    if args.power < 0:
        raise ValidationError("--power must be >= 0")
    dec = rep.power(args.power)
    rows = [
        {"label": ring.label_str(label), "multiplicity": m, "dim": ring.dim(label)}
        for label, m in dec.items()
    ]
    result = {"power": args.power, "rows": rows, "total_dim": dec.total_dim()}
    table = [["label", "multiplicity", "dim"]] + [
        [r["label"], str(r["multiplicity"]), str(r["dim"])] for r in rows
    ]
    lines = [f"power: {args.power}", f"total dim: {result['total_dim']}"] + [
        f"  {r['label']} x{r['multiplicity']} (dim {r['dim']})" for r in rows
    ]
    return result, table, lines


def _cmd_growth(args, ring, rep):
    n_max = args.max_n if args.max_n is not None else analysis.default_max_n(ring)
    table_obj = analysis.growth_table(ring, rep, n_max)
    estimate = analysis.estimate_rate(table_obj)
    rows = []
    for row in table_obj.rows:
        rows.append(
            {
                "n": row.n,
                "p": row.p_max,
                "b": row.b_sum,
                "b_root": None if row.b_root is None else _s(row.b_root),
                "local_base": None if row.local_base is None else _s(row.local_base),
            }
        )
    result = {
        "rows": rows,
        "estimate": {
            "classification": estimate.classification,
            "base_estimate": _s(estimate.base_estimate),
            "root_final": _s(estimate.root_final),
            "half_window_slope": _s(estimate.half_window_slope),
            "rates_nonincreasing": estimate.rates_nonincreasing,
            "band": [_s(estimate.band[0]), _s(estimate.band[1])],
            "note": estimate.note,
        },
    }
    table = [["n", "P", "b", "b_root", "local_base"]] + [
        [
            str(r["n"]),
            str(r["p"]),
            str(r["b"]),
            r["b_root"] or "",
            r["local_base"] or "",
        ]
        for r in rows
    ]
    lines = [
        f"n = {r['n']:>3}: P = {r['p']}, b = {r['b']}"
        + (f", b^(1/n) = {r['b_root']}" if r["b_root"] else "")
        for r in rows
    ]
    lines.append(
        f"classification: {estimate.classification} "
        f"(base estimate {result['estimate']['base_estimate']})"
    )
    lines.append(f"note: {estimate.note}")
    return result, table, lines


def _cmd_audit(args, ring, rep):
    n_max = args.max_n if args.max_n is not None else analysis.default_max_n(ring)
    probes = _parse_probe_list(args.t)
    audit = analysis.theorem_audit(ring, rep, n_max=n_max, probes=probes)
    witness = None
    if audit.verdict.witness is not None:
        index, lam, mu = audit.verdict.witness
        witness = {"index": index, "value": _s(lam), "inverse_value": _s(mu)}
    rows = [
        {
            "n": row.n,
            "t": _s(row.t),
            "p_n": row.p_n,
            "forward_margin": _s(row.forward_margin),
            "backward_margin": _s(row.backward_margin),
        }
        for row in audit.rows
    ]
    asymmetry = [
        {
            "t": _s(record.t),
            "c": _s(record.c),
            "rows": [
                {
                    "n": crow.n,
                    "c_power_n": _s(crow.c_power_n),
                    "p_n": crow.p_n,
                    "margin": _s(crow.margin),
                }
                for crow in record.rows
            ],
        }
        for record in audit.asymmetry
    ]
    result = {
        "n_max": audit.n_max,
        "probes": [_s(t) for t in audit.probes],
        "symmetric": bool(audit.verdict),
        "witness": witness,
        "newton_agrees": audit.newton_agrees,
        "all_bounds_hold": True,
        "rows": rows,
        "asymmetry": asymmetry,
    }
    table = [["n", "t", "P", "forward_margin", "backward_margin"]] + [
        [str(r["n"]), r["t"], str(r["p_n"]), r["forward_margin"], r["backward_margin"]]
        for r in rows
    ]
    lines = [
        f"symmetric: {'yes' if audit.verdict else 'no'}; all bounds hold",
    ]
    if witness is not None:
        lines.append(
            f"witness: index {witness['index']}, value {witness['value']} "
            f"vs inverse {witness['inverse_value']}"
        )
    for record in asymmetry:
        lines.append(
            f"asymmetry at t = {record['t']}: forced growth base c = {record['c']}"
        )
        for crow in record["rows"]:
            lines.append(
                f"  n = {crow['n']}: P = {crow['p_n']} >= c^n = {crow['c_power_n']}"
                f" (margin {crow['margin']})"
            )
    lines.append(f"audited rows: {len(rows)} (all bounds hold)")
    return result, table, lines


def _counterexample_result(report):
    witness = None
    if report.verdict.witness is not None:
        index, lam, mu = report.verdict.witness
        witness = {"index": index, "value": _s(lam), "inverse_value": _s(mu)}
    return {
        "y": _s(report.y),
        "x": _s(report.x),
        "x_squared": _s(report.x_squared),
        "f_diagonal": [_s(v) for v in report.f_diagonal],
        "spectrum": [_s(lam) for lam in report.spectrum],
        "dim": report.spectrum.dim,
        "normalized": report.spectrum.normalized,
        "trace": _s(report.trace),
        "trace_inverse": _s(report.trace_inverse),
        "trace_residual": _s(report.trace_residual),
        "quadratic_residual": _s(report.quadratic_residual),
        "symmetric": bool(report.verdict),
        "witness": witness,
    }


def _counterexample_table(report):
    return [
        ["field", "value"],
        ["y", _s(report.y)],
        ["x", _s(report.x)],
        ["x_squared", _s(report.x_squared)],
        ["spectrum", " ".join(_s(lam) for lam in report.spectrum)],
        ["trace", _s(report.trace)],
        ["trace_inverse", _s(report.trace_inverse)],
        ["trace_residual", _s(report.trace_residual)],
        ["symmetric", str(bool(report.verdict))],
    ]


def _counterexample_lines(report):
    lines = [
        f"y          : {_s(report.y)}",
        f"x          : {_s(report.x)}",
        f"x^2        : {_s(report.x_squared)}",
        "spectrum   :",
    ]
    lines += [f"  {_s(lam)}" for lam in report.spectrum]
    lines += [
        f"trace      : {_s(report.trace)}",
        f"inv trace  : {_s(report.trace_inverse)}",
        f"residual   : {_s(report.trace_residual)}",
        f"symmetric  : {'yes' if report.verdict else 'no'}",
    ]
    if report.verdict.witness is not None:
        index, lam, mu = report.verdict.witness
        lines.append(
            f"witness    : index {index}, value {_s(lam)} vs inverse {_s(mu)}"
        )
    return lines


def _emit(args, document, table, lines) -> None:
    if args.json:
        sys.stdout.write(
            json.dumps(document, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
        )
    elif args.csv:
        buffer = io.StringIO()
        writer = csv.writer(buffer, quoting=csv.QUOTE_ALL, lineterminator="\n")
        for row in table:
            writer.writerow(row)
        sys.stdout.write(buffer.getvalue())
    else:
        sys.stdout.write("\n".join(lines) + "\n")
