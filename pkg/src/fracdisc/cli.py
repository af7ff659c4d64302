"""Command line interface: ``fracdisc {coeffs,simulate,bode,compare}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

from fracdisc.discretizers import DegenerateSystem, make_approximant
from fracdisc.harness import (
    NA,
    ComparisonConfig,
    MethodSpec,
    Table,
    bode_table,
    compare_table,
    parse_methods,
    simulate_table,
)
from fracdisc.mittleff import FdeModel
from fracdisc.poly import Method

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CELL_FAILURES = 3

DEFAULT_METHODS = "pse-L100000,muir-n5,cfet-n5,cfea-n5"
DEFAULT_SWEEP = "0.5,0.1,0.05,0.01"


def format_value(v: Any) -> str:
    if v is None:
        return NA
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return NA if not math.isfinite(v) else f"{v:.17g}"
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "item"):
        return _json_value(v.item())
    return v


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        rows = [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows]
        doc = {"meta": table.meta, "columns": table.columns, "rows": rows}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    for line in table.meta:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow(format_value(_json_value(v)) for v in row)
    return buf.getvalue()


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=float, default=0.5, help="fractional order")
    p.add_argument("--a1", type=float, default=1.0)
    p.add_argument("--a0", type=float, default=1.0)
    p.add_argument("--T", type=float, default=0.1, help="sample period in seconds")
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--order", type=int, default=5, help="default Muir/CFE order")
    p.add_argument("--memory", type=int, default=None, help="default PSE memory length")
    p.add_argument("--methods", default=DEFAULT_METHODS, help="comma separated method ids")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--dump-config", action="store_true", help="print the run config as JSON and exit")
    p.add_argument("--config", default=None, help="JSON config written by --dump-config")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracdisc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="print approximant coefficients")
    _add_common(p)
    p.add_argument("--method", default=None, help="single method (pse, muir, cfe-tustin, cfe-al-alaoui)")
    p.add_argument("--den0", type=float, default=None, help="rescale both polynomials so Q[0] equals this")

    p = sub.add_parser("simulate", help="unit step responses against the analytic solution")
    _add_common(p)

    p = sub.add_parser("bode", help="Bode data of the differentiator or the FDE")
    _add_common(p)
    p.add_argument("--system", choices=("fde", "differentiator"), default="fde")
    p.add_argument("--Td", type=float, default=1.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--omega-min", type=float, default=1.0e-2)
    p.add_argument("--omega-max", type=float, default=None)

    p = sub.add_parser("compare", help="error and stability summary over a T sweep")
    _add_common(p)
    p.add_argument("--sweep-T", default=DEFAULT_SWEEP, help="comma separated sample periods")
    p.add_argument("--t-end", type=float, default=5.0, help="simulated horizon per cell, seconds")
    return parser


def config_from_args(args: argparse.Namespace) -> ComparisonConfig:
    if args.config:
        with open(args.config) as fh:
            return ComparisonConfig.from_json(fh.read())
    model = FdeModel(a1=args.a1, a0=args.a0, delta=args.delta)
    sweep = _floats(args.sweep_T) if getattr(args, "sweep_T", None) else ()
    t_end = getattr(args, "t_end", None)
    memory = args.memory if args.memory is not None else args.steps
    methods = parse_methods(args.methods, order=args.order, memory=memory)
    return ComparisonConfig(
        model=model,
        T=args.T,
        steps=args.steps,
        methods=tuple(methods),
        output_format=args.format,
        sweep_T=sweep,
        t_end=t_end if args.command == "compare" else None,
        system=getattr(args, "system", "fde"),
        Td=getattr(args, "Td", 1.0),
        points=getattr(args, "points", 200),
        omega_min=getattr(args, "omega_min", 1.0e-2),
        omega_max=getattr(args, "omega_max", None),
    )


def coeffs_table(args: argparse.Namespace) -> Table:
    memory = args.memory if args.memory is not None else args.steps
    spec = MethodSpec.parse(args.method or args.methods.split(",")[0], order=args.order, memory=memory)
    approx = make_approximant(spec.method, args.delta, args.T, spec.param)
    P, Q = list(approx.num.coeffs), list(approx.den.coeffs)
    if args.den0 is not None:
        scale = args.den0 / Q[0]
        P, Q = [scale * c for c in P], [scale * c for c in Q]
    # list every coefficient up to the declared order, trailing zeros included
    n = max(len(P), len(Q), approx.order + 1)
    P += [0.0] * (n - len(P))
    Q += [0.0] * (n - len(Q))
    meta = [
        f"fracdisc coeffs method={spec.id} delta={args.delta!r} T={args.T!r}",
        f"gain={approx.gain!r} k1={approx.k1!r} k2={approx.k2!r}",
    ]
    table = Table(["i", "P", "Q"], meta=meta)
    for i in range(n):
        table.add([i, P[i], Q[i]])
    return table


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "coeffs":
            if args.dump_config:
                _emit(json.dumps(vars(args), indent=2, sort_keys=True) + "\n", args.out)
                return EXIT_OK
            table = coeffs_table(args)
            fmt = args.format
        else:
            config = config_from_args(args)
            if args.dump_config:
                _emit(config.to_json() + "\n", args.out)
                return EXIT_OK
            build = {"simulate": simulate_table, "bode": bode_table, "compare": compare_table}
            table = build[args.command](config)
            fmt = config.output_format
    except DegenerateSystem as exc:
        print(f"fracdisc: {exc}", file=sys.stderr)
        return EXIT_CELL_FAILURES
    except (ValueError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"fracdisc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(render(table, fmt), args.out)
    if table.failures:
        for f in table.failures:
            print(f"fracdisc: {f}", file=sys.stderr)
        return EXIT_CELL_FAILURES
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
