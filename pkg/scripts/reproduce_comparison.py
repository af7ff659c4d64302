"""Error and stability sweep over methods, orders and sample periods.

Runs the compare harness for each fractional order and prints one line per
(method, T) cell. With ``--outdir`` the full CSV tables are written as well.
"""

import argparse
import pathlib

from fracdisc.cli import render
from fracdisc.harness import ComparisonConfig, compare_cells, compare_table, parse_methods
from fracdisc.mittleff import FdeModel

METHODS = "pse-L100000,muir-n5,muir-n7,muir-n9,cfet-n5,cfet-n7,cfet-n9,cfea-n5,cfea-n7,cfea-n9"


def fmt(x, spec=".4f"):
    return "NA" if x is None else format(x, spec)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--deltas", default="0.5,1.5")
    parser.add_argument("--sweep-T", default="0.5,0.1,0.05,0.01")
    parser.add_argument("--methods", default=METHODS)
    parser.add_argument("--t-end", type=float, default=5.0)
    parser.add_argument("--outdir", type=pathlib.Path, default=None)
    args = parser.parse_args()

    sweep = tuple(float(t) for t in args.sweep_T.split(","))
    for delta in (float(d) for d in args.deltas.split(",")):
        config = ComparisonConfig(
            model=FdeModel(1.0, 1.0, delta),
            T=sweep[0],
            steps=1,
            methods=parse_methods(args.methods),
            sweep_T=sweep,
            t_end=args.t_end,
        )
        print(f"delta={delta}")
        print(f"  {'method':<13}{'T':>7}{'max_err':>10}{'rmse':>10}  diverged  unstable  r_max")
        for cell in compare_cells(config):
            if cell.error:
                print(f"  {cell.method:<13}{cell.T:>7g}  error: {cell.error}")
                continue
            m = cell.metrics
            print(
                f"  {cell.method:<13}{cell.T:>7g}{m.max_abs_error:>10.4f}{m.rmse:>10.4f}"
                f"  {str(m.diverged):<8}  {fmt(cell.unstable_pole_count, 'd'):>8}  {fmt(cell.max_pole_radius)}"
            )
        if args.outdir:
            args.outdir.mkdir(parents=True, exist_ok=True)
            path = args.outdir / f"compare_delta{delta:g}.csv"
            path.write_text(render(compare_table(config), "csv"))
            print(f"  wrote {path}")


if __name__ == "__main__":
    main()
