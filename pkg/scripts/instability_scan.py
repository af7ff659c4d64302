"""Locate the sample period below which a closed loop loses stability.

For each order delta and method, scans T on a log grid and reports the
largest T at which the closed loop ``Q / (a0 Q + a1 gain P)``
has a pole on or outside the unit circle, plus the open-loop zeros of ``P``
that the poles approach as ``T -> 0``.
"""

import argparse

import numpy as np

from fracdisc.discretizers import make_approximant
from fracdisc.freqdomain import stability_report
from fracdisc.mittleff import FdeModel
from fracdisc.poly import poly_roots
from fracdisc.timedomain import closed_loop_tf


def scan(model, method, order, periods):
    flags = []
    for T in periods:
        approx = make_approximant(method, model.delta, T, order)
        report = stability_report(*closed_loop_tf(model, approx))
        flags.append((T, report.unstable_pole_count, report.max_pole_radius))
    return flags


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--deltas", default="0.5,0.9,1.2,1.5,1.8")
    parser.add_argument("--methods", default="muir,cfet,cfea")
    parser.add_argument("--order", type=int, default=5)
    parser.add_argument("--t-min", type=float, default=1e-4)
    parser.add_argument("--t-max", type=float, default=1.0)
    parser.add_argument("--points", type=int, default=41)
    parser.add_argument("--a1", type=float, default=1.0)
    parser.add_argument("--a0", type=float, default=1.0)
    args = parser.parse_args()

    periods = np.logspace(np.log10(args.t_max), np.log10(args.t_min), args.points)
    for delta in (float(d) for d in args.deltas.split(",")):
        model = FdeModel(args.a1, args.a0, delta)
        for method in args.methods.split(","):
            flags = scan(model, method, args.order, periods)
            unstable = [T for T, count, _ in flags if count]
            border = f"{max(unstable):.4g}" if unstable else "none"
            num = make_approximant(method, delta, 1.0, args.order).num
            outside = sum(1 for r in poly_roots(num) if abs(r) >= 1.0)
            r_max = max(r for _, _, r in flags)
            print(
                f"delta={delta:<4} {method:<5} n={args.order}  unstable for T <= {border:<8}"
                f" max pole radius {r_max:.4f}  zeros of P outside unit circle: {outside}"
            )


if __name__ == "__main__":
    main()
