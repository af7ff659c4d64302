"""Time-stepping solvers for ``a1 y^(delta) + a0 y = u`` with zero initial conditions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fracdisc.discretizers import gl_binomials
from fracdisc.mittleff import FdeModel
from fracdisc.poly import Polynomial, RationalApproximant, poly_add

#: A run counts as diverged once ``|y_k|`` exceeds this multiple of ``1/a0``.
DIVERGENCE_FACTOR = 1.0e6


class SingularUpdate(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class StepInput:
    amplitude: float = 1.0

    def samples(self, steps: int) -> np.ndarray:
        return np.full(steps + 1, float(self.amplitude))


@dataclass(frozen=True)
class TimeSeries:
    sample_period: float
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.sample_period > 0:
            raise ValueError("sample period must be positive")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values)

    @property
    def times(self) -> np.ndarray:
        return self.sample_period * np.arange(len(self.values))

    def __len__(self) -> int:
        return len(self.values)


def simulate_pse(
    model: FdeModel,
    T: float,
    steps: int,
    memory_length: int | None = None,
    input: StepInput = StepInput(),
) -> TimeSeries:
    """Grunwald-Letnikov recursion, samples ``y_0 .. y_steps``.

    ``memory_length`` defaults to ``steps`` (full memory). For
    ``1 < delta < 2`` the first two samples are held at zero.
    """
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    L = steps if memory_length is None else memory_length
    b = gl_binomials(model.delta, max(L, 1)).array
    u = input.samples(steps)
    y = np.zeros(steps + 1)
    c = model.a1 * T ** (-model.delta)
    denom = c + model.a0
    start = 2 if model.delta > 1 else 1
    for k in range(start, steps + 1):
        m = min(k, L)
        # b_1..b_m against y_{k-1}..y_{k-m}
        history = np.dot(b[1 : m + 1], y[k - 1 :: -1][:m]) if m else 0.0
        y[k] = (u[k] - c * history) / denom
    return TimeSeries(float(T), tuple(y.tolist()))


def _update_divisor(model: FdeModel, approx: RationalApproximant) -> float:
    return model.a1 * approx.gain * approx.num[0] + model.a0 * approx.den[0]


def simulate_iir(
    model: FdeModel,
    approx: RationalApproximant,
    steps: int,
    input: StepInput = StepInput(),
) -> TimeSeries:
    """IIR recursion with the rational approximant ``gain * P / Q`` of ``s^delta``."""
    if not np.isclose(approx.delta, model.delta, rtol=0, atol=1e-12):
        raise ValueError(f"approximant order {approx.delta} != model order {model.delta}")
    divisor = _update_divisor(model, approx)
    if abs(divisor) <= 1e-14:
        raise SingularUpdate(f"update divisor {divisor!r} vanishes")
    n = max(len(approx.num), len(approx.den))
    P = np.zeros(n)
    Q = np.zeros(n)
    P[: len(approx.num)] = approx.num.array
    Q[: len(approx.den)] = approx.den.array
    fb = model.a1 * approx.gain * P + model.a0 * Q
    u = input.samples(steps)
    y = np.zeros(steps + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps + 1):
            acc = 0.0
            for i in range(min(k, n - 1), 0, -1):
                acc += Q[i] * u[k - i] - fb[i] * y[k - i]
            acc += Q[0] * u[k]
            y[k] = acc / divisor
    return TimeSeries(approx.sample_period, tuple(y.tolist()))


def closed_loop_tf(model: FdeModel, approx: RationalApproximant) -> tuple[Polynomial, Polynomial]:
    """Discrete transfer function from ``u`` to ``y``: ``Q / (a0 Q + a1 gain P)``."""
    den = poly_add(approx.den.scaled(model.a0), approx.num.scaled(model.a1 * approx.gain))
    return approx.den.canonical(), den.canonical()


def divergence_index(series: TimeSeries | np.ndarray, model: FdeModel) -> int | None:
    """First sample whose magnitude trips the divergence proxy, else ``None``."""
    y = series.array if isinstance(series, TimeSeries) else np.asarray(series)
    limit = DIVERGENCE_FACTOR / abs(model.a0) if model.a0 else DIVERGENCE_FACTOR
    bad = np.flatnonzero(~(np.abs(y) <= limit))
    return int(bad[0]) if bad.size else None
