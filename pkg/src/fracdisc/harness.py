"""Comparison runs behind the command line: configs, error metrics and result tables."""

from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from fracdisc.discretizers import DegenerateSystem, make_approximant
from fracdisc.freqdomain import (
    FrequencyGrid,
    PoleOnGrid,
    bode_fde_analytic,
    bode_ideal_differentiator,
    freq_response_discrete,
    stability_report,
)
from fracdisc.mittleff import ConvergenceFailure, DomainError, FdeModel, analytic_step_response
from fracdisc.poly import Method, poly_eval_many
from fracdisc.timedomain import (
    SingularUpdate,
    closed_loop_tf,
    divergence_index,
    simulate_iir,
    simulate_pse,
)

NA = "NA"
# closed-loop polynomials above this degree are not factored (long PSE memories)
MAX_ROOT_DEGREE = 64

_ID_PATTERN = re.compile(r"^(pse)(?:-L(\d+))?$|^(muir|cfet|cfea)(?:-n(\d+))?$", re.IGNORECASE)
_ALIASES = {
    "cfe-tustin": "cfet",
    "cfe-al-alaoui": "cfea",
    "cfe-alalaoui": "cfea",
    "gl": "pse",
}


@dataclass(frozen=True)
class MethodSpec:
    """One discretizer: ``param`` is the memory length (PSE) or the order."""

    method: Method
    param: int

    @property
    def id(self) -> str:
        tag = "L" if self.method is Method.PSE else "n"
        return f"{self.method.value}-{tag}{self.param}"

    @classmethod
    def parse(cls, text: str, *, order: int = 5, memory: int = 1000) -> MethodSpec:
        text = text.strip()
        text = _ALIASES.get(text.lower(), text)
        m = _ID_PATTERN.match(text)
        if m is None:
            raise ValueError(f"unknown method descriptor {text!r}")
        if m.group(1):
            return cls(Method.PSE, int(m.group(2)) if m.group(2) else memory)
        return cls(Method(m.group(3).lower()), int(m.group(4)) if m.group(4) else order)


def parse_methods(text: str | Sequence[str], *, order: int = 5, memory: int = 1000) -> list[MethodSpec]:
    items = text.split(",") if isinstance(text, str) else list(text)
    return [MethodSpec.parse(s, order=order, memory=memory) for s in items if s.strip()]


@dataclass(frozen=True)
class ComparisonConfig:
    model: FdeModel
    T: float
    steps: int
    methods: tuple[MethodSpec, ...]
    output_format: str = "csv"
    sweep_T: tuple[float, ...] = ()
    t_end: float | None = None
    system: str = "fde"
    Td: float = 1.0
    points: int = 200
    omega_min: float = 1.0e-2
    omega_max: float | None = None

    def __post_init__(self) -> None:
        if not self.methods:
            raise ValueError("at least one method is required")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not self.T > 0 or any(not t > 0 for t in self.sweep_T):
            raise ValueError("sample periods must be positive")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.system not in ("fde", "differentiator"):
            raise ValueError(f"unknown system {self.system!r}")

    def steps_for(self, T: float) -> int:
        if self.t_end is None:
            return self.steps
        return max(1, int(round(self.t_end / T)))

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["methods"] = [m.id for m in self.methods]
        d["sweep_T"] = list(self.sweep_T)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ComparisonConfig:
        d = dict(d)
        d["model"] = FdeModel(**d["model"])
        d["methods"] = tuple(MethodSpec.parse(m) for m in d["methods"])
        d["sweep_T"] = tuple(d.get("sweep_T", ()))
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> ComparisonConfig:
        return cls.from_dict(json.loads(text))


@dataclass
class Table:
    """Ordered rows with a fixed column list; ``None`` marks an unavailable value."""

    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    meta: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def add(self, row: Sequence[Any]) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} values, expected {len(self.columns)}")
        self.rows.append(list(row))


@dataclass(frozen=True)
class ErrorMetrics:
    max_abs_error: float
    rmse: float
    diverged: bool
    final_value_error: float


def error_metrics(y: np.ndarray, reference: np.ndarray, model: FdeModel) -> ErrorMetrics:
    """Errors of ``y`` against ``reference`` up to (excluding) divergence.

    Samples where the reference is ``nan`` are skipped.
    """
    y = np.asarray(y, dtype=float)
    ref = np.asarray(reference, dtype=float)
    stop = divergence_index(y, model)
    end = len(y) if stop is None else stop
    err = np.abs(y[:end] - ref[:end])
    err = err[np.isfinite(err)]
    if err.size == 0:
        return ErrorMetrics(math.nan, math.nan, stop is not None, math.nan)
    return ErrorMetrics(
        max_abs_error=float(err.max()),
        rmse=float(math.sqrt(np.mean(err**2))),
        diverged=stop is not None,
        final_value_error=float(err[-1]),
    )


def analytic_series(model: FdeModel, T: float, steps: int) -> np.ndarray:
    """Analytic step response on ``kT``; ``nan`` outside the oracle's validity."""
    out = np.empty(steps + 1)
    for k in range(steps + 1):
        try:
            out[k] = analytic_step_response(model, k * T)
        except (DomainError, ConvergenceFailure):
            out[k] = math.nan
    return out


_SOLVER_ERRORS = (DegenerateSystem, SingularUpdate, ValueError, ArithmeticError)


def run_method(model: FdeModel, spec: MethodSpec, T: float, steps: int) -> np.ndarray:
    if spec.method is Method.PSE:
        return simulate_pse(model, T, steps, memory_length=spec.param).array
    approx = make_approximant(spec.method, model.delta, T, spec.param)
    return simulate_iir(model, approx, steps).array


def _blank_after_divergence(y: np.ndarray, model: FdeModel) -> np.ndarray:
    stop = divergence_index(y, model)
    if stop is None:
        return y
    y = y.copy()
    y[stop:] = math.nan
    return y


def _header(kind: str, config: ComparisonConfig) -> list[str]:
    m = config.model
    return [f"fracdisc {kind} delta={m.delta!r} a1={m.a1!r} a0={m.a0!r} T={config.T!r}"]


def simulate_table(config: ComparisonConfig) -> Table:
    T, steps, model = config.T, config.steps, config.model
    table = Table(["t", "analytic"] + [s.id for s in config.methods], meta=_header("simulate", config))
    ref = analytic_series(model, T, steps)
    columns = []
    for spec in config.methods:
        try:
            y = run_method(model, spec, T, steps)
        except _SOLVER_ERRORS as exc:
            table.failures.append(f"{spec.id}: {exc}")
            columns.append(np.full(steps + 1, math.nan))
            continue
        metrics = error_metrics(y, ref, model)
        table.meta.append(
            f"{spec.id} max_abs_error={metrics.max_abs_error!r} rmse={metrics.rmse!r} "
            f"diverged={str(metrics.diverged).lower()} final_value_error={metrics.final_value_error!r}"
        )
        columns.append(_blank_after_divergence(y, model))
    for k in range(steps + 1):
        table.add([k * T, ref[k]] + [c[k] for c in columns])
    for f in table.failures:
        table.meta.append(f"error {f}")
    return table


def bode_grid(config: ComparisonConfig) -> FrequencyGrid:
    nyquist = math.pi / config.T
    w_max = config.omega_max if config.omega_max is not None else 0.99 * nyquist
    if w_max > nyquist * (1 + 1e-12):
        raise ValueError(f"omega_max {w_max!r} exceeds the Nyquist frequency pi/T = {nyquist!r}")
    return FrequencyGrid.logspace(config.omega_min, w_max, config.points)


def _pointwise_response(num, den, gain: float, T: float, grid: FrequencyGrid) -> np.ndarray:
    try:
        return freq_response_discrete(num, den, gain, T, grid).array
    except PoleOnGrid:
        z_inv = np.exp(-1j * grid.array * T)
        d = poly_eval_many(den, z_inv)
        h = np.full(len(z_inv), complex(math.nan, math.nan))
        ok = np.abs(d) > 1e-14
        h[ok] = gain * poly_eval_many(num, z_inv[ok]) / d[ok]
        return h


def _log_and_phase(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    finite = np.isfinite(h)
    ln_mag = np.full(h.shape, math.nan)
    phase = np.full(h.shape, math.nan)
    ln_mag[finite] = np.log(np.abs(h[finite]))
    phase[finite] = np.unwrap(np.angle(h[finite]))
    return ln_mag, phase


def bode_table(config: ComparisonConfig) -> Table:
    model, T = config.model, config.T
    grid = bode_grid(config)
    cols = ["omega", "ideal_lnmag", "ideal_phase"]
    for spec in config.methods:
        cols += [f"{spec.id}_lnmag", f"{spec.id}_phase"]
    meta = _header("bode", config) + [f"system={config.system} Td={config.Td!r}"]
    table = Table(cols, meta=meta)
    if config.system == "differentiator":
        ideal = bode_ideal_differentiator(config.Td, model.delta, grid)
    else:
        ideal = bode_fde_analytic(model, grid)
    per_method = []
    for spec in config.methods:
        try:
            approx = make_approximant(spec.method, model.delta, T, spec.param)
            if config.system == "differentiator":
                h = _pointwise_response(approx.num, approx.den, config.Td * approx.gain, T, grid)
            else:
                num, den = closed_loop_tf(model, approx)
                h = _pointwise_response(num, den, 1.0, T, grid)
            n_bad = int(np.count_nonzero(~np.isfinite(h)))
            if n_bad:
                table.failures.append(f"{spec.id}: pole on grid at {n_bad} points")
        except _SOLVER_ERRORS as exc:
            table.failures.append(f"{spec.id}: {exc}")
            h = np.full(len(grid.omegas), complex(math.nan, math.nan))
        per_method.append(_log_and_phase(h))
    ln_ideal, ph_ideal = ideal.ln_magnitude, ideal.phase
    for i, w in enumerate(grid.omegas):
        row = [w, ln_ideal[i], ph_ideal[i]]
        for ln_mag, phase in per_method:
            row += [ln_mag[i], phase[i]]
        table.add(row)
    for f in table.failures:
        table.meta.append(f"error {f}")
    return table


COMPARE_COLUMNS = [
    "method",
    "T",
    "steps",
    "max_abs_error",
    "rmse",
    "final_value_error",
    "diverged",
    "unstable_pole_count",
    "nonminphase_zero_count",
    "max_pole_radius",
    "error",
]


@dataclass
class CompareCell:
    method: str
    T: float
    steps: int
    metrics: ErrorMetrics | None = None
    unstable_pole_count: int | None = None
    nonminphase_zero_count: int | None = None
    max_pole_radius: float | None = None
    error: str | None = None

    def row(self) -> list[Any]:
        m = self.metrics
        return [
            self.method,
            self.T,
            self.steps,
            None if m is None else m.max_abs_error,
            None if m is None else m.rmse,
            None if m is None else m.final_value_error,
            None if m is None else m.diverged,
            self.unstable_pole_count,
            self.nonminphase_zero_count,
            self.max_pole_radius,
            self.error,
        ]


def compare_cell(model: FdeModel, spec: MethodSpec, T: float, steps: int, ref: np.ndarray) -> CompareCell:
    cell = CompareCell(spec.id, T, steps)
    try:
        y = run_method(model, spec, T, steps)
        cell.metrics = error_metrics(y, ref, model)
        approx = make_approximant(spec.method, model.delta, T, spec.param)
        num, den = closed_loop_tf(model, approx)
        if den.degree <= MAX_ROOT_DEGREE:
            report = stability_report(num, den)
            cell.unstable_pole_count = report.unstable_pole_count
            cell.nonminphase_zero_count = report.nonminphase_zero_count
            cell.max_pole_radius = report.max_pole_radius
    except _SOLVER_ERRORS as exc:
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


def compare_cells(config: ComparisonConfig) -> list[CompareCell]:
    """One cell per (method, T), ordered by method then by the sweep order."""
    sweep = config.sweep_T or (config.T,)
    refs = {T: analytic_series(config.model, T, config.steps_for(T)) for T in sweep}
    return [
        compare_cell(config.model, spec, T, config.steps_for(T), refs[T])
        for spec in config.methods
        for T in sweep
    ]


def compare_table(config: ComparisonConfig) -> Table:
    sweep = config.sweep_T or (config.T,)
    meta = _header("compare", config) + [
        "sweep_T=" + ",".join(repr(t) for t in sweep) + f" t_end={config.t_end!r}"
    ]
    table = Table(list(COMPARE_COLUMNS), meta=meta)
    for cell in compare_cells(config):
        table.add(cell.row())
        if cell.error:
            table.failures.append(f"{cell.method} T={cell.T!r}: {cell.error}")
    return table
