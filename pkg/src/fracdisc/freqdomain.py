"""Bode characteristics: analytic references, discrete responses and pole/zero reports."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracdisc.mittleff import FdeModel
from fracdisc.poly import Polynomial, poly_eval_many, poly_roots

#: Roots with modulus at or above ``1 - UNIT_CIRCLE_TOL`` count as unstable.
UNIT_CIRCLE_TOL = 1.0e-9


class PoleOnGrid(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class FrequencyGrid:
    omegas: tuple[float, ...]

    def __post_init__(self) -> None:
        w = np.asarray(self.omegas)
        if w.size == 0 or np.any(w <= 0) or np.any(np.diff(w) <= 0):
            raise ValueError("frequencies must be positive and strictly increasing")

    @classmethod
    def logspace(cls, w_min: float, w_max: float, points: int = 200) -> FrequencyGrid:
        return cls(tuple(np.logspace(math.log10(w_min), math.log10(w_max), points).tolist()))

    @classmethod
    def default(cls, T: float, points: int = 200) -> FrequencyGrid:
        return cls.logspace(1.0e-2, 0.99 * math.pi / T, points)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.omegas)


@dataclass(frozen=True)
class FrequencyResponse:
    """Complex response on a grid.

    ``log_values`` optionally holds ``ln|H| + i arg H`` computed in closed form;
    when present it is reported verbatim instead of being recovered from
    ``values``.
    """

    grid: FrequencyGrid
    values: tuple[complex, ...]
    log_values: tuple[complex, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.values) != len(self.grid.omegas):
            raise ValueError("one response value per grid point required")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    @property
    def ln_magnitude(self) -> np.ndarray:
        if self.log_values is not None:
            return np.array(self.log_values).real
        return np.log(np.abs(self.array))

    @property
    def phase(self) -> np.ndarray:
        if self.log_values is not None:
            return np.array(self.log_values).imag
        return np.unwrap(np.angle(self.array))


@dataclass(frozen=True)
class StabilityReport:
    poles: tuple[complex, ...]
    zeros: tuple[complex, ...]
    unstable_pole_count: int
    nonminphase_zero_count: int

    @property
    def stable(self) -> bool:
        return self.unstable_pole_count == 0

    @property
    def max_pole_radius(self) -> float:
        return max((abs(p) for p in self.poles), default=0.0)


def bode_ideal_differentiator(Td: float, delta: float, grid: FrequencyGrid) -> FrequencyResponse:
    """``Td (i w)^delta`` built from its log form ``ln Td + delta ln w + i delta pi/2``."""
    if not Td > 0:
        raise ValueError("Td must be positive")
    ln_mag = math.log(Td) + delta * np.log(grid.array)
    log_h = ln_mag + 1j * np.full(ln_mag.shape, delta * math.pi / 2)
    return FrequencyResponse(grid, tuple(np.exp(log_h).tolist()), tuple(log_h.tolist()))


def fde_re_im(model: FdeModel, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``Re`` and ``Im`` parts with ``F(i w) = Re - i Im``."""
    a1, a0, d = model.a1, model.a0, model.delta
    wd = np.asarray(w, dtype=float) ** d
    x = a1 * wd * math.cos(d * math.pi / 2) + a0
    y = a1 * wd * math.sin(d * math.pi / 2)
    r2 = x * x + y * y
    return x / r2, y / r2


def bode_fde_analytic(model: FdeModel, grid: FrequencyGrid) -> FrequencyResponse:
    re, im = fde_re_im(model, grid.array)
    return FrequencyResponse(grid, tuple((re - 1j * im).tolist()))


def fde_direct(model: FdeModel, w: np.ndarray) -> np.ndarray:
    """``1 / (a1 (i w)^delta + a0)`` by complex arithmetic on the principal branch."""
    d = model.delta
    s_d = np.asarray(w, dtype=float) ** d * complex(math.cos(d * math.pi / 2), math.sin(d * math.pi / 2))
    return 1.0 / (model.a1 * s_d + model.a0)


def freq_response_discrete(
    num: Polynomial, den: Polynomial, gain: float, T: float, grid: FrequencyGrid
) -> FrequencyResponse:
    """``gain * num(e^{-i w T}) / den(e^{-i w T})`` on the grid."""
    w = grid.array
    if w[-1] > math.pi / T * (1 + 1e-12):
        raise ValueError(f"grid exceeds the Nyquist frequency pi/T = {math.pi / T}")
    z_inv = np.exp(-1j * w * T)
    d = poly_eval_many(den, z_inv)
    bad = np.flatnonzero(np.abs(d) <= 1e-14)
    if bad.size:
        raise PoleOnGrid(f"denominator vanishes at omega = {w[bad[0]]}")
    h = gain * poly_eval_many(num, z_inv) / d
    return FrequencyResponse(grid, tuple(h.tolist()))


def _outside(roots: list[complex]) -> int:
    return sum(1 for r in roots if abs(r) >= 1.0 - UNIT_CIRCLE_TOL)


def stability_report(num: Polynomial, den: Polynomial) -> StabilityReport:
    poles = poly_roots(den)
    zeros = [] if num.is_zero() else poly_roots(num)
    return StabilityReport(tuple(poles), tuple(zeros), _outside(poles), _outside(zeros))
