"""Analytic step response of ``a1 y^(delta) + a0 y = u`` via Mittag-Leffler functions."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import mpmath

#: Largest |z| accepted by :func:`mittag_leffler`.
ML_WINDOW = 40.0
#: Maximum number of series terms.
ML_MAX_TERMS = 400
#: Stop once the next term is below this fraction of the partial sum.
ML_STOP_RTOL = 1.0e-15
# partial sums smaller than this are treated as this large in the stopping test
_ML_STOP_FLOOR = 1.0e-2

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_STIRLING_SHIFT = 10.0
_GAMMA_MAX_ARG = 171.0

# B_{2k} / (2k (2k - 1)) for k = 1..8: the asymptotic series of log Gamma
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


class DomainError(ValueError):
    pass


class ConvergenceFailure(ArithmeticError):
    pass


def _stirling_correction(x: float) -> float:
    # sum_k B_2k / (2k(2k-1) x^(2k-1)), x >= 10: truncation below 1e-19
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return acc * inv


def _shift(x: float) -> tuple[float, float]:
    """Return ``(x + m, prod_{j<m} (x + j))`` with ``x + m >= 10``."""
    prod = 1.0
    while x < _STIRLING_SHIFT:
        prod *= x
        x += 1.0
    return x, prod


def log_gamma_real(x: float) -> float:
    """``log Gamma(x)`` for ``x > 0`` from the Stirling series after upward shifting."""
    if not x > 0:
        raise DomainError(f"log_gamma_real requires x > 0, got {x}")
    y, prod = _shift(x)
    lg = (y - 0.5) * math.log(y) - y + _LOG_SQRT_2PI + _stirling_correction(y)
    return lg - math.log(prod)


def gamma_real(x: float) -> float:
    """``Gamma(x)`` for ``0 < x <= 171``, relative accuracy about 1e-14."""
    if not x > 0:
        raise DomainError(f"gamma_real requires x > 0, got {x}")
    if x > _GAMMA_MAX_ARG:
        raise OverflowError(f"Gamma({x}) overflows double precision")
    y, prod = _shift(x)
    # y^(y-1/2) e^-y split in two halves so that neither factor overflows
    half = y ** (0.5 * (y - 0.5))
    g = half * math.exp(-y) * half
    g *= math.exp(_LOG_SQRT_2PI + _stirling_correction(y))
    return g / prod


def _log_max_term(alpha: float, beta: float, log_abs_z: float) -> float:
    best = -math.inf
    for k in range(ML_MAX_TERMS):
        best = max(best, k * log_abs_z - log_gamma_real(alpha * k + beta))
    return best


@functools.lru_cache(maxsize=64)
def _reciprocal_gammas(alpha: float, beta: float, dps: int) -> tuple:
    with mpmath.workdps(dps):
        a, b = mpmath.mpf(alpha), mpmath.mpf(beta)
        return tuple(mpmath.rgamma(a * k + b) for k in range(ML_MAX_TERMS))


def mittag_leffler(alpha: float, beta: float, z: float) -> float:
    """Two-parameter Mittag-Leffler function ``E_{alpha,beta}(z)`` for real ``z``.

    Sums ``z^k / Gamma(alpha k + beta)`` directly. The working precision is
    raised by the number of digits lost to cancellation, which is bounded by
    the largest term, so the result is accurate to about 1e-15 absolute for
    ``|z| <= ML_WINDOW``.
    """
    if not (alpha > 0 and beta > 0):
        raise DomainError(f"need alpha > 0 and beta > 0, got {alpha}, {beta}")
    if not abs(z) <= ML_WINDOW:
        raise DomainError(f"|z| = {abs(z)} is outside the validity window |z| <= {ML_WINDOW}")
    if z == 0.0:
        return 1.0 / gamma_real(beta) if beta <= _GAMMA_MAX_ARG else 0.0

    log_abs_z = math.log(abs(z))
    last = ML_MAX_TERMS - 1
    if last * log_abs_z - log_gamma_real(alpha * last + beta) > math.log(ML_STOP_RTOL):
        raise ConvergenceFailure(
            f"E_({alpha},{beta})({z}) needs more than {ML_MAX_TERMS} terms"
        )
    lost = max(0.0, _log_max_term(alpha, beta, log_abs_z) / math.log(10.0))
    dps = 30 + 5 * (int(lost) // 5 + 1)
    rg = _reciprocal_gammas(float(alpha), float(beta), dps)
    with mpmath.workdps(dps):
        zz = mpmath.mpf(z)
        power = mpmath.mpf(1)
        total = mpmath.mpf(0)
        for k in range(ML_MAX_TERMS):
            total += power * rg[k]
            power *= zz
            if k + 1 == ML_MAX_TERMS:
                break
            scale = max(abs(total), _ML_STOP_FLOOR)
            if abs(power * rg[k + 1]) < ML_STOP_RTOL * scale:
                return float(total)
        raise ConvergenceFailure(
            f"E_({alpha},{beta})({z}) did not converge in {ML_MAX_TERMS} terms"
        )


@dataclass(frozen=True)
class FdeModel:
    """Coefficients of ``a1 y^(delta)(t) + a0 y(t) = u(t)``."""

    a1: float
    a0: float
    delta: float

    def __post_init__(self) -> None:
        if self.a1 == 0:
            raise ValueError("a1 must be non-zero")
        if not 0 < self.delta <= 2:
            raise ValueError(f"delta must lie in (0, 2], got {self.delta}")

    @property
    def dc_gain(self) -> float:
        return 1.0 / self.a0


_INTEGER_ORDER_TOL = 1.0e-12


def analytic_step_response(model: FdeModel, t: float, *, closed_form: bool = True) -> float:
    """Unit-step response ``y(t) = t^delta / a1 * E_{delta,delta+1}(-(a0/a1) t^delta)``.

    For ``delta`` equal to 1 or 2 the exponential and cosine solutions are
    used unless ``closed_form`` is false.
    """
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    if t == 0:
        return 0.0
    a1, a0, d = model.a1, model.a0, model.delta
    if closed_form and a0 != 0:
        if abs(d - 1.0) <= _INTEGER_ORDER_TOL:
            return (1.0 - math.exp(-a0 / a1 * t)) / a0
        if abs(d - 2.0) <= _INTEGER_ORDER_TOL:
            return (1.0 - math.cos(math.sqrt(a0 / a1) * t)) / a0
    td = t**d
    return td / a1 * mittag_leffler(d, d + 1.0, -(a0 / a1) * td)
