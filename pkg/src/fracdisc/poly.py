"""Real polynomials and rational transfer functions in the delay variable z^-1.

Coefficients are stored in ascending powers of ``z^-1``: ``coeffs[i]``
multiplies ``z^-i``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Relative threshold below which trailing coefficients are dropped.
TRIM_RTOL = 1.0e-12


class ZeroPolynomial(ValueError):
    """Raised when an operation needs a polynomial that is not identically zero."""


def _trim(coeffs: Sequence[float], rtol: float = 0.0) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    if not c:
        return (0.0,)
    scale = max(abs(x) for x in c)
    if scale == 0.0:
        return (0.0,)
    tol = rtol * scale
    end = len(c)
    while end > 1 and abs(c[end - 1]) <= tol:
        end -= 1
    return tuple(c[:end])


@dataclass(frozen=True)
class Polynomial:
    """Polynomial ``sum_i coeffs[i] * z^-i`` with real coefficients.

    Construction drops exactly-zero trailing coefficients, and an all-zero
    list becomes ``(0.0,)``. :meth:`canonical` also drops trailing
    coefficients that are negligible relative to the largest one.
    """

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float]) -> None:
        object.__setattr__(self, "coeffs", _trim(list(coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.float64)

    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> float:
        return self.coeffs[i]

    def __call__(self, z_inv: complex) -> complex:
        return poly_eval(self, z_inv)

    def canonical(self) -> Polynomial:
        return Polynomial(_trim(self.coeffs, TRIM_RTOL))

    def scaled(self, factor: float) -> Polynomial:
        return Polynomial(factor * c for c in self.coeffs)


def as_polynomial(p: Polynomial | Sequence[float]) -> Polynomial:
    return p if isinstance(p, Polynomial) else Polynomial(p)


def poly_eval(p: Polynomial | Sequence[float], z_inv: complex) -> complex:
    """Evaluate ``p`` at the point ``z^-1 = z_inv`` with Horner's scheme."""
    coeffs = as_polynomial(p).coeffs
    acc: complex = 0.0
    for c in reversed(coeffs):
        acc = acc * z_inv + c
    return acc


def poly_eval_many(p: Polynomial | Sequence[float], z_inv: np.ndarray) -> np.ndarray:
    """Vectorized :func:`poly_eval` over an array of points."""
    coeffs = as_polynomial(p).coeffs
    z_inv = np.asarray(z_inv)
    acc = np.zeros_like(z_inv, dtype=np.result_type(z_inv, np.float64))
    for c in reversed(coeffs):
        acc = acc * z_inv + c
    return acc


def poly_mul(a: Polynomial | Sequence[float], b: Polynomial | Sequence[float]) -> Polynomial:
    return Polynomial(np.convolve(as_polynomial(a).array, as_polynomial(b).array))


def poly_add(a: Polynomial | Sequence[float], b: Polynomial | Sequence[float]) -> Polynomial:
    x, y = as_polynomial(a).array, as_polynomial(b).array
    n = max(len(x), len(y))
    out = np.zeros(n)
    out[: len(x)] += x
    out[: len(y)] += y
    return Polynomial(out)


def poly_roots(p: Polynomial | Sequence[float]) -> list[complex]:
    """Roots in the ``z`` plane, i.e. the zeros of ``z^deg * p(z^-1)``.

    Companion-matrix eigenvalues of whichever of ``z^deg p(z^-1)`` and
    ``p(w)`` (then ``z = 1/w``) has the larger leading coefficient, followed by
    one Newton step per root in the variable where its powers stay bounded.
    A vanishing constant term puts roots at infinity; they are returned as
    ``inf``.
    """
    p = as_polynomial(p).canonical()
    if p.is_zero():
        raise ZeroPolynomial("cannot find the roots of the zero polynomial")
    if p.degree == 0:
        return []
    c = p.array
    lead = int(np.flatnonzero(c)[0])
    at_infinity = [complex(np.inf, 0.0)] * lead
    c = c[lead:]
    if len(c) == 1:
        return at_infinity
    with np.errstate(all="ignore"):
        found = _companion_roots(c)
        return at_infinity + [complex(_polish(c, r)) for r in found]


def _companion_roots(c: np.ndarray) -> np.ndarray:
    if abs(c[0]) >= abs(c[-1]):
        # descending powers of z are exactly the ascending powers of z^-1
        found = np.roots(c)
    else:
        w = np.roots(c[::-1])
        found = np.where(w == 0, complex(np.inf, 0.0), 1.0 / np.where(w == 0, 1.0, w))
    return found


def _polish(c: np.ndarray, r: complex) -> complex:
    if not np.isfinite(r):
        return r
    if abs(r) <= 1.0:
        f, df = np.polyval(c, r), np.polyval(np.polyder(c), r)
        step = f / df if df != 0 else 0.0
        cand = r - step
        better = abs(np.polyval(c, cand)) < abs(f)
    else:
        w = 1.0 / r
        rc = c[::-1]
        f, df = np.polyval(rc, w), np.polyval(np.polyder(rc), w)
        step = f / df if df != 0 else 0.0
        cand = 1.0 / (w - step) if w != step else r
        better = abs(np.polyval(rc, 1.0 / cand)) < abs(f)
    return cand if better and np.isfinite(cand) else r


def poly_from_roots(roots: Sequence[complex]) -> np.ndarray:
    """Monic coefficients (ascending in ``z^-1``) of ``prod (1 - r z^-1)``."""
    out = np.array([1.0 + 0.0j])
    for r in roots:
        out = np.convolve(out, [1.0, -r])
    return out


class Method(enum.Enum):
    """Discretization method that produced a :class:`RationalApproximant`."""

    PSE = "pse"
    Muir = "muir"
    CfeTustin = "cfet"
    CfeAlAlaoui = "cfea"


@dataclass(frozen=True)
class RationalApproximant:
    """Discrete approximation ``gain * num(z^-1) / den(z^-1)`` of ``s^delta``.

    ``delta > 0`` gives a differentiator, ``delta < 0`` an integrator.
    """

    gain: float
    num: Polynomial
    den: Polynomial
    order: int
    delta: float
    sample_period: float
    method: Method
    k1: float = field(default=1.0)
    k2: float = field(default=1.0)

    def __post_init__(self) -> None:
        if self.den.coeffs[0] == 0.0:
            raise ValueError("leading denominator coefficient must be non-zero")
        if not self.sample_period > 0:
            raise ValueError(f"sample period must be positive, got {self.sample_period}")
        if self.method is Method.PSE and self.den.coeffs != (1.0,):
            raise ValueError("PSE approximants are FIR: denominator must be 1")

    def __call__(self, z_inv: complex) -> complex:
        return self.gain * poly_eval(self.num, z_inv) / poly_eval(self.den, z_inv)
