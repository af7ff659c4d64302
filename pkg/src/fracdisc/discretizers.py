"""Direct discretization of the fractional operator ``s^delta``.

Three constructions are provided:

* :func:`pse_approximant` -- finite-memory Grunwald-Letnikov (Euler rule)
  expansion, an FIR filter;
* :func:`muir_approximant` -- Muir recursion of the Tustin rule;
* :func:`cfe_approximant` -- continued fraction expansion of the Tustin or
  Al-Alaoui rule, computed as the equivalent diagonal Pade approximant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath
import numpy as np

from fracdisc.poly import Method, Polynomial, RationalApproximant

#: Largest CFE order accepted by :func:`cfe_approximant`.
MAX_CFE_ORDER = 9

# working precision (decimal digits) of the Pade solve
_PADE_DPS = 80
# |det| relative to the Hadamard bound below which the block is singular
_SINGULAR_RTOL = mpmath.mpf(10) ** -50
# tolerance on series agreement when a reduced block is accepted
_SERIES_RTOL = 1.0e-14


class DegenerateSystem(ArithmeticError):
    """The Pade linear system has no solution with a unit constant term."""

    def __init__(self, delta: float, order: int, detail: str = "") -> None:
        msg = f"degenerate Pade system for delta={delta!r}, order={order}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)
        self.delta = delta
        self.order = order


class GfKind(enum.Enum):
    Euler = "euler"
    Tustin = "tustin"
    AlAlaoui = "al-alaoui"


@dataclass(frozen=True)
class GeneratingFunction:
    """Generating function ``(K1 / (K2 T)) (1 - z^-1) / (1 + z^-1 / K2)``.

    The Euler rule has no denominator factor: it is ``(1 - z^-1) / T``.
    """

    kind: GfKind
    k1: float
    k2: float

    def __post_init__(self) -> None:
        expected = _GF_CONSTANTS[self.kind]
        if (self.k1, self.k2) != expected:
            raise ValueError(f"{self.kind.name} requires (k1, k2) = {expected}")

    @classmethod
    def of(cls, kind: GfKind | str) -> GeneratingFunction:
        kind = GfKind(kind) if isinstance(kind, str) else kind
        return cls(kind, *_GF_CONSTANTS[kind])

    @property
    def has_denominator(self) -> bool:
        return self.kind is not GfKind.Euler


_GF_CONSTANTS = {
    GfKind.Euler: (1.0, 1.0),
    GfKind.Tustin: (2.0, 1.0),
    GfKind.AlAlaoui: (8.0, 7.0),
}

EULER = GeneratingFunction.of(GfKind.Euler)
TUSTIN = GeneratingFunction.of(GfKind.Tustin)
AL_ALAOUI = GeneratingFunction.of(GfKind.AlAlaoui)


@dataclass(frozen=True)
class GlCoefficients:
    delta: float
    coeffs: tuple[float, ...]

    @property
    def memory_length(self) -> int:
        return len(self.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs)


def gl_binomials(delta: float, memory_length: int) -> GlCoefficients:
    """Grunwald-Letnikov weights ``b_j = (-1)^j binom(delta, j)``, ``j = 0..L``.

    Computed with ``b_j = (1 - (1 + delta) / j) b_{j-1}``, ``b_0 = 1``.
    """
    if memory_length < 1:
        raise ValueError(f"memory_length must be >= 1, got {memory_length}")
    b = np.empty(memory_length + 1)
    b[0] = 1.0
    for j in range(1, memory_length + 1):
        b[j] = (1.0 - (1.0 + delta) / j) * b[j - 1]
    return GlCoefficients(float(delta), tuple(float(x) for x in b))


def _check_period(T: float) -> None:
    if not T > 0:
        raise ValueError(f"sample period T must be positive, got {T}")


def pse_approximant(delta: float, T: float, memory_length: int) -> RationalApproximant:
    """FIR approximation ``T^-delta * sum_j b_j z^-j`` of ``s^delta``."""
    _check_period(T)
    b = gl_binomials(delta, memory_length)
    return RationalApproximant(
        gain=T ** (-delta),
        num=Polynomial(b.coeffs),
        den=Polynomial([1.0]),
        order=memory_length,
        delta=float(delta),
        sample_period=float(T),
        method=Method.PSE,
        k1=EULER.k1,
        k2=EULER.k2,
    )


def muir_polynomial(d: float, order: int) -> np.ndarray:
    """Muir polynomial ``A_n(z^-1, d)`` as ascending coefficients (length n + 1).

    ``A_0 = 1`` and ``A_n = A_{n-1} - c_n z^-n A_{n-1}(z)``, where ``c_n = d / n``
    for odd ``n`` and zero for even ``n``. The second term is the
    coefficient reversal of ``A_{n-1}`` padded to degree ``n``.
    """
    a = np.array([1.0])
    for k in range(1, order + 1):
        c = d / k if k % 2 else 0.0
        prev = np.zeros(k + 1)
        prev[: len(a)] = a
        a = prev - c * prev[::-1]
    return a


def muir_approximant(delta: float, T: float, order: int) -> RationalApproximant:
    """Muir recursion of the Tustin rule: ``(2/T)^delta A_n(+delta) / A_n(-delta)``."""
    _check_period(T)
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    return RationalApproximant(
        gain=(TUSTIN.k1 / (TUSTIN.k2 * T)) ** delta,
        num=Polynomial(muir_polynomial(delta, order)).canonical(),
        den=Polynomial(muir_polynomial(-delta, order)).canonical(),
        order=order,
        delta=float(delta),
        sample_period=float(T),
        method=Method.Muir,
        k1=TUSTIN.k1,
        k2=TUSTIN.k2,
    )


def _binomial_series(exponent, scale, num_terms: int) -> list:
    # coefficients of (1 + scale*x)^exponent; works for float and mpf alike
    out = [exponent * 0 + 1]
    for j in range(1, num_terms):
        out.append(out[-1] * (exponent - j + 1) / j * scale)
    return out


def _convolve_truncated(a: list, b: list, n: int) -> list:
    return [sum(a[j] * b[i - j] for j in range(i + 1)) for i in range(n)]


def _gf_series(gf: GeneratingFunction, delta, num_terms: int) -> list:
    numer = _binomial_series(delta, -1, num_terms)
    if not gf.has_denominator:
        return numer
    denom = _binomial_series(-delta, 1 / (delta * 0 + gf.k2), num_terms)
    return _convolve_truncated(numer, denom, num_terms)


def gf_power_series(gf: GeneratingFunction, delta: float, num_terms: int) -> list[float]:
    """First Maclaurin coefficients (in ``x = z^-1``) of ``((1-x)/(1+x/K2))^delta``.

    For the Euler rule the series is that of ``(1 - x)^delta``.
    """
    if num_terms < 1:
        raise ValueError(f"num_terms must be >= 1, got {num_terms}")
    if not gf.k2 > 0:
        raise ValueError("k2 must be positive")
    with mpmath.workdps(40):
        series = _gf_series(gf, mpmath.mpf(delta), num_terms)
        return [float(c) for c in series]


def _pade_block(c: list, m: int):
    """Solve the ``[m/m]`` block with ``q_0 = 1``; ``None`` when singular."""
    if m == 0:
        return [c[0]], [mpmath.mpf(1)]
    M = mpmath.matrix(m, m)
    rhs = mpmath.matrix(m, 1)
    for r, i in enumerate(range(m + 1, 2 * m + 1)):
        for col, j in enumerate(range(1, m + 1)):
            M[r, col] = c[i - j] if i - j >= 0 else 0
        rhs[r] = -c[i]
    bound = mpmath.mpf(1)
    for r in range(m):
        bound *= mpmath.sqrt(sum(abs(M[r, col]) ** 2 for col in range(m)))
    if bound == 0 or abs(mpmath.det(M)) <= _SINGULAR_RTOL * bound:
        return None
    q = [mpmath.mpf(1)] + list(mpmath.lu_solve(M, rhs))
    p = [sum(q[j] * c[i - j] for j in range(i + 1)) for i in range(m + 1)]
    return p, q


def _series_defect(c: list, p: list, q: list, upto: int) -> float:
    # largest |coefficient| of q*c - p in degrees len(p)..upto, relative to max|c|
    scale = max(abs(x) for x in c) or 1
    worst = mpmath.mpf(0)
    for i in range(len(p), upto + 1):
        s = sum(q[j] * c[i - j] for j in range(min(i, len(q) - 1) + 1))
        worst = max(worst, abs(s))
    return float(worst / scale)


def pade_from_series(series: list, order: int, *, delta: float = float("nan")):
    """Diagonal ``[order/order]`` Pade approximant of a power series.

    ``series`` must hold at least ``2*order + 1`` coefficients (mpf or float).
    Returns ``(p, q)`` as float lists with ``q[0] == 1``. When the full block
    is singular because the series is itself a lower-degree rational, the
    largest smaller block reproducing the series through ``x^(2*order)`` is
    returned instead. Raises :class:`DegenerateSystem` otherwise.
    """
    if len(series) < 2 * order + 1:
        raise ValueError(f"need {2 * order + 1} series terms, got {len(series)}")
    with mpmath.workdps(_PADE_DPS):
        c = [mpmath.mpf(x) for x in series[: 2 * order + 1]]
        for m in range(order, -1, -1):
            block = _pade_block(c, m)
            if block is None:
                continue
            p, q = block
            if m == order:
                return [float(x) for x in p], [float(x) for x in q]
            if _series_defect(c, p, q, 2 * order) <= _SERIES_RTOL:
                return [float(x) for x in p], [float(x) for x in q]
            break
    raise DegenerateSystem(delta, order, "no Pade block matches the series")


def cfe_approximant(
    delta: float, T: float, order: int, gf: GeneratingFunction = TUSTIN
) -> RationalApproximant:
    """CFE of the Tustin or Al-Alaoui rule raised to ``delta``.

    The truncated continued fraction with ``p = q = order`` is the diagonal
    Pade approximant of ``((1 - x)/(1 + x/K2))^delta``; it is built by solving
    the Pade equations in extended precision. ``den`` is normalized to a unit
    constant term.
    """
    _check_period(T)
    if gf.kind is GfKind.Euler:
        raise ValueError("CFE is defined for the Tustin and Al-Alaoui rules only")
    if not 1 <= order <= MAX_CFE_ORDER:
        raise ValueError(f"order must be in [1, {MAX_CFE_ORDER}], got {order}")
    with mpmath.workdps(_PADE_DPS):
        series = _gf_series(gf, mpmath.mpf(delta), 2 * order + 1)
        p, q = pade_from_series(series, order, delta=delta)
    method = Method.CfeTustin if gf.kind is GfKind.Tustin else Method.CfeAlAlaoui
    return RationalApproximant(
        gain=(gf.k1 / (gf.k2 * T)) ** delta,
        num=Polynomial(p).canonical(),
        den=Polynomial(q).canonical(),
        order=order,
        delta=float(delta),
        sample_period=float(T),
        method=method,
        k1=gf.k1,
        k2=gf.k2,
    )


def make_approximant(method: Method | str, delta: float, T: float, order: int) -> RationalApproximant:
    """Dispatch on method; ``order`` is the memory length for PSE."""
    method = Method(method) if isinstance(method, str) else method
    if method is Method.PSE:
        return pse_approximant(delta, T, order)
    if method is Method.Muir:
        return muir_approximant(delta, T, order)
    if method is Method.CfeTustin:
        return cfe_approximant(delta, T, order, TUSTIN)
    return cfe_approximant(delta, T, order, AL_ALAOUI)
