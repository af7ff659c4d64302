"""Discrete approximations of the fractional operator s^delta and their comparison."""

from fracdisc.discretizers import (
    AL_ALAOUI,
    EULER,
    TUSTIN,
    DegenerateSystem,
    GeneratingFunction,
    GfKind,
    GlCoefficients,
    cfe_approximant,
    gf_power_series,
    gl_binomials,
    muir_approximant,
    pse_approximant,
)
from fracdisc.freqdomain import (
    FrequencyGrid,
    FrequencyResponse,
    PoleOnGrid,
    StabilityReport,
    bode_fde_analytic,
    bode_ideal_differentiator,
    freq_response_discrete,
    stability_report,
)
from fracdisc.mittleff import (
    ConvergenceFailure,
    DomainError,
    FdeModel,
    analytic_step_response,
    gamma_real,
    mittag_leffler,
)
from fracdisc.poly import (
    Method,
    Polynomial,
    RationalApproximant,
    ZeroPolynomial,
    poly_eval,
    poly_mul,
    poly_roots,
)
from fracdisc.timedomain import (
    SingularUpdate,
    StepInput,
    TimeSeries,
    closed_loop_tf,
    simulate_iir,
    simulate_pse,
)

__version__ = "0.1.0"
