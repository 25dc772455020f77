"""Closed-form weak-probe coherences and the numeric linear-response oracle they are checked against.

The closed forms assume gamma1 = gamma2 = 1 and write P (or p) for cos(theta), Oc for the coupling Rabi frequency,
Op for the probe Rabi frequency, Dp and Dc for the detunings and s = Oc^2.
Every expression was typeset across several lines; each is rebuilt here as one numerator
over one denominator. Transcription choices are noted next to the affected term.
"""
import logging
from dataclasses import dataclass, replace

import numpy as np

from sgc_localization.data import DENOMINATOR_FLOOR, AppendixReading
from sgc_localization.dynamics import (
    DensityMatrix,
    InvalidParameters,
    SystemParams,
    build_liouvillian,
    idx,
    solve_trace_constrained,
    steady_state,
)


class DenominatorUnderflow(ArithmeticError):
    """Raised when a closed-form denominator is too close to zero to evaluate."""


@dataclass(frozen=True)
class ZeroOrderCoherences:
    rho12_0: complex
    rho13_0: complex
    rho23_0: complex


@dataclass(frozen=True)
class AppendixCoefficients:
    a0: complex
    a1: complex
    a2: complex
    a3: complex
    a4: complex
    a5: complex
    a6: complex
    a7: complex
    a8: complex
    a9: complex
    a10: complex


@dataclass(frozen=True)
class PerturbativeComparison:
    analytic: complex
    numeric: complex
    abs_error: float
    rel_error: float


def _warn_unit_decay(params: SystemParams):
    if params.gamma1 != 1.0 or params.gamma2 != 1.0:
        logging.warning(
            f"Closed forms assume gamma1 = gamma2 = 1, got {params.gamma1}, {params.gamma2}; decay rates are ignored."
        )


def _divide(numerator: complex, denominator: complex, name: str) -> complex:
    if abs(denominator) < DENOMINATOR_FLOOR:
        raise DenominatorUnderflow(f"Denominator of {name} is {abs(denominator):.3e}, below {DENOMINATOR_FLOOR:.0e}.")
    return numerator / denominator


def zero_order_coherences(params: SystemParams) -> ZeroOrderCoherences:
    """Evaluate the closed-form zero-order coherences rho12, rho13 and rho23 (probe field off).

    :param params: Physical inputs; omega_p is not used.
    :raises DenominatorUnderflow: A denominator falls below DENOMINATOR_FLOOR.
    """
    _warn_unit_decay(params)
    P, oc, dp, dc = params.p, params.omega_c, params.delta_p, params.delta_c
    s = oc**2
    d2 = 2j + dc - dp

    # [(-i+Dp)(-2i-Dc+Dp)Oc - Oc^3] / [(2i+Dc-Dp)[P^2+(Dp-i)(Dc-i)] + (Dc-i)Oc^2]
    rho12 = _divide(
        (-1j + dp) * (-2j - dc + dp) * oc - oc**3,
        d2 * (P**2 + (dp - 1j) * (dc - 1j)) + (dc - 1j) * s,
        "rho12_0",
    )
    # P Oc (2i+Dc-Dp) / [(2i+Dc-Dp)[iP^2 - i + Dc(1+iDp) + Dp] + (1+iDc)Oc^2]
    rho13 = _divide(
        P * oc * d2,
        d2 * (1j * P**2 - 1j + dc * (1 + 1j * dp) + dp) + (1 + 1j * dc) * s,
        "rho13_0",
    )
    # iP Oc^2 / [(2i+Dc-Dp)[P^2+(-i+Dp)(-i+Dc)] + (-i+Dc)Oc^2]; the "(-i" and "+Dc)" halves are split across rows.
    rho23 = _divide(
        1j * P * s,
        d2 * (P**2 + (-1j + dp) * (-1j + dc)) + (-1j + dc) * s,
        "rho23_0",
    )
    return ZeroOrderCoherences(rho12_0=rho12, rho13_0=rho13, rho23_0=rho23)


def appendix_coefficients(
    params: SystemParams, reading: AppendixReading = AppendixReading.PRINTED
) -> AppendixCoefficients:
    """Evaluate the eleven coefficients A0..A10 of the first-order probe coherence.

    :param params: Physical inputs; omega_p enters A7 only.
    :param reading: PRINTED keeps every term as printed, with brackets balanced;
        REPAIRED also applies the two repairs listed at A7 and A9.
    """
    _warn_unit_decay(params)
    P, oc, op, dp, dc = params.p, params.omega_c, params.omega_p, params.delta_p, params.delta_c
    s = oc**2
    # Recurring bracket [Oc^2 + (i+Dp)(-2i+Dc-Dp)].
    bracket = s + (1j + dp) * (-2j + dc - dp)

    a0 = (
        P**4 * (8j + dc - 3 * dp)
        + s * (5j + dc - 2 * dp) * bracket
        + P**2 * ((1j + dp) * (1j + dc) * (8j + dc - 3 * dp) + 2 * s * (5j + dc - 4 * dp))
    )
    a1 = 2j * P**2 * ((8j + dc - 3 * dp) * (P**2 + (1j + dp) * (1j + dc)) + s * (4j + dc - 3 * dp))
    a2 = (
        2 * P**4
        - bracket * (s + (1j + dc) * (-3j + dp))
        + P**2 * (4 + s + dp * (1j + dp) + dc * (5j + dp))
    )
    a3 = (
        -1j * P**4 * (-4j + dc - 3 * dp)
        + 2 * bracket * (1 + dc**2 + 2 * s)
        - 1j * P**2 * (
            dp * (5 - 3j * dp)
            + dc**2 * (3j + dp)
            + s * (2j - 3 * dp)
            + dc * (9 - dp * (8j + 3 * dp) + s)
        )
    )
    a4 = (
        8j * P**4
        + P**2 * (-2j * (8 + dc * (-4j + dc) - 4j * dp - 6 * dc * dp + dp**2) + s * (6j + dc - 5 * dp))
        + bracket * (2 * (1 - 1j * dc) * (2j + dc - dp) + s * (3j + dc - 2 * dp))
    )
    a5 = (
        P**4 * (4j + dc - 3 * dp)
        + bracket * (2 * (1j + dc) * (3 + 1j * dp) + s * (7j + dc - 2 * dp))
        + P**2 * (
            dc**2 * (1j + dp)
            + dp * (-3 - 5j * dp - 8 * s)
            + 8j * (-2 + s)
            + dc * (1 + (4j - 3 * dp) * dp + 2 * s)
        )
    )
    a6 = P**2 * (6j + dc - 5 * dp) + (5j + dc - 2 * dp) * ((-2j + dc - dp) * (1j + dp) + s)

    # A7 mixes Op-free terms with Op-bearing ones although the first-order formula factors Op out; kept as printed.
    saturation = 1 + dc**2 + 2 * s
    probe_term = ((4 + (dc - dp) ** 2) * (1j + dp) + (2j + dc - dp) * s) * op
    if reading is AppendixReading.REPAIRED:
        # Printed "+(1+Dc^2+2Oc^2)+{...}Op" read as the product (1+Dc^2+2Oc^2){...}Op.
        saturation_terms = saturation * probe_term
    else:
        saturation_terms = saturation + probe_term
    a7 = (
        -4j * P**5 * oc
        + 1j * P**3 * (8 + dc**2 + dp * (-4j + dp) - 2 * dc * (2j + 3 * dp)) * oc
        + P * oc * ((2 + 1j * dc - 1j * dp + 1j * s) * (1j + dp)) * ((1j + dc) * (2j + dc - dp) + s)
        + saturation_terms
        # Printed "[8+Dc)^2" balanced as "[8+Dc^2".
        + P**2
        * (
            (dc - 1j) * (8 + dc**2 + dp * (dp - 4j) - 2 * dc * (2j + 3 * dp))
            - (12j + 5 * dc + (3 + 2j * dp) * dp) * s
            - 1j * oc**4
        )
        * op
        + 2 * P**4 * (-2 * dc + 1j * (2 + s)) * op
    )

    # "(6+8Dp)^2" and "(6+Dp)^2" kept as printed.
    a8 = (
        -2 * dc**3 * dp
        + 6 * (2 + dp) ** 2
        - 2 * dc * dp * (6 + dp) ** 2
        + dc**2 * (6 + 8 * dp) ** 2
        + 2 * (4 - (dc - 4 * dp) * (dc + dp)) * s
        + oc**4
    )

    if reading is AppendixReading.REPAIRED:
        # "(1+Dp)^2)" read as (1+Dp^2).
        probe_width = 1 + dp**2
    else:
        # "(1+Dp)^2)" with the stray closing bracket dropped.
        probe_width = (1 + dp) ** 2
    a9 = (4 + (dc - dp) ** 2) * probe_width + 2 * (2 + (dc - dp) * dp) * s + oc**4
    a10 = 12 + dc**2 - 10 * dc * dp + dp**2 - 4 * s

    return AppendixCoefficients(
        *(complex(value) for value in (a0, a1, a2, a3, a4, a5, a6, a7, a8, a9, a10))
    )


def first_order_rho13_analytic(
    params: SystemParams, reading: AppendixReading = AppendixReading.REPAIRED
) -> complex:
    """Assemble the probe coherence rho13 through first order in the probe Rabi frequency.

    The two-row fraction is read as one numerator over one denominator:
    {-4A7 + Op{-A1 rho12 + Oc[-i(A0-A5)P rho31 - 2A2 P rho13 + 2A3 rho21 + 2P A6 Oc rho23] - 2P A4 rho32}}
    / {4[-P^2 A8 + A10 P^4 - 4P^6 + A9(1+Dc^2+2Oc^2)]}, with zero-order coherences throughout.

    :param params: Physical inputs, omega_p > 0.
    :param reading: Which reading of the appendix coefficients to use.
    :raises DenominatorUnderflow: A denominator falls below DENOMINATOR_FLOOR.
    """
    if params.omega_p <= 0:
        raise InvalidParameters("The first-order probe coherence needs omega_p > 0.")
    zero = zero_order_coherences(params)
    a = appendix_coefficients(params, reading)
    P, oc, op, dc = params.p, params.omega_c, params.omega_p, params.delta_c
    rho12, rho13, rho23 = zero.rho12_0, zero.rho13_0, zero.rho23_0
    rho21, rho31, rho32 = rho12.conjugate(), rho13.conjugate(), rho23.conjugate()

    numerator = -4 * a.a7 + op * (
        -a.a1 * rho12
        + oc
        * (
            -1j * (a.a0 - a.a5) * P * rho31
            - 2 * a.a2 * P * rho13
            + 2 * a.a3 * rho21
            + 2 * P * a.a6 * oc * rho23
        )
        - 2 * P * a.a4 * rho32
    )
    denominator = 4 * (-(P**2) * a.a8 + a.a10 * P**4 - 4 * P**6 + a.a9 * (1 + dc**2 + 2 * oc**2))
    return _divide(numerator, denominator, "rho13")


def linear_response(params: SystemParams) -> tuple[DensityMatrix, np.ndarray]:
    """Split L = L0 + Op L1 and return the zero-order state and the first-order coefficient matrix.

    Solves L0 rho0 = 0 with unit trace, then L0 rho1 = -L1 rho0 with zero trace,
    so that rho = rho0 + Op rho1 + O(Op^2). The stored omega_p is not used.

    :raises DegenerateSteadyState: The probe-free Liouvillian has no unique steady state.
    """
    free = build_liouvillian(replace(params, omega_p=0.0))
    probe = build_liouvillian(replace(params, omega_p=1.0)).matrix - free.matrix
    rho0 = steady_state(free).rho
    rhs = -(probe @ rho0.vector())
    rhs[idx(1, 1)] = 0.0
    rho1 = solve_trace_constrained(free.matrix, rhs).reshape(3, 3)
    return rho0, 0.5 * (rho1 + rho1.conj().T)


def first_order_rho13_numeric(params: SystemParams) -> complex:
    """Return r1, the derivative of rho13 with respect to the probe Rabi frequency at zero probe."""
    _, rho1 = linear_response(params)
    return complex(rho1[0, 2])


def compare_analytic_numeric(
    params: SystemParams, reading: AppendixReading = AppendixReading.REPAIRED
) -> PerturbativeComparison:
    """Compare the closed-form rho13 with the numeric rho13(0) + Op r1 at the same point."""
    analytic = first_order_rho13_analytic(params, reading)
    rho0, rho1 = linear_response(params)
    numeric = complex(rho0.rho[0, 2] + params.omega_p * rho1[0, 2])
    abs_error = abs(analytic - numeric)
    return PerturbativeComparison(
        analytic=analytic,
        numeric=numeric,
        abs_error=abs_error,
        rel_error=abs_error / max(abs(numeric), 1e-300),
    )


def zero_order_deviation(params: SystemParams) -> float:
    """Return the largest gap between the closed-form zero-order coherences and the probe-free steady state."""
    zero = zero_order_coherences(params)
    rho0 = steady_state(build_liouvillian(replace(params, omega_p=0.0))).rho
    pairs = ((zero.rho12_0, rho0.element(1, 2)), (zero.rho13_0, rho0.element(1, 3)), (zero.rho23_0, rho0.element(2, 3)))
    return max(abs(analytic - numeric) for analytic, numeric in pairs)


def quadratic_remainder(params: SystemParams) -> float:
    """Return |rho13 - rho13(0) - Op r1| / Op^2 for the full steady state at the stored omega_p."""
    if params.omega_p <= 0:
        raise InvalidParameters("The quadratic remainder needs omega_p > 0.")
    full = steady_state(build_liouvillian(params)).rho.element(1, 3)
    rho0, rho1 = linear_response(params)
    linear = rho0.element(1, 3) + params.omega_p * rho1[0, 2]
    return float(abs(full - linear) / params.omega_p**2)
