"""Optical Bloch equations of the V-type atom with spontaneously generated coherence.

States are numbered 1 (ground), 2 and 3 (excited). The density matrix is flattened row-major,
so element rho_ij (1-based) lives at index 3 * (i - 1) + (j - 1) of the 9-vector.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, lu_factor, lu_solve, svdvals

from sgc_localization.data import HERMITICITY_TOL, NULLSPACE_RTOL, RESIDUAL_TOL, TRACE_DRIFT_TOL

DIM = 3
TRACE_ROW = np.eye(DIM, dtype=complex).reshape(-1)
COHERENCES = ((1, 2), (1, 3), (2, 3))


class InvalidParameters(ValueError):
    """Raised when physical inputs violate their documented ranges."""


class SolverError(Exception):
    """Base class for failures of the steady-state and time-evolution solvers."""


class DegenerateSteadyState(SolverError):
    """Raised when the Liouvillian has more than one stationary state."""


class SingularSystem(SolverError):
    """Raised when the trace-constrained linear system cannot be solved."""


class StepTooLarge(SolverError):
    """Raised when the Runge-Kutta step is too coarse to keep the trace conserved."""


def idx(i: int, j: int) -> int:
    """Return the row-major index of rho_ij, with 1-based state labels."""
    return DIM * (i - 1) + (j - 1)


@dataclass(frozen=True)
class SystemParams:
    """Scalar inputs of the Bloch equations, all in units of gamma except the angle theta.

    The coupling Rabi frequency omega_c is signed, since it is the local value of a standing wave.
    """

    gamma1: float = 1.0
    gamma2: float = 1.0
    omega_p: float = 0.01
    omega_c: float = 0.0
    delta_p: float = 0.0
    delta_c: float = 0.0
    theta: float = 0.5 * math.pi

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "omega_p", "omega_c", "delta_p", "delta_c", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameters(f"{name} must be finite, got {getattr(self, name)}.")
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise InvalidParameters(f"Decay rates must be positive, got {self.gamma1}, {self.gamma2}.")
        if self.omega_p < 0:
            raise InvalidParameters(f"Probe Rabi frequency must be non-negative, got {self.omega_p}.")

    @property
    def p(self) -> float:
        """Alignment of the two dipole moments, cos(theta)."""
        return math.cos(self.theta)

    @property
    def sgc(self) -> float:
        """Cross-decay coupling p * sqrt(gamma1 * gamma2)."""
        return self.p * math.sqrt(self.gamma1 * self.gamma2)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (DIM, DIM):
            raise ValueError(f"Density matrix must be {DIM}x{DIM}, got shape {rho.shape}.")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def ground(cls) -> "DensityMatrix":
        """Return the atom in state |1>."""
        return cls.basis(1, 1)

    @classmethod
    def basis(cls, i: int, j: int) -> "DensityMatrix":
        """Return the matrix unit |i><j| (not a physical state unless i == j)."""
        rho = np.zeros((DIM, DIM), dtype=complex)
        rho[i - 1, j - 1] = 1.0
        return cls(rho)

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "DensityMatrix":
        return cls(np.asarray(vec).reshape(DIM, DIM))

    def vector(self) -> np.ndarray:
        return self.rho.reshape(-1)

    def element(self, i: int, j: int) -> complex:
        """Return rho_ij with 1-based state labels."""
        return complex(self.rho[i - 1, j - 1])

    def trace_error(self) -> float:
        return float(abs(np.trace(self.rho) - 1.0))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    def min_eigenvalue(self) -> float:
        hermitian = 0.5 * (self.rho + self.rho.conj().T)
        return float(np.min(np.linalg.eigvalsh(hermitian)))

    def is_valid(self, tol: float = 1e-12) -> bool:
        """Whether the matrix is Hermitian with unit trace and populations in [0, 1]."""
        populations = np.diag(self.rho)
        return (
            self.trace_error() <= tol
            and self.hermiticity_error() <= tol
            and bool(np.all(np.abs(populations.imag) <= tol))
            and bool(np.all((populations.real >= -1e-9) & (populations.real <= 1 + 1e-9)))
        )


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Linear generator of the density-matrix dynamics acting on the row-major 9-vector."""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (DIM * DIM, DIM * DIM):
            raise ValueError(f"Superoperator must be 9x9, got shape {matrix.shape}.")
        object.__setattr__(self, "matrix", matrix)

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        return DensityMatrix.from_vector(self.matrix @ rho.vector())


@dataclass(frozen=True)
class SteadyStateSolution:
    rho: DensityMatrix
    residual: float
    nullspace_dim: int = field(default=1)


def build_liouvillian(params: SystemParams) -> Superoperator:
    """Build the 9x9 generator of the five Bloch equations, their conjugates and the ground-state closure.

    The |3> population decays with gamma2. The ground population follows from trace conservation,
    rho11' = -(rho22' + rho33').

    :param params: Physical inputs, including the local coupling Rabi frequency.
    :return: Superoperator L with d vec(rho)/dt = L vec(rho).
    """
    g1, g2 = params.gamma1, params.gamma2
    oc, op = params.omega_c, params.omega_p
    dp, dc = params.delta_p, params.delta_c
    sgc = params.sgc
    m = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)

    # rho22' = -2 g1 rho22 + i Oc (rho12 - rho21) - p sqrt(g1 g2) (rho23 + rho32)
    r = idx(2, 2)
    m[r, idx(2, 2)] += -2.0 * g1
    m[r, idx(1, 2)] += 1j * oc
    m[r, idx(2, 1)] += -1j * oc
    m[r, idx(2, 3)] += -sgc
    m[r, idx(3, 2)] += -sgc

    # rho33' = -2 g2 rho33 + i Op (rho13 - rho31) - p sqrt(g1 g2) (rho23 + rho32)
    r = idx(3, 3)
    m[r, idx(3, 3)] += -2.0 * g2
    m[r, idx(1, 3)] += 1j * op
    m[r, idx(3, 1)] += -1j * op
    m[r, idx(2, 3)] += -sgc
    m[r, idx(3, 2)] += -sgc

    # rho12' = -(g1 + i Dc) rho12 - p sqrt(g1 g2) rho13 + i Oc (rho22 - rho11) + i Op rho32
    r = idx(1, 2)
    m[r, idx(1, 2)] += -(g1 + 1j * dc)
    m[r, idx(1, 3)] += -sgc
    m[r, idx(2, 2)] += 1j * oc
    m[r, idx(1, 1)] += -1j * oc
    m[r, idx(3, 2)] += 1j * op

    # rho13' = -p sqrt(g1 g2) rho12 - (g2 + i Dp) rho13 + i Oc rho23 + i Op (rho33 - rho11)
    r = idx(1, 3)
    m[r, idx(1, 2)] += -sgc
    m[r, idx(1, 3)] += -(g2 + 1j * dp)
    m[r, idx(2, 3)] += 1j * oc
    m[r, idx(3, 3)] += 1j * op
    m[r, idx(1, 1)] += -1j * op

    # rho23' = i Oc rho13 - i Op rho21 - i (Dp - Dc) rho23 - (g1 + g2) rho23 - p sqrt(g1 g2) (rho22 + rho33)
    r = idx(2, 3)
    m[r, idx(1, 3)] += 1j * oc
    m[r, idx(2, 1)] += -1j * op
    m[r, idx(2, 3)] += -1j * (dp - dc) - (g1 + g2)
    m[r, idx(2, 2)] += -sgc
    m[r, idx(3, 3)] += -sgc

    # rho_ji' = conj(rho_ij'), so the coefficient of rho_lk in row ji is conj of rho_kl's in row ij.
    for i, j in COHERENCES:
        for k in range(1, DIM + 1):
            for l in range(1, DIM + 1):  # noqa: E741
                m[idx(j, i), idx(l, k)] = np.conj(m[idx(i, j), idx(k, l)])

    m[idx(1, 1)] = -(m[idx(2, 2)] + m[idx(3, 3)])
    return Superoperator(m)


def residual(liouvillian: Superoperator, rho: DensityMatrix) -> float:
    """Return the largest absolute entry of L(rho)."""
    return float(np.max(np.abs(liouvillian.matrix @ rho.vector())))


def nullspace_dimension(liouvillian: Superoperator) -> int:
    """Count singular values below NULLSPACE_RTOL times the largest one."""
    singular = svdvals(liouvillian.matrix)
    if singular[0] == 0.0:
        return singular.size
    return int(np.count_nonzero(singular <= NULLSPACE_RTOL * singular[0]))


def solve_trace_constrained(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve matrix @ v = rhs after replacing the ground-population row with the trace row.

    :param matrix: 9x9 system; its first row is redundant by trace conservation.
    :param rhs: Right-hand side; rhs[0] sets the trace of the solution.
    :raises SingularSystem: The factorisation fails or yields a non-finite solution.
    """
    system = np.array(matrix, dtype=complex)
    system[0] = TRACE_ROW
    try:
        lu, piv = lu_factor(system)
        solution = lu_solve((lu, piv), rhs)
    except (LinAlgError, ValueError) as err:
        raise SingularSystem(f"Steady-state system could not be factorised: {err}") from err
    if np.any(np.diag(lu) == 0) or not np.all(np.isfinite(solution)):
        raise SingularSystem("Steady-state system is singular.")
    return solution


def steady_state(liouvillian: Superoperator) -> SteadyStateSolution:
    """Return the unique unit-trace density matrix annihilated by the Liouvillian.

    :param liouvillian: Generator built by build_liouvillian.
    :raises DegenerateSteadyState: The nullspace of L has more than one dimension.
    :raises SingularSystem: The trace-constrained system cannot be solved.
    """
    dim = nullspace_dimension(liouvillian)
    if dim > 1:
        raise DegenerateSteadyState(f"Liouvillian has a {dim}-dimensional nullspace, the steady state is not unique.")
    rhs = np.zeros(DIM * DIM, dtype=complex)
    rhs[0] = 1.0
    solution = solve_trace_constrained(liouvillian.matrix, rhs).reshape(DIM, DIM)
    rho = DensityMatrix(0.5 * (solution + solution.conj().T))
    res = residual(liouvillian, rho)
    if res > RESIDUAL_TOL:
        logging.warning(f"Steady-state residual {res:.3e} exceeds {RESIDUAL_TOL:.0e}.")
    return SteadyStateSolution(rho=rho, residual=res, nullspace_dim=dim)


def default_time_step(params: SystemParams) -> float:
    """Return the step that resolves the fastest oscillation set by detunings and coupling."""
    return 1e-3 / max(1.0, abs(params.delta_p), abs(params.delta_c), abs(params.omega_c))


def rk4_propagator(liouvillian: Superoperator, dt: float) -> np.ndarray:
    """Return the matrix advancing vec(rho) by one classical Runge-Kutta step of size dt.

    For a linear system the four stages collapse to I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24.
    """
    hl = dt * liouvillian.matrix
    identity = np.eye(hl.shape[0], dtype=complex)
    # k1..k4 of one step, written on the identity so every state takes the same update.
    k1 = hl
    k2 = hl @ (identity + 0.5 * k1)
    k3 = hl @ (identity + 0.5 * k2)
    k4 = hl @ (identity + k3)
    return identity + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def time_evolve(
    params: SystemParams, rho0: DensityMatrix, t_final: float, dt: float | None = None
) -> DensityMatrix:
    """Integrate rho' = L(rho) with fixed-step classical fourth-order Runge-Kutta.

    The step is shrunk so that a whole number of steps lands on t_final.

    :param params: Physical inputs.
    :param rho0: Initial state.
    :param t_final: Integration time in units of 1/gamma.
    :param dt: Requested step, default_time_step(params) when omitted.
    :return: State at t_final.
    :raises StepTooLarge: The trace drifted by more than TRACE_DRIFT_TOL or the state lost
        Hermiticity beyond HERMITICITY_TOL.
    """
    if dt is None:
        dt = default_time_step(params)
    if not dt > 0 or not t_final >= 0:
        raise InvalidParameters(f"Need dt > 0 and t_final >= 0, got dt={dt}, t_final={t_final}.")
    if not rho0.is_valid(tol=1e-9):
        raise InvalidParameters("Initial state is not a unit-trace Hermitian density matrix.")
    if t_final == 0:
        return DensityMatrix(rho0.rho.copy())

    steps = max(1, math.ceil(t_final / dt))
    step = rk4_propagator(build_liouvillian(params), t_final / steps)
    with np.errstate(all="ignore"):
        vec = np.linalg.matrix_power(step, steps) @ rho0.vector()
    rho = DensityMatrix.from_vector(vec)
    if not np.all(np.isfinite(vec)):
        raise StepTooLarge(f"Integration diverged with {steps} steps of {t_final / steps:.3e}.")
    if (drift := rho.trace_error()) > TRACE_DRIFT_TOL:
        raise StepTooLarge(f"Trace drifted by {drift:.3e} with {steps} steps of {t_final / steps:.3e}.")
    if (asymmetry := rho.hermiticity_error()) > HERMITICITY_TOL:
        raise StepTooLarge(f"Hermiticity lost by {asymmetry:.3e} with {steps} steps of {t_final / steps:.3e}.")
    return rho
