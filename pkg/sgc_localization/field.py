"""Standing-wave coupling field and 2-D scans of the probe absorption over atom position."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Any

import numpy as np

from sgc_localization.dynamics import (
    InvalidParameters,
    SolverError,
    SystemParams,
    build_liouvillian,
    steady_state,
)
from sgc_localization.util import is_odd


class ScanPointError(SolverError):
    """Raised when the steady-state solve fails at one position of a scan."""

    def __init__(self, x: float, y: float, message: str):
        super().__init__(f"At (x, y) = ({x:.9g}, {y:.9g}): {message}")
        self.x = x
        self.y = y


@dataclass(frozen=True)
class StandingWaveSpec:
    """Two orthogonal standing waves; wave vectors in units of 2 pi / lambda, phases in radians."""

    omega0: float = 10.0
    kappa1: float = 1.0
    kappa2: float = 1.0
    delta_phase: float = 0.0
    eta_phase: float = 0.0

    def __post_init__(self):
        if not self.omega0 >= 0:
            raise InvalidParameters(f"Standing-wave amplitude must be non-negative, got {self.omega0}.")
        if not (self.kappa1 > 0 and self.kappa2 > 0):
            raise InvalidParameters(f"Wave vectors must be positive, got {self.kappa1}, {self.kappa2}.")


@dataclass(frozen=True)
class GridSpec:
    """Sample positions in units of lambda; odd counts put the axes on nodes of a symmetric range."""

    x_min: float = -0.5
    x_max: float = 0.5
    y_min: float = -0.5
    y_max: float = 0.5
    nx: int = 201
    ny: int = 201

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise InvalidParameters(
                f"Grid ranges must be increasing, got x [{self.x_min}, {self.x_max}], y [{self.y_min}, {self.y_max}]."
            )
        for name in ("nx", "ny"):
            count = getattr(self, name)
            if count < 3 or not is_odd(count):
                raise InvalidParameters(f"{name} must be odd and at least 3, got {count}.")

    @classmethod
    def full_domain(cls, n: int = 201) -> "GridSpec":
        """One wavelength per axis, [-lambda/2, lambda/2]."""
        return cls(-0.5, 0.5, -0.5, 0.5, n, n)

    @classmethod
    def half_domain(cls, n: int = 201) -> "GridSpec":
        """Half a wavelength per axis, [-lambda/4, lambda/4]."""
        return cls(-0.25, 0.25, -0.25, 0.25, n, n)

    @property
    def xs(self) -> np.ndarray:
        return _axis(self.x_min, self.x_max, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return _axis(self.y_min, self.y_max, self.ny)

    @property
    def steps(self) -> tuple[float, float]:
        return (self.x_max - self.x_min) / (self.nx - 1), (self.y_max - self.y_min) / (self.ny - 1)

    def is_symmetric(self) -> bool:
        """Whether both ranges are mirror images about zero."""
        return self.x_min == -self.x_max and self.y_min == -self.y_max


def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    values = np.linspace(lo, hi, n)
    if lo == -hi:
        # Exact mirror pairs, so x and -x land on the same solver inputs up to sign.
        values = 0.5 * (values - values[::-1])
    return values


@dataclass(frozen=True, eq=False)
class LocalizationMap:
    """Im[chi]/alpha sampled on a grid; values[ix, iy] belongs to (xs[ix], ys[iy])."""

    grid: GridSpec
    values: np.ndarray
    params_snapshot: dict[str, Any]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(f"Map shape {values.shape} does not match grid ({self.grid.nx}, {self.grid.ny}).")
        if not np.all(np.isfinite(values)):
            raise ValueError("Map contains non-finite values.")
        object.__setattr__(self, "values", values)


def standing_wave_rabi(x: float, y: float, spec: StandingWaveSpec) -> float:
    """Return the coupling Rabi frequency Omega0 [sin(kappa1 x + delta) + sin(kappa2 y + eta)] at (x, y).

    :param x: Position in units of lambda.
    :param y: Position in units of lambda.
    :param spec: Standing-wave amplitude, wave vectors and phases.
    """
    phase_x = 2.0 * math.pi * spec.kappa1 * x + spec.delta_phase
    phase_y = 2.0 * math.pi * spec.kappa2 * y + spec.eta_phase
    return spec.omega0 * (math.sin(phase_x) + math.sin(phase_y))


def susceptibility_at(base: SystemParams, wave: StandingWaveSpec, x: float, y: float) -> float:
    """Return Im[rho13 / Omega_p], the probe absorption in units of alpha, for an atom at (x, y).

    The coupling Rabi frequency of base is replaced by the local standing-wave value.

    :raises ScanPointError: The steady-state solve failed at this position.
    """
    if base.omega_p <= 0:
        raise InvalidParameters("The susceptibility needs a probe field, omega_p > 0.")
    params = replace(base, omega_c=standing_wave_rabi(x, y, wave))
    try:
        solution = steady_state(build_liouvillian(params))
    except SolverError as err:
        raise ScanPointError(x, y, str(err)) from err
    return solution.rho.element(1, 3).imag / params.omega_p


def scan_map(
    base: SystemParams, wave: StandingWaveSpec, grid: GridSpec, workers: int = 1
) -> LocalizationMap:
    """Evaluate susceptibility_at on every node of the grid.

    Rows are independent, so with workers > 1 they are spread over a thread pool; each row writes
    its own slice and the result does not depend on scheduling.

    :param base: Physical inputs; omega_c is ignored.
    :param wave: Standing-wave specification.
    :param grid: Sample positions.
    :param workers: Number of threads.
    :raises ScanPointError: The first failing row, in row order, aborts the scan.
    """
    xs, ys = grid.xs, grid.ys
    values = np.empty((grid.nx, grid.ny))

    def fill_row(ix: int):
        x = float(xs[ix])
        values[ix, :] = [susceptibility_at(base, wave, x, float(y)) for y in ys]

    logging.info(f"Scanning {grid.nx}x{grid.ny} nodes with {workers} worker(s).")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill_row, range(grid.nx)))
    else:
        for ix in range(grid.nx):
            fill_row(ix)
    logging.info("Scan finished.")

    snapshot = {"base": asdict(base), "wave": asdict(wave), "grid": asdict(grid)}
    snapshot["base"].pop("omega_c")
    return LocalizationMap(grid=grid, values=values, params_snapshot=snapshot)
