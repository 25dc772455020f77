import math

import numpy as np
import pytest

from sgc_localization.config import parse_config
from sgc_localization.dynamics import SystemParams
from sgc_localization.field import scan_map

FIGURE_GRID = 101


def random_params(rng: np.random.Generator, **fixed) -> SystemParams:
    """Draw parameters from the ranges the solver is validated on."""
    values = {
        "gamma1": 1.0,
        "gamma2": 1.0,
        "omega_p": rng.uniform(0.0, 0.1),
        "omega_c": rng.uniform(-20.0, 20.0),
        "delta_p": rng.uniform(-40.0, 40.0),
        "delta_c": rng.uniform(-40.0, 40.0),
        "theta": rng.uniform(0.05, math.pi - 0.05),
    }
    values.update(fixed)
    return SystemParams(**values)


def random_density(rng: np.random.Generator) -> np.ndarray:
    """Return a random Hermitian, positive, unit-trace 3x3 matrix."""
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20160515)


@pytest.fixture(scope="session")
def figure_map():
    """Return a function that scans a preset on a square grid, caching each map for the session."""
    cache = {}

    def build(preset: str, n: int = FIGURE_GRID, **grid):
        key = (preset, n, tuple(sorted(grid.items())))
        if key not in cache:
            config = parse_config(preset=preset, overrides={"nx": n, "ny": n, **grid})
            cache[key] = scan_map(config.base, config.wave, config.grid)
        return cache[key]

    return build
