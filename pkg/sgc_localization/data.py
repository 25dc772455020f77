import os
from enum import Enum
from pathlib import Path

# Where run and audit outputs go unless --out-dir is given.
default_out_dir = Path(os.environ.get("SGC_LOCALIZATION_OUT_DIR", "."))

# Numerical tolerances shared by the solver and the analysis code.
NULLSPACE_RTOL = 1e-9
RESIDUAL_TOL = 1e-10
TRACE_DRIFT_TOL = 1e-8
HERMITICITY_TOL = 1e-10
DENOMINATOR_FLOOR = 1e-12
ZERO_ORDER_FLAG_TOL = 1e-8


class FigurePreset(str, Enum):
    FIG2A = "fig2a"
    FIG2B = "fig2b"
    FIG2C = "fig2c"
    FIG2D = "fig2d"
    FIG4A = "fig4a"
    FIG4B = "fig4b"
    FIG4C = "fig4c"
    FIG4D = "fig4d"
    FIG6A = "fig6a"
    FIG6B = "fig6b"
    FIG6C = "fig6c"
    FIG6D = "fig6d"


class OutputKind(str, Enum):
    CSV = "csv"
    HEATMAP = "heatmap"
    PEAKS = "peaks"
    AUDIT = "audit"


class Quadrant(str, Enum):
    """Signs of (x, y) about the origin of the standing-wave cell."""

    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    IV = "IV"


class ExtremumKind(str, Enum):
    MAX = "max"
    MIN = "min"


# Two ways of reading the typeset coefficients A0..A10.
class AppendixReading(str, Enum):
    PRINTED = "printed"  # as printed, brackets balanced only
    REPAIRED = "repaired"  # additionally joins A7's (1+Dc^2+2Oc^2) as a factor and reads A9's (1+Dp)^2 as (1+Dp^2)


class Domain(str, Enum):
    HALF = "half"
    FULL = "full"
