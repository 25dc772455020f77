"""Writers for maps, peaks and the closed-form audit.

CSV rows run y-outer, x-inner with nine significant digits. Heatmaps are binary P6 pixmaps with a
blue-white-red ramp anchored at zero; the top pixel row is the largest y.
"""
import csv
from dataclasses import replace
from typing import IO, Iterable

import numpy as np

from sgc_localization.analysis import PeakSet, QuadrantSummary, quadrant_of
from sgc_localization.analytics import DenominatorUnderflow, compare_analytic_numeric, zero_order_deviation
from sgc_localization.config import RunConfig
from sgc_localization.data import ZERO_ORDER_FLAG_TOL, AppendixReading
from sgc_localization.dynamics import SolverError, SystemParams
from sgc_localization.field import LocalizationMap, standing_wave_rabi
from sgc_localization.util import format_sig

CSV_HEADER = ("x", "y", "im_chi")
AUDIT_COLUMNS = (
    "point",
    "omega_c",
    "delta_p",
    "delta_c",
    "theta",
    "analytic",
    "numeric",
    "rel_error",
    "rel_error_printed",
    "zero_order_dev",
    "flag",
)


def export_csv(local_map: LocalizationMap, sink: IO[str]):
    """Write the map as ``x,y,im_chi`` rows, the (x_min, y_min) node first."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    xs, ys = local_map.grid.xs, local_map.grid.ys
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            writer.writerow((format_sig(float(x)), format_sig(float(y)), format_sig(float(local_map.values[ix, iy]))))


def load_csv(source: IO[str]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a map written by export_csv.

    :return: Axis positions xs, ys and values indexed [ix, iy].
    :raises ValueError: The header or the row layout is not the export layout.
    """
    reader = csv.reader(source)
    if tuple(next(reader, ())) != CSV_HEADER:
        raise ValueError(f"Expected header {','.join(CSV_HEADER)}.")
    rows = np.array([[float(cell) for cell in row] for row in reader if row], dtype=float)
    if rows.size == 0:
        raise ValueError("No data rows.")
    ys = np.unique(rows[:, 1])
    nx = rows.shape[0] // ys.size
    if nx * ys.size != rows.shape[0]:
        raise ValueError("Rows do not form a rectangular grid.")
    xs = rows[:nx, 0]
    values = rows[:, 2].reshape(ys.size, nx).T
    return xs, ys, values


def write_pixmap(values: np.ndarray, sink: IO[bytes]):
    """Write values[ix, iy] as a P6 image nx pixels wide and ny pixels tall.

    Colours scale with max|value|: negative values fade from white to blue, positive ones from
    white to red. A zero map is all white.
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    width, height = values.shape
    scale = float(np.max(np.abs(values)))
    t = values / scale if scale > 0 else np.zeros_like(values)
    # Image rows from largest y down; columns follow x.
    t = t.T[::-1]
    fade = np.rint(255.0 * (1.0 - np.abs(t))).astype(np.uint8)
    full = np.full_like(fade, 255)
    negative = t < 0
    red = np.where(negative, fade, full)
    green = fade
    blue = np.where(negative, full, fade)
    pixels = np.stack([red, green, blue], axis=-1)
    header = f"P6\n{width} {height}\n# min={format_sig(float(values.min()))} max={format_sig(float(values.max()))}\n255\n"
    sink.write(header.encode("ascii"))
    sink.write(pixels.tobytes())


def export_heatmap(local_map: LocalizationMap, sink: IO[bytes]):
    write_pixmap(local_map.values, sink)


def export_peaks(local_map: LocalizationMap, peaks: PeakSet, summary: QuadrantSummary, sink: IO[str]):
    """Write the extrema and per-quadrant statistics as plain text."""
    sink.write(f"# threshold={format_sig(peaks.threshold)} baseline={format_sig(peaks.baseline)}\n")
    sink.write("kind x y value quadrant\n")
    for peak in peaks.peaks:
        quadrant = quadrant_of(local_map.grid, peak.ix, peak.iy)
        label = quadrant.value if quadrant else "axis"
        sink.write(f"{peak.kind.value} {format_sig(peak.x)} {format_sig(peak.y)} {format_sig(peak.value)} {label}\n")
    sink.write("quadrant mass top_decile_fraction max_abs\n")
    for quadrant in summary.mass:
        sink.write(
            f"{quadrant.value} {format_sig(summary.mass[quadrant])} "
            f"{format_sig(summary.top_decile_fraction[quadrant])} {format_sig(summary.max_abs[quadrant])}\n"
        )


def _complex(value: complex) -> str:
    return f"{format_sig(value.real)}{'+' if value.imag >= 0 else '-'}{format_sig(abs(value.imag))}j"


def sample_points(config: RunConfig, samples: int) -> list[SystemParams]:
    """Return the config's physical inputs at a samples x samples sub-grid of its positions."""
    if samples < 1:
        raise ValueError(f"Need at least one sample per axis, got {samples}.")
    grid = config.grid
    points = []
    for y in np.linspace(grid.y_min, grid.y_max, samples):
        for x in np.linspace(grid.x_min, grid.x_max, samples):
            omega_c = standing_wave_rabi(float(x), float(y), config.wave)
            points.append(replace(config.base, omega_c=omega_c))
    return points


def export_audit(points: Iterable[SystemParams]) -> str:
    """Tabulate closed-form against numeric rho13 for each point.

    ``rel_error`` uses the repaired reading of the appendix, ``rel_error_printed`` the printed one.
    Points whose closed-form zero-order coherences deviate by more than ZERO_ORDER_FLAG_TOL are flagged.
    A summary line with the largest relative errors follows the rows when there is at least one point.
    """
    lines = ["\t".join(AUDIT_COLUMNS)]
    worst = {AppendixReading.REPAIRED: 0.0, AppendixReading.PRINTED: 0.0}
    count = 0
    for count, params in enumerate(points, start=1):
        cells = [str(count), format_sig(params.omega_c), format_sig(params.delta_p), format_sig(params.delta_c)]
        cells.append(format_sig(params.theta))
        try:
            repaired = compare_analytic_numeric(params, AppendixReading.REPAIRED)
            printed = compare_analytic_numeric(params, AppendixReading.PRINTED)
            deviation = zero_order_deviation(params)
        except (DenominatorUnderflow, SolverError) as err:
            lines.append("\t".join([*cells, "n/a", "n/a", "n/a", "n/a", "n/a", f"error: {err}"]))
            continue
        worst[AppendixReading.REPAIRED] = max(worst[AppendixReading.REPAIRED], repaired.rel_error)
        worst[AppendixReading.PRINTED] = max(worst[AppendixReading.PRINTED], printed.rel_error)
        flag = "zero-order" if deviation > ZERO_ORDER_FLAG_TOL else ""
        cells += [
            _complex(repaired.analytic),
            _complex(repaired.numeric),
            format_sig(repaired.rel_error),
            format_sig(printed.rel_error),
            format_sig(deviation),
            flag,
        ]
        lines.append("\t".join(cells))
    if count:
        lines.append(
            f"# max rel_error={format_sig(worst[AppendixReading.REPAIRED])}"
            f" max rel_error_printed={format_sig(worst[AppendixReading.PRINTED])} points={count}"
        )
    return "\n".join(lines) + "\n"
