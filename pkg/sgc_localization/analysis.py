"""Extrema, quadrant statistics and symmetry checks of localization maps."""
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import binary_dilation, generate_binary_structure, label, maximum_filter, minimum_filter

from sgc_localization.data import ExtremumKind, Quadrant
from sgc_localization.field import GridSpec, LocalizationMap

# 3x3 neighbourhood without its centre.
RING = np.ones((3, 3), dtype=bool)
RING[1, 1] = False
EIGHT_CONNECTED = generate_binary_structure(2, 2)
DEFAULT_PROMINENCE_FRACTION = 0.05
TOP_DECILE = 0.9


class EmptyQuadrant(ValueError):
    """Raised when a ratio is taken against a quadrant whose largest |value| is zero."""


class GridNotSymmetric(ValueError):
    """Raised when symmetry metrics are requested on a grid that is not mirror symmetric."""


@dataclass(frozen=True)
class Peak:
    x: float
    y: float
    value: float
    kind: ExtremumKind
    ix: int
    iy: int


@dataclass(frozen=True)
class PeakSet:
    """Strict local extrema whose distance from the map median is at least threshold.

    Prominence is |value - baseline| with baseline the map median, not |value|: on a -1
    background a 0.2 bump counts at threshold 0.5.
    """

    peaks: list[Peak]
    threshold: float
    baseline: float = 0.0


@dataclass(frozen=True)
class QuadrantSummary:
    mass: dict[Quadrant, float] = field(default_factory=dict)
    top_decile_fraction: dict[Quadrant, float] = field(default_factory=dict)
    max_abs: dict[Quadrant, float] = field(default_factory=dict)


def quadrant_masks(grid: GridSpec) -> dict[Quadrant, np.ndarray]:
    """Return boolean masks of shape (nx, ny) per quadrant; nodes on either axis belong to none."""
    x, y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    tol_x = 1e-12 * (grid.x_max - grid.x_min)
    tol_y = 1e-12 * (grid.y_max - grid.y_min)
    right, left = x > tol_x, x < -tol_x
    top, bottom = y > tol_y, y < -tol_y
    return {
        Quadrant.I: right & top,
        Quadrant.II: left & top,
        Quadrant.III: left & bottom,
        Quadrant.IV: right & bottom,
    }


def quadrant_of(grid: GridSpec, ix: int, iy: int) -> Quadrant | None:
    for quadrant, mask in quadrant_masks(grid).items():
        if mask[ix, iy]:
            return quadrant
    return None


def _plateau_anchors(values: np.ndarray, candidates: np.ndarray, lower_rim) -> list[tuple[int, int]]:
    """Return the lexicographically smallest node of every flat region that stands strictly above (or below) its rim."""
    anchors = []
    labels, count = label(candidates, structure=EIGHT_CONNECTED)
    for region in range(1, count + 1):
        members = labels == region
        level = values[members]
        if np.any(level != level[0]):
            continue
        rim = binary_dilation(members, structure=EIGHT_CONNECTED) & ~members
        if rim.any() and np.all(lower_rim(values[rim], level[0])):
            ix, iy = np.argwhere(members)[0]
            anchors.append((int(ix), int(iy)))
    return anchors


def find_extrema(local_map: LocalizationMap, prominence: float | None = None) -> PeakSet:
    """Find strict 8-neighbour maxima and minima of the signed map.

    A node is kept when |value - median| >= prominence. A flat region of equal values whose whole
    rim lies strictly below (above) it counts as one maximum (minimum) at its lexicographically
    smallest (ix, iy) node.

    :param local_map: Map to search.
    :param prominence: Minimum distance from the map median, default 5% of the largest such distance.
    :return: Peaks ordered by (ix, iy).
    """
    values = local_map.values
    baseline = float(np.median(values))
    if prominence is None:
        prominence = DEFAULT_PROMINENCE_FRACTION * float(np.max(np.abs(values - baseline)))
    if prominence < 0:
        raise ValueError(f"Prominence must be non-negative, got {prominence}.")

    neighbour_max = maximum_filter(values, footprint=RING, mode="constant", cval=-np.inf)
    neighbour_min = minimum_filter(values, footprint=RING, mode="constant", cval=np.inf)
    strict_max = values > neighbour_max
    strict_min = values < neighbour_min

    found = [(int(ix), int(iy), ExtremumKind.MAX) for ix, iy in np.argwhere(strict_max)]
    found += [(int(ix), int(iy), ExtremumKind.MIN) for ix, iy in np.argwhere(strict_min)]
    flat_max = (values >= neighbour_max) & ~strict_max
    flat_min = (values <= neighbour_min) & ~strict_min
    found += [(ix, iy, ExtremumKind.MAX) for ix, iy in _plateau_anchors(values, flat_max, np.less)]
    found += [(ix, iy, ExtremumKind.MIN) for ix, iy in _plateau_anchors(values, flat_min, np.greater)]

    xs, ys = local_map.grid.xs, local_map.grid.ys
    peaks = [
        Peak(x=float(xs[ix]), y=float(ys[iy]), value=float(values[ix, iy]), kind=kind, ix=ix, iy=iy)
        for ix, iy, kind in sorted(found, key=lambda item: (item[0], item[1]))
        if abs(values[ix, iy] - baseline) >= prominence
    ]
    return PeakSet(peaks=peaks, threshold=prominence, baseline=baseline)


def quadrant_distribution(local_map: LocalizationMap) -> QuadrantSummary:
    """Summarise |value| per quadrant: total, share of the top-decile nodes and maximum.

    Top-decile nodes are those with |value| at or above the 90% quantile; zero nodes never count.
    """
    magnitude = np.abs(local_map.values)
    top = (magnitude >= np.quantile(magnitude, TOP_DECILE)) & (magnitude > 0)
    top_count = int(np.count_nonzero(top))
    summary = QuadrantSummary()
    for quadrant, mask in quadrant_masks(local_map.grid).items():
        summary.mass[quadrant] = float(np.sum(magnitude[mask]))
        summary.max_abs[quadrant] = float(np.max(magnitude[mask])) if mask.any() else 0.0
        summary.top_decile_fraction[quadrant] = (
            np.count_nonzero(top & mask) / top_count if top_count else 0.0
        )
    return summary


def peak_ratio(local_map: LocalizationMap, q_num: Quadrant, q_den: Quadrant) -> float:
    """Return max|value| in q_num over max|value| in q_den.

    :raises EmptyQuadrant: The denominator quadrant has no non-zero value.
    """
    summary = quadrant_distribution(local_map)
    if summary.max_abs[q_den] == 0.0:
        raise EmptyQuadrant(f"Quadrant {q_den.value} has zero maximum.")
    return summary.max_abs[q_num] / summary.max_abs[q_den]


def symmetry_metrics(local_map: LocalizationMap) -> tuple[float, float]:
    """Return (swap_error, point_error): max|map(x, y) - map(y, x)| and max|map(x, y) - map(-x, -y)|.

    :raises GridNotSymmetric: The grid is not square and mirror symmetric about both axes.
    """
    grid = local_map.grid
    if not grid.is_symmetric() or (grid.x_min, grid.nx) != (grid.y_min, grid.ny):
        raise GridNotSymmetric(f"Grid {grid} is not square and symmetric about the origin.")
    values = local_map.values
    swap_error = float(np.max(np.abs(values - values.T)))
    point_error = float(np.max(np.abs(values - values[::-1, ::-1])))
    return swap_error, point_error
