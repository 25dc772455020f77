import numpy as np
import pytest

from sgc_localization.analysis import (
    EmptyQuadrant,
    GridNotSymmetric,
    find_extrema,
    peak_ratio,
    quadrant_distribution,
    quadrant_masks,
    quadrant_of,
    symmetry_metrics,
)
from sgc_localization.data import ExtremumKind, Quadrant
from sgc_localization.field import GridSpec, LocalizationMap


def make_map(grid: GridSpec, func) -> LocalizationMap:
    x, y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    return LocalizationMap(grid, func(x, y), {})


def gaussians(x, y):
    width = 2 * 0.05**2
    return np.exp(-((x - 0.2) ** 2 + (y - 0.2) ** 2) / width) + np.exp(-((x + 0.2) ** 2 + (y + 0.2) ** 2) / width)


GRID = GridSpec(nx=41, ny=41)


def test_two_gaussians_give_two_maxima():
    peaks = find_extrema(make_map(GRID, gaussians), prominence=0.5).peaks
    assert [(peak.ix, peak.iy, peak.kind) for peak in peaks] == [
        (12, 12, ExtremumKind.MAX),
        (28, 28, ExtremumKind.MAX),
    ]
    assert peaks[1].x == pytest.approx(0.2)
    assert peaks[1].value == pytest.approx(1.0)


def test_prominence_is_measured_from_the_median():
    values = np.full((21, 21), -1.0)
    values[10, 10] = 0.2
    peak_set = find_extrema(LocalizationMap(GridSpec(nx=21, ny=21), values, {}), prominence=0.5)
    assert peak_set.baseline == -1.0
    assert [(peak.ix, peak.iy, peak.kind, peak.value) for peak in peak_set.peaks] == [
        (10, 10, ExtremumKind.MAX, 0.2)
    ]


def test_extrema_are_offset_invariant():
    base = find_extrema(make_map(GRID, gaussians), prominence=0.5).peaks
    shifted = find_extrema(make_map(GRID, lambda x, y: gaussians(x, y) + 3.0), prominence=0.5).peaks
    assert [(p.ix, p.iy) for p in shifted] == [(p.ix, p.iy) for p in base]
    assert [p.value for p in shifted] == pytest.approx([p.value + 3.0 for p in base])


def test_negated_field_gives_minima():
    peaks = find_extrema(make_map(GRID, lambda x, y: -gaussians(x, y)), prominence=0.5).peaks
    assert {peak.kind for peak in peaks} == {ExtremumKind.MIN}
    assert len(peaks) == 2


def test_constant_field_has_no_extrema():
    peak_set = find_extrema(make_map(GRID, lambda x, y: np.full_like(x, 2.5)))
    assert peak_set.peaks == []
    assert peak_set.baseline == 2.5


def test_flat_top_counts_once():
    values = np.zeros((9, 9))
    values[3:5, 5:7] = 1.0
    peaks = find_extrema(LocalizationMap(GridSpec(nx=9, ny=9), values, {}), prominence=0.5).peaks
    assert [(peak.ix, peak.iy, peak.kind) for peak in peaks] == [(3, 5, ExtremumKind.MAX)]


def test_default_prominence_filters_small_bumps():
    values = np.zeros((9, 9))
    values[2, 2] = 1.0
    values[6, 6] = 0.01
    peak_set = find_extrema(LocalizationMap(GridSpec(nx=9, ny=9), values, {}))
    assert peak_set.threshold == pytest.approx(0.05)
    assert [(peak.ix, peak.iy) for peak in peak_set.peaks] == [(2, 2)]


def test_negative_prominence_rejected():
    with pytest.raises(ValueError):
        find_extrema(make_map(GRID, gaussians), prominence=-1.0)


def test_quadrant_masks_exclude_axes():
    grid = GridSpec(nx=5, ny=5)
    masks = quadrant_masks(grid)
    assert all(np.count_nonzero(mask) == 4 for mask in masks.values())
    assert quadrant_of(grid, 4, 4) is Quadrant.I
    assert quadrant_of(grid, 0, 4) is Quadrant.II
    assert quadrant_of(grid, 0, 0) is Quadrant.III
    assert quadrant_of(grid, 4, 0) is Quadrant.IV
    assert quadrant_of(grid, 2, 4) is None


def test_single_quadrant_field():
    grid = GridSpec(nx=21, ny=21)
    summary = quadrant_distribution(make_map(grid, lambda x, y: ((x > 0) & (y > 0)).astype(float)))
    assert summary.top_decile_fraction == {Quadrant.I: 1.0, Quadrant.II: 0.0, Quadrant.III: 0.0, Quadrant.IV: 0.0}
    assert summary.mass[Quadrant.I] == 100.0
    assert summary.max_abs[Quadrant.III] == 0.0


def test_point_symmetric_field_balances_opposite_quadrants():
    summary = quadrant_distribution(make_map(GRID, lambda x, y: x * y + x**2))
    assert summary.mass[Quadrant.I] == pytest.approx(summary.mass[Quadrant.III], rel=1e-10)
    assert summary.mass[Quadrant.II] == pytest.approx(summary.mass[Quadrant.IV], rel=1e-10)


def test_swapping_axes_relabels_quadrants(rng):
    values = rng.normal(size=(21, 21))
    grid = GridSpec(nx=21, ny=21)
    summary = quadrant_distribution(LocalizationMap(grid, values, {}))
    swapped = quadrant_distribution(LocalizationMap(grid, values.T, {}))
    assert swapped.mass[Quadrant.II] == pytest.approx(summary.mass[Quadrant.IV], rel=1e-12)
    assert swapped.mass[Quadrant.I] == pytest.approx(summary.mass[Quadrant.I], rel=1e-12)
    assert swapped.top_decile_fraction[Quadrant.IV] == summary.top_decile_fraction[Quadrant.II]


def test_peak_ratio():
    local_map = make_map(GRID, lambda x, y: np.where(x > 0, 2.0, 1.0) * (x * y))
    assert peak_ratio(local_map, Quadrant.III, Quadrant.I) == pytest.approx(0.5)
    assert peak_ratio(local_map, Quadrant.II, Quadrant.II) == 1.0


def test_peak_ratio_against_empty_quadrant():
    local_map = make_map(GRID, lambda x, y: np.where((x > 0) & (y > 0), 1.0, 0.0))
    with pytest.raises(EmptyQuadrant):
        peak_ratio(local_map, Quadrant.I, Quadrant.III)


def test_symmetry_metrics():
    swap_error, point_error = symmetry_metrics(make_map(GRID, gaussians))
    assert swap_error == 0.0
    assert point_error <= 1e-15
    swap_error, point_error = symmetry_metrics(make_map(GRID, lambda x, y: x))
    assert swap_error == pytest.approx(1.0)
    assert point_error == pytest.approx(1.0)


def test_symmetry_metrics_need_symmetric_grid():
    with pytest.raises(GridNotSymmetric):
        symmetry_metrics(make_map(GridSpec(0.2, 0.3, 0.2, 0.3, 5, 5), lambda x, y: x + y))
    with pytest.raises(GridNotSymmetric):
        symmetry_metrics(make_map(GridSpec(nx=5, ny=7), lambda x, y: x + y))
