"""Checks of the localization maps for the shipped presets on 101-node grids."""
import math
from dataclasses import replace

import numpy as np
import pytest

from sgc_localization.analysis import (
    find_extrema,
    peak_ratio,
    quadrant_distribution,
    quadrant_masks,
    quadrant_of,
    symmetry_metrics,
)
from sgc_localization.config import parse_config
from sgc_localization.data import ExtremumKind, FigurePreset, Quadrant
from sgc_localization.dynamics import DensityMatrix, build_liouvillian, steady_state, time_evolve
from sgc_localization.export import export_audit, sample_points
from sgc_localization.field import standing_wave_rabi


def test_resonant_map_concentrates_in_quadrants_two_and_four(figure_map):
    local_map = figure_map("fig2a")
    summary = quadrant_distribution(local_map)
    share = summary.top_decile_fraction[Quadrant.II] + summary.top_decile_fraction[Quadrant.IV]
    assert share >= 0.95
    swap_error, point_error = symmetry_metrics(local_map)
    assert swap_error <= 1e-12
    assert point_error <= 1e-10


def test_detuned_probe_peaks_off_the_antinode(figure_map):
    local_map = figure_map("fig2b")
    magnitude = np.abs(local_map.values)
    masks = quadrant_masks(local_map.grid)
    for quadrant, centre in ((Quadrant.I, (75, 75)), (Quadrant.III, (25, 25))):
        masked = np.where(masks[quadrant], magnitude, -1.0)
        assert np.unravel_index(np.argmax(masked), masked.shape) != centre


def test_detuned_probe_crater_on_zoomed_grid(figure_map):
    local_map = figure_map("fig2b", n=41, x_min=0.2, x_max=0.3, y_min=0.2, y_max=0.3)
    ix, iy = np.unravel_index(np.argmax(np.abs(local_map.values)), local_map.values.shape)
    # Node (20, 20) sits at (0.25, 0.25), where the coupling is largest.
    assert math.hypot(ix - 20, iy - 20) > 2


@pytest.mark.parametrize("preset", ["fig2c", "fig2d"])
def test_far_detuned_probe_gives_two_antinode_minima(figure_map, preset):
    local_map = figure_map(preset)
    peaks = find_extrema(local_map, prominence=0.2 * np.max(np.abs(local_map.values))).peaks
    assert len(peaks) == 2
    assert {peak.kind for peak in peaks} == {ExtremumKind.MIN}
    assert [quadrant_of(local_map.grid, peak.ix, peak.iy) for peak in peaks] == [Quadrant.III, Quadrant.I]
    assert [(peak.x, peak.y) for peak in peaks] == pytest.approx([(-0.25, -0.25), (0.25, 0.25)])
    assert peaks[0].value == pytest.approx(peaks[1].value, rel=0.01)


def test_coupling_detuning_sweep_weakens_absorption(figure_map):
    # Largest |Im chi| shrinks as the coupling detuning grows from 8 to 20.
    maxima = [np.max(np.abs(figure_map(preset).values)) for preset in ("fig4a", "fig4b", "fig4c", "fig4d")]
    assert all(a > b for a, b in zip(maxima, maxima[1:]))
    assert 3 <= maxima[0] / maxima[-1] <= 30


def test_sgc_breaks_point_symmetry(figure_map):
    ratios = []
    for preset in ("fig6a", "fig6b", "fig6c", "fig6d"):
        local_map = figure_map(preset)
        ratios.append(peak_ratio(local_map, Quadrant.III, Quadrant.I))
        _, point_error = symmetry_metrics(local_map)
        assert point_error > 1e-8
    assert all(ratio < 1 for ratio in ratios)
    assert ratios[0] < ratios[-1]


@pytest.mark.parametrize("preset", list(FigurePreset))
def test_steady_state_matches_time_evolution_on_presets(preset):
    config = parse_config(preset=preset)
    for y in np.linspace(-0.5, 0.5, 5):
        for x in np.linspace(-0.5, 0.5, 5):
            params = replace(config.base, omega_c=standing_wave_rabi(float(x), float(y), config.wave))
            expected = steady_state(build_liouvillian(params)).rho.rho
            evolved = time_evolve(params, DensityMatrix.ground(), 50.0)
            np.testing.assert_allclose(evolved.rho, expected, rtol=0, atol=1e-6)


@pytest.mark.parametrize("preset", list(FigurePreset))
def test_audit_of_presets(preset):
    report = export_audit(sample_points(parse_config(preset=preset), 5))
    lines = report.splitlines()
    assert len(lines) == 1 + 25 + 1
    assert lines[-1].endswith("points=25")
