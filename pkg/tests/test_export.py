import io

import numpy as np
import pytest

from sgc_localization.analysis import find_extrema, quadrant_distribution
from sgc_localization.config import parse_config
from sgc_localization.dynamics import SystemParams
from sgc_localization.export import (
    AUDIT_COLUMNS,
    CSV_HEADER,
    export_audit,
    export_csv,
    export_heatmap,
    export_peaks,
    load_csv,
    sample_points,
    write_pixmap,
)
from sgc_localization.field import GridSpec, LocalizationMap
from sgc_localization.util import format_sig


def read_pixmap(data: bytes) -> tuple[int, int, np.ndarray]:
    lines = data.split(b"\n", 4)
    assert lines[0] == b"P6"
    width, height = (int(part) for part in lines[1].split())
    assert lines[2].startswith(b"# min=")
    assert lines[3] == b"255"
    pixels = np.frombuffer(lines[4], dtype=np.uint8)
    assert pixels.size == width * height * 3
    return width, height, pixels.reshape(height, width, 3)


def sample_map() -> LocalizationMap:
    grid = GridSpec(nx=5, ny=3)
    x, y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    return LocalizationMap(grid, np.sin(3 * x) * np.cos(2 * y) - 0.1 * y, {})


def test_format_sig():
    assert format_sig(0.0) == "0"
    assert format_sig(-0.0) == "0"
    assert format_sig(1 / 3) == "0.333333333"
    assert format_sig(-1.5e-12) == "-1.5e-12"


def test_csv_layout():
    grid = GridSpec(nx=3, ny=3)
    sink = io.StringIO()
    export_csv(LocalizationMap(grid, np.full((3, 3), -0.25), {}), sink)
    rows = sink.getvalue().splitlines()
    assert rows[0] == ",".join(CSV_HEADER)
    assert len(rows) == 10
    assert rows[1] == "-0.5,-0.5,-0.25"
    assert rows[2] == "0,-0.5,-0.25"
    assert rows[-1] == "0.5,0.5,-0.25"


def test_csv_round_trip():
    local_map = sample_map()
    sink = io.StringIO()
    export_csv(local_map, sink)
    xs, ys, values = load_csv(io.StringIO(sink.getvalue()))
    np.testing.assert_array_equal(xs, local_map.grid.xs)
    np.testing.assert_array_equal(ys, local_map.grid.ys)
    np.testing.assert_allclose(values, local_map.values, rtol=1e-8, atol=1e-300)


def test_load_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        load_csv(io.StringIO("a,b,c\n1,2,3\n"))


def test_zero_map_is_white():
    sink = io.BytesIO()
    write_pixmap(np.zeros((4, 3)), sink)
    width, height, pixels = read_pixmap(sink.getvalue())
    assert (width, height) == (4, 3)
    assert np.all(pixels == 255)


def test_single_pixel_image():
    sink = io.BytesIO()
    write_pixmap(np.array([[-2.0]]), sink)
    width, height, pixels = read_pixmap(sink.getvalue())
    assert (width, height) == (1, 1)
    assert pixels[0, 0].tolist() == [0, 0, 255]


def test_pixmap_orientation_and_colours():
    values = np.zeros((3, 3))
    values[2, 2] = 1.0  # largest x and y: top right
    values[0, 0] = -1.0  # smallest x and y: bottom left
    sink = io.BytesIO()
    write_pixmap(values, sink)
    _, _, pixels = read_pixmap(sink.getvalue())
    assert pixels[0, 2].tolist() == [255, 0, 0]
    assert pixels[2, 0].tolist() == [0, 0, 255]
    assert pixels[1, 1].tolist() == [255, 255, 255]


def test_swap_symmetric_map_gives_symmetric_image():
    grid = GridSpec(nx=7, ny=7)
    x, y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    sink = io.BytesIO()
    values = np.sin(4 * x) * y - x**2
    export_heatmap(LocalizationMap(grid, values + values.T, {}), sink)
    _, _, pixels = read_pixmap(sink.getvalue())
    # With rows flipped, image transpose about the anti-diagonal equals the image.
    np.testing.assert_array_equal(pixels, pixels[::-1, ::-1].transpose(1, 0, 2))


def test_exports_are_deterministic():
    local_map = sample_map()
    first, second = io.BytesIO(), io.BytesIO()
    export_heatmap(local_map, first)
    export_heatmap(local_map, second)
    assert first.getvalue() == second.getvalue()


def test_peaks_report():
    grid = GridSpec(nx=9, ny=9)
    values = np.zeros((9, 9))
    values[6, 6] = 1.0
    values[4, 8] = -1.0
    local_map = LocalizationMap(grid, values, {})
    sink = io.StringIO()
    export_peaks(local_map, find_extrema(local_map), quadrant_distribution(local_map), sink)
    lines = sink.getvalue().splitlines()
    assert lines[0] == "# threshold=0.05 baseline=0"
    assert lines[1] == "kind x y value quadrant"
    assert lines[2] == "min 0 0.5 -1 axis"
    assert lines[3] == "max 0.25 0.25 1 I"
    assert lines[4] == "quadrant mass top_decile_fraction max_abs"
    assert len(lines) == 9


def test_sample_points():
    config = parse_config(preset="fig2b")
    points = sample_points(config, 5)
    assert len(points) == 25
    assert points[0].omega_c == pytest.approx(0.0, abs=1e-12)
    assert points[18].omega_c == pytest.approx(20.0)  # (0.25, 0.25)
    assert {point.delta_p for point in points} == {20.0}
    with pytest.raises(ValueError):
        sample_points(config, 0)


def test_empty_audit_has_header_only():
    assert export_audit([]) == "\t".join(AUDIT_COLUMNS) + "\n"


def test_audit_two_level_points():
    report = export_audit([SystemParams(omega_c=0.0, delta_p=delta_p) for delta_p in (0.0, 4.0)])
    lines = report.splitlines()
    assert len(lines) == 4
    assert all(len(line.split("\t")) == len(AUDIT_COLUMNS) for line in lines[1:3])
    summary = dict(part.split("=") for part in lines[3].split() if "=" in part)
    assert float(summary["rel_error"]) <= 1e-10
    assert float(summary["rel_error_printed"]) > 1e-2
    assert summary["points"] == "2"


def test_audit_records_failing_point():
    lines = export_audit([SystemParams(theta=0.0, omega_c=0.0)]).splitlines()
    cells = lines[1].split("\t")
    assert len(cells) == len(AUDIT_COLUMNS)
    assert cells[5:10] == ["n/a"] * 5
    assert cells[10].startswith("error:")
