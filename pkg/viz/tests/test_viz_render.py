"""Renderer behavior: flat uniform maps, color floor for empty bins,
deterministic bytes, sweep heatmaps."""

import numpy as np
import pytest
from matplotlib import colormaps

from stochrigid_viz import render_snapshot, render_sweep
from stochrigid_viz.render import default_floor
from stochrigid_viz.formats import read_histogram_csv

from helpers import write_histogram, write_sweep, map_pixels, intensity_ratio

BANDS = [3, 6, 8, 6, 3]
N_BINS = sum(BANDS)


def test_uniform_histogram_renders_flat(tmp_path):
    csv = write_histogram(tmp_path / "u.csv", BANDS, [40] * N_BINS)
    png = render_snapshot(csv, tmp_path / "u.png")
    assert intensity_ratio(png) < 1.05


def test_zero_count_bins_render_at_floor(tmp_path):
    counts = [100] * N_BINS
    counts[7] = 0
    counts[20] = 0
    csv = write_histogram(tmp_path / "z.csv", BANDS, counts)
    png = render_snapshot(csv, tmp_path / "z.png")
    pix = map_pixels(png)
    colors = np.unique(np.round(pix * 255.0).astype(int), axis=0)
    # exactly two bin colors: the shared occupied color and the floor color
    assert len(colors) == 2
    floor_rgb = np.round(np.array(colormaps["viridis"](0.0)[:3]) * 255.0)
    assert np.array_equal(colors[np.argmin(colors.sum(axis=1))], floor_rgb)


def test_all_zero_histogram_renders(tmp_path):
    # degenerate but legal: no samples at all; everything sits at the floor
    csv = write_histogram(tmp_path / "e.csv", BANDS, [0] * N_BINS)
    png = render_snapshot(csv, tmp_path / "e.png")
    assert intensity_ratio(png) < 1.05


def test_snapshot_bytes_deterministic(tmp_path):
    rng = np.random.default_rng(5)
    counts = rng.integers(0, 50, N_BINS).tolist()
    csv = write_histogram(tmp_path / "d.csv", BANDS, counts)
    a = render_snapshot(csv, tmp_path / "a.png")
    b = render_snapshot(csv, tmp_path / "b.png")
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()
    assert a != b


def test_vmin_changes_the_image(tmp_path):
    counts = [0] * N_BINS
    counts[0] = 60
    counts[11] = 40
    csv = write_histogram(tmp_path / "v.csv", BANDS, counts)
    render_snapshot(csv, tmp_path / "a.png")
    render_snapshot(csv, tmp_path / "b.png", vmin=1e-6)
    assert (tmp_path / "a.png").read_bytes() != (tmp_path / "b.png").read_bytes()


def test_bad_vmin_rejected(tmp_path):
    csv = write_histogram(tmp_path / "v.csv", BANDS, [1] * N_BINS)
    with pytest.raises(ValueError, match="vmin"):
        render_snapshot(csv, tmp_path / "x.png", vmin=0.0)
    assert not (tmp_path / "x.png").exists()


def test_default_floor_matches_documented_formula(tmp_path):
    counts = [25] * N_BINS
    csv = write_histogram(tmp_path / "f.csv", BANDS, counts)
    h = read_histogram_csv(str(csv))
    assert default_floor(h) == pytest.approx(
        1.0 / (10.0 * sum(counts) * h.bin_area), rel=1e-15
    )


def test_malformed_csv_writes_no_image(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("band,bin,colat_center,lon_center,area,count,density\n0,0,1\n")
    with pytest.raises(ValueError, match=r"bad\.csv:2"):
        render_snapshot(p, tmp_path / "no.png")
    assert not (tmp_path / "no.png").exists()


def test_sweep_renders_with_zero_contour_crossing(tmp_path):
    lam = [[-0.3, -0.4], [-0.05, -0.15], [0.1, 0.02]]
    csv = write_sweep(tmp_path / "s.csv", [0.0, 0.5, 1.0], [0.1, 0.5], lam)
    png = render_sweep(csv, tmp_path / "s.png")
    assert (tmp_path / "s.png").stat().st_size > 0
    # the contour adds black strokes absent from an all-negative sweep
    lam_neg = [[-0.3, -0.4], [-0.05, -0.15], [-0.1, -0.02]]
    csv2 = write_sweep(tmp_path / "n.csv", [0.0, 0.5, 1.0], [0.1, 0.5], lam_neg)
    render_sweep(csv2, tmp_path / "n.png")
    dark = lambda p: int(np.sum(np.all(map_pixels(p, erode=0) < 0.25, axis=-1)))
    assert dark(png) > dark(tmp_path / "n.png")


def test_sweep_single_row_renders(tmp_path):
    csv = write_sweep(tmp_path / "s.csv", [0.5], [0.1, 0.3, 0.5], [[0.1, 0.0, -0.1]])
    png = render_sweep(csv, tmp_path / "s.png")
    assert (tmp_path / "s.png").stat().st_size > 0


def test_sweep_bytes_deterministic(tmp_path):
    lam = [[-0.2, 0.1], [0.3, -0.1]]
    csv = write_sweep(tmp_path / "s.csv", [0.2, 0.8], [0.1, 0.9], lam)
    render_sweep(csv, tmp_path / "a.png")
    render_sweep(csv, tmp_path / "b.png")
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()
