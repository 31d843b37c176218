"""Format readers: strict parsing, geometry reconstruction, line-numbered
errors."""

import numpy as np
import pytest

from stochrigid_viz import read_histogram_csv, read_sweep_csv

from helpers import write_histogram, write_sweep


def test_histogram_roundtrip_geometry(tmp_path):
    m = [2, 4, 4, 2]
    path = write_histogram(tmp_path / "h.csv", m, list(range(1, 13)))
    h = read_histogram_csv(path)
    assert h.n_bins == 12
    assert h.n_bands == 4
    assert list(h.bins_per_band) == m
    assert h.total_count == sum(range(1, 13))
    assert h.bin_area == pytest.approx(4.0 * np.pi / 12.0, rel=1e-15)
    assert h.radius == pytest.approx(1.0, rel=1e-12)
    # boundary cosines telescope through 1, 2/3, 0, -2/3, -1
    assert np.allclose(h.cos_edges, [1.0, 2.0 / 3.0, 0.0, -2.0 / 3.0, -1.0])
    assert list(h.band) == [0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3]


def test_histogram_radius_from_area(tmp_path):
    path = write_histogram(tmp_path / "h.csv", [1, 2, 1], [5, 5, 5, 5], radius=2.5)
    h = read_histogram_csv(path)
    assert h.radius == pytest.approx(2.5, rel=1e-12)


def test_histogram_density_column_preserved(tmp_path):
    counts = [0, 3, 1, 0, 2, 0, 4, 0, 1, 0, 0, 1]
    path = write_histogram(tmp_path / "h.csv", [2, 4, 4, 2], counts)
    h = read_histogram_csv(path)
    assert list(h.counts) == counts
    total = sum(counts)
    assert np.allclose(h.density, np.array(counts) / (total * h.bin_area))
    # densities integrate to one over the sphere
    assert np.sum(h.density) * h.bin_area == pytest.approx(1.0, rel=1e-12)


def test_histogram_bad_header(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("band,bin,colat,lon,area,count,density\n0,0,1,1,1,1,1\n")
    with pytest.raises(ValueError, match=r"h\.csv:1"):
        read_histogram_csv(str(p))


def test_histogram_wrong_field_count_names_line(tmp_path):
    good = write_histogram(tmp_path / "h.csv", [1, 2, 1], [1, 1, 1, 1])
    lines = good.read_text().splitlines()
    lines[2] = "0,1,2"
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError, match=r"bad\.csv:3"):
        read_histogram_csv(str(bad))


def test_histogram_bad_number_names_line(tmp_path):
    good = write_histogram(tmp_path / "h.csv", [1, 2, 1], [1, 1, 1, 1])
    lines = good.read_text().splitlines()
    lines[4] = lines[4].rsplit(",", 1)[0] + ",oops"
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError, match=r"bad\.csv:5.*density"):
        read_histogram_csv(str(bad))


def test_histogram_inconsistent_area_rejected(tmp_path):
    good = write_histogram(tmp_path / "h.csv", [1, 2, 1], [1, 1, 1, 1])
    lines = good.read_text().splitlines()
    parts = lines[3].split(",")
    parts[4] = "0.5"
    lines[3] = ",".join(parts)
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError, match=r"bad\.csv:4.*area"):
        read_histogram_csv(str(bad))


def test_histogram_out_of_order_rows_rejected(tmp_path):
    good = write_histogram(tmp_path / "h.csv", [1, 2, 1], [1, 1, 1, 1])
    lines = good.read_text().splitlines()
    lines[2], lines[3] = lines[3], lines[2]
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError, match=r"band-major"):
        read_histogram_csv(str(bad))


def test_histogram_empty_file_rejected(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("")
    with pytest.raises(ValueError, match=r"empty\.csv:1"):
        read_histogram_csv(str(p))


def test_histogram_header_only_rejected(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("band,bin,colat_center,lon_center,area,count,density\n")
    with pytest.raises(ValueError, match="no data rows"):
        read_histogram_csv(str(p))


def test_sweep_grid_parse(tmp_path):
    lam = [[-0.2, -0.1], [0.05, -0.02], [0.1, 0.03]]
    path = write_sweep(tmp_path / "s.csv", [0.0, 0.5, 1.0], [0.1, 0.5], lam)
    s = read_sweep_csv(path)
    assert list(s.sigmas) == [0.0, 0.5, 1.0]
    assert list(s.thetas) == [0.1, 0.5]
    assert np.allclose(s.lam, lam)
    assert s.stderr.shape == (3, 2)


def test_sweep_single_row(tmp_path):
    path = write_sweep(tmp_path / "s.csv", [0.5], [0.1, 0.2, 0.3], [[0.1, 0.0, -0.1]])
    s = read_sweep_csv(path)
    assert s.lam.shape == (1, 3)


def test_sweep_incomplete_grid_rejected(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text(
        "sigma,theta,lambda,stderr,t_total,seed_count\n"
        "0,0.1,-0.1,0.01,100,1\n0,0.2,-0.2,0.01,100,1\n0.5,0.1,0.1,0.01,100,1\n"
    )
    with pytest.raises(ValueError, match="grid"):
        read_sweep_csv(str(p))


def test_sweep_duplicate_point_rejected(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text(
        "sigma,theta,lambda,stderr,t_total,seed_count\n"
        "0,0.1,-0.1,0.01,100,1\n0,0.1,-0.2,0.01,100,1\n"
    )
    with pytest.raises(ValueError, match="duplicate"):
        read_sweep_csv(str(p))


def test_sweep_bad_value_names_line(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text(
        "sigma,theta,lambda,stderr,t_total,seed_count\n0,0.1,nope,0.01,100,1\n"
    )
    with pytest.raises(ValueError, match=r"s\.csv:2.*lambda"):
        read_sweep_csv(str(p))
