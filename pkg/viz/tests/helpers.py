"""Shared fixtures for the renderer tests: synthetic CSV writers and
pixel-level helpers.  CSVs are written by hand so these tests exercise the
documented file formats without touching the simulation package."""

import numpy as np
import matplotlib.image as mpimg

HIST_HEADER = "band,bin,colat_center,lon_center,area,count,density"
SWEEP_HEADER = "sigma,theta,lambda,stderr,t_total,seed_count"


def write_histogram(path, bins_per_band, counts, radius=1.0):
    """Write a valid histogram CSV: equal-area bins over latitude bands."""
    b_total = int(sum(bins_per_band))
    if len(counts) != b_total:
        raise ValueError("counts must have one entry per bin")
    area = 4.0 * np.pi * radius * radius / b_total
    n = int(sum(counts))
    cos_edges = [1.0]
    for m in bins_per_band:
        cos_edges.append(cos_edges[-1] - 2.0 * m / b_total)
    lines = [HIST_HEADER]
    idx = 0
    for k, m in enumerate(bins_per_band):
        top = np.arccos(np.clip(cos_edges[k], -1.0, 1.0))
        bot = np.arccos(np.clip(cos_edges[k + 1], -1.0, 1.0))
        colat = 0.5 * (top + bot)
        for i in range(m):
            lon = (i + 0.5) * 2.0 * np.pi / m
            dens = counts[idx] / (max(n, 1) * area)
            lines.append(
                f"{k},{i},{colat:.17g},{lon:.17g},{area:.17g},{counts[idx]},{dens:.17g}"
            )
            idx += 1
    path.write_text("\n".join(lines) + "\n")
    return path


def write_sweep(path, sigmas, thetas, lam):
    """Write a valid sweep CSV in sigma-major order; lam is (n_sigma, n_theta)."""
    lines = [SWEEP_HEADER]
    for i, s in enumerate(sigmas):
        for j, t in enumerate(thetas):
            lines.append(f"{s:.17g},{t:.17g},{lam[i][j]:.17g},0.001,100,1")
    path.write_text("\n".join(lines) + "\n")
    return path


def map_pixels(png_path, erode=3):
    """RGB rows of the rendered map interior.

    Non-white pixels are the projected map; a few erosion passes drop the
    antialiased rim where map colors blend into the page background.
    """
    img = mpimg.imread(str(png_path))
    rgb = img[..., :3]
    mask = np.any(rgb < 0.99, axis=-1)
    for _ in range(erode):
        m = mask.copy()
        for ax, shift in ((0, 1), (0, -1), (1, 1), (1, -1)):
            m &= np.roll(mask, shift, axis=ax)
        mask = m
    return rgb[mask]


def intensity_ratio(png_path):
    """Max over min mean-RGB intensity across the map interior."""
    lum = map_pixels(png_path).mean(axis=-1)
    return float(lum.max() / lum.min())
