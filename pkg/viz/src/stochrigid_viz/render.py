"""Matplotlib renderers for histogram and sweep CSVs.

Output is a pure function of the input file and the keyword style options:
fixed figure geometry, fixed colormaps, no timestamps, so rerunning a
render produces byte-identical PNGs.
"""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LogNorm, Normalize

from .formats import read_histogram_csv, read_sweep_csv

_PNG_METADATA = {"Software": "stochrigid-viz"}


def default_floor(hist) -> float:
    """Color floor 1 / (10 N area): a tenth of the density one sample in
    one bin would produce, so empty bins sit visibly below occupied ones."""
    n = max(hist.total_count, 1)
    return 1.0 / (10.0 * n * hist.bin_area)


def _bin_lookup(hist, lat, lon):
    """Flat bin index for arrays of latitude and longitude (radians).

    Band from the boundary cosines (descending 1 -> -1), wedge from the
    longitude rescaled to the band's own bin count.  lon is taken in
    [-pi, pi) with the seam at -pi corresponding to the files' longitude 0.
    """
    z = np.sin(lat)
    band = np.searchsorted(-hist.cos_edges, -z, side="left") - 1
    band = np.clip(band, 0, hist.n_bands - 1)
    m = hist.bins_per_band[band]
    frac = (lon + np.pi) / (2.0 * np.pi)
    wedge = np.minimum((frac * m).astype(np.int64), m - 1)
    offsets = np.concatenate(([0], np.cumsum(hist.bins_per_band)))
    return offsets[band] + wedge


def render_snapshot(histogram_csv, output_image, *, vmin=None, cmap="viridis", dpi=160):
    """Render a sphere histogram as a Mollweide density map in log color.

    Bins are sampled onto a fine latitude-longitude raster (so their curved
    equal-area outlines survive the projection) and drawn as one mesh.
    Bins with zero count are painted at the color floor (vmin, default
    1/(10 N area)), never left blank.  Returns the output path.
    """
    hist = read_histogram_csv(os.fspath(histogram_csv))
    floor = default_floor(hist) if vmin is None else float(vmin)
    if not np.isfinite(floor) or floor <= 0.0:
        raise ValueError(f"vmin must be positive and finite, got {vmin!r}")
    vmax = float(max(hist.density.max(), floor))
    if vmax <= floor:
        vmax = floor * 10.0
    norm = LogNorm(vmin=floor, vmax=vmax)

    n_lon, n_lat = 720, 360
    lon_edges = np.linspace(-np.pi, np.pi, n_lon + 1)
    lat_edges = np.linspace(-np.pi / 2.0, np.pi / 2.0, n_lat + 1)
    lon_c = 0.5 * (lon_edges[:-1] + lon_edges[1:])
    lat_c = 0.5 * (lat_edges[:-1] + lat_edges[1:])
    lon_grid, lat_grid = np.meshgrid(lon_c, lat_c)
    cells = _bin_lookup(hist, lat_grid, lon_grid)
    shaded = np.maximum(hist.density, floor)[cells]

    fig = plt.figure(figsize=(8.0, 4.5), dpi=dpi)
    ax = fig.add_subplot(projection="mollweide")
    ax.set_axis_off()
    ax.pcolormesh(
        lon_edges,
        lat_edges,
        shaded,
        norm=norm,
        cmap=cmap,
        edgecolors="none",
        antialiased=False,
    )
    out = os.fspath(output_image)
    fig.savefig(out, metadata=_PNG_METADATA)
    plt.close(fig)
    return out


def _edges(values: np.ndarray) -> np.ndarray:
    """Cell edges around sorted grid values (half-spacing on each side;
    unit half-width for a single value)."""
    v = np.asarray(values, dtype=np.float64)
    if len(v) == 1:
        return np.array([v[0] - 0.5, v[0] + 0.5])
    mid = 0.5 * (v[:-1] + v[1:])
    return np.concatenate(([v[0] - (mid[0] - v[0])], mid, [v[-1] + (v[-1] - mid[-1])]))


def render_sweep(sweep_csv, output_image, *, vmin=None, cmap="RdBu_r", dpi=160):
    """Render a Lyapunov sweep as a sigma-theta heatmap.

    Color is symmetric about zero (white = boundary of chaos) unless vmin
    pins the lower limit; when the grid is at least 2x2 and the values
    change sign, the zero level set is drawn as a contour line.  Returns
    the output path.
    """
    data = read_sweep_csv(os.fspath(sweep_csv))
    vabs = float(max(np.max(np.abs(data.lam)), 1e-12))
    lo = -vabs if vmin is None else float(vmin)
    norm = Normalize(vmin=lo, vmax=vabs)

    fig = plt.figure(figsize=(6.4, 4.8), dpi=dpi)
    ax = fig.add_subplot()
    mesh = ax.pcolormesh(
        _edges(data.sigmas),
        _edges(data.thetas),
        data.lam.T,
        norm=norm,
        cmap=cmap,
        edgecolors="none",
        antialiased=False,
    )
    if (
        len(data.sigmas) >= 2
        and len(data.thetas) >= 2
        and np.min(data.lam) < 0.0 < np.max(data.lam)
    ):
        ax.contour(
            data.sigmas,
            data.thetas,
            data.lam.T,
            levels=[0.0],
            colors="black",
            linewidths=1.2,
        )
    ax.set_xlabel("sigma")
    ax.set_ylabel("theta")
    fig.colorbar(mesh, ax=ax, label="top Lyapunov exponent")
    out = os.fspath(output_image)
    fig.savefig(out, metadata=_PNG_METADATA)
    plt.close(fig)
    return out
