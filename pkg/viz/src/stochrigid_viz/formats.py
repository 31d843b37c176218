"""Readers for the two CSV formats the renderers accept.

Both readers are strict: the header must match exactly and every row must
parse, with errors reported as path:lineno so a truncated or hand-edited
file points at the offending line.
"""

from dataclasses import dataclass

import numpy as np

HISTOGRAM_HEADER = "band,bin,colat_center,lon_center,area,count,density"
SWEEP_HEADER = "sigma,theta,lambda,stderr,t_total,seed_count"


@dataclass(frozen=True)
class HistogramData:
    """One sphere histogram: equal-area latitude-band bins in band-major
    order, plus the geometry reconstructed from the area column."""

    band: np.ndarray  # (n_bins,) band index per bin
    density: np.ndarray  # (n_bins,)
    counts: np.ndarray  # (n_bins,)
    bin_area: float
    bins_per_band: np.ndarray  # (n_bands,)
    cos_edges: np.ndarray  # (n_bands + 1,) band boundary cosines, 1 .. -1
    radius: float

    @property
    def n_bins(self) -> int:
        return len(self.density)

    @property
    def n_bands(self) -> int:
        return len(self.bins_per_band)

    @property
    def total_count(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class SweepData:
    """A lambda-vs-(sigma, theta) grid, sigma-major row order."""

    sigmas: np.ndarray  # (n_sigma,) ascending
    thetas: np.ndarray  # (n_theta,) ascending
    lam: np.ndarray  # (n_sigma, n_theta)
    stderr: np.ndarray  # (n_sigma, n_theta)


def _rows(path: str, header: str):
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
        if first != header:
            raise ValueError(f"{path}:1: expected header {header!r}, got {first!r}")
        n_cols = header.count(",") + 1
        out = []
        for lineno, line in enumerate(f, start=2):
            line = line.rstrip("\n")
            if not line:
                raise ValueError(f"{path}:{lineno}: blank line")
            parts = line.split(",")
            if len(parts) != n_cols:
                raise ValueError(
                    f"{path}:{lineno}: expected {n_cols} fields, got {len(parts)}"
                )
            out.append((lineno, parts))
    if not out:
        raise ValueError(f"{path}: no data rows")
    return out


def _float(path, lineno, name, text):
    try:
        v = float(text)
    except ValueError:
        raise ValueError(f"{path}:{lineno}: bad {name} value {text!r}") from None
    if not np.isfinite(v):
        raise ValueError(f"{path}:{lineno}: bad {name} value {text!r}")
    return v


def _int(path, lineno, name, text):
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"{path}:{lineno}: bad {name} value {text!r}") from None


def read_histogram_csv(path: str) -> HistogramData:
    """Parse a histogram CSV and rebuild the bin geometry.

    All bins carry the same area, so the band boundary cosines follow by
    telescoping bin counts down from the north pole, and the sphere radius
    from the total area.  Rows must arrive band-major (band ascending, bin
    index ascending within each band), which is how the files are written.
    """
    rows = _rows(path, HISTOGRAM_HEADER)
    band, counts, density = [], [], []
    area = None
    expect_band, expect_bin = 0, 0
    for lineno, p in rows:
        b = _int(path, lineno, "band", p[0])
        i = _int(path, lineno, "bin", p[1])
        a = _float(path, lineno, "area", p[4])
        c = _int(path, lineno, "count", p[5])
        d = _float(path, lineno, "density", p[6])
        if a <= 0.0:
            raise ValueError(f"{path}:{lineno}: area must be positive, got {p[4]}")
        if c < 0:
            raise ValueError(f"{path}:{lineno}: count must be >= 0, got {p[5]}")
        if area is None:
            area = a
        elif a != area:
            raise ValueError(
                f"{path}:{lineno}: bins must share one area, got {p[4]} after {area!r}"
            )
        if b == expect_band + 1 and i == 0:
            expect_band, expect_bin = b, 0
        if b != expect_band or i != expect_bin:
            raise ValueError(
                f"{path}:{lineno}: rows must be band-major, expected band {expect_band}"
                f" bin {expect_bin}, got band {b} bin {i}"
            )
        expect_bin += 1
        band.append(b)
        counts.append(c)
        density.append(d)

    band = np.asarray(band, dtype=np.int64)
    bins_per_band = np.bincount(band)
    n_bins = len(band)
    radius_sq = n_bins * area / (4.0 * np.pi)
    # each band's cosine extent is proportional to its bin count
    cos_edges = np.empty(len(bins_per_band) + 1)
    cos_edges[0] = 1.0
    cos_edges[1:] = 1.0 - 2.0 * np.cumsum(bins_per_band) / n_bins
    cos_edges[-1] = -1.0
    return HistogramData(
        band=band,
        density=np.asarray(density),
        counts=np.asarray(counts, dtype=np.int64),
        bin_area=float(area),
        bins_per_band=bins_per_band,
        cos_edges=cos_edges,
        radius=float(np.sqrt(radius_sq)),
    )


def read_sweep_csv(path: str) -> SweepData:
    """Parse a Lyapunov sweep CSV into a complete (sigma, theta) grid."""
    rows = _rows(path, SWEEP_HEADER)
    sig, th, lam, se = [], [], [], []
    for lineno, p in rows:
        sig.append(_float(path, lineno, "sigma", p[0]))
        th.append(_float(path, lineno, "theta", p[1]))
        lam.append(_float(path, lineno, "lambda", p[2]))
        se.append(_float(path, lineno, "stderr", p[3]))
        _float(path, lineno, "t_total", p[4])
        _int(path, lineno, "seed_count", p[5])
    sigmas = np.unique(sig)
    thetas = np.unique(th)
    if len(sig) != len(sigmas) * len(thetas):
        raise ValueError(
            f"{path}: expected a complete grid, got {len(sig)} rows for"
            f" {len(sigmas)} sigma x {len(thetas)} theta values"
        )
    shape = (len(sigmas), len(thetas))
    lam_grid = np.full(shape, np.nan)
    se_grid = np.full(shape, np.nan)
    for s, t, l, e in zip(sig, th, lam, se):
        i = int(np.searchsorted(sigmas, s))
        j = int(np.searchsorted(thetas, t))
        if not np.isnan(lam_grid[i, j]):
            raise ValueError(f"{path}: duplicate grid point sigma={s}, theta={t}")
        lam_grid[i, j] = l
        se_grid[i, j] = e
    if np.any(np.isnan(lam_grid)):
        raise ValueError(f"{path}: grid has missing (sigma, theta) combinations")
    return SweepData(sigmas=sigmas, thetas=thetas, lam=lam_grid, stderr=se_grid)
