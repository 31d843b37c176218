"""Particle ensembles on the momentum sphere: initialization, batched
advancing, equal-area histograms, and distances to the analytic stationary
measures.

Determinism contract.  Every random draw is addressed by (master seed,
domain, step index, particle index) through the counter-based generator in
`rng`, so a particle's noise path is a pure function of those integers.
Work is partitioned into fixed-size blocks of particles; worker threads only
change which thread computes a block, never what is computed, so results
are bit-identical for any worker count.
"""

from __future__ import annotations

import logging
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import dynamics as dyn
from . import rng as _rng
from .dynamics import SimParams
from .integrators import _Plan
from .so3 import cross

__all__ = [
    "Ensemble",
    "SphereHistogram",
    "DistributionDistance",
    "init_uniform",
    "init_gibbs",
    "advance",
    "step_positions",
    "histogram",
    "merge_histograms",
    "compare",
    "snapshot_export",
    "read_particles",
]

log = logging.getLogger(__name__)

# Fixed partition unit for batched work.  Blocks are always carved at these
# boundaries regardless of worker count, which is what makes the outputs
# independent of scheduling.
_BLOCK = 4096

_RADIUS_TOL = 1e-9


@dataclass
class Ensemble:
    """A set of particles sharing one momentum sphere and one noise seed."""

    particles: np.ndarray  # (n, 3), one row per particle
    t: float
    casimir_radius: float
    master_seed: int
    step: int = 0  # completed steps; indexes the per-step noise streams
    gibbs_acceptance_rate: float | None = None

    def __post_init__(self):
        p = np.array(self.particles, dtype=np.float64)
        if p.ndim != 2 or p.shape[1] != 3:
            raise ValueError(f"particles must have shape (n, 3), got {p.shape}")
        self.particles = p
        self.t = float(self.t)
        if not np.isfinite(self.t) or self.t < 0.0:
            raise ValueError(f"t must be finite and >= 0, got {self.t}")
        c = float(self.casimir_radius)
        if not np.isfinite(c) or c <= 0.0:
            raise ValueError(f"casimir_radius must be > 0, got {c}")
        self.casimir_radius = c
        self.master_seed = _rng.check_seed(self.master_seed)
        self.step = int(self.step)
        if self.step < 0:
            raise ValueError(f"step must be >= 0, got {self.step}")
        if len(p):
            self._check_radii()

    def __len__(self) -> int:
        return len(self.particles)

    def _check_radii(self):
        r = np.sqrt(np.sum(self.particles * self.particles, axis=1))
        worst = float(np.max(np.abs(r - self.casimir_radius))) / self.casimir_radius
        if not worst < _RADIUS_TOL:
            raise ValueError(
                f"particle radius drifted off the sphere: relative error {worst:.3e}"
                f" exceeds {_RADIUS_TOL}"
            )


def init_uniform(n: int, c: float, seed) -> Ensemble:
    """Ensemble of n independent uniform samples on the sphere |pi| = c."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not np.isfinite(c) or c <= 0.0:
        raise ValueError(f"radius c must be > 0, got {c!r}")
    seed = _rng.check_seed(seed)
    ids = np.arange(n, dtype=np.uint64)
    g = _rng.normals3(seed, _rng.INIT_UNIFORM, 0, ids)  # (3, n)
    norms = np.sqrt(np.sum(g * g, axis=0))
    # a zero 3-normal has probability ~1e-300; redraw deterministically
    retry = 1
    while np.any(norms == 0.0):
        bad = np.flatnonzero(norms == 0.0)
        g[:, bad] = _rng.normals3(seed, _rng.INIT_UNIFORM, retry, ids[bad])
        norms[bad] = np.sqrt(np.sum(g[:, bad] * g[:, bad], axis=0))
        retry += 1
    pos = (g * (c / norms)).T.copy()
    return Ensemble(particles=pos, t=0.0, casimir_radius=c, master_seed=seed)


def init_gibbs(n: int, c: float, params: SimParams, seed) -> Ensemble:
    """Ensemble drawn from the stationary Gibbs law exp(-2 theta h/sigma^2).

    Exact rejection sampling: uniform sphere proposals accepted with
    probability exp(-beta (h - h_min)), which is the tightest constant
    envelope.  theta = 0 makes the law uniform and delegates to
    init_uniform outright.  The overall acceptance rate is recorded on the
    returned ensemble.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not np.isfinite(c) or c <= 0.0:
        raise ValueError(f"radius c must be > 0, got {c!r}")
    sigma = params.noise.sigma
    if sigma <= 0.0:
        raise ValueError("init_gibbs requires sigma > 0")
    if params.theta == 0.0:
        return init_uniform(n, c, seed)
    seed = _rng.check_seed(seed)
    beta = 2.0 * params.theta / (sigma * sigma)
    inv = params.inertia.inverse()
    h_min = 0.5 * c * c * float(np.min(inv))

    pos = np.empty((n, 3))
    pending = np.arange(n, dtype=np.uint64)
    proposals = 0
    round_idx = 0
    while len(pending):
        g = _rng.normals3(seed, _rng.INIT_GIBBS, round_idx, pending)  # (3, m)
        norms = np.sqrt(np.sum(g * g, axis=0))
        ok = norms > 0.0  # zero-norm proposals are simply rejected
        cand = np.where(ok, c / np.where(ok, norms, 1.0), 0.0) * g
        h = 0.5 * np.sum(cand * cand * inv[:, None], axis=0)
        u = _rng.uniforms(seed, _rng.INIT_GIBBS, round_idx, pending)
        accept = ok & (u < np.exp(-beta * (h - h_min)))
        pos[pending[accept].astype(np.intp)] = cand[:, accept].T
        proposals += len(pending)
        pending = pending[~accept]
        round_idx += 1
        if round_idx > 100000:
            raise RuntimeError("rejection sampler made no progress")
    ens = Ensemble(particles=pos, t=0.0, casimir_radius=c, master_seed=seed)
    ens.gibbs_acceptance_rate = n / proposals
    log.debug("init_gibbs acceptance rate: %.4f", ens.gibbs_acceptance_rate)
    return ens


def _batch_friction_force(px, py, pz, inv1, inv2, inv3, theta):
    ox = px * inv1
    oy = py * inv2
    oz = pz * inv3
    wx = py * oz - pz * oy
    wy = pz * ox - px * oz
    wz = px * oy - py * ox
    return (
        theta * (py * wz - pz * wy),
        theta * (pz * wx - px * wz),
        theta * (px * wy - py * wx),
    )


def _batch_split_step(px, py, pz, dwx, dwy, dwz, plan: _Plan):
    """Vectorized counterpart of the scalar split step; same factor order.

    Component arrays in, component arrays out.  The Brownian increments may
    be arrays (independent noise) or plain floats (one path shared by the
    whole batch).
    """
    inv1, inv2, inv3 = plan.inv1, plan.inv2, plan.inv3
    t1 = plan.half * inv1
    t2 = plan.half * inv2
    t3 = plan.half * inv3

    a = px * t1
    c = np.cos(a)
    s = np.sin(a)
    py, pz = py * c - pz * s, py * s + pz * c
    a = py * t2
    c = np.cos(a)
    s = np.sin(a)
    px, pz = px * c + pz * s, pz * c - px * s
    a = pz * t3
    c = np.cos(a)
    s = np.sin(a)
    px, py = px * c - py * s, px * s + py * c

    if plan.theta != 0.0:
        dt = plan.dt
        r0 = np.sqrt(px * px + py * py + pz * pz)
        kx, ky, kz = _batch_friction_force(px, py, pz, inv1, inv2, inv3, plan.theta)
        h2 = 0.5 * dt
        mx = px + h2 * kx
        my = py + h2 * ky
        mz = pz + h2 * kz
        kx, ky, kz = _batch_friction_force(mx, my, mz, inv1, inv2, inv3, plan.theta)
        px = px + dt * kx
        py = py + dt * ky
        pz = pz + dt * kz
        scale = r0 / np.sqrt(px * px + py * py + pz * pz)
        px = px * scale
        py = py * scale
        pz = pz * scale

    if plan.noise:
        if plan.standard:
            a = dwx * plan.noise[0][3]
            c = np.cos(a)
            s = np.sin(a)
            py, pz = py * c - pz * s, py * s + pz * c
            a = dwy * plan.noise[1][3]
            c = np.cos(a)
            s = np.sin(a)
            px, pz = px * c + pz * s, pz * c - px * s
            a = dwz * plan.noise[2][3]
            c = np.cos(a)
            s = np.sin(a)
            px, py = px * c - py * s, px * s + py * c
        else:
            dws = (dwx, dwy, dwz)
            for i, (ux, uy, uz, mag) in enumerate(plan.noise):
                a = dws[i] * mag
                c = np.cos(a)
                s = np.sin(a)
                hs = np.sin(0.5 * a)
                omc = 2.0 * hs * hs
                cx = uy * pz - uz * py
                cy = uz * px - ux * pz
                cz = ux * py - uy * px
                d = (ux * px + uy * py + uz * pz) * omc
                px, py, pz = (
                    px * c + cx * s + ux * d,
                    py * c + cy * s + uy * d,
                    pz * c + cz * s + uz * d,
                )

    a = pz * t3
    c = np.cos(a)
    s = np.sin(a)
    px, py = px * c - py * s, px * s + py * c
    a = py * t2
    c = np.cos(a)
    s = np.sin(a)
    px, pz = px * c + pz * s, pz * c - px * s
    a = px * t1
    c = np.cos(a)
    s = np.sin(a)
    py, pz = py * c - pz * s, py * s + pz * c
    return px, py, pz


def _em_step(pos: np.ndarray, params: SimParams, dw: np.ndarray) -> np.ndarray:
    """One Euler-Maruyama step on an (n, 3) position array; dw is (n, 3)."""
    b = (
        dyn.drift_deterministic(pos, params.inertia)
        + dyn.drift_dissipative(pos, params.inertia, params.theta)
        + dyn.ito_correction(pos, params.noise)
    )
    new = pos + params.dt * b
    vecs = params.noise.vectors()
    for i in range(3):
        new = new + cross(np.broadcast_to(vecs[i], pos.shape), pos) * dw[:, i : i + 1]
    return new


def step_positions(positions, params: SimParams, dw, scheme: str = "split"):
    """One time step on raw (n, 3) positions with caller-supplied increments.

    dw is (n, 3) for per-particle increments or (3,) for one increment
    shared by every row; entries are N(0, dt) draws.  scheme is "split" or
    "euler".  This is the coupling-friendly entry point: callers control the
    increments, so the same noise can drive different schemes or step sizes.
    Euler-Maruyama output is not confined to the sphere, hence plain arrays
    rather than Ensembles.
    """
    pos = np.asarray(positions, dtype=np.float64)
    if pos.ndim != 2 or pos.shape[1] != 3:
        raise ValueError(f"positions must have shape (n, 3), got {pos.shape}")
    dw = np.asarray(dw, dtype=np.float64)
    if dw.shape == (3,):
        dw = np.broadcast_to(dw, pos.shape)
    if dw.shape != pos.shape:
        raise ValueError(f"dw must have shape (3,) or {pos.shape}, got {dw.shape}")
    if scheme == "split":
        plan = _Plan(params)
        px, py, pz = _batch_split_step(
            pos[:, 0].copy(),
            pos[:, 1].copy(),
            pos[:, 2].copy(),
            dw[:, 0],
            dw[:, 1],
            dw[:, 2],
            plan,
        )
        return np.stack([px, py, pz], axis=1)
    if scheme == "euler":
        return _em_step(pos, params, dw)
    raise ValueError(f"unknown scheme {scheme!r}")


def _advance_block(particles, ids, step0, n_steps, plan, seed, sqdt, common_dw):
    """Advance one contiguous particle block in place."""
    px = particles[:, 0].copy()
    py = particles[:, 1].copy()
    pz = particles[:, 2].copy()
    for j in range(n_steps):
        if common_dw is not None:
            dwx = common_dw[j, 0]
            dwy = common_dw[j, 1]
            dwz = common_dw[j, 2]
        elif plan.noise:
            g = _rng.normals3(seed, _rng.PATH_NOISE, step0 + j, ids)
            dwx = g[0] * sqdt
            dwy = g[1] * sqdt
            dwz = g[2] * sqdt
        else:
            dwx = dwy = dwz = 0.0
        px, py, pz = _batch_split_step(px, py, pz, dwx, dwy, dwz, plan)
    particles[:, 0] = px
    particles[:, 1] = py
    particles[:, 2] = pz


def advance(
    ensemble: Ensemble,
    t_target: float,
    params: SimParams,
    *,
    common_noise: bool = False,
    workers: int = 1,
) -> Ensemble:
    """Advance every particle to t_target with the split integrator.

    Steps in whole multiples of params.dt until t_target is reached (a
    target within rounding of the current time is a no-op).  Particle k's
    increments at step s come from the stream addressed by
    (master_seed, s, k), so restarting, re-blocking, or re-threading cannot
    change the trajectory.  With common_noise=True all particles share the
    increments of a single stream instead: every particle sees the same
    noise realization, which is the random-attractor setting (advancing a
    cloud of initial conditions under one frozen noise path).

    Mutates the ensemble in place and returns it.
    """
    if not np.isfinite(t_target):
        raise ValueError(f"t_target must be finite, got {t_target!r}")
    span = float(t_target) - ensemble.t
    tol = 1e-9 * max(1.0, abs(ensemble.t))
    if span < -tol:
        raise ValueError(f"t_target {t_target} is before ensemble time {ensemble.t}")
    n_steps = int(round(span / params.dt))
    if abs(n_steps * params.dt - span) > 1e-6 * params.dt:
        n_steps = int(math.ceil(span / params.dt - 1e-12))
    if n_steps <= 0:
        return ensemble
    workers = max(1, int(workers))
    plan = _Plan(params)
    sqdt = math.sqrt(params.dt)
    seed = ensemble.master_seed
    step0 = ensemble.step

    common_dw = None
    if common_noise and plan.noise:
        steps = np.arange(step0, step0 + n_steps, dtype=np.uint64)
        g = _rng.normals3(seed, _rng.COMMON_NOISE, steps, 0)  # (3, n_steps)
        common_dw = (g * sqdt).T.copy()

    n = len(ensemble)
    blocks = [(i, min(i + _BLOCK, n)) for i in range(0, n, _BLOCK)]
    parts = ensemble.particles

    def job(i0, i1):
        ids = np.arange(i0, i1, dtype=np.uint64)
        _advance_block(parts[i0:i1], ids, step0, n_steps, plan, seed, sqdt, common_dw)

    if workers == 1 or len(blocks) == 1:
        for i0, i1 in blocks:
            job(i0, i1)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(job, i0, i1) for i0, i1 in blocks]
            for f in futures:
                f.result()

    ensemble.step = step0 + n_steps
    ensemble.t = ensemble.t + n_steps * params.dt
    ensemble._check_radii()
    return ensemble


def _band_layout(n_bands: int):
    """Equal-area band/bin layout.

    Band k (colatitude order) gets round(2 n sin(colat_k)) longitude bins,
    evaluated at the band's nominal center; band boundaries are then placed
    so that every band's area is exactly its bin count times the common bin
    area.  All bins therefore have identical area, and the boundary
    cosines telescope from 1 to -1 exactly.
    """
    k = np.arange(n_bands)
    m = np.rint(2.0 * n_bands * np.sin((k + 0.5) * np.pi / n_bands)).astype(np.int64)
    m = np.maximum(m, 1)
    total = int(m.sum())
    cos_edges = np.empty(n_bands + 1)
    cos_edges[0] = 1.0
    cos_edges[1:] = 1.0 - 2.0 * np.cumsum(m) / total
    cos_edges[-1] = -1.0
    return m, total, cos_edges


class SphereHistogram:
    """Counts over an equal-area partition of the sphere.

    The sphere is sliced into n_bands colatitude bands, each split into
    longitude bins; every bin has exactly area 4 pi r^2 / n_bins.  Lookup
    is closed-form (one searchsorted for the band, one floor divide for the
    longitude), so accumulation is vectorized and order-independent.
    """

    def __init__(self, n_bands: int, radius: float):
        n_bands = int(n_bands)
        if n_bands < 4:
            raise ValueError(f"n_bands must be >= 4, got {n_bands}")
        if not np.isfinite(radius) or radius <= 0.0:
            raise ValueError(f"radius must be > 0, got {radius!r}")
        self.n_bands = n_bands
        self.radius = float(radius)
        self.bins_per_band, self.n_bins, self._cos_edges = _band_layout(n_bands)
        self.offsets = np.concatenate(([0], np.cumsum(self.bins_per_band)))
        self.counts = np.zeros(self.n_bins, dtype=np.int64)
        self.n_samples = 0

    @property
    def bin_area(self) -> float:
        return 4.0 * np.pi * self.radius * self.radius / self.n_bins

    def bin_index(self, positions) -> np.ndarray:
        """Flat bin index for each (n, 3) position on the sphere."""
        pos = np.asarray(positions, dtype=np.float64)
        zc = np.clip(pos[:, 2] / self.radius, -1.0, 1.0)
        asc = self._cos_edges[::-1]  # ascending from -1 to 1
        band = self.n_bands - np.searchsorted(asc, zc, side="left")
        band = np.clip(band, 0, self.n_bands - 1)
        lon = np.arctan2(pos[:, 1], pos[:, 0])
        frac = np.mod(lon / (2.0 * np.pi), 1.0)
        m = self.bins_per_band[band]
        j = np.minimum((frac * m).astype(np.int64), m - 1)
        return self.offsets[band] + j

    def accumulate(self, positions):
        pos = np.asarray(positions, dtype=np.float64)
        idx = self.bin_index(pos)
        self.counts += np.bincount(idx, minlength=self.n_bins)
        self.n_samples += len(pos)

    @property
    def density(self) -> np.ndarray:
        """Empirical probability density per unit area; integrates to 1."""
        if self.n_samples == 0:
            raise ValueError("histogram holds no samples")
        return self.counts / (self.n_samples * self.bin_area)

    def bands(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_bands), self.bins_per_band)

    def bins_within_band(self) -> np.ndarray:
        return np.arange(self.n_bins) - self.offsets[self.bands()]

    def centers(self):
        """(colatitude, longitude) of each bin center, colatitude midpoint of
        the band and longitude midpoint of the wedge."""
        colat_edges = np.arccos(self._cos_edges)
        mid = 0.5 * (colat_edges[:-1] + colat_edges[1:])
        band = self.bands()
        colat = mid[band]
        m = self.bins_per_band[band]
        lon = (self.bins_within_band() + 0.5) * (2.0 * np.pi / m)
        return colat, lon

    def center_positions(self) -> np.ndarray:
        """Bin centers as (n_bins, 3) points on the sphere."""
        colat, lon = self.centers()
        st = np.sin(colat)
        return self.radius * np.stack(
            [st * np.cos(lon), st * np.sin(lon), np.cos(colat)], axis=1
        )


def histogram(ensemble: Ensemble, n_bands: int) -> SphereHistogram:
    """Equal-area histogram of the ensemble's particle positions."""
    h = SphereHistogram(n_bands, ensemble.casimir_radius)
    h.accumulate(ensemble.particles)
    return h


def merge_histograms(hists) -> SphereHistogram:
    """Pool counts from histograms over the same binning (e.g. realizations)."""
    hists = list(hists)
    if not hists:
        raise ValueError("no histograms to merge")
    first = hists[0]
    out = SphereHistogram(first.n_bands, first.radius)
    for h in hists:
        if h.n_bands != first.n_bands or h.radius != first.radius:
            raise ValueError("histograms use different binnings; cannot merge")
        out.counts += h.counts
        out.n_samples += h.n_samples
    return out


@dataclass(frozen=True)
class DistributionDistance:
    """L1 and (smoothed) KL distances between binned measures."""

    l1: float
    kl: float

    def __post_init__(self):
        if not (0.0 <= self.l1 <= 2.0):
            raise ValueError(f"l1 must lie in [0, 2], got {self.l1!r}")
        if not self.kl >= 0.0:
            raise ValueError(f"kl must be >= 0, got {self.kl!r}")


def compare(hist: SphereHistogram, params: SimParams) -> DistributionDistance:
    """Distance between the histogram and the analytic stationary measure.

    The reference is uniform for theta = 0 and the Gibbs law otherwise,
    evaluated at bin centers (midpoint rule), normalized by the quadrature
    partition function and then renormalized to a probability vector so that
    an empirical histogram matching the reference exactly yields (0, 0).
    KL uses additive smoothing eps = 1/(10 N) on both vectors, which keeps
    it finite on empty bins without breaking the identity-of-distributions
    case.  sigma = 0 with theta > 0 has no stationary density (the law
    collapses onto the energy minima), so it is rejected; check pole
    alignment directly in that regime.
    """
    if hist.n_samples == 0:
        raise ValueError("histogram holds no samples")
    sigma = params.noise.sigma
    if params.theta > 0.0 and sigma <= 0.0:
        raise ValueError(
            "no stationary density for sigma = 0 with theta > 0; "
            "the invariant law is singular (supported on the energy minima)"
        )
    if params.theta == 0.0:
        # equal-area bins make the uniform reference exact; renormalizing
        # would only smear it by an ulp
        q = np.full(hist.n_bins, 1.0 / hist.n_bins)
    else:
        logd = dyn.gibbs_log_density(
            hist.center_positions(), params.inertia, params.theta, sigma
        )
        z = dyn.partition_function(
            params.inertia, params.theta, sigma, hist.radius
        )
        q = np.exp(logd) * (hist.bin_area / z)
        q = q / np.sum(q)
    p = hist.counts / hist.n_samples
    l1 = float(np.sum(np.abs(p - q)))
    eps = 1.0 / (10.0 * hist.n_samples)
    denom = 1.0 + hist.n_bins * eps
    ps = (p + eps) / denom
    qs = (q + eps) / denom
    kl = float(np.sum(ps * np.log(ps / qs)))
    return DistributionDistance(l1=l1, kl=max(kl, 0.0))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_atomic(path: str, lines) -> None:
    """Write lines (no trailing newlines) to path, all-or-nothing."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            for line in lines:
                f.write(line)
                f.write("\n")
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def snapshot_export(ensemble: Ensemble, path, n_bands: int = 13):
    """Write the ensemble as `<path>.particles.csv` + `<path>.histogram.csv`.

    Particle file columns: id,px,py,pz,t.  Histogram file columns:
    band,bin,colat_center,lon_center,area,count,density.  Floats carry 17
    significant digits, enough to round-trip doubles exactly.  Files are
    written atomically (temp file + rename), so a failure leaves no partial
    output.  Returns the two paths.
    """
    if len(ensemble) == 0:
        raise ValueError("refusing to export an empty ensemble")
    base = os.fspath(path)
    ppath = base + ".particles.csv"
    hpath = base + ".histogram.csv"
    t_str = _fmt(ensemble.t)

    def particle_lines():
        yield "id,px,py,pz,t"
        for i, row in enumerate(ensemble.particles):
            yield f"{i},{_fmt(row[0])},{_fmt(row[1])},{_fmt(row[2])},{t_str}"

    h = histogram(ensemble, n_bands)
    colat, lon = h.centers()
    band = h.bands()
    bins_in = h.bins_within_band()
    dens = h.density
    area = _fmt(h.bin_area)

    def histogram_lines():
        yield "band,bin,colat_center,lon_center,area,count,density"
        for b in range(h.n_bins):
            yield (
                f"{band[b]},{bins_in[b]},{_fmt(colat[b])},{_fmt(lon[b])},"
                f"{area},{h.counts[b]},{_fmt(dens[b])}"
            )

    try:
        _write_atomic(ppath, particle_lines())
        _write_atomic(hpath, histogram_lines())
    except OSError as e:
        raise OSError(f"snapshot export failed for base path {base!r}: {e}") from e
    return ppath, hpath


def read_particles(path):
    """Read a particle snapshot CSV back as ((n, 3) positions, time).

    Strict about format: the header and every row are validated, and errors
    name the offending line number.
    """
    path = os.fspath(path)
    with open(path, "r", newline="") as f:
        header = f.readline().rstrip("\n")
        if header != "id,px,py,pz,t":
            raise ValueError(f"{path}:1: expected header 'id,px,py,pz,t', got {header!r}")
        rows = []
        t = None
        for lineno, line in enumerate(f, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 fields, got {len(fields)}")
            try:
                vals = [float(x) for x in fields[1:]]
            except ValueError as e:
                raise ValueError(f"{path}:{lineno}: {e}") from None
            rows.append(vals[:3])
            t = vals[3]
    if not rows:
        raise ValueError(f"{path}: no particle rows")
    return np.array(rows, dtype=np.float64), t
