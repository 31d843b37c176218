"""Top Lyapunov exponent along stochastic momentum-sphere trajectories.

The estimator advances one trajectory and one tangent vector through the
exact differential of the split integrator (same noise for both, by
construction), renormalizing the tangent each step.  The exponent is the
time-averaged log growth after a burn-in that lets the tangent align with
the fastest direction; the spread over equal time blocks gives a standard
error.  A parameter sweep reduces (sigma, theta) grid points in a fixed
order, each point averaged over seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import rng as _rng
from .dynamics import NoiseModel, SimParams
from .ensemble import _fmt, _write_atomic
from .integrators import _Plan, _tangent_kernel

__all__ = ["LyapunovEstimate", "estimate_top", "sweep", "write_sweep_csv"]

# steps of pre-drawn noise per chunk; pure perf knob, no effect on values
_CHUNK = 16384


@dataclass(frozen=True)
class LyapunovEstimate:
    """Exponent estimate with its measurement protocol attached.

    trace holds (t, running estimate) pairs at block boundaries, with t
    measured from the end of burn-in; the running estimate at each point is
    exactly the accumulated log growth divided by that t.
    """

    lambda_top: float
    stderr: float
    t_total: float
    n_blocks: int
    trace: tuple


def _default_tangent(pi0: np.ndarray) -> np.ndarray:
    """A deterministic unit tangent perpendicular to pi0: cross pi0 with the
    coordinate axis it is least aligned with."""
    ref = np.zeros(3)
    ref[int(np.argmin(np.abs(pi0)))] = 1.0
    d = np.cross(pi0, ref)
    return d / np.linalg.norm(d)


def estimate_top(
    params: SimParams,
    pi0,
    t_total: float,
    seed,
    *,
    burn_in: float = 10.0,
    n_blocks: int = 20,
    project: bool = True,
    delta0=None,
) -> LyapunovEstimate:
    """Estimate the top Lyapunov exponent from one trajectory.

    Runs for t_total (in whole steps of params.dt), discards burn_in, and
    averages the tangent's log growth over the rest, split into n_blocks
    equal blocks for the standard error.  Horizons of a few hundred time
    units are where the stderr becomes meaningful; short horizons measure
    finite-time growth rates, which is occasionally the point (e.g. the
    growth rate at an unstable equilibrium before the trajectory leaves it).

    delta0 overrides the initial tangent direction (default: a deterministic
    unit vector perpendicular to pi0).  project controls the per-step
    removal of the radial tangent component; the radial direction is neutral
    (the dynamics conserves |pi|), so projection merely excludes a zero mode.
    Turning it off is useful exactly to observe that neutrality.
    """
    pi0 = np.asarray(pi0, dtype=np.float64)
    if pi0.shape != (3,) or not np.all(np.isfinite(pi0)):
        raise ValueError("pi0 must be a finite 3-vector")
    if float(np.dot(pi0, pi0)) == 0.0:
        raise ValueError("zero initial momentum has no dynamics to linearize")
    seed = _rng.check_seed(seed)
    n_blocks = int(n_blocks)
    if n_blocks < 2:
        raise ValueError(f"n_blocks must be >= 2, got {n_blocks}")
    if not np.isfinite(t_total) or t_total <= 0.0:
        raise ValueError(f"t_total must be > 0, got {t_total!r}")
    if not np.isfinite(burn_in) or burn_in < 0.0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in!r}")
    dt = params.dt
    n_total = int(round(t_total / dt))
    nb = int(round(burn_in / dt))
    n_meas = n_total - nb
    if n_meas < n_blocks:
        raise ValueError(
            f"t_total={t_total} leaves {n_meas} steps after burn_in={burn_in}; "
            f"need at least {n_blocks} (one per block)"
        )
    block_len = n_meas // n_blocks
    n_run = nb + block_len * n_blocks

    if delta0 is None:
        delta0 = _default_tangent(pi0)
    d0 = np.asarray(delta0, dtype=np.float64)
    if d0.shape != (3,) or not np.all(np.isfinite(d0)):
        raise ValueError("delta0 must be a finite 3-vector")
    dn = float(np.linalg.norm(d0))
    if dn == 0.0:
        raise ValueError("zero tangent vector cannot be grown")

    plan = _Plan(params)
    sqdt = math.sqrt(dt)
    px, py, pz = float(pi0[0]), float(pi0[1]), float(pi0[2])
    dx, dy, dz = float(d0[0]) / dn, float(d0[1]) / dn, float(d0[2]) / dn

    cum = 0.0
    block_logs = []
    trace = []
    block_start_log = 0.0
    gx = gy = gz = None
    chunk_at = 0
    for k in range(n_run):
        if plan.noise:
            if k >= chunk_at:
                hi = min(k + _CHUNK, n_run)
                g = _rng.normals3(
                    seed, _rng.LYAPUNOV_NOISE, np.arange(k, hi, dtype=np.uint64), 0
                )
                gx = (g[0] * sqdt).tolist()
                gy = (g[1] * sqdt).tolist()
                gz = (g[2] * sqdt).tolist()
                chunk_at = hi
            j = k - chunk_at + len(gx)
            dw1, dw2, dw3 = gx[j], gy[j], gz[j]
        else:
            dw1 = dw2 = dw3 = 0.0
        px, py, pz, dx, dy, dz = _tangent_kernel(
            px, py, pz, dx, dy, dz, plan, dw1, dw2, dw3
        )
        if project:
            r2 = px * px + py * py + pz * pz
            q = (px * dx + py * dy + pz * dz) / r2
            dx -= q * px
            dy -= q * py
            dz -= q * pz
        n = math.sqrt(dx * dx + dy * dy + dz * dz)
        if n == 0.0:
            raise ValueError("tangent vector collapsed to zero")
        dx /= n
        dy /= n
        dz /= n
        if k >= nb:
            cum += math.log(n)
            done = k - nb + 1
            if done % block_len == 0:
                block_logs.append(cum - block_start_log)
                block_start_log = cum
                t_here = (done // block_len) * block_len * dt
                trace.append((t_here, cum / t_here))

    t_meas = block_len * n_blocks * dt
    lam = cum / t_meas
    per_block = np.array(block_logs) / (block_len * dt)
    stderr = float(np.std(per_block, ddof=1) / math.sqrt(n_blocks))
    return LyapunovEstimate(
        lambda_top=lam,
        stderr=stderr,
        t_total=n_run * dt,
        n_blocks=n_blocks,
        trace=tuple(trace),
    )


def sweep(
    params_base: SimParams,
    sigmas,
    thetas,
    t_total: float,
    seeds,
    *,
    burn_in: float = 10.0,
    n_blocks: int = 20,
    pi0=None,
):
    """Exponent estimates over the (sigma, theta) grid, averaged over seeds.

    Rows come out in grid order (sigma outer, theta inner).  With several
    seeds the reported stderr is the spread of the per-seed estimates; with
    one seed it is that run's block stderr.  Each (sigma, theta, seed) job
    is independent of all others.
    """
    sigmas = [float(s) for s in sigmas]
    thetas = [float(th) for th in thetas]
    seeds = list(seeds)
    if not sigmas or not thetas or not seeds:
        raise ValueError("sigmas, thetas and seeds must be non-empty")
    if pi0 is None:
        pi0 = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
    rows = []
    for sg in sigmas:
        for th in thetas:
            params = replace(
                params_base,
                noise=NoiseModel(sigma=sg, axes=params_base.noise.axes),
                theta=th,
            )
            ests = [
                estimate_top(
                    params, pi0, t_total, s, burn_in=burn_in, n_blocks=n_blocks
                )
                for s in seeds
            ]
            lams = [e.lambda_top for e in ests]
            lam = float(np.mean(lams))
            if len(seeds) > 1:
                se = float(np.std(lams, ddof=1) / math.sqrt(len(seeds)))
            else:
                se = ests[0].stderr
            rows.append(
                {
                    "sigma": sg,
                    "theta": th,
                    "lambda": lam,
                    "stderr": se,
                    "t_total": ests[0].t_total,
                    "seed_count": len(seeds),
                }
            )
    return rows


def write_sweep_csv(rows, path) -> None:
    """Write sweep rows in the documented CSV format."""

    def lines():
        yield "sigma,theta,lambda,stderr,t_total,seed_count"
        for r in rows:
            yield (
                f"{_fmt(r['sigma'])},{_fmt(r['theta'])},{_fmt(r['lambda'])},"
                f"{_fmt(r['stderr'])},{_fmt(r['t_total'])},{r['seed_count']}"
            )

    _write_atomic(path, lines())
