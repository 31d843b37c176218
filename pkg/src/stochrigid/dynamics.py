"""Model definition: free rigid-body transport, double-bracket friction,
isotropic multiplicative noise, and the resulting equilibrium measures.

State is the body angular momentum vector pi in R^3.  With inertia
I = diag(I1, I2, I3), angular velocity Omega = I^-1 pi, and kinetic energy
h = pi . Omega / 2, the simulated dynamics is

    d pi = -pi x Omega dt                   (transport, norm-preserving)
           + theta * pi x (pi x Omega) dt   (friction, energy-decreasing)
           - sum_i pi x s_i o dW_i          (Stratonovich noise, s_i = noise axes)

Every term is tangent to the sphere |pi| = const, so |pi|^2 is conserved
pathwise.  The friction term is the double bracket written so that
dh/dt = -theta |pi x Omega|^2 <= 0; with isotropic noise of amplitude sigma
the stationary law on the sphere is the Gibbs density

    p(pi) ~ exp(-(2 theta / sigma^2) h(pi)).

With theta = 0 the stationary law is uniform on the sphere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .so3 import cross

__all__ = [
    "InertiaTensor",
    "NoiseModel",
    "SimParams",
    "omega",
    "energy",
    "casimir",
    "drift_deterministic",
    "drift_dissipative",
    "ito_correction",
    "energy_decay_rate",
    "gibbs_log_density",
    "partition_function",
    "generator_apply",
    "sphere_integral",
]


def _require_finite(name: str, value: float) -> float:
    v = float(value)
    if not np.isfinite(v):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class InertiaTensor:
    """Principal moments of inertia, all strictly positive."""

    I1: float
    I2: float
    I3: float

    def __post_init__(self):
        for name in ("I1", "I2", "I3"):
            v = _require_finite(name, getattr(self, name))
            if v <= 0.0:
                raise ValueError(f"{name} must be > 0, got {v}")
            object.__setattr__(self, name, v)
        arr = np.array([self.I1, self.I2, self.I3], dtype=np.float64)
        arr.flags.writeable = False
        inv = np.array([1.0 / self.I1, 1.0 / self.I2, 1.0 / self.I3])
        inv.flags.writeable = False
        object.__setattr__(self, "_arr", arr)
        object.__setattr__(self, "_inv", inv)

    def as_array(self) -> np.ndarray:
        return self._arr

    def inverse(self) -> np.ndarray:
        return self._inv


@dataclass(frozen=True)
class NoiseModel:
    """Noise amplitude and the three fixed axes it acts along.

    The effective noise vectors are sigma * axes[i].  The default axes are
    the standard basis, i.e. isotropic noise s_i = sigma * e_i.  Axes must
    span R^3 (degenerate noise would leave unexplored directions and the
    Gibbs law would not be reached).
    """

    sigma: float
    axes: np.ndarray = field(default=None, compare=False)  # type: ignore[assignment]

    def __post_init__(self):
        s = _require_finite("sigma", self.sigma)
        if s < 0.0:
            raise ValueError(f"sigma must be >= 0, got {s}")
        object.__setattr__(self, "sigma", s)
        axes = self.axes
        if axes is None:
            axes = np.eye(3)
        axes = np.array(axes, dtype=np.float64)
        if axes.shape != (3, 3):
            raise ValueError(f"axes must have shape (3, 3), got {axes.shape}")
        if not np.all(np.isfinite(axes)):
            raise ValueError("axes must be finite")
        norms = np.sqrt(np.sum(axes * axes, axis=1))
        if np.any(norms == 0.0):
            raise ValueError("axes must be nonzero")
        if abs(np.linalg.det(axes / norms[:, None])) < 1e-10:
            raise ValueError("axes must span R^3")
        axes.flags.writeable = False
        object.__setattr__(self, "axes", axes)
        vec = self.sigma * axes
        vec.flags.writeable = False
        object.__setattr__(self, "_vectors", vec)

    def vectors(self) -> np.ndarray:
        """The three noise vectors sigma * axes[i], as rows."""
        return self._vectors

    @property
    def is_standard_axes(self) -> bool:
        return bool(np.array_equal(self.axes, np.eye(3)))


@dataclass(frozen=True)
class SimParams:
    """Everything a simulation run needs besides its initial condition."""

    inertia: InertiaTensor
    noise: NoiseModel
    theta: float
    dt: float
    t_end: float
    seed: int
    snapshot_times: tuple = ()

    def __post_init__(self):
        th = _require_finite("theta", self.theta)
        if th < 0.0:
            raise ValueError(f"theta must be >= 0, got {th}")
        object.__setattr__(self, "theta", th)
        dt = _require_finite("dt", self.dt)
        if dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {dt}")
        object.__setattr__(self, "dt", dt)
        te = _require_finite("t_end", self.t_end)
        if te <= 0.0:
            raise ValueError(f"t_end must be > 0, got {te}")
        object.__setattr__(self, "t_end", te)
        object.__setattr__(self, "seed", _rng.check_seed(self.seed))
        snaps = tuple(sorted(float(t) for t in self.snapshot_times))
        for t in snaps:
            if not np.isfinite(t) or t < 0.0 or t > te:
                raise ValueError(f"snapshot time {t} outside [0, t_end={te}]")
        object.__setattr__(self, "snapshot_times", snaps)


def omega(pi, inertia: InertiaTensor) -> np.ndarray:
    """Angular velocity I^-1 pi.  Works on (..., 3)."""
    return np.asarray(pi, dtype=np.float64) * inertia.inverse()


def energy(pi, inertia: InertiaTensor):
    """Kinetic energy h = pi . I^-1 pi / 2."""
    pi = np.asarray(pi, dtype=np.float64)
    return 0.5 * np.sum(pi * pi * inertia.inverse(), axis=-1)


def casimir(pi):
    """Squared momentum norm |pi|^2, conserved by every term of the dynamics."""
    pi = np.asarray(pi, dtype=np.float64)
    return np.sum(pi * pi, axis=-1)


def drift_deterministic(pi, inertia: InertiaTensor) -> np.ndarray:
    """Transport drift -pi x Omega.

    Tangent to the sphere and energy-conserving: it moves pi along the
    intersection of the momentum sphere with an energy level set.
    """
    pi = np.asarray(pi, dtype=np.float64)
    return -cross(pi, omega(pi, inertia))


def drift_dissipative(pi, inertia: InertiaTensor, theta: float) -> np.ndarray:
    """Double-bracket friction drift theta * pi x (pi x Omega).

    On the sphere |pi| = c this equals -theta c^2 grad_S h: steepest descent
    of the energy, so drift . Omega = -theta |pi x Omega|^2 <= 0 with
    equality exactly at the relative equilibria pi parallel to Omega.
    Vanishes for theta = 0.
    """
    pi = np.asarray(pi, dtype=np.float64)
    w = cross(pi, omega(pi, inertia))
    return theta * cross(pi, w)


def ito_correction(pi, noise: NoiseModel) -> np.ndarray:
    """Drift added to the Stratonovich drift to get the equal-in-law Ito SDE.

    Equals 1/2 sum_i (pi x s_i) x s_i; for isotropic noise s_i = sigma e_i
    this reduces to -sigma^2 pi exactly.
    """
    pi = np.asarray(pi, dtype=np.float64)
    out = np.zeros_like(pi)
    for s in noise.vectors():
        out = out + cross(cross(pi, s), s)
    return 0.5 * out


def energy_decay_rate(pi, inertia: InertiaTensor, theta: float):
    """dh/dt under the noiseless dynamics: -theta |pi x Omega|^2."""
    pi = np.asarray(pi, dtype=np.float64)
    w = cross(pi, omega(pi, inertia))
    return -theta * np.sum(w * w, axis=-1)


def gibbs_log_density(pi, inertia: InertiaTensor, theta: float, sigma: float):
    """Unnormalized log of the stationary density: -(2 theta / sigma^2) h(pi).

    Defined on the momentum sphere with respect to the area measure.  Raises
    for sigma = 0: without noise the long-time law is a point mass at the
    energy minima, not a density.
    """
    if sigma <= 0.0 or not np.isfinite(sigma):
        raise ValueError(f"sigma must be > 0 for a Gibbs density, got {sigma!r}")
    beta = 2.0 * theta / (sigma * sigma)
    return -beta * energy(pi, inertia)


def _gl_sphere_nodes(radius: float, n_quad: int):
    """Quadrature nodes/weights on the sphere: Gauss-Legendre in colatitude
    crossed with a uniform (trapezoid, periodic) rule in longitude."""
    x, w = np.polynomial.legendre.leggauss(n_quad)
    colat = 0.5 * np.pi * (x + 1.0)
    w_colat = 0.5 * np.pi * w
    lon = 2.0 * np.pi * np.arange(n_quad) / n_quad
    w_lon = 2.0 * np.pi / n_quad
    st = np.sin(colat)[:, None]
    ct = np.cos(colat)[:, None]
    pts = np.empty((n_quad, n_quad, 3))
    pts[:, :, 0] = radius * st * np.cos(lon)[None, :]
    pts[:, :, 1] = radius * st * np.sin(lon)[None, :]
    pts[:, :, 2] = radius * ct
    # area element r^2 sin(colat); same weight for every longitude node
    w_row = (radius * radius) * np.sin(colat) * w_colat * w_lon
    return pts.reshape(-1, 3), np.repeat(w_row, n_quad)


def sphere_integral(fn, radius: float, n_quad: int = 64):
    """Integral of fn over the sphere of the given radius.

    fn maps an (m, 3) array of points to an (m,) array of values.  Both
    quadrature factors converge spectrally for smooth integrands, so n_quad
    = 64 is already far below 1e-10 relative error for the densities used
    here.
    """
    pts, w = _gl_sphere_nodes(radius, n_quad)
    return float(np.sum(np.asarray(fn(pts)) * w))


def partition_function(
    inertia: InertiaTensor, theta: float, sigma: float, c: float, n_quad: int = 64
) -> float:
    """Normalizing constant Z = int_{|pi|=c} exp(-(2 theta/sigma^2) h) dA.

    For theta = 0 the integrand is 1 and Z = 4 pi c^2 (up to quadrature
    round-off).  sigma = 0 with theta > 0 is rejected for the same reason as
    in gibbs_log_density.
    """
    if not np.isfinite(c) or c <= 0.0:
        raise ValueError(f"radius c must be > 0, got {c!r}")
    if theta < 0.0:
        raise ValueError(f"theta must be >= 0, got {theta!r}")
    if int(n_quad) < 8:
        raise ValueError(f"n_quad must be >= 8, got {n_quad!r}")
    if theta == 0.0:
        beta = 0.0
    else:
        if sigma <= 0.0:
            raise ValueError("sigma must be > 0 when theta > 0")
        beta = 2.0 * theta / (sigma * sigma)
    inv = inertia.inverse()

    def density(pts):
        return np.exp(-beta * 0.5 * np.sum(pts * pts * inv, axis=-1))

    return sphere_integral(density, c, n_quad)


def generator_apply(f_value, f_grad, f_hess, pi, params: SimParams):
    """Apply the generator of the Ito diffusion to a test function at pi.

    Takes the function's value, gradient (..., 3) and Hessian (..., 3, 3)
    at pi, all caller-supplied, and returns

        L f = b . grad f + 1/2 sum_i (pi x s_i)^T Hess f (pi x s_i)

    with b the full Ito drift (transport + friction + Ito correction).  The
    value itself does not enter: generators kill constants.  Functions of
    |pi|^2 alone are in the kernel as well, which is the infinitesimal form
    of Casimir conservation.
    """
    pi = np.asarray(pi, dtype=np.float64)
    del f_value  # constants are annihilated; only derivatives matter
    grad = np.asarray(f_grad, dtype=np.float64)
    hess = np.asarray(f_hess, dtype=np.float64)
    b = (
        drift_deterministic(pi, params.inertia)
        + drift_dissipative(pi, params.inertia, params.theta)
        + ito_correction(pi, params.noise)
    )
    out = np.sum(b * grad, axis=-1)
    for s in params.noise.vectors():
        v = cross(pi, s)
        out = out + 0.5 * np.einsum("...i,...ij,...j", v, hess, v)
    return out
