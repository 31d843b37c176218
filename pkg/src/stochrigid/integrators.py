"""Time steppers for the momentum-sphere dynamics.

`step_split` is the production integrator: a palindromic splitting whose
factors are each exact flows, so the momentum norm is conserved to
round-off and the map is time-reversible when friction and noise are off.
One step of size dt applies, in order,

    1. free rotation half-step, axes e1 e2 e3, each by angle pi_i dt / (2 I_i)
    2. friction step of size dt (explicit midpoint, then rescale back to the
       entry radius; skipped entirely for theta = 0)
    3. noise rotations, axis i by angle |s_i| dW_i (skipped for sigma = 0)
    4. free rotation half-step, axes e3 e2 e1

`step_euler_maruyama` is a deliberately unstructured Ito scheme kept for
weak cross-validation; it does not preserve the norm.

`step_tangent` advances a state together with a tangent vector through the
exact differential of the split map, renormalizing every step and
accumulating the log growth; this is the backbone of the Lyapunov
estimator.

The kernels below work on plain floats: single-trajectory runs spend all
their time here and per-step numpy overhead would dominate.  Batched
counterparts for ensembles live in `ensemble`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dynamics as dyn
from .dynamics import SimParams
from .so3 import cross

__all__ = ["State", "TangentState", "step_split", "step_euler_maruyama", "step_tangent"]


def _as_vec3(name: str, value) -> np.ndarray:
    v = np.array(value, dtype=np.float64)
    if v.shape != (3,):
        raise ValueError(f"{name} must have shape (3,), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    return v


@dataclass
class State:
    """Momentum vector and the time it belongs to."""

    pi: np.ndarray
    t: float

    def __post_init__(self):
        self.pi = _as_vec3("pi", self.pi)
        self.t = float(self.t)


@dataclass
class TangentState:
    """State plus a tangent perturbation and its accumulated log growth."""

    pi: np.ndarray
    delta: np.ndarray
    t: float
    log_norm: float = 0.0

    def __post_init__(self):
        self.pi = _as_vec3("pi", self.pi)
        self.delta = _as_vec3("delta", self.delta)
        self.t = float(self.t)
        self.log_norm = float(self.log_norm)


class _Plan:
    """Parameters unpacked to plain floats for the scalar kernels."""

    __slots__ = ("dt", "half", "inv1", "inv2", "inv3", "theta", "noise", "standard")

    def __init__(self, params: SimParams):
        self.standard = params.noise.is_standard_axes
        self.dt = params.dt
        self.half = 0.5 * params.dt
        inv = params.inertia.inverse()
        self.inv1 = float(inv[0])
        self.inv2 = float(inv[1])
        self.inv3 = float(inv[2])
        self.theta = params.theta
        vecs = params.noise.vectors()
        noise = []
        for i in range(3):
            sx, sy, sz = (float(vecs[i, 0]), float(vecs[i, 1]), float(vecs[i, 2]))
            mag = math.sqrt(sx * sx + sy * sy + sz * sz)
            if mag > 0.0:
                noise.append((sx / mag, sy / mag, sz / mag, mag))
        self.noise = tuple(noise)


def _free_sweep(px, py, pz, tau, inv1, inv2, inv3, reverse):
    """Exact free-rotation factors about e1, e2, e3 (or reversed), each for
    time tau.  Component i is invariant under its own factor, so the angle
    pi_i tau / I_i is well defined."""
    if reverse:
        a = pz * tau * inv3
        c = math.cos(a)
        s = math.sin(a)
        px, py = px * c - py * s, px * s + py * c
        a = py * tau * inv2
        c = math.cos(a)
        s = math.sin(a)
        px, pz = px * c + pz * s, pz * c - px * s
        a = px * tau * inv1
        c = math.cos(a)
        s = math.sin(a)
        py, pz = py * c - pz * s, py * s + pz * c
    else:
        a = px * tau * inv1
        c = math.cos(a)
        s = math.sin(a)
        py, pz = py * c - pz * s, py * s + pz * c
        a = py * tau * inv2
        c = math.cos(a)
        s = math.sin(a)
        px, pz = px * c + pz * s, pz * c - px * s
        a = pz * tau * inv3
        c = math.cos(a)
        s = math.sin(a)
        px, py = px * c - py * s, px * s + py * c
    return px, py, pz


def _rodrigues(vx, vy, vz, ux, uy, uz, angle):
    """Rotate v about the unit axis u.  1 - cos is computed as 2 sin^2(a/2)
    so tiny angles do not lose the axial component to cancellation."""
    c = math.cos(angle)
    s = math.sin(angle)
    hs = math.sin(0.5 * angle)
    omc = 2.0 * hs * hs
    cx = uy * vz - uz * vy
    cy = uz * vx - ux * vz
    cz = ux * vy - uy * vx
    d = (ux * vx + uy * vy + uz * vz) * omc
    return (
        vx * c + cx * s + ux * d,
        vy * c + cy * s + uy * d,
        vz * c + cz * s + uz * d,
    )


def _friction_force(px, py, pz, inv1, inv2, inv3, theta):
    """theta * pi x (pi x omega), the energy-descent drift."""
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


def _friction_step(px, py, pz, dt, inv1, inv2, inv3, theta):
    """Midpoint step of the friction flow, rescaled to the entry radius.

    The flow itself conserves |pi|; the rescale removes the O(dt^3) radial
    defect of the midpoint rule so the full integrator stays on the sphere.
    """
    r0 = math.sqrt(px * px + py * py + pz * pz)
    kx, ky, kz = _friction_force(px, py, pz, inv1, inv2, inv3, theta)
    h2 = 0.5 * dt
    mx = px + h2 * kx
    my = py + h2 * ky
    mz = pz + h2 * kz
    kx, ky, kz = _friction_force(mx, my, mz, inv1, inv2, inv3, theta)
    px = px + dt * kx
    py = py + dt * ky
    pz = pz + dt * kz
    rn = math.sqrt(px * px + py * py + pz * pz)
    if rn == 0.0:
        return px, py, pz
    scale = r0 / rn
    return px * scale, py * scale, pz * scale


def _split_kernel(px, py, pz, plan, dw1, dw2, dw3):
    """One full split step on plain floats."""
    px, py, pz = _free_sweep(
        px, py, pz, plan.half, plan.inv1, plan.inv2, plan.inv3, False
    )
    if plan.theta != 0.0:
        px, py, pz = _friction_step(
            px, py, pz, plan.dt, plan.inv1, plan.inv2, plan.inv3, plan.theta
        )
    if plan.noise:
        dws = (dw1, dw2, dw3)
        for i, (ux, uy, uz, mag) in enumerate(plan.noise):
            px, py, pz = _rodrigues(px, py, pz, ux, uy, uz, mag * dws[i])
    return _free_sweep(px, py, pz, plan.half, plan.inv1, plan.inv2, plan.inv3, True)


def step_split(state: State, params: SimParams, dw) -> State:
    """Advance one step of size params.dt given the Brownian increments dw
    (three independent N(0, dt) draws; ignored where sigma = 0)."""
    dw = _as_vec3("dw", dw)
    plan = _Plan(params)
    px, py, pz = _split_kernel(
        float(state.pi[0]),
        float(state.pi[1]),
        float(state.pi[2]),
        plan,
        float(dw[0]),
        float(dw[1]),
        float(dw[2]),
    )
    return State(pi=np.array([px, py, pz]), t=state.t + params.dt)


def step_euler_maruyama(state: State, params: SimParams, dw) -> State:
    """Plain Euler-Maruyama step of the Ito form of the same dynamics.

    Drift is transport + friction + the Ito correction; diffusion enters as
    sum_i (s_i x pi) dW_i.  Nothing is projected or rescaled, so the norm
    drifts at O(dt); the scheme exists to cross-check the split integrator
    in the weak sense, not for production use.
    """
    dw = _as_vec3("dw", dw)
    pi = state.pi
    b = (
        dyn.drift_deterministic(pi, params.inertia)
        + dyn.drift_dissipative(pi, params.inertia, params.theta)
        + dyn.ito_correction(pi, params.noise)
    )
    new = pi + params.dt * b
    for i, s in enumerate(params.noise.vectors()):
        new = new + cross(s, pi) * dw[i]
    return State(pi=new, t=state.t + params.dt)


def _friction_differential(px, py, pz, dx, dy, dz, inv1, inv2, inv3, theta):
    """Directional derivative of the friction drift at pi along delta."""
    ox = px * inv1
    oy = py * inv2
    oz = pz * inv3
    gx = dx * inv1
    gy = dy * inv2
    gz = dz * inv3
    wx = py * oz - pz * oy
    wy = pz * ox - px * oz
    wz = px * oy - py * ox
    # d(pi x omega) = delta x omega + pi x (I^-1 delta)
    ax = dy * oz - dz * oy + py * gz - pz * gy
    ay = dz * ox - dx * oz + pz * gx - px * gz
    az = dx * oy - dy * ox + px * gy - py * gx
    # d(pi x w) = delta x w + pi x dw
    return (
        theta * (dy * wz - dz * wy + py * az - pz * ay),
        theta * (dz * wx - dx * wz + pz * ax - px * az),
        theta * (dx * wy - dy * wx + px * ay - py * ax),
    )


def _friction_step_tangent(px, py, pz, dx, dy, dz, dt, inv1, inv2, inv3, theta):
    """Friction step together with its exact differential (chain rule through
    the midpoint stage and the radius rescale)."""
    r0 = math.sqrt(px * px + py * py + pz * pz)
    # d r0 along delta
    dr0 = (px * dx + py * dy + pz * dz) / r0
    h2 = 0.5 * dt
    k1x, k1y, k1z = _friction_force(px, py, pz, inv1, inv2, inv3, theta)
    a1x, a1y, a1z = _friction_differential(
        px, py, pz, dx, dy, dz, inv1, inv2, inv3, theta
    )
    mx = px + h2 * k1x
    my = py + h2 * k1y
    mz = pz + h2 * k1z
    dmx = dx + h2 * a1x
    dmy = dy + h2 * a1y
    dmz = dz + h2 * a1z
    k2x, k2y, k2z = _friction_force(mx, my, mz, inv1, inv2, inv3, theta)
    a2x, a2y, a2z = _friction_differential(
        mx, my, mz, dmx, dmy, dmz, inv1, inv2, inv3, theta
    )
    gx = px + dt * k2x
    gy = py + dt * k2y
    gz = pz + dt * k2z
    dgx = dx + dt * a2x
    dgy = dy + dt * a2y
    dgz = dz + dt * a2z
    rn = math.sqrt(gx * gx + gy * gy + gz * gz)
    if rn == 0.0:
        return gx, gy, gz, dgx, dgy, dgz
    drn = (gx * dgx + gy * dgy + gz * dgz) / rn
    scale = r0 / rn
    # d(r0 g / |g|) = dr0 g/|g| + r0 dg/|g| - r0 g d|g| / |g|^2
    fac = dr0 / rn - r0 * drn / (rn * rn)
    return (
        gx * scale,
        gy * scale,
        gz * scale,
        scale * dgx + fac * gx,
        scale * dgy + fac * gy,
        scale * dgz + fac * gz,
    )


def _free_sweep_tangent(px, py, pz, dx, dy, dz, tau, inv1, inv2, inv3, reverse):
    """Free half-step with its exact differential.  Each factor rotates by an
    angle that depends on the invariant component, contributing
    tau/I_i * delta_i * (e_i x pi') on top of the rotation of delta."""
    order = (2, 1, 0) if reverse else (0, 1, 2)
    invs = (inv1, inv2, inv3)
    for i in order:
        ti = tau * invs[i]
        if i == 0:
            a = px * ti
            c = math.cos(a)
            s = math.sin(a)
            py, pz = py * c - pz * s, py * s + pz * c
            dy, dz = dy * c - dz * s, dy * s + dz * c
            dy += ti * dx * (-pz)
            dz += ti * dx * py
        elif i == 1:
            a = py * ti
            c = math.cos(a)
            s = math.sin(a)
            px, pz = px * c + pz * s, pz * c - px * s
            dx, dz = dx * c + dz * s, dz * c - dx * s
            dx += ti * dy * pz
            dz += ti * dy * (-px)
        else:
            a = pz * ti
            c = math.cos(a)
            s = math.sin(a)
            px, py = px * c - py * s, px * s + py * c
            dx, dy = dx * c - dy * s, dx * s + dy * c
            dx += ti * dz * (-py)
            dy += ti * dz * px
    return px, py, pz, dx, dy, dz


def _tangent_kernel(px, py, pz, dx, dy, dz, plan, dw1, dw2, dw3):
    """One split step advancing state and tangent through exact differentials."""
    px, py, pz, dx, dy, dz = _free_sweep_tangent(
        px, py, pz, dx, dy, dz, plan.half, plan.inv1, plan.inv2, plan.inv3, False
    )
    if plan.theta != 0.0:
        px, py, pz, dx, dy, dz = _friction_step_tangent(
            px, py, pz, dx, dy, dz, plan.dt, plan.inv1, plan.inv2, plan.inv3, plan.theta
        )
    if plan.noise:
        dws = (dw1, dw2, dw3)
        for i, (ux, uy, uz, mag) in enumerate(plan.noise):
            angle = mag * dws[i]
            px, py, pz = _rodrigues(px, py, pz, ux, uy, uz, angle)
            # the angle does not depend on the state: tangent just rotates
            dx, dy, dz = _rodrigues(dx, dy, dz, ux, uy, uz, angle)
    return _free_sweep_tangent(
        px, py, pz, dx, dy, dz, plan.half, plan.inv1, plan.inv2, plan.inv3, True
    )


def step_tangent(
    tstate: TangentState, params: SimParams, dw, project: bool = True
) -> TangentState:
    """Advance state and tangent one step; renormalize the tangent.

    With project=True (default) the tangent is reprojected onto the plane
    perpendicular to pi after the step.  The dynamics conserves |pi|, so the
    radial direction is neutral; leaving it in place only adds a zero mode
    to the growth statistics.  project=False keeps the full differential,
    which is how that neutrality is verified.

    The tangent is rescaled to unit length every step and the log of its
    growth is accumulated in log_norm, so long runs cannot overflow.
    """
    dw = _as_vec3("dw", dw)
    plan = _Plan(params)
    px, py, pz, dx, dy, dz = _tangent_kernel(
        float(tstate.pi[0]),
        float(tstate.pi[1]),
        float(tstate.pi[2]),
        float(tstate.delta[0]),
        float(tstate.delta[1]),
        float(tstate.delta[2]),
        plan,
        float(dw[0]),
        float(dw[1]),
        float(dw[2]),
    )
    if project:
        r2 = px * px + py * py + pz * pz
        if r2 > 0.0:
            q = (px * dx + py * dy + pz * dz) / r2
            dx -= q * px
            dy -= q * py
            dz -= q * pz
    n = math.sqrt(dx * dx + dy * dy + dz * dz)
    if n == 0.0:
        raise ValueError("tangent vector collapsed to zero")
    return TangentState(
        pi=np.array([px, py, pz]),
        delta=np.array([dx / n, dy / n, dz / n]),
        t=tstate.t + params.dt,
        log_norm=tstate.log_norm + math.log(n),
    )
