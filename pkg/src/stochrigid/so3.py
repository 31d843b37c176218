"""Vector algebra for body angular momentum.

Momentum vectors live in R^3 with the cross product as bracket and the dot
product as pairing.  Everything here is a pure function of its inputs;
random sampling takes the generator explicitly.
"""

from __future__ import annotations

import numpy as np

__all__ = ["cross", "pairing", "rotate", "sample_uniform_sphere"]


def cross(a, b) -> np.ndarray:
    """Cross product along the last axis (the Lie bracket in disguise)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.stack(
        (
            a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
            a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2],
            a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0],
        ),
        axis=-1,
    )


def pairing(a, b):
    """Dot product along the last axis."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.sum(a * b, axis=-1)


def rotate(v, axis, angle) -> np.ndarray:
    """Rotate v about axis by angle (radians, right-handed).

    Rodrigues formula with the versine written as 2*sin(angle/2)**2, which
    is exact and avoids the cancellation in 1 - cos(angle) at small angles.
    v may be (..., 3); angle may be a scalar or broadcast against v's batch
    shape.  angle == 0 returns v unchanged, bit for bit.

    Raises ValueError for a zero (or non-finite) axis.
    """
    v = np.asarray(v, dtype=np.float64)
    axis = np.asarray(axis, dtype=np.float64)
    if axis.shape != (3,):
        raise ValueError(f"axis must have shape (3,), got {axis.shape}")
    norm = float(np.sqrt(axis[0] ** 2 + axis[1] ** 2 + axis[2] ** 2))
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("rotation axis must be nonzero and finite")
    if np.ndim(angle) == 0 and float(angle) == 0.0:
        return v.copy()
    k = axis / norm
    angle = np.asarray(angle, dtype=np.float64)[..., np.newaxis]
    c = np.cos(angle)
    s = np.sin(angle)
    half = np.sin(0.5 * angle)
    omc = 2.0 * half * half  # == 1 - cos(angle), computed without cancellation
    kdv = np.sum(k * v, axis=-1, keepdims=True)
    return v * c + cross(np.broadcast_to(k, v.shape), v) * s + k * (kdv * omc)


def sample_uniform_sphere(radius: float, rng_stream, size: int | None = None) -> np.ndarray:
    """Uniform point(s) on the sphere of given radius.

    Three standard normals rescaled to the target radius; rotation invariance
    of the construction is what buys uniformity.  rng_stream is a
    numpy.random.Generator.  Returns shape (3,) for size=None, else (size, 3).
    """
    if not np.isfinite(radius) or radius <= 0.0:
        raise ValueError(f"radius must be positive and finite, got {radius!r}")
    n = 1 if size is None else int(size)
    if n < 1:
        raise ValueError("size must be at least 1")
    g = rng_stream.normal(size=(n, 3))
    norms = np.sqrt(np.sum(g * g, axis=1))
    # A zero norm has probability ~1e-300 per draw but would poison the
    # output with NaN, so redraw those rows.
    while np.any(norms == 0.0):
        bad = norms == 0.0
        g[bad] = rng_stream.normal(size=(int(np.sum(bad)), 3))
        norms = np.sqrt(np.sum(g * g, axis=1))
    out = g * (radius / norms)[:, np.newaxis]
    return out[0] if size is None else out
