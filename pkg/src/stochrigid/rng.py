"""Counter-based random streams for reproducible parallel simulation.

Every random draw in the package is addressed, not sequenced: a draw is a
pure function of (master seed, stream domain, step index, particle index).
There is no mutable generator state, so a block of particles can be computed
on any worker, in any order, in any chunk size, and the numbers come out
bit-identical.

The core is the Philox 4x64 keyed counter transform (10 rounds), vectorized
over numpy uint64 arrays.  The test suite checks it word-for-word against
``numpy.random.Philox`` so the implementation here is pinned to the reference
algorithm rather than merely "looking random".
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "philox4x64",
    "normals3",
    "uniforms",
    "check_seed",
]

# Stream domains.  Distinct domains behave as independent generators for the
# same master seed; the values are arbitrary but frozen (changing one would
# silently change every seeded result downstream).
INIT_UNIFORM = 0x11
INIT_GIBBS = 0x12
PATH_NOISE = 0x21
COMMON_NOISE = 0x22
LYAPUNOV_NOISE = 0x23

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)

# 2**-53; (bits >> 11) spans [0, 2**53) so this maps to [0, 1).
_INV53 = float(np.ldexp(1.0, -53))
_TWO_PI = 2.0 * np.pi


def check_seed(seed) -> int:
    """Validate a master seed (integer in [0, 2**64))."""
    s = int(seed)
    if s < 0 or s >= 2**64:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return s


def _mulhilo(a: np.uint64, b: np.ndarray):
    # 64x64 -> 128 bit product of scalar a with array b, as (hi, lo) words.
    lo = a * b
    ah, al = a >> _S32, a & _MASK32
    bh, bl = b >> _S32, b & _MASK32
    ll = al * bl
    lh = al * bh
    hl = ah * bl
    carry = ((ll >> _S32) + (lh & _MASK32) + (hl & _MASK32)) >> _S32
    hi = ah * bh + (lh >> _S32) + (hl >> _S32) + carry
    return hi, lo


def philox4x64(c0, c1, c2, c3, key0: int, key1: int, rounds: int = 10):
    """Philox 4x64 block transform, vectorized over counter arrays.

    c0..c3 are broadcast against each other (uint64).  Returns four uint64
    arrays of the broadcast shape.  Matches numpy's Philox bit generator for
    the same (counter, key) block.
    """
    x0, x1, x2, x3 = np.broadcast_arrays(
        *(np.asarray(c, dtype=np.uint64) for c in (c0, c1, c2, c3))
    )
    # broadcast_arrays returns read-only views; the round updates rebind, so
    # no copy is needed.  The key schedule wraps mod 2^64 by design; doing the
    # bumps in Python ints keeps numpy's overflow warnings out of it.
    mask = (1 << 64) - 1
    k0 = int(key0)
    k1 = int(key1)
    # the low product word wraps mod 2^64 by design: that wrap is the
    # algorithm, not an accident, so the overflow warning is silenced here
    with np.errstate(over="ignore"):
        for _ in range(rounds):
            rk0 = np.uint64(k0)
            rk1 = np.uint64(k1)
            hi0, lo0 = _mulhilo(_M0, x0)
            hi1, lo1 = _mulhilo(_M1, x2)
            x0 = hi1 ^ x1 ^ rk0
            x1 = lo1
            x2 = hi0 ^ x3 ^ rk1
            x3 = lo0
            k0 = (k0 + 0x9E3779B97F4A7C15) & mask
            k1 = (k1 + 0xBB67AE8584CAA73B) & mask
    return x0, x1, x2, x3


def _u01(bits: np.ndarray) -> np.ndarray:
    # [0, 1) with 53-bit resolution
    return (bits >> _S11).astype(np.float64) * _INV53


def _u01_open(bits: np.ndarray) -> np.ndarray:
    # (0, 1]: safe as a Box-Muller radius (log never sees 0)
    return ((bits >> _S11) + np.uint64(1)).astype(np.float64) * _INV53


def normals3(seed: int, domain: int, step, particle):
    """Three standard normals per (step, particle) address.

    step and particle may be scalars or arrays; they broadcast.  Returns an
    array of shape (3,) + broadcast_shape.  Drawn by Box-Muller from one
    Philox block, so the mapping from address to value is exact and frozen.
    """
    b0, b1, b2, b3 = philox4x64(step, particle, 0, domain, seed, 0)
    r1 = np.sqrt(-2.0 * np.log(_u01_open(b0)))
    a1 = _TWO_PI * _u01(b1)
    r2 = np.sqrt(-2.0 * np.log(_u01_open(b2)))
    a2 = _TWO_PI * _u01(b3)
    out = np.empty((3,) + b0.shape, dtype=np.float64)
    out[0] = r1 * np.cos(a1)
    out[1] = r1 * np.sin(a1)
    out[2] = r2 * np.cos(a2)
    return out


def uniforms(seed: int, domain: int, step, particle):
    """One uniform [0,1) per (step, particle) address.

    Uses a separate block index from normals3, so the two never share bits
    for the same address.
    """
    b0, _, _, _ = philox4x64(step, particle, 1, domain, seed, 0)
    return _u01(b0)
