"""Vector algebra: bracket identities, rotations against a reference, sampling."""

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from stochrigid.so3 import cross, pairing, rotate, sample_uniform_sphere


def test_cross_matches_numpy():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(50, 3))
    b = rng.normal(size=(50, 3))
    assert np.allclose(cross(a, b), np.cross(a, b), atol=1e-15)
    assert np.allclose(cross(a[0], b[0]), np.cross(a[0], b[0]), atol=1e-15)


def test_bracket_identities():
    rng = np.random.default_rng(2)
    a, b, c = rng.normal(size=(3, 3))
    assert np.allclose(cross(a, b), -cross(b, a), atol=1e-15)
    jacobi = cross(a, cross(b, c)) + cross(b, cross(c, a)) + cross(c, cross(a, b))
    assert np.max(np.abs(jacobi)) < 1e-14
    assert abs(pairing(a, cross(a, b))) < 1e-14


def test_pairing_is_dot():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(20, 3))
    b = rng.normal(size=(20, 3))
    assert np.allclose(pairing(a, b), np.einsum("ij,ij->i", a, b), atol=1e-15)


def test_rotate_matches_reference_rotation():
    rng = np.random.default_rng(4)
    for _ in range(25):
        axis = rng.normal(size=3)
        angle = rng.uniform(-8, 8)
        v = rng.normal(size=(6, 3))
        k = axis / np.linalg.norm(axis)
        ref = Rotation.from_rotvec(k * angle).apply(v)
        assert np.allclose(rotate(v, axis, angle), ref, atol=1e-13)


def test_rotate_right_hand_rule():
    e1, e2, e3 = np.eye(3)
    assert np.allclose(rotate(e1, e3, np.pi / 2), e2, atol=1e-15)
    assert np.allclose(rotate(e2, e1, np.pi / 2), e3, atol=1e-15)
    assert np.allclose(rotate(e3, e2, np.pi / 2), e1, atol=1e-15)


def test_rotate_zero_angle_is_identity_bitwise():
    v = np.array([0.1, -2.3, 0.77])
    out = rotate(v, np.array([1.0, 1.0, 0.0]), 0.0)
    assert np.array_equal(out, v)
    assert out is not v


def test_rotate_preserves_norm_and_axis():
    rng = np.random.default_rng(5)
    v = rng.normal(size=3)
    axis = rng.normal(size=3)
    out = rotate(v, axis, 1.234)
    assert abs(np.linalg.norm(out) - np.linalg.norm(v)) < 1e-14
    k = axis / np.linalg.norm(axis)
    assert np.allclose(rotate(k, axis, 2.5), k, atol=1e-15)


def test_rotate_small_angle_accuracy():
    # versine form keeps relative accuracy where 1-cos(angle) would cancel
    v = np.array([1.0, 0.0, 0.0])
    angle = 1e-9
    out = rotate(v, np.array([0.0, 0.0, 1.0]), angle)
    assert abs(out[1] - angle) < 1e-24
    assert abs(np.linalg.norm(out) - 1.0) < 1e-15


def test_rotate_composition():
    rng = np.random.default_rng(6)
    v = rng.normal(size=3)
    axis = rng.normal(size=3)
    once = rotate(v, axis, 0.7 + 0.4)
    twice = rotate(rotate(v, axis, 0.7), axis, 0.4)
    assert np.allclose(once, twice, atol=1e-14)


def test_rotate_rejects_bad_axis():
    v = np.zeros(3)
    with pytest.raises(ValueError):
        rotate(v, np.zeros(3), 1.0)
    with pytest.raises(ValueError):
        rotate(v, np.array([np.nan, 0.0, 0.0]), 1.0)
    with pytest.raises(ValueError):
        rotate(v, np.eye(3), 1.0)


def test_sample_uniform_sphere_radius_and_shape():
    g = np.random.default_rng(7)
    one = sample_uniform_sphere(2.5, g)
    assert one.shape == (3,)
    assert abs(np.linalg.norm(one) - 2.5) < 1e-12
    many = sample_uniform_sphere(0.5, g, size=1000)
    assert many.shape == (1000, 3)
    assert np.max(np.abs(np.linalg.norm(many, axis=1) - 0.5)) < 1e-12


def test_sample_uniform_sphere_is_uniform():
    # z/c is uniform on [-1,1]: mean 0, var 1/3; octant counts are even
    g = np.random.default_rng(8)
    n = 200_000
    pts = sample_uniform_sphere(1.0, g, size=n)
    z = pts[:, 2]
    assert abs(z.mean()) < 4.0 / np.sqrt(3.0 * n)
    assert abs(np.mean(z * z) - 1.0 / 3.0) < 4.0 * np.sqrt(4.0 / 45.0 / n)
    octant = (pts[:, 0] > 0).astype(int) * 4 + (pts[:, 1] > 0) * 2 + (pts[:, 2] > 0)
    counts = np.bincount(octant, minlength=8)
    assert np.max(np.abs(counts - n / 8)) < 5.0 * np.sqrt(n * 7.0 / 64.0)


def test_sample_uniform_sphere_deterministic():
    a = sample_uniform_sphere(1.0, np.random.default_rng(9), size=5)
    b = sample_uniform_sphere(1.0, np.random.default_rng(9), size=5)
    assert np.array_equal(a, b)


def test_sample_uniform_sphere_rejects_bad_radius():
    g = np.random.default_rng(10)
    for r in (0.0, -1.0, np.inf, np.nan):
        with pytest.raises(ValueError):
            sample_uniform_sphere(r, g)
