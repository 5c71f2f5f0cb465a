import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sch3d import (DegenerateTriangle, HullMesh, OrientedPlane, orient3d, plane_through,
                   signed_eval)
from sch3d.geometry import EPS_PLANE, same_point_set, sorted_unique_rows

coord = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
point = arrays(np.float64, 3, elements=coord)


@pytest.mark.parametrize("normal, offset, p, expected", [
    ((0, 0, 1), 0, (5, 7, 0), 0.0),
    ((0, 0, 1), 0, (0, 0, 2), 2.0),
    ((1, 1, 1), -3, (1, 1, 1), 0.0),
])
def test_signed_eval_examples(normal, offset, p, expected):
    # raw (unnormalized) normals are allowed on construction
    assert signed_eval(OrientedPlane(normal, offset), p) == expected


def test_signed_eval_vectorized():
    plane = OrientedPlane((0, 0, 1), -1)
    got = signed_eval(plane, np.array([[0, 0, 0], [3, 4, 1], [0, 0, 5.0]]))
    np.testing.assert_array_equal(got, [-1, 0, 4])


def test_zero_normal_rejected():
    with pytest.raises(ValueError):
        OrientedPlane((0, 0, 0), 1)


def test_plane_through_unit_simplex():
    plane = plane_through((1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0))
    np.testing.assert_allclose(plane.normal, np.ones(3) / np.sqrt(3), atol=1e-15)
    assert signed_eval(plane, (0, 0, 0)) < 0
    assert abs(np.linalg.norm(plane.normal) - 1) < 1e-15


def test_plane_through_collinear():
    with pytest.raises(DegenerateTriangle):
        plane_through((0, 0, 0), (1, 0, 0), (2, 0, 0), (5, 5, 5))


def test_plane_through_flips_for_positive_ref(rng):
    for _ in range(50):
        a, b, c = rng.normal(size=(3, 3))
        raw = np.cross(b - a, c - a)
        raw /= np.linalg.norm(raw)
        ref = a + 3 * raw  # strictly on the raw-positive side
        plane = plane_through(a, b, c, ref)
        np.testing.assert_allclose(plane.normal, -raw, atol=1e-12)


def test_orient3d_examples():
    o, ex, ey, ez = (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert orient3d(o, ex, ey, ez) == 1
    assert orient3d(o, ey, ex, ez) == -1
    assert orient3d(o, ex, ey, (0.3, 0.7, 0)) == 0
    # near-coplanar within the relative tolerance is still zero
    assert orient3d(o, ex, ey, (0.3, 0.7, 1e-14)) == 0


@settings(max_examples=200, deadline=None)
@given(point, point, point, point, st.floats(0, 1))
def test_signed_eval_is_affine(n, q1, q2, off, alpha):
    if np.linalg.norm(n) < 1e-3:
        return
    plane = OrientedPlane(n, float(off[0]))
    mixed = signed_eval(plane, alpha * q1 + (1 - alpha) * q2)
    expect = alpha * signed_eval(plane, q1) + (1 - alpha) * signed_eval(plane, q2)
    scale = 1 + abs(plane.offset) + np.abs(q1).max() + np.abs(q2).max()
    assert abs(mixed - expect) <= 1e-9 * scale


@settings(max_examples=200, deadline=None)
@given(point, point, point, point)
def test_plane_through_contains_its_points(a, b, c, ref):
    try:
        plane = plane_through(a, b, c, ref)
    except DegenerateTriangle:
        return
    scale = max(1.0, np.abs([a, b, c]).max())
    for q in (a, b, c):
        # unit normal, so this is a distance; tolerance scales with magnitude
        assert abs(signed_eval(plane, q)) <= EPS_PLANE * scale * 100
    assert signed_eval(plane, ref) <= EPS_PLANE * scale * 100


@settings(max_examples=200, deadline=None)
@given(point, point, point, point)
def test_orient3d_antisymmetric(a, b, c, p):
    s = orient3d(a, b, c, p)
    assert orient3d(b, a, c, p) == -s
    assert orient3d(a, c, b, p) == -s
    assert orient3d(c, b, a, p) == -s


def test_mesh_euler_and_normals():
    v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
    f = np.array([[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
    mesh = HullMesh(v, f)
    assert mesh.euler_characteristic() == 2
    assert len(mesh.edges()) == 6
    centroid = v.mean(axis=0)
    centers = v[f].mean(axis=1)
    assert np.all(np.einsum("ij,ij->i", mesh.face_normals(), centers - centroid) > 0)


def test_point_set_helpers():
    a = np.array([[1, 2, 3], [0, 0, 0], [1, 2, 3 + 1e-14]])
    assert len(sorted_unique_rows(a)) == 2
    assert same_point_set(a, [[0, 0, 0], [1, 2, 3]])
    assert not same_point_set(a, [[0, 0, 0], [1, 2, 3.1]])
