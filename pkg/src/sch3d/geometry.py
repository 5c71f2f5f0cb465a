"""Numeric primitives: points, oriented planes, orientation predicate, hull meshes.

Points are plain ``float64`` arrays; a point set is an ``(n, 3)`` array. All
predicates run in floating point with the documented tolerances below.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTriangle

# relative to |b - a| * |c - a|
EPS_DEGENERATE = 1e-12
# relative to the cube of the longest pairwise distance
EPS_ORIENT = 1e-12
# absolute, on unit-normal planes
EPS_PLANE = 1e-9
EPS_HULL = 1e-9
EPS_MERGE = 1e-12


def as_point(p):
    p = np.asarray(p, dtype=np.float64).reshape(3)
    if not np.all(np.isfinite(p)):
        raise ValueError(f"non-finite point {p}")
    return p


def as_points(points):
    """Validate and convert ``points`` to a contiguous ``(n, 3)`` float64 array."""
    arr = np.ascontiguousarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        if arr.size == 0:
            return arr.reshape(0, 3)
        raise ValueError(f"expected an (n, 3) array of points, got shape {arr.shape}")
    # min/max propagate NaN and expose +-inf without a temporary array
    if arr.size and not (np.isfinite(arr.min()) and np.isfinite(arr.max())):
        raise ValueError("point set contains NaN or Inf coordinates")
    return arr


@dataclass(frozen=True)
class OrientedPlane:
    """Plane ``normal . x + offset = 0`` with a unit normal.

    Positive values of :func:`signed_eval` are on the side the normal points to.
    """

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=np.float64).reshape(3)
        if not np.linalg.norm(n) > 0.0:
            raise ValueError("plane normal must have nonzero length")
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    def flipped(self):
        return OrientedPlane(-self.normal, -self.offset)

    def __call__(self, p):
        return signed_eval(self, p)


def signed_eval(plane, p):
    """Return ``a*x + b*y + c*z + d`` for ``plane`` at point ``p``.

    ``p`` may also be an ``(n, 3)`` array, in which case an array is returned.
    """
    p = np.asarray(p, dtype=np.float64)
    n = plane.normal
    if p.ndim == 1:
        return float(n[0] * p[0] + n[1] * p[1] + n[2] * p[2] + plane.offset)
    return p @ n + plane.offset


def plane_through(a, b, c, inside_ref):
    """Plane through ``a``, ``b``, ``c`` with ``inside_ref`` on its non-positive side.

    The normal starts as ``(b - a) x (c - a)`` and is negated when ``inside_ref``
    would otherwise evaluate positive.
    """
    a, b, c, r = (as_point(q) for q in (a, b, c, inside_ref))
    ab = b - a
    ac = c - a
    cross = np.cross(ab, ac)
    length = np.linalg.norm(cross)
    if length <= EPS_DEGENERATE * np.linalg.norm(ab) * np.linalg.norm(ac) or length == 0.0:
        raise DegenerateTriangle(f"collinear triple {a}, {b}, {c}")
    normal = cross / length
    plane = OrientedPlane(normal, -float(normal @ a))
    if signed_eval(plane, r) > 0.0:
        plane = plane.flipped()
    return plane


def orient3d(a, b, c, p):
    """Sign of ``det[b - a, c - a, p - a]``: +1, -1, or 0 when (near) coplanar.

    Positive when ``p`` lies on the side of plane ``abc`` that ``(b-a) x (c-a)``
    points to.
    """
    a, b, c, p = (as_point(q) for q in (a, b, c, p))
    u, v, w = b - a, c - a, p - a
    det = float(np.dot(np.cross(u, v), w))
    # longest pairwise distance, so the scale is the same for any argument order
    span = max(np.linalg.norm(q) for q in (u, v, w, c - b, p - b, p - c))
    scale = span**3
    if abs(det) <= EPS_ORIENT * scale:
        return 0
    return 1 if det > 0.0 else -1


@dataclass
class HullMesh:
    """Triangulated convex polyhedron.

    ``faces`` index into ``vertices`` and are wound counter-clockwise seen from
    outside, so ``(v1 - v0) x (v2 - v0)`` points outward. ``source_index`` maps
    each vertex back to its row in the point set the hull was built from.
    """

    vertices: np.ndarray
    faces: np.ndarray
    source_index: np.ndarray = field(default=None)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if self.source_index is not None:
            self.source_index = np.asarray(self.source_index, dtype=np.int64)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    def edges(self):
        """Unique undirected edges as a sorted ``(E, 2)`` array."""
        f = self.faces
        e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    def euler_characteristic(self):
        used = np.unique(self.faces)
        return len(used) - len(self.edges()) + len(self.faces)

    def face_normals(self, unit=True):
        v = self.vertices[self.faces]
        n = np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0])
        if unit:
            n /= np.linalg.norm(n, axis=1, keepdims=True)
        return n


def sorted_unique_rows(points, tol=EPS_MERGE):
    """Lexicographically sorted rows with near-duplicates (within ``tol``) merged."""
    pts = as_points(points)
    if len(pts) == 0:
        return pts
    pts = pts[np.lexsort(pts.T[::-1])]
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.abs(np.diff(pts, axis=0)) > tol, axis=1)
    return pts[keep]


def same_point_set(a, b, tol=EPS_MERGE):
    """True when every point of ``a`` is within ``tol`` of one in ``b`` and vice versa."""
    from scipy.spatial import cKDTree

    a = sorted_unique_rows(a, tol)
    b = sorted_unique_rows(b, tol)
    if len(a) == 0 or len(b) == 0:
        return len(a) == len(b)
    da, _ = cKDTree(b).query(a)
    db, _ = cKDTree(a).query(b)
    return bool(np.all(da <= tol) and np.all(db <= tol))
