"""Linear-time point reduction ahead of a 3D convex hull.

The pipeline drops every point that provably cannot be a hull vertex:

1. estimate the six axis extremes from a random sample and build the inner
   polyhedron they span; points inside it are gone;
2. stream the remaining points through a grid of ``6 * d * d`` pyramidal
   sectors (a ``d x d`` grid on each face of a cube around the center ``C``),
   keeping per sector the point farthest from ``C``; a point that lies in the
   tetrahedron formed by ``C``, its sector maximum and two neighbouring maxima
   (and strictly under their cap plane) is discarded;
3. recheck the survivors against the final maxima.

Every cap tetrahedron has its corners inside the hull (``C`` is an average of
input points, maxima are input points or lie on the inner polyhedron), so a
discarded point is interior. That is what makes the filter conservative.
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum, IntEnum
from functools import lru_cache
from itertools import combinations, product
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import DegenerateExtremes, DegenerateTriangle, EmptyInput, ZeroDirection
from .geometry import (
    EPS_DEGENERATE,
    EPS_MERGE,
    EPS_PLANE,
    OrientedPlane,
    as_point,
    as_points,
    plane_through,
    signed_eval,
)

DEFAULT_DIVISIONS = 8
DEFAULT_SAMPLE_FRACTION = 0.10

# per-point status codes used by the batch kernels
ELIM_INITIAL = 0
ELIM_PLANES = 1
ELIM_RECHECK = 2
SUSPICIOUS = 3
PENDING = 4

# relative tolerance for "same distance as the current maximum"
_EPS_TIE = 1e-12


class CubeFace(IntEnum):
    PX = 0
    NX = 1
    PY = 2
    NY = 3
    PZ = 4
    NZ = 5

    @property
    def axis(self):
        return self.value // 2

    @property
    def sign(self):
        return 1.0 if self.value % 2 == 0 else -1.0


# in-face (u, v) axes for a face whose normal is along x, y, z
_FACE_AXES = ((1, 2), (0, 2), (0, 1))


class SectorId(NamedTuple):
    face: CubeFace
    u: int
    v: int
    d: int

    @property
    def index(self):
        return (int(self.face) * self.d + self.u) * self.d + self.v

    @classmethod
    def from_index(cls, index, d):
        face, rest = divmod(int(index), d * d)
        u, v = divmod(rest, d)
        return cls(CubeFace(face), u, v, d)


class Side(Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"


class Offer(Enum):
    KEPT = "kept"
    DISCARDED = "discarded"
    NEW_MAXIMUM = "new_maximum"


@dataclass
class FilterStats:
    n_input: int = 0
    n_sampled_for_extremes: int = 0
    n_eliminated_initial: int = 0
    n_eliminated_planes: int = 0
    n_eliminated_recheck: int = 0
    n_suspicious: int = 0
    n_hull_vertices: int = None
    divisions: int = DEFAULT_DIVISIONS
    sample_fraction: float = DEFAULT_SAMPLE_FRACTION
    degenerate_fallback: bool = False
    durations_ms: dict = field(default_factory=dict)

    def accounting_ok(self):
        total = (self.n_eliminated_initial + self.n_eliminated_planes
                 + self.n_eliminated_recheck + self.n_suspicious)
        ok = total == self.n_input
        if self.n_hull_vertices is not None:
            ok = ok and self.n_hull_vertices <= self.n_suspicious
        return ok

    def to_dict(self):
        return asdict(self)


# --------------------------------------------------------------------------
# numba kernels; shared by the single-point API and the batch pipeline


@njit(cache=True, nogil=True, error_model="numpy", inline="always")
def _sector_index(vx, vy, vz, d):
    """Sector of direction ``v`` (non-zero). Ties go to x, then y."""
    ax = abs(vx)
    ay = abs(vy)
    az = abs(vz)
    if ax >= ay and ax >= az:
        face = 0 if vx >= 0.0 else 1
        c1 = vy
        c2 = vz
        h = 0.5 * d / ax
    elif ay >= az:
        face = 2 if vy >= 0.0 else 3
        c1 = vx
        c2 = vz
        h = 0.5 * d / ay
    else:
        face = 4 if vz >= 0.0 else 5
        c1 = vx
        c2 = vy
        h = 0.5 * d / az
    half = 0.5 * d
    u = int(math.floor(c1 * h + half))
    v = int(math.floor(c2 * h + half))
    if u < 0:
        u = 0
    elif u > d - 1:
        u = d - 1
    if v < 0:
        v = 0
    elif v > d - 1:
        v = d - 1
    return (face * d + u) * d + v


@njit(cache=True, nogil=True, error_model="numpy", inline="always")
def _face_coords(vx, vy, vz, face):
    axis = face // 2
    if axis == 0:
        m = abs(vx)
        return vy / m, vz / m
    if axis == 1:
        m = abs(vy)
        return vx / m, vz / m
    m = abs(vz)
    return vx / m, vy / m


@njit(cache=True, nogil=True, error_model="numpy", inline="always")
def _det3(ax, ay, az, bx, by, bz, cx, cy, cz):
    return (ax * (by * cz - bz * cy)
            - ay * (bx * cz - bz * cx)
            + az * (bx * cy - by * cx))


@njit(cache=True, nogil=True, error_model="numpy", inline="always")
def _in_cap_tetra(px, py, pz, cx, cy, cz, m, ia, ix, iy, eps):
    """1 when p lies in tetrahedron (c, m[ia], m[ix], m[iy]) strictly under face
    (m[ia], m[ix], m[iy]), 0 when it does not, -1 when the tetrahedron is degenerate."""
    ax = m[ia, 0]
    ay = m[ia, 1]
    az = m[ia, 2]
    ux = m[ix, 0] - ax
    uy = m[ix, 1] - ay
    uz = m[ix, 2] - az
    wx = m[iy, 0] - ax
    wy = m[iy, 1] - ay
    wz = m[iy, 2] - az
    nx = uy * wz - uz * wy
    ny = uz * wx - ux * wz
    nz = ux * wy - uy * wx
    nn2 = nx * nx + ny * ny + nz * nz
    if nn2 <= 1e-24 * (ux * ux + uy * uy + uz * uz) * (wx * wx + wy * wy + wz * wz):
        return -1
    hc = nx * (cx - ax) + ny * (cy - ay) + nz * (cz - az)
    if hc * hc <= 1e-24 * nn2:
        return -1
    hp = nx * (px - ax) + ny * (py - ay) + nz * (pz - az)
    # p must be strictly on c's side, by more than eps
    if hc > 0.0:
        hp = -hp
    if hp >= 0.0 or hp * hp <= eps * eps * nn2:
        return 0
    # cone with apex c over the triangle; det(a-c, x-c, y-c) = -hc
    vol = -hc
    qx = ax - cx
    qy = ay - cy
    qz = az - cz
    rx = m[ix, 0] - cx
    ry = m[ix, 1] - cy
    rz = m[ix, 2] - cz
    sx = m[iy, 0] - cx
    sy = m[iy, 1] - cy
    sz = m[iy, 2] - cz
    tx = px - cx
    ty = py - cy
    tz = pz - cz
    if _det3(qx, qy, qz, rx, ry, rz, tx, ty, tz) * vol < 0.0:
        return 0
    if _det3(rx, ry, rz, sx, sy, sz, tx, ty, tz) * vol < 0.0:
        return 0
    if _det3(sx, sy, sz, qx, qy, qz, tx, ty, tz) * vol < 0.0:
        return 0
    return 1


# neighbours of a sector in counter-clockwise order around it, as
# (du + 1, dv + 1) entries of the neighbour table
_RING_U = (2, 2, 1, 0, 0, 0, 1, 2)
_RING_V = (1, 2, 2, 2, 1, 0, 0, 0)


# Per-sector cache of the cap triangles (A, ring[k], ring[k + 1]), k = 0..7.
# An entry holds the cap plane normal (c on its negative side) and discard
# threshold, the three cone normals, and a degeneracy flag. A new maximum in
# sector s marks the entries of s and of its neighbours stale (the neighbour
# relation is symmetric, so this covers every triangle using s's maximum).
_TRI_WIDTH = 14


@njit(cache=True, nogil=True, error_model="numpy")
def _build_tri(m, c, ia, ix, iy, eps, tri, s, k):
    cx = c[0]
    cy = c[1]
    cz = c[2]
    ax = m[ia, 0]
    ay = m[ia, 1]
    az = m[ia, 2]
    ux = m[ix, 0] - ax
    uy = m[ix, 1] - ay
    uz = m[ix, 2] - az
    wx = m[iy, 0] - ax
    wy = m[iy, 1] - ay
    wz = m[iy, 2] - az
    nx = uy * wz - uz * wy
    ny = uz * wx - ux * wz
    nz = ux * wy - uy * wx
    nn2 = nx * nx + ny * ny + nz * nz
    tri[s, k, 13] = 1.0
    if nn2 <= 1e-24 * (ux * ux + uy * uy + uz * uz) * (wx * wx + wy * wy + wz * wz):
        return
    hc = nx * (cx - ax) + ny * (cy - ay) + nz * (cz - az)
    if hc * hc <= 1e-24 * nn2:
        return
    if hc > 0.0:
        nx = -nx
        ny = -ny
        nz = -nz
    qx = ax - cx
    qy = ay - cy
    qz = az - cz
    rx = m[ix, 0] - cx
    ry = m[ix, 1] - cy
    rz = m[ix, 2] - cz
    sx = m[iy, 0] - cx
    sy = m[iy, 1] - cy
    sz = m[iy, 2] - cz
    vol = _det3(qx, qy, qz, rx, ry, rz, sx, sy, sz)
    if vol == 0.0:
        return
    sg = 1.0 if vol > 0.0 else -1.0
    tri[s, k, 0] = nx
    tri[s, k, 1] = ny
    tri[s, k, 2] = nz
    tri[s, k, 3] = nx * qx + ny * qy + nz * qz - eps * math.sqrt(nn2)
    # det(q, r, t) = (q x r) . t, and cyclic
    tri[s, k, 4] = sg * (qy * rz - qz * ry)
    tri[s, k, 5] = sg * (qz * rx - qx * rz)
    tri[s, k, 6] = sg * (qx * ry - qy * rx)
    tri[s, k, 7] = sg * (ry * sz - rz * sy)
    tri[s, k, 8] = sg * (rz * sx - rx * sz)
    tri[s, k, 9] = sg * (rx * sy - ry * sx)
    tri[s, k, 10] = sg * (sy * qz - sz * qy)
    tri[s, k, 11] = sg * (sz * qx - sx * qz)
    tri[s, k, 12] = sg * (sx * qy - sy * qx)
    tri[s, k, 13] = 0.0


@njit(cache=True, nogil=True, error_model="numpy", inline="always")
def _cap_discards(px, py, pz, s, c, d, nbr, max_pt, eps, fan, tri, stale):
    """Test-plane cap of sector ``s`` for point p (which lies in ``s``).

    With A the sector maximum, the quadrant of p's face projection relative to
    A's selects edge neighbours U, V and the diagonal W between them; the cap
    is triangles (A, U, W) and (A, W, V), plus (A, U, V) when W is missing or
    either triangle is degenerate. With ``fan`` set, the remaining triangles of the
    fan from A over all eight neighbour maxima are tried as well.
    """
    cx = c[0]
    cy = c[1]
    cz = c[2]
    axis = s // (d * d) // 2
    vx = px - cx
    vy = py - cy
    vz = pz - cz
    wx = max_pt[s, 0] - cx
    wy = max_pt[s, 1] - cy
    wz = max_pt[s, 2] - cz
    # face coordinates are (v1 / |v_axis|, v2 / |v_axis|); compare p's with
    # A's by cross-multiplying with the positive denominators
    if axis == 0:
        pm, p1, p2, am, a1, a2 = abs(vx), vy, vz, abs(wx), wy, wz
    elif axis == 1:
        pm, p1, p2, am, a1, a2 = abs(vy), vx, vz, abs(wy), wx, wz
    else:
        pm, p1, p2, am, a1, a2 = abs(vz), vx, vy, abs(wz), wx, wy
    du = p1 * am - a1 * pm
    dv = p2 * am - a2 * pm
    # ring position of the edge neighbour opening the quadrant (ccw order)
    if du >= 0.0:
        start = 0 if dv >= 0.0 else 6
    else:
        start = 4 if dv < 0.0 else 2
    j1 = (start + 1) % 8
    j2 = (start + 2) % 8
    iu = nbr[s, _RING_U[start], _RING_V[start]]
    iw = nbr[s, _RING_U[j1], _RING_V[j1]]
    iv = nbr[s, _RING_U[j2], _RING_V[j2]]
    if iw >= 0:
        degenerate = False
        for q in range(2):
            k = start + q
            ix = iu if q == 0 else iw
            iy = iw if q == 0 else iv
            if stale[s, k]:
                _build_tri(max_pt, c, s, ix, iy, eps, tri, s, k)
                stale[s, k] = False
            if tri[s, k, 13] != 0.0:
                degenerate = True
            elif (tri[s, k, 0] * vx + tri[s, k, 1] * vy + tri[s, k, 2] * vz < tri[s, k, 3]
                  and tri[s, k, 4] * vx + tri[s, k, 5] * vy + tri[s, k, 6] * vz >= 0.0
                  and tri[s, k, 7] * vx + tri[s, k, 8] * vy + tri[s, k, 9] * vz >= 0.0
                  and tri[s, k, 10] * vx + tri[s, k, 11] * vy + tri[s, k, 12] * vz >= 0.0):
                return True
        if degenerate and _in_cap_tetra(px, py, pz, cx, cy, cz, max_pt, s, iu, iv, eps) == 1:
            return True
    elif _in_cap_tetra(px, py, pz, cx, cy, cz, max_pt, s, iu, iv, eps) == 1:
        return True
    if not fan:
        return False
    prev = iv
    for k in range(3, 8):
        j = (start + k) % 8
        nb = nbr[s, _RING_U[j], _RING_V[j]]
        if nb < 0:
            continue
        if _in_cap_tetra(px, py, pz, cx, cy, cz, max_pt, s, prev, nb, eps) == 1:
            return True
        prev = nb
    # closing triangle back to U
    return _in_cap_tetra(px, py, pz, cx, cy, cz, max_pt, s, prev, iu, eps) == 1


@njit(cache=True, nogil=True, error_model="numpy", inline="always")
def _offer(px, py, pz, s, c, d, nbr, max_pt, max_d2, eps, fan, tri, stale):
    """0 = kept, 1 = discarded, 2 = new maximum (caller records the index)."""
    vx = px - c[0]
    vy = py - c[1]
    vz = pz - c[2]
    d2 = vx * vx + vy * vy + vz * vz
    m = max_d2[s]
    if d2 > m * (1.0 + _EPS_TIE):
        max_pt[s, 0] = px
        max_pt[s, 1] = py
        max_pt[s, 2] = pz
        max_d2[s] = d2
        stale[s, :] = True
        for a in range(3):
            for b in range(3):
                nb = nbr[s, a, b]
                if nb >= 0:
                    stale[nb, :] = True
        return 2
    if d2 >= m * (1.0 - _EPS_TIE):
        return 0
    if _cap_discards(px, py, pz, s, c, d, nbr, max_pt, eps, fan, tri, stale):
        return 1
    return 0


@njit(cache=True, nogil=True, error_model="numpy")
def _classify_batch(pts, normals, offsets, eps, c, face_order, status):
    # face_order[o] lists the faces best aligned with octant o first, so an
    # outside point usually fails on the first plane tested
    n_inside = 0
    nf = normals.shape[0]
    for i in range(pts.shape[0]):
        x = pts[i, 0]
        y = pts[i, 1]
        z = pts[i, 2]
        o = (x > c[0]) + 2 * (y > c[1]) + 4 * (z > c[2])
        inside = True
        for j in range(nf):
            f = face_order[o, j]
            if normals[f, 0] * x + normals[f, 1] * y + normals[f, 2] * z + offsets[f] > eps:
                inside = False
                break
        if inside:
            status[i] = ELIM_INITIAL
            n_inside += 1
        else:
            status[i] = PENDING
    return n_inside


@njit(cache=True, nogil=True, error_model="numpy")
def _offer_batch(pts, order, c, d, nbr, max_pt, max_d2, max_idx, status, sec, eps, zero2,
                 fan, tri, stale):
    n_disc = 0
    for t in range(order.shape[0]):
        i = order[t]
        px = pts[i, 0]
        py = pts[i, 1]
        pz = pts[i, 2]
        vx = px - c[0]
        vy = py - c[1]
        vz = pz - c[2]
        if vx * vx + vy * vy + vz * vz <= zero2:
            sec[i] = -1
            status[i] = SUSPICIOUS
            continue
        s = _sector_index(vx, vy, vz, d)
        sec[i] = s
        r = _offer(px, py, pz, s, c, d, nbr, max_pt, max_d2, eps, fan, tri, stale)
        if r == 1:
            status[i] = ELIM_PLANES
            n_disc += 1
        else:
            status[i] = SUSPICIOUS
            if r == 2:
                max_idx[s] = i
    return n_disc


@njit(cache=True, nogil=True, error_model="numpy")
def _recheck_batch(pts, c, d, nbr, max_pt, max_idx, status, sec, eps, fan, tri, stale):
    n_out = 0
    for i in range(pts.shape[0]):
        if status[i] != SUSPICIOUS:
            continue
        s = sec[i]
        if s < 0 or max_idx[s] == i:
            continue
        if _cap_discards(pts[i, 0], pts[i, 1], pts[i, 2], s, c, d, nbr, max_pt, eps, fan,
                         tri, stale):
            status[i] = ELIM_RECHECK
            n_out += 1
    return n_out


# --------------------------------------------------------------------------
# extremes and the inner polyhedron


@njit(cache=True, nogil=True, error_model="numpy")
def _sample_extremes(pts, sample):
    # min/max per axis; the first row in index order wins ties
    best = np.empty(6, dtype=np.int64)
    best[:] = sample[0]
    for t in range(1, sample.shape[0]):
        i = sample[t]
        for a in range(3):
            v = pts[i, a]
            if v < pts[best[2 * a], a]:
                best[2 * a] = i
            if v > pts[best[2 * a + 1], a]:
                best[2 * a + 1] = i
    return best


def estimate_extremes(points, sample_fraction=DEFAULT_SAMPLE_FRACTION, seed=0,
                      return_index=False):
    """Min-x, max-x, min-y, max-y, min-z, max-z points of a random sample.

    The sample has ``ceil(sample_fraction * N)`` distinct points drawn with a
    PRNG seeded by ``seed``; ``sample_fraction=1`` scans every point.
    """
    pts = as_points(points)
    n = len(pts)
    if n == 0:
        raise EmptyInput("cannot estimate extremes of an empty point set")
    if not 0.0 < sample_fraction <= 1.0:
        raise ValueError(f"sample_fraction must be in (0, 1], got {sample_fraction}")
    k = min(n, math.ceil(sample_fraction * n))
    if k >= n:
        sample = np.arange(n)
    else:
        rng = np.random.default_rng(seed)
        mask = np.zeros(n, dtype=np.bool_)
        mask[rng.choice(n, size=k, replace=False)] = True
        sample = np.flatnonzero(mask)
    index = _sample_extremes(pts, sample)
    if return_index:
        return pts[index], index
    return pts[index]


@dataclass
class InitialPolyhedron:
    """Convex polyhedron spanned by the estimated extremes.

    ``vertices`` are the distinct extremes, ``faces`` outward planes and
    ``vertex_index`` the rows of the input the vertices came from (or ``None``).
    """

    vertices: np.ndarray
    faces: list
    center: np.ndarray
    vertex_index: np.ndarray = None
    from_octants: bool = True

    @property
    def normals(self):
        return np.array([f.normal for f in self.faces])

    @property
    def offsets(self):
        return np.array([f.offset for f in self.faces])


def _octant_faces(ext, ids, center):
    # ext: 6 points in min-x, max-x, min-y, max-y, min-z, max-z order
    faces, tris = [], []
    for sx, sy, sz in product((1, 0), repeat=3):
        a, b, c = ext[sx], ext[2 + sy], ext[4 + sz]
        tri = (ids[sx], ids[2 + sy], ids[4 + sz])
        if len(set(tri)) < 3:
            continue
        try:
            plane = plane_through(a, b, c, center)
        except DegenerateTriangle:
            continue
        faces.append(plane)
        tris.append(tri)
    return faces, tris


def _is_closed(tris):
    if len(tris) < 4:
        return False
    counts = {}
    for t in tris:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            key = tuple(sorted(e))
            counts[key] = counts.get(key, 0) + 1
    return all(v == 2 for v in counts.values())


def _brute_force_facets(verts, center):
    faces = []
    for i, j, k in combinations(range(len(verts)), 3):
        try:
            plane = plane_through(verts[i], verts[j], verts[k], center)
        except DegenerateTriangle:
            continue
        if np.all(signed_eval(plane, verts) <= EPS_PLANE):
            if not any(np.allclose(plane.normal, f.normal, atol=1e-12)
                       and abs(plane.offset - f.offset) <= 1e-12 for f in faces):
                faces.append(plane)
    return faces


def _inside_hull(faces, hull_faces, center):
    """True when the intersection of the half-spaces ``faces`` is bounded and
    lies within the solid bounded by ``hull_faces``."""
    from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

    if any(signed_eval(f, center) >= -EPS_PLANE for f in faces):
        return False
    hs = np.array([np.append(f.normal, f.offset) for f in faces])
    try:
        # bounded iff the unit normals surround the origin
        if not np.all(ConvexHull(hs[:, :3]).equations[:, 3] < -1e-9):
            return False
        corners = HalfspaceIntersection(hs, center).intersections
    except QhullError:
        return False
    if not np.all(np.isfinite(corners)):
        return False
    scale = max(1.0, float(np.abs(corners).max()))
    return all(np.all(signed_eval(f, corners) <= EPS_PLANE * scale) for f in hull_faces)


def build_initial_polyhedron(extremes, extreme_index=None):
    """Inner polyhedron with one face per octant (x-, y-, z-extreme triples).

    A point is inside when it is under all octant planes, so for a lopsided
    (non-convex) set of extremes the solid is the intersection of those
    half-spaces, smaller than the hull of the extremes. Collinear or collapsed
    triples are dropped; if the octant faces then fail to close, or their
    intersection pokes out of the extremes' hull, the hull faces are used.
    """
    ext = as_points(extremes)
    if ext.shape != (6, 3):
        raise ValueError("expected 6 extremal points (min/max along x, y, z)")
    # distinct vertices by coordinates
    uniq, first, ids = np.unique(ext, axis=0, return_index=True, return_inverse=True)
    ids = ids.reshape(-1)
    if len(uniq) < 4:
        raise DegenerateExtremes(f"only {len(uniq)} distinct extremal points")
    scale = np.ptp(uniq, axis=0).max()
    vol = max(abs(np.linalg.det(uniq[[j, k, m]] - uniq[i]))
              for i, j, k, m in combinations(range(len(uniq)), 4))
    if not vol > EPS_DEGENERATE * scale**3:
        raise DegenerateExtremes("extremal points span no volume")
    center = uniq.mean(axis=0)
    faces, tris = _octant_faces(ext, ids, center)
    hull_faces = _brute_force_facets(uniq, center)
    from_octants = _is_closed(tris) and _inside_hull(faces, hull_faces, center)
    if not from_octants:
        faces = hull_faces
    if len(faces) < 4 or any(signed_eval(f, center) >= -EPS_PLANE for f in faces):
        raise DegenerateExtremes("center is not strictly inside the inner polyhedron")
    vindex = None
    if extreme_index is not None:
        vindex = np.asarray(extreme_index)[first]
    return InitialPolyhedron(uniq, faces, center, vindex, from_octants)


def classify_inside(poly, p):
    """INSIDE when ``p`` is on or under every face (boundary counts as inside)."""
    p = as_point(p)
    for f in poly.faces:
        if signed_eval(f, p) > EPS_PLANE:
            return Side.OUTSIDE
    return Side.INSIDE


# --------------------------------------------------------------------------
# sector grid


def sector_of(center, d, p):
    center = as_point(center)
    v = as_point(p) - center
    if np.linalg.norm(v) <= EPS_MERGE:
        raise ZeroDirection(f"point {p} coincides with the center {center}")
    return SectorId.from_index(_sector_index(v[0], v[1], v[2], d), d)


def _sector_center_dir(face, u, v, d):
    """Cube-surface point at the middle of sector (face, u, v)."""
    out = np.zeros(3)
    a1, a2 = _FACE_AXES[face.axis]
    out[face.axis] = face.sign
    out[a1] = -1.0 + (2 * u + 1) / d
    out[a2] = -1.0 + (2 * v + 1) / d
    return out


def _cube_points(face, c1, c2):
    """Cube-surface points for face ids and in-face coordinates (arrays)."""
    axis = face // 2
    sign = np.where(face % 2 == 0, 1.0, -1.0)
    a1 = np.array([a for a, _ in _FACE_AXES])[axis]
    a2 = np.array([b for _, b in _FACE_AXES])[axis]
    q = np.zeros((len(face), 3))
    rows = np.arange(len(face))
    q[rows, axis] = sign
    q[rows, a1] = c1
    q[rows, a2] = c2
    return q, axis, sign, a1, a2


def _sector_centers(d):
    s = np.arange(6 * d * d)
    face, u, v = s // (d * d), (s // d) % d, s % d
    q, *_ = _cube_points(face, -1.0 + (2 * u + 1) / d, -1.0 + (2 * v + 1) / d)
    return q


@njit(cache=True)
def _sector_index_batch(q, d):
    out = np.empty(q.shape[0], dtype=np.int64)
    for i in range(q.shape[0]):
        out[i] = _sector_index(q[i, 0], q[i, 1], q[i, 2], d)
    return out


@lru_cache(maxsize=16)
def _neighbor_table(d):
    n = 6 * d * d
    s = np.arange(n)
    face, u, v = s // (d * d), (s // d) % d, s % d
    table = np.full((n, 3, 3), -1, dtype=np.int64)
    rows = np.arange(n)
    for du, dv in product((-1, 0, 1), repeat=2):
        c1 = -1.0 + (2 * (u + du) + 1) / d
        c2 = -1.0 + (2 * (v + dv) + 1) / d
        q, axis, sign, a1, a2 = _cube_points(face, c1, c2)
        # fold over the cube edge onto the adjacent face
        for a, cval in ((a1, c1), (a2, c2)):
            over = np.abs(cval) > 1.0
            q[rows[over], axis[over]] = sign[over] * (2.0 - np.abs(cval[over]))
            q[rows[over], a[over]] = np.copysign(1.0, cval[over])
        idx = _sector_index_batch(q, d)
        corner = (np.abs(c1) > 1.0) & (np.abs(c2) > 1.0)
        table[:, du + 1, dv + 1] = np.where(corner, -1, idx)
    table.setflags(write=False)
    return table


def build_neighbor_table(d):
    """``(6*d*d, 3, 3)`` table: entry ``[s, du+1, dv+1]`` is the neighbour of ``s``
    one step along the face-local (u, v) grid, or -1 where three cube faces meet
    and the diagonal step has no unique target. ``[s, 1, 1]`` is ``s`` itself.

    The returned array is shared between calls and read-only.
    """
    if d < 1:
        raise ValueError(f"divisions must be >= 1, got {d}")
    return _neighbor_table(int(d))


class SectorGrid:
    """Per-sector maxima around ``center`` plus the points kept so far.

    Offered points get consecutive ids (0, 1, ...); ``max_index[s]`` is the id
    of the real point holding sector ``s``'s maximum, -1 for a synthetic seed.
    """

    def __init__(self, center, d=DEFAULT_DIVISIONS, fan=False):
        self.center = as_point(center)
        self.d = int(d)
        self.fan = bool(fan)
        self.n_sectors = 6 * self.d * self.d
        self.neighbors = build_neighbor_table(self.d)
        self.max_points = np.zeros((self.n_sectors, 3))
        self.max_dist2 = np.zeros(self.n_sectors)
        self.max_index = np.full(self.n_sectors, -1, dtype=np.int64)
        self.suspicious = {}
        self._offered = []
        self._cache = _new_cache(self.n_sectors)

    def invalidate_cache(self):
        """Forget cached cap triangles; call after editing the maxima directly."""
        self._cache[1][:] = True

    def init_maxima(self, poly):
        """Seed every sector with the point where its axis leaves ``poly``."""
        normals, offsets = poly.normals, poly.offsets
        fc = normals @ self.center + offsets
        dirs = _sector_centers(self.d)
        nd = dirs @ normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(nd > 0.0, -fc / nd, np.inf).min(axis=1)
        self.max_points[:] = self.center + t[:, None] * dirs
        self.max_dist2[:] = np.einsum("ij,ij->i", self.max_points - self.center,
                                      self.max_points - self.center)
        self.max_index[:] = -1
        self.invalidate_cache()

    def sector_of(self, p):
        return sector_of(self.center, self.d, p)

    def offer_point(self, p):
        p = as_point(p)
        s = self.sector_of(p).index
        pid = len(self._offered)
        self._offered.append(p)
        r = _offer(p[0], p[1], p[2], s, self.center, self.d, self.neighbors,
                   self.max_points, self.max_dist2, EPS_PLANE, self.fan, *self._cache)
        if r == 1:
            return Offer.DISCARDED
        self.suspicious.setdefault(s, []).append(pid)
        if r == 2:
            self.max_index[s] = pid
            return Offer.NEW_MAXIMUM
        return Offer.KEPT

    def point(self, pid):
        return self._offered[pid]

    def recheck(self):
        """Kept points that survive the cap test against the final maxima."""
        out = []
        for s, ids in self.suspicious.items():
            for pid in ids:
                p = self._offered[pid]
                if pid == self.max_index[s] or not _cap_discards(
                        p[0], p[1], p[2], s, self.center, self.d, self.neighbors,
                        self.max_points, EPS_PLANE, self.fan, *self._cache):
                    out.append(p)
        return np.array(out).reshape(-1, 3)


# --------------------------------------------------------------------------
# full pipeline


def _new_cache(n_sectors):
    return np.zeros((n_sectors, 8, _TRI_WIDTH)), np.ones((n_sectors, 8), dtype=np.bool_)


def _seeded_grid(poly, d, fan=False):
    grid = SectorGrid(poly.center, d, fan)
    grid.init_maxima(poly)
    return grid


def _ms(t0):
    return (time.perf_counter() - t0) * 1e3


def run_filter(points, d=DEFAULT_DIVISIONS, sample_fraction=DEFAULT_SAMPLE_FRACTION,
               seed=0, workers=1, fan=False, return_index=False):
    """Reduce ``points`` to the suspicious candidates for the final hull.

    Returns ``(suspicious, stats)`` or, with ``return_index``, also the row
    indices of the suspicious points in ``points``. With ``workers > 1`` the
    sector pass runs on independent grids over contiguous chunks whose maxima
    are merged before the recheck. ``fan`` widens the test-plane cap from the
    quadrant's two triangles to the whole neighbour fan (eliminates more).
    """
    pts = as_points(points)
    n = len(pts)
    if n == 0:
        raise EmptyInput("no points to filter")
    stats = FilterStats(n_input=n, divisions=int(d), sample_fraction=float(sample_fraction))
    t_all = time.perf_counter()

    t0 = time.perf_counter()
    ext, ext_idx = estimate_extremes(pts, sample_fraction, seed, return_index=True)
    stats.n_sampled_for_extremes = min(n, math.ceil(sample_fraction * n))
    try:
        poly = build_initial_polyhedron(ext, ext_idx)
    except DegenerateExtremes:
        poly = None
    stats.durations_ms["extremes"] = _ms(t0)

    if poly is None or n < 4:
        stats.degenerate_fallback = True
        stats.n_suspicious = n
        index = np.arange(n)
        stats.durations_ms["total"] = _ms(t_all)
        return (pts, stats, index) if return_index else (pts, stats)

    t0 = time.perf_counter()
    status = np.empty(n, dtype=np.int8)
    normals = poly.normals
    octants = np.array(list(product((-1.0, 1.0), repeat=3)))[:, ::-1]
    face_order = np.argsort(-(octants @ normals.T), axis=1, kind="stable")
    _classify_batch(pts, normals, poly.offsets, EPS_PLANE, poly.center, face_order, status)
    # the extremes are input points on the polyhedron boundary; keep them
    status[poly.vertex_index] = PENDING
    stats.n_eliminated_initial = int(np.count_nonzero(status == ELIM_INITIAL))
    stats.durations_ms["initial_filter"] = _ms(t0)

    t0 = time.perf_counter()
    grid = _seeded_grid(poly, d, fan)
    sec = np.full(n, -1, dtype=np.int64)
    order = np.flatnonzero(status == PENDING)
    zero2 = EPS_MERGE * EPS_MERGE
    c = grid.center
    if workers <= 1 or len(order) < 2 * workers:
        n_disc = _offer_batch(pts, order, c, grid.d, grid.neighbors, grid.max_points,
                              grid.max_dist2, grid.max_index, status, sec, EPS_PLANE, zero2,
                              grid.fan, *grid._cache)
    else:
        chunks = np.array_split(order, workers)
        parts = [(grid.max_points.copy(), grid.max_dist2.copy(), grid.max_index.copy())
                 for _ in chunks]

        def work(k):
            mp, md, mi = parts[k]
            return _offer_batch(pts, chunks[k], c, grid.d, grid.neighbors, mp, md, mi,
                                status, sec, EPS_PLANE, zero2, grid.fan,
                                *_new_cache(grid.n_sectors))

        with ThreadPoolExecutor(max_workers=workers) as ex:
            n_disc = sum(ex.map(work, range(len(chunks))))
        merge_maxima(grid, parts)
    stats.n_eliminated_planes = int(n_disc)
    stats.durations_ms["sectors"] = _ms(t0)

    t0 = time.perf_counter()
    stats.n_eliminated_recheck = int(_recheck_batch(
        pts, c, grid.d, grid.neighbors, grid.max_points, grid.max_index, status, sec,
        EPS_PLANE, grid.fan, *grid._cache))
    index = np.flatnonzero(status == SUSPICIOUS)
    stats.n_suspicious = len(index)
    stats.durations_ms["recheck"] = _ms(t0)
    stats.durations_ms["total"] = _ms(t_all)
    if return_index:
        return pts[index], stats, index
    return pts[index], stats


def merge_maxima(grid, parts):
    """Fold per-partition ``(max_points, max_dist2, max_index)`` into ``grid``,
    keeping the farther maximum of each sector."""
    for mp, md, mi in parts:
        better = md > grid.max_dist2
        grid.max_points[better] = mp[better]
        grid.max_dist2[better] = md[better]
        grid.max_index[better] = mi[better]
    grid.invalidate_cache()
