"""Convex hull engines: QuickHull, a gift-wrapping oracle, a validator, and the
filtered entry point :func:`schull`.

Both engines emit only strict extreme points as vertices; points on a face or
edge of the hull (within ``EPS_HULL``) are not vertices.
"""
import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numba import njit

from .errors import DegenerateInput, OracleCapExceeded
from .filter import DEFAULT_DIVISIONS, DEFAULT_SAMPLE_FRACTION, FilterStats, run_filter
from .geometry import EPS_DEGENERATE, EPS_HULL, EPS_MERGE, HullMesh, as_points

GIFT_WRAP_CAP = 5000


class Algorithm(str, Enum):
    QUICKHULL = "quickhull"
    GIFT_WRAP = "giftwrap"


@dataclass
class HullConfig:
    divisions: int = DEFAULT_DIVISIONS
    sample_fraction: float = DEFAULT_SAMPLE_FRACTION
    filter_enabled: bool = True
    final_algorithm: Algorithm = Algorithm.QUICKHULL
    seed: int = 0
    fan: bool = False

    def __post_init__(self):
        self.final_algorithm = Algorithm(self.final_algorithm)
        if self.divisions < 1:
            raise ValueError(f"divisions must be >= 1, got {self.divisions}")
        if not 0.0 < self.sample_fraction <= 1.0:
            raise ValueError(f"sample_fraction must be in (0, 1], got {self.sample_fraction}")


def _tolerance(pts):
    return EPS_HULL * max(1.0, float(np.abs(pts).max()))


def _initial_simplex(pts, eps):
    """min-x, max-x and min-y points, then the point farthest from their plane."""
    n = len(pts)
    if n < 4:
        raise DegenerateInput(f"need at least 4 points, got {n}")
    extent = np.ptp(pts, axis=0)
    i0, i1 = int(pts[:, 0].argmin()), int(pts[:, 0].argmax())
    if extent[0] <= eps:
        ax = int(extent.argmax())
        i0, i1 = int(pts[:, ax].argmin()), int(pts[:, ax].argmax())
    p0, p1 = pts[i0], pts[i1]
    e = p1 - p0
    le = np.linalg.norm(e)
    if le <= eps:
        raise DegenerateInput("all points coincide")
    i2 = int(pts[:, 1].argmin())
    cross = np.cross(e, pts[i2] - p0)
    if np.linalg.norm(cross) <= max(EPS_DEGENERATE * le * np.linalg.norm(pts[i2] - p0), eps * le):
        # min-y point is on the line; take the point farthest from it
        dist = np.linalg.norm(np.cross(e, pts - p0), axis=1)
        i2 = int(dist.argmax())
        if dist[i2] <= eps * le:
            raise DegenerateInput("all points are collinear")
        cross = np.cross(e, pts[i2] - p0)
    normal = cross / np.linalg.norm(cross)
    h = (pts - p0) @ normal
    i3 = int(np.abs(h).argmax())
    if abs(h[i3]) <= eps:
        raise DegenerateInput("all points are coplanar")
    return np.array([i0, i1, i2, i3], dtype=np.int64)


@njit(cache=True)
def _plane(pts, a, b, c):
    ux = pts[b, 0] - pts[a, 0]
    uy = pts[b, 1] - pts[a, 1]
    uz = pts[b, 2] - pts[a, 2]
    wx = pts[c, 0] - pts[a, 0]
    wy = pts[c, 1] - pts[a, 1]
    wz = pts[c, 2] - pts[a, 2]
    nx = uy * wz - uz * wy
    ny = uz * wx - ux * wz
    nz = ux * wy - uy * wx
    nn = math.sqrt(nx * nx + ny * ny + nz * nz)
    if nn > 0.0:
        nx /= nn
        ny /= nn
        nz /= nn
    off = -(nx * pts[a, 0] + ny * pts[a, 1] + nz * pts[a, 2])
    return nx, ny, nz, off


@njit(cache=True)
def _grow_i(arr, cap):
    out = np.full((cap,) + arr.shape[1:], -1, dtype=arr.dtype)
    out[:arr.shape[0]] = arr
    return out


@njit(cache=True)
def _grow_f(arr, cap):
    out = np.zeros((cap,) + arr.shape[1:], dtype=arr.dtype)
    out[:arr.shape[0]] = arr
    return out


@njit(cache=True)
def _quickhull_kernel(pts, simplex, eps):
    """Returns (faces, ok). ``faces`` holds point indices, wound outward."""
    n = pts.shape[0]
    cap = 64
    fv = np.full((cap, 3), -1, dtype=np.int64)
    fnb = np.full((cap, 3), -1, dtype=np.int64)
    fn = np.zeros((cap, 4))
    alive = np.zeros(cap, dtype=np.int64)
    head = np.full(cap, -1, dtype=np.int64)
    far = np.full(cap, -1, dtype=np.int64)
    fard = np.zeros(cap)
    mark = np.zeros(cap, dtype=np.int64)
    nxt = np.full(n, -1, dtype=np.int64)
    start_face = np.full(n, -1, dtype=np.int64)
    end_face = np.full(n, -1, dtype=np.int64)
    nf = 0

    # interior reference point
    cx = 0.0
    cy = 0.0
    cz = 0.0
    for k in range(4):
        cx += pts[simplex[k], 0] / 4.0
        cy += pts[simplex[k], 1] / 4.0
        cz += pts[simplex[k], 2] / 4.0

    for k in range(4):
        a = simplex[(k + 1) % 4]
        b = simplex[(k + 2) % 4]
        c = simplex[(k + 3) % 4]
        nx, ny, nz, off = _plane(pts, a, b, c)
        if nx * cx + ny * cy + nz * cz + off > 0.0:
            b, c = c, b
            nx, ny, nz, off = _plane(pts, a, b, c)
        fv[nf, 0] = a
        fv[nf, 1] = b
        fv[nf, 2] = c
        fn[nf, 0] = nx
        fn[nf, 1] = ny
        fn[nf, 2] = nz
        fn[nf, 3] = off
        alive[nf] = 1
        nf += 1
    for f in range(4):
        for j in range(3):
            a = fv[f, j]
            b = fv[f, (j + 1) % 3]
            for g in range(4):
                if g == f:
                    continue
                for k in range(3):
                    if fv[g, k] == b and fv[g, (k + 1) % 3] == a:
                        fnb[f, j] = g

    in_simplex = np.zeros(n, dtype=np.bool_)
    for k in range(4):
        in_simplex[simplex[k]] = True
    for i in range(n):
        if in_simplex[i]:
            continue
        best = -1
        bestd = eps
        for f in range(4):
            dist = fn[f, 0] * pts[i, 0] + fn[f, 1] * pts[i, 1] + fn[f, 2] * pts[i, 2] + fn[f, 3]
            if dist > bestd:
                bestd = dist
                best = f
        if best >= 0:
            nxt[i] = head[best]
            head[best] = i
            if bestd > fard[best]:
                fard[best] = bestd
                far[best] = i

    stack = np.empty(64, dtype=np.int64)
    sp = 0
    for f in range(4):
        if head[f] >= 0:
            stack[sp] = f
            sp += 1

    vis = np.empty(64, dtype=np.int64)
    hor_f = np.empty(64, dtype=np.int64)
    hor_j = np.empty(64, dtype=np.int64)
    newf = np.empty(64, dtype=np.int64)
    stamp = 0
    while sp > 0:
        sp -= 1
        f0 = stack[sp]
        if alive[f0] == 0 or head[f0] < 0:
            continue
        eye = far[f0]
        ex = pts[eye, 0]
        ey = pts[eye, 1]
        ez = pts[eye, 2]
        stamp += 2
        # mark == stamp: visible, mark == stamp + 1: checked and not visible
        nvis = 1
        vis[0] = f0
        mark[f0] = stamp
        nh = 0
        q = 0
        while q < nvis:
            g = vis[q]
            q += 1
            for j in range(3):
                h = fnb[g, j]
                if mark[h] == stamp:
                    continue
                if mark[h] != stamp + 1:
                    dist = fn[h, 0] * ex + fn[h, 1] * ey + fn[h, 2] * ez + fn[h, 3]
                    if dist > eps:
                        mark[h] = stamp
                        if nvis == vis.shape[0]:
                            vis = _grow_i(vis, 2 * nvis)
                        vis[nvis] = h
                        nvis += 1
                        continue
                    mark[h] = stamp + 1
                if nh == hor_f.shape[0]:
                    hor_f = _grow_i(hor_f, 2 * nh)
                    hor_j = _grow_i(hor_j, 2 * nh)
                hor_f[nh] = g
                hor_j[nh] = j
                nh += 1

        if nf + nh > fv.shape[0]:
            cap = 2 * (nf + nh)
            fv = _grow_i(fv, cap)
            fnb = _grow_i(fnb, cap)
            fn = _grow_f(fn, cap)
            alive = _grow_f(alive, cap)
            head = _grow_i(head, cap)
            far = _grow_i(far, cap)
            fard = _grow_f(fard, cap)
            mark = _grow_f(mark, cap)
        if nh > newf.shape[0]:
            newf = np.empty(2 * nh, dtype=np.int64)

        for k in range(nh):
            g = hor_f[k]
            j = hor_j[k]
            a = fv[g, j]
            b = fv[g, (j + 1) % 3]
            h = fnb[g, j]
            f = nf
            nf += 1
            fv[f, 0] = a
            fv[f, 1] = b
            fv[f, 2] = eye
            nx, ny, nz, off = _plane(pts, a, b, eye)
            fn[f, 0] = nx
            fn[f, 1] = ny
            fn[f, 2] = nz
            fn[f, 3] = off
            alive[f] = 1
            head[f] = -1
            far[f] = -1
            fard[f] = 0.0
            mark[f] = 0
            fnb[f, 0] = h
            for m in range(3):
                if fv[h, m] == b and fv[h, (m + 1) % 3] == a:
                    fnb[h, m] = f
            if start_face[a] >= 0 or end_face[b] >= 0:
                return fv[:0], False
            start_face[a] = f
            end_face[b] = f
            newf[k] = f
        for k in range(nh):
            f = newf[k]
            a = fv[f, 0]
            b = fv[f, 1]
            fnb[f, 1] = start_face[b]
            fnb[f, 2] = end_face[a]
        for k in range(nh):
            f = newf[k]
            if fnb[f, 1] < 0 or fnb[f, 2] < 0:
                return fv[:0], False
        for k in range(nh):
            f = newf[k]
            start_face[fv[f, 0]] = -1
            end_face[fv[f, 1]] = -1

        # hand the conflict points of the removed faces to the new ones
        for k in range(nvis):
            g = vis[k]
            alive[g] = 0
            i = head[g]
            while i >= 0:
                inext = nxt[i]
                if i != eye:
                    best = -1
                    bestd = eps
                    px = pts[i, 0]
                    py = pts[i, 1]
                    pz = pts[i, 2]
                    for t in range(nh):
                        f = newf[t]
                        dist = fn[f, 0] * px + fn[f, 1] * py + fn[f, 2] * pz + fn[f, 3]
                        if dist > bestd:
                            bestd = dist
                            best = f
                    if best >= 0:
                        nxt[i] = head[best]
                        head[best] = i
                        if bestd > fard[best]:
                            fard[best] = bestd
                            far[best] = i
                i = inext
            head[g] = -1
        for k in range(nh):
            f = newf[k]
            if head[f] >= 0:
                if sp == stack.shape[0]:
                    stack = _grow_i(stack, 2 * sp)
                stack[sp] = f
                sp += 1

    count = 0
    for f in range(nf):
        if alive[f] == 1:
            count += 1
    out = np.empty((count, 3), dtype=np.int64)
    count = 0
    for f in range(nf):
        if alive[f] == 1:
            out[count] = fv[f]
            count += 1
    return out, True


def _mesh_from_faces(pts, faces):
    ids, inverse = np.unique(faces, return_inverse=True)
    return HullMesh(pts[ids], inverse.reshape(-1, 3), source_index=ids)


def _flat_vertices(mesh, tol=1e-14):
    """Vertices whose incident face normals do not span 3D (on a face or edge).

    Uses the smallest eigenvalue of the summed outer products of the unit
    normals around each vertex.
    """
    normals = mesh.face_normals()
    outer = normals[:, :, None] * normals[:, None, :]
    scatter = np.zeros((mesh.n_vertices, 3, 3))
    for k in range(3):
        np.add.at(scatter, mesh.faces[:, k], outer)
    smallest = np.linalg.eigvalsh(scatter)[:, 0]
    return np.flatnonzero(smallest <= tol)


def _edge_dets(pts, faces):
    """For each face edge slot (f, k): orientation of the vertex opposite the
    edge in the neighbouring face against face f's plane, relative to scale.
    Positive means the edge is concave. Also returns the neighbour arrays."""
    n = len(pts)
    a = faces
    b = np.roll(faces, -1, axis=1)
    key = (a * n + b).ravel()
    rev = (b * n + a).ravel()
    order = np.argsort(key)
    pos = order[np.searchsorted(key, rev, sorter=order)]
    nbr_face = pos // 3
    # the neighbour's vertex not on the shared edge is the one after its (b, a) edge
    nbr_opp = faces[nbr_face, (pos % 3 + 2) % 3]
    f = np.repeat(np.arange(len(faces)), 3)
    p0 = pts[a.ravel()]
    u = pts[b.ravel()] - p0
    c = pts[np.roll(faces, -2, axis=1).ravel()] - p0
    w = pts[nbr_opp] - p0
    det = np.einsum("ij,ij->i", np.cross(u, c), w)
    scale = (np.linalg.norm(u, axis=1) * np.linalg.norm(c, axis=1)
             * np.linalg.norm(w, axis=1))
    return (det / np.where(scale > 0, scale, 1.0)).reshape(-1, 3), nbr_face.reshape(-1, 3), f


def _flip_concave_edges(pts, faces, tol=1e-15, max_flips=100000):
    """Flip edges whose two faces fold inward, until the surface is locally
    convex. Near-coplanar slivers from QuickHull can leave such edges, and a
    far vertex then sits a little outside the sliver's plane."""
    rel, _, _ = _edge_dets(pts, faces)
    if not np.any(rel > tol):
        return faces
    faces = [list(map(int, t)) for t in faces]
    owner = {}
    for fi, t in enumerate(faces):
        for k in range(3):
            owner[(t[k], t[(k + 1) % 3])] = fi

    def concave(fi, k):
        a, b, c = (faces[fi][(k + j) % 3] for j in range(3))
        g = owner[(b, a)]
        d = next(v for v in faces[g] if v != a and v != b)
        u, v, w = pts[b] - pts[a], pts[c] - pts[a], pts[d] - pts[a]
        det = float(np.dot(np.cross(u, v), w))
        scale = np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w)
        return det > tol * scale, g, a, b, c, d

    todo = [(fi, k) for fi, k in zip(*np.nonzero(rel > tol))]
    flips = 0
    while todo and flips < max_flips:
        fi, k = todo.pop()
        a, b = faces[fi][k], faces[fi][(k + 1) % 3]
        if owner.get((a, b)) != fi:
            continue  # edge gone after an earlier flip
        bad, g, a, b, c, d = concave(fi, k)
        if not bad or (c, d) in owner or (d, c) in owner:
            continue
        for t in (faces[fi], faces[g]):
            for j in range(3):
                del owner[(t[j], t[(j + 1) % 3])]
        faces[fi] = [a, d, c]
        faces[g] = [d, b, c]
        for fj in (fi, g):
            t = faces[fj]
            for j in range(3):
                owner[(t[j], t[(j + 1) % 3])] = fj
        flips += 1
        for fj in (fi, g):
            todo.extend((fj, j) for j in range(3))
    return np.array(faces, dtype=np.int64)


def quickhull(points):
    """Convex hull by QuickHull. Returns a :class:`HullMesh` whose
    ``source_index`` refers to rows of ``points``."""
    pts = as_points(points)
    eps = _tolerance(pts)
    simplex = _initial_simplex(pts, eps)
    faces, ok = _quickhull_kernel(pts, simplex, eps)
    if not ok:
        raise RuntimeError("QuickHull met an inconsistent horizon (near-degenerate input)")
    mesh = _mesh_from_faces(pts, faces)
    # coplanar input can leave a vertex sitting flat inside a face; rebuild without it
    for _ in range(8):
        flat = _flat_vertices(mesh)
        if len(flat) == 0:
            break
        keep = np.setdiff1d(mesh.source_index, mesh.source_index[flat])
        sub = pts[keep]
        faces, ok = _quickhull_kernel(sub, _initial_simplex(sub, eps), eps)
        if not ok:
            raise RuntimeError("QuickHull met an inconsistent horizon (near-degenerate input)")
        mesh = _mesh_from_faces(pts, keep[faces])
    mesh.faces = _flip_concave_edges(mesh.vertices, mesh.faces)
    return mesh


# --------------------------------------------------------------------------
# gift wrapping (testing oracle)


@njit(cache=True)
def _pivot(pts, a, b, nx, ny, nz, exclude_a, exclude_b):
    """Point p such that the plane through edge a->b and p supports all points,
    rotating outward from the face with outward normal n. Ties in angle go to
    the point farthest from the edge line."""
    ex = pts[b, 0] - pts[a, 0]
    ey = pts[b, 1] - pts[a, 1]
    ez = pts[b, 2] - pts[a, 2]
    le = math.sqrt(ex * ex + ey * ey + ez * ez)
    ex /= le
    ey /= le
    ez /= le
    # m = e x n points away from the current face
    mx = ey * nz - ez * ny
    my = ez * nx - ex * nz
    mz = ex * ny - ey * nx
    best = -1
    bx = 0.0
    by = 0.0
    best_r = 0.0
    for i in range(pts.shape[0]):
        if i == exclude_a or i == exclude_b:
            continue
        rx = pts[i, 0] - pts[a, 0]
        ry = pts[i, 1] - pts[a, 1]
        rz = pts[i, 2] - pts[a, 2]
        x = rx * mx + ry * my + rz * mz
        y = abs(rx * nx + ry * ny + rz * nz)
        r = math.sqrt(x * x + y * y)
        if r <= 1e-12 * le:
            continue
        if best < 0:
            best, bx, by, best_r = i, x, y, r
            continue
        # both directions lie in the upper half plane, so the sign of the
        # cross product orders their angles from the +x axis
        cross = bx * y - by * x
        tie = 1e-12 * best_r * r
        if cross < -tie or (cross <= tie and r > best_r * (1.0 + 1e-12)):
            best, bx, by, best_r = i, x, y, r
    return best


@njit(cache=True)
def _wrap_face(pts, a, b, nx, ny, nz, eps):
    """Pivot over edge a->b of the face with normal n; returns the pivot, the
    new face's unit normal and every point within ``eps`` of its plane."""
    p = _pivot(pts, a, b, nx, ny, nz, a, b)
    normal = np.zeros(3)
    if p < 0:
        return p, normal, np.empty(0, dtype=np.int64)
    ux = pts[a, 0] - pts[b, 0]
    uy = pts[a, 1] - pts[b, 1]
    uz = pts[a, 2] - pts[b, 2]
    vx = pts[p, 0] - pts[b, 0]
    vy = pts[p, 1] - pts[b, 1]
    vz = pts[p, 2] - pts[b, 2]
    normal[0] = uy * vz - uz * vy
    normal[1] = uz * vx - ux * vz
    normal[2] = ux * vy - uy * vx
    normal /= math.sqrt(normal[0] ** 2 + normal[1] ** 2 + normal[2] ** 2)
    ids = np.empty(pts.shape[0], dtype=np.int64)
    k = 0
    for i in range(pts.shape[0]):
        h = ((pts[i, 0] - pts[b, 0]) * normal[0] + (pts[i, 1] - pts[b, 1]) * normal[1]
             + (pts[i, 2] - pts[b, 2]) * normal[2])
        if abs(h) <= eps:
            ids[k] = i
            k += 1
    return p, normal, ids[:k]


def _unit_normal(pts, a, b, c):
    n = np.cross(pts[b] - pts[a], pts[c] - pts[a])
    return n / np.linalg.norm(n)


def _coplanar_ring(pts, origin, normal, eps, ids=None):
    """Strict corners of the points lying in the plane (origin, normal), in
    counter-clockwise order seen from the side ``normal`` points to. ``ids``,
    when given, are those in-plane points."""
    if ids is None:
        h = (pts - pts[origin]) @ normal
        ids = np.flatnonzero(np.abs(h) <= eps)
    s = np.cross(normal, [1.0, 0.0, 0.0])
    if np.linalg.norm(s) < 0.5:
        s = np.cross(normal, [0.0, 1.0, 0.0])
    s /= np.linalg.norm(s)
    t = np.cross(normal, s)
    xy = np.column_stack([(pts[ids] - pts[origin]) @ s, (pts[ids] - pts[origin]) @ t])
    order = np.lexsort((xy[:, 1], xy[:, 0]))

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2:
                o, a = xy[out[-2]], xy[out[-1]]
                cross = (a[0] - o[0]) * (xy[i, 1] - o[1]) - (a[1] - o[1]) * (xy[i, 0] - o[0])
                if cross > eps * max(1.0, np.abs(xy).max()):
                    break
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(order[::-1])
    ring = lower[:-1] + upper[:-1]
    return [int(ids[i]) for i in ring]


def gift_wrap(points, cap=GIFT_WRAP_CAP):
    """Convex hull by face-pivoting gift wrapping, O(n h).

    Slow but independent of :func:`quickhull`; used as a test oracle. Raises
    :class:`OracleCapExceeded` above ``cap`` points (``cap=None`` disables).
    """
    pts = as_points(points)
    n = len(pts)
    if cap is not None and n > cap:
        raise OracleCapExceeded(f"{n} points exceeds the gift-wrap cap of {cap}")
    eps = _tolerance(pts)
    _initial_simplex(pts, eps)  # rejects degenerate input

    u = int(np.lexsort(pts.T[::-1])[0])
    # first edge: pivot a vertical line through u, starting from plane x = min x
    e = np.array([0.0, 0.0, 1.0])
    n0 = np.array([-1.0, 0.0, 0.0])
    aux = np.vstack([pts, pts[u] + e])
    q1 = _pivot(aux, u, n, *n0, u, n)
    n1 = np.cross(e, pts[q1] - pts[u])
    n1 /= np.linalg.norm(n1)
    if np.max((pts - pts[u]) @ n1) > eps:
        n1 = -n1
    q2 = _pivot(pts, u, q1, *n1, u, q1)
    normal = _unit_normal(pts, u, q1, q2)
    if (pts - pts[u]).mean(axis=0) @ normal > 0.0:
        normal = -normal

    faces = []
    edges = {}
    todo = []

    def add_polygon(ring):
        # fan-triangulate a convex polygon wound counter-clockwise from outside
        for k in range(1, len(ring) - 1):
            faces.append((ring[0], ring[k], ring[k + 1]))
        for k in range(len(ring)):
            key = (ring[k], ring[(k + 1) % len(ring)])
            if key in edges:
                raise RuntimeError(f"gift wrap produced a non-manifold edge {key}")
            edges[key] = normal
            todo.append(key)

    add_polygon(_coplanar_ring(pts, u, normal, eps))
    while todo:
        a, b = todo.pop()
        if (b, a) in edges:
            continue
        p, normal, ids = _wrap_face(pts, a, b, *edges[(a, b)], eps)
        if p < 0:
            raise RuntimeError("gift wrap found no pivot point")
        if len(ids) == 3:
            ring = [b, a, int(p)]  # (a - b) x (p - b) is the normal: already ccw
        else:
            ring = _coplanar_ring(pts, b, normal, eps, ids)
        k = ring.index(b)
        ring = ring[k:] + ring[:k]
        if ring[1] != a:
            raise RuntimeError(f"gift wrap lost edge ({b}, {a}) on a coplanar face")
        add_polygon(ring)
    return _mesh_from_faces(pts, np.array(faces, dtype=np.int64))


# --------------------------------------------------------------------------
# validation


@njit(cache=True)
def _containment(pts, normals, offsets, eps):
    worst = -np.inf
    bad = np.zeros(pts.shape[0], dtype=np.bool_)
    for i in range(pts.shape[0]):
        m = -np.inf
        for f in range(normals.shape[0]):
            v = (normals[f, 0] * pts[i, 0] + normals[f, 1] * pts[i, 1]
                 + normals[f, 2] * pts[i, 2] + offsets[f])
            if v > m:
                m = v
        if m > eps:
            bad[i] = True
        if m > worst:
            worst = m
    return worst, bad


@dataclass
class HullReport:
    contains_all: bool
    max_violation: float
    outside_points: np.ndarray
    euler: int
    euler_ok: bool
    outward_ok: bool
    flipped_faces: np.ndarray
    vertices_ok: bool
    max_vertex_offset: float
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.contains_all and self.euler_ok and self.outward_ok and self.vertices_ok


def validate_hull(points, mesh, eps=EPS_HULL, merge=EPS_MERGE):
    """Check ``mesh`` against the point set it should enclose.

    Violations are reported, never raised: (a) containment of every point,
    (b) V - E + F = 2, (c) outward face normals, (d) vertices are input points.
    """
    from scipy.spatial import cKDTree

    pts = as_points(points)
    tol = eps * max(1.0, float(np.abs(pts).max()))
    normals = mesh.face_normals()
    offsets = -np.einsum("ij,ij->i", normals, mesh.vertices[mesh.faces[:, 0]])
    # points in the ball inscribed around the vertex centroid are under every
    # plane (unit normals), so only the rest need the full scan
    centroid = mesh.vertices.mean(axis=0)
    r_in = float(-(normals @ centroid + offsets).max())
    dist_c = np.linalg.norm(pts - centroid, axis=1)
    rest = np.flatnonzero(dist_c > r_in * (1.0 - 1e-9))
    worst, bad_rest = _containment(pts[rest], normals, offsets, tol)
    bad = np.zeros(len(pts), dtype=bool)
    bad[rest] = bad_rest
    if len(rest) < len(pts):
        worst = max(worst, 0.0)

    euler = mesh.n_vertices - len(mesh.edges()) + mesh.n_faces

    face_centers = mesh.vertices[mesh.faces].mean(axis=1)
    flipped = np.flatnonzero(np.einsum("ij,ij->i", normals, face_centers - centroid) <= 0.0)

    dist, _ = cKDTree(pts).query(mesh.vertices)
    offset = float(dist.max()) if len(dist) else 0.0

    return HullReport(
        contains_all=not bad.any(),
        max_violation=float(max(worst, 0.0)),
        outside_points=np.flatnonzero(bad),
        euler=int(euler),
        euler_ok=euler == 2,
        outward_ok=len(flipped) == 0,
        flipped_faces=flipped,
        vertices_ok=offset <= merge,
        max_vertex_offset=offset,
    )


# --------------------------------------------------------------------------
# filtered hull


def _final_hull(pts, algorithm):
    if algorithm is Algorithm.GIFT_WRAP:
        return gift_wrap(pts)
    return quickhull(pts)


def schull(points, config=None):
    """Convex hull with the sector filter in front of the final algorithm.

    Returns ``(mesh, stats)``; ``mesh.source_index`` refers to rows of ``points``.
    """
    config = config or HullConfig()
    pts = as_points(points)
    if len(pts) < 4:
        raise DegenerateInput(f"need at least 4 points, got {len(pts)}")
    t_all = time.perf_counter()
    if config.filter_enabled:
        cand, stats, index = run_filter(
            pts, config.divisions, config.sample_fraction, seed=config.seed,
            fan=config.fan, return_index=True)
    else:
        cand, index = pts, np.arange(len(pts))
        stats = FilterStats(n_input=len(pts), n_suspicious=len(pts),
                            divisions=config.divisions,
                            sample_fraction=config.sample_fraction)
    t0 = time.perf_counter()
    if len(cand) < 4:
        raise DegenerateInput("fewer than 4 candidate points survive")
    mesh = _final_hull(cand, config.final_algorithm)
    mesh.source_index = index[mesh.source_index]
    stats.durations_ms["final_hull"] = (time.perf_counter() - t0) * 1e3
    stats.durations_ms["total"] = (time.perf_counter() - t_all) * 1e3
    stats.n_hull_vertices = mesh.n_vertices
    return mesh, stats
