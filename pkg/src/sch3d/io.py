"""Point and mesh files.

Text points: one ``x y z`` per line, ``#`` starts a comment line. Binary
points: the 8-byte magic ``SCH3PTS1``, a little-endian uint64 count, then
``count * 3`` little-endian float64 values. Meshes use ``v x y z`` and
``f i j k`` records with 1-based indices.
"""
import struct
from pathlib import Path

import numpy as np

from .errors import IoError, ParseError
from .geometry import HullMesh, as_points

MAGIC = b"SCH3PTS1"
_HEADER = struct.Struct("<8sQ")


def _parse_text(lines):
    out = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(f"expected 3 coordinates, got {len(fields)}: {line!r}", lineno)
        try:
            xyz = [float(f) for f in fields]
        except ValueError:
            raise ParseError(f"not a number in {line!r}", lineno) from None
        if not all(np.isfinite(xyz)):
            raise ParseError(f"non-finite coordinate in {line!r}", lineno)
        out.append(xyz)
    return np.array(out, dtype=np.float64).reshape(-1, 3)


def parse_points(text):
    """Parse the text point format from a string."""
    return _parse_text(text.splitlines())


def read_points(path):
    """Read a text or binary point file; the format is detected from the magic."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if data.startswith(MAGIC):
        return _decode_binary(data, path)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is neither a binary point file nor UTF-8 text") from exc
    # numpy's parser is much faster; on any complaint re-parse by hand to name the line
    try:
        pts = np.loadtxt(text.splitlines(), comments="#", ndmin=2, dtype=np.float64)
        if pts.size == 0:
            return pts.reshape(0, 3)
        if pts.shape[1] == 3 and np.all(np.isfinite(pts)):
            return np.ascontiguousarray(pts)
    except ValueError:
        pass
    return _parse_text(text.splitlines())


def _decode_binary(data, path):
    if len(data) < _HEADER.size:
        raise ParseError(f"{path}: truncated header")
    _, count = _HEADER.unpack_from(data)
    body = data[_HEADER.size:]
    if len(body) != count * 24:
        raise ParseError(f"{path}: header announces {count} points but the body holds "
                         f"{len(body)} bytes")
    pts = np.frombuffer(body, dtype="<f8").astype(np.float64).reshape(-1, 3)
    if not np.all(np.isfinite(pts)):
        bad = int(np.flatnonzero(~np.all(np.isfinite(pts), axis=1))[0])
        raise ParseError(f"{path}: non-finite coordinate in point {bad}")
    return pts


def write_points(path, points, binary=None):
    """Write ``points``; ``binary=None`` picks the binary format for ``.bin`` paths.

    Text output uses 17 significant digits, so a round trip is exact.
    """
    path = Path(path)
    pts = as_points(points)
    if binary is None:
        binary = path.suffix.lower() == ".bin"
    try:
        if binary:
            with open(path, "wb") as fh:
                fh.write(_HEADER.pack(MAGIC, len(pts)))
                fh.write(pts.astype("<f8").tobytes())
        else:
            np.savetxt(path, pts, fmt="%.17g", delimiter=" ")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_mesh(path, mesh):
    path = Path(path)
    try:
        with open(path, "w") as fh:
            np.savetxt(fh, mesh.vertices, fmt="v %.17g %.17g %.17g")
            np.savetxt(fh, mesh.faces + 1, fmt="f %d %d %d")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_mesh(path):
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    verts, faces = [], []
    for lineno, raw in enumerate(lines, start=1):
        fields = raw.split()
        if not fields or fields[0].startswith("#"):
            continue
        tag, rest = fields[0], fields[1:]
        try:
            if tag == "v" and len(rest) == 3:
                verts.append([float(x) for x in rest])
                continue
            if tag == "f" and len(rest) == 3:
                faces.append([int(x) - 1 for x in rest])
                continue
        except ValueError:
            pass
        raise ParseError(f"bad mesh record {raw.strip()!r}", lineno)
    faces = np.array(faces, dtype=np.int64).reshape(-1, 3)
    if len(faces) and (faces.min() < 0 or faces.max() >= len(verts)):
        raise ParseError(f"{path}: face index out of range")
    return HullMesh(np.array(verts).reshape(-1, 3), faces)
