"""Cross-check the two hull engines and the validator.

QuickHull is the production engine; gift wrapping is slow but simple and
serves as an oracle. Both must produce the same vertex set, and both meshes
must pass every validator check.
"""
import numpy as np

from sch3d import DatasetSpec, HullMesh, Kind, generate, gift_wrap, quickhull, validate_hull
from sch3d.geometry import same_point_set

for kind in Kind:
    pts = generate(DatasetSpec(kind, 800, seed=3))
    qh, gw = quickhull(pts), gift_wrap(pts)
    agree = same_point_set(qh.vertices, gw.vertices)
    print(f"{kind.value:10s} vertices {qh.n_vertices:4d}  agree={agree}  "
          f"valid={validate_hull(pts, qh).ok and validate_hull(pts, gw).ok}")

# the validator names what is wrong
pts = generate(DatasetSpec("ball", 300, seed=0))
mesh = quickhull(pts)
faces = mesh.faces.copy()
faces[0] = faces[0, ::-1]
rep = validate_hull(pts, HullMesh(mesh.vertices, faces))
print("\nflipped face ->", rep.flipped_faces)

rep = validate_hull(np.vstack([pts, [2.0, 0, 0]]), mesh)
print("point left out ->", rep.outside_points, f"by {rep.max_violation:.3f}")
