"""A closer look at the sector grid.

Builds the inner polyhedron for a small point cloud, seeds the per-sector
maxima on its surface, then offers points one at a time and shows the three
possible outcomes.
"""
import numpy as np

from sch3d import SectorGrid, build_initial_polyhedron, build_neighbor_table, estimate_extremes
from sch3d.filter import SectorId

rng = np.random.default_rng(7)
pts = rng.normal(size=(2000, 3))

poly = build_initial_polyhedron(estimate_extremes(pts, 1.0))
print(f"inner polyhedron: {len(poly.vertices)} vertices, {len(poly.faces)} faces")
print("center", np.round(poly.center, 3))

grid = SectorGrid(poly.center, d=2)
grid.init_maxima(poly)

# neighbours of a corner sector: the diagonal across the cube vertex is missing
s = SectorId.from_index(0, 2)
print(f"\nneighbours of sector {s.face.name} ({s.u}, {s.v}):")
print(build_neighbor_table(2)[0])

for p in ([0.1, 0.05, 0.0], [6.0, 0.2, 0.1], [5.0, 0.3, 0.2], [1.0, 2.0, 0.5]):
    outcome = grid.offer_point(p)
    print(f"offer {p!s:18s} -> {outcome.value:12s} sector {grid.sector_of(p).index}")

print(f"\nkept after recheck: {len(grid.recheck())}")
