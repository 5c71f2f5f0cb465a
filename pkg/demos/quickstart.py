"""Hull of a million points, with and without the sector filter.

Run: python3 demos/quickstart.py
"""
import time

from sch3d import DatasetSpec, HullConfig, generate, quickhull, schull, validate_hull

pts = generate(DatasetSpec("ball", 1_000_000, seed=1))
schull(pts[:1000])  # compile the numba kernels once

t0 = time.perf_counter()
mesh, stats = schull(pts, HullConfig(divisions=8))
t_sch = time.perf_counter() - t0

t0 = time.perf_counter()
plain = quickhull(pts)
t_qh = time.perf_counter() - t0

print(f"input points        {stats.n_input:>9d}")
print(f"suspicious points   {stats.n_suspicious:>9d}  ({100 * stats.n_suspicious / stats.n_input:.2f}%)")
print(f"hull vertices       {mesh.n_vertices:>9d}")
print(f"schull   {1e3 * t_sch:7.1f} ms")
print(f"quickhull{1e3 * t_qh:7.1f} ms   speed-up {t_qh / t_sch:.2f}x")
print("same vertex set:", set(mesh.source_index) == set(plain.source_index))
print("hull valid:", validate_hull(pts, mesh).ok)
