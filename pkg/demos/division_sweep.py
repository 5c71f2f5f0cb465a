"""Runtime against the number of divisions.

Few sectors make coarse caps that discard little; many sectors make the grid
itself expensive. The sweet spot sits in between.
"""
import statistics
import time

from sch3d import DatasetSpec, HullConfig, generate, quickhull, schull

pts = generate(DatasetSpec("ball", 1_000_000, seed=0))
schull(pts[:1000])


def median_ms(fn, repeats=3):
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(1e3 * (time.perf_counter() - t0))
    return statistics.median(times)


base = median_ms(lambda: quickhull(pts))
print(f"quickhull alone: {base:.0f} ms")
for d in (1, 2, 4, 8, 16, 32):
    ms = median_ms(lambda: schull(pts, HullConfig(divisions=d)))
    print(f"d = {d:2d}  {ms:6.0f} ms  {'#' * int(40 * ms / base)}")
