"""Where the points go.

For every distribution, count how many points each stage of the filter
removes: the inner polyhedron spanned by the sampled axis extremes, the
test-plane caps of the sector grid, and the final recheck. What is left is
handed to QuickHull.
"""
from sch3d import DatasetSpec, Kind, generate, run_filter

N = 100_000
D = 4

print(f"N = {N}, d = {D} ({6 * D * D} sectors)\n")
print(f"{'dist':10s} {'inner':>8s} {'planes':>8s} {'recheck':>8s} {'left':>8s}")
for kind in Kind:
    pts = generate(DatasetSpec(kind, N, seed=0))
    _, st = run_filter(pts, D, seed=0)
    pct = [100 * c / st.n_input for c in (st.n_eliminated_initial, st.n_eliminated_planes,
                                           st.n_eliminated_recheck, st.n_suspicious)]
    print(f"{kind.value:10s} " + " ".join(f"{p:7.2f}%" for p in pct))

# Points on a sphere are all hull vertices, so nothing may be discarded there:
# the last row must read 0 / 0 / 0 / 100.
