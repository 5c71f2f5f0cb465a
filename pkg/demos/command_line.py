"""Drive the ``sch3d`` command line from Python: generate a dataset, hull
it, read the stats back, and run a tiny benchmark."""
import json
import tempfile
from pathlib import Path

from sch3d import read_mesh, read_points, validate_hull
from sch3d.cli import main

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    pts_file, hull_file, stats_file = tmp / "cube.bin", tmp / "hull.txt", tmp / "stats.json"

    main(["gen", "--dist", "cube", "--n", "1e5", "--seed", "2", "--out", str(pts_file)])
    main(["hull", "--in", str(pts_file), "--divisions", "4",
          "--hull-out", str(hull_file), "--stats-out", str(stats_file)])

    stats = json.loads(stats_file.read_text())
    print({k: stats[k] for k in ("n_input", "eliminated_initial", "eliminated_planes",
                                 "eliminated_recheck", "suspicious", "hull_vertices")})
    print("hull file valid:", validate_hull(read_points(pts_file), read_mesh(hull_file)).ok)

    csv_file = tmp / "bench.csv"
    main(["bench", "--dist", "gauss", "--n-list", "1e4,1e5", "--d-list", "4,8",
          "--repeats", "2", "--csv", str(csv_file)])
    print(csv_file.read_text().splitlines()[0])
    print(len(csv_file.read_text().splitlines()) - 1, "rows")
