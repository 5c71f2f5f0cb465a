import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sch3d import (DatasetSpec, HullConfig, IoError, ParseError, generate, read_mesh,
                   read_points, validate_hull, write_mesh, write_points)
from sch3d.bench import CSV_COLUMNS, RunRecord, bench, run_sch
from sch3d.cli import cmd_gen, cmd_hull, main
from sch3d.io import MAGIC, parse_points

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 30), st.just(3)), elements=finite),
       st.booleans())
def test_point_round_trip(tmp_path_factory, pts, binary):
    path = tmp_path_factory.mktemp("rt") / ("p.bin" if binary else "p.txt")
    write_points(path, pts)
    got = read_points(path)
    assert got.tobytes() == pts.tobytes() or np.array_equal(got, pts)


def test_binary_layout(tmp_path):
    pts = np.array([[1.0, 2.0, 3.0], [-0.5, 0.25, 1e300]])
    path = tmp_path / "p.bin"
    write_points(path, pts)
    raw = path.read_bytes()
    assert raw[:8] == MAGIC
    assert int.from_bytes(raw[8:16], "little") == 2
    np.testing.assert_array_equal(np.frombuffer(raw[16:], "<f8").reshape(2, 3), pts)
    # binary output can be forced for any suffix
    write_points(tmp_path / "q.dat", pts, binary=True)
    np.testing.assert_array_equal(read_points(tmp_path / "q.dat"), pts)


def test_truncated_binary(tmp_path):
    path = tmp_path / "p.bin"
    write_points(path, np.ones((3, 3)))
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ParseError):
        read_points(path)


def test_comments_and_blank_lines():
    pts = parse_points("# header\n1 2 3\n\n# mid\n4 5 6\n")
    np.testing.assert_array_equal(pts, [[1, 2, 3], [4, 5, 6]])


@pytest.mark.parametrize("text, line", [("1 2 3\n1 2\n", 2), ("0 0 0\n# c\n1 x 3\n", 3),
                                        ("1 2 3 4\n", 1), ("1 2 nan\n", 1)])
def test_parse_error_names_line(tmp_path, text, line):
    with pytest.raises(ParseError) as err:
        parse_points(text)
    assert err.value.line == line and f"line {line}" in str(err.value)
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ParseError) as err:
        read_points(path)
    assert err.value.line == line


def test_missing_file(tmp_path):
    with pytest.raises(IoError):
        read_points(tmp_path / "nope.txt")
    with pytest.raises(IoError):
        write_points(tmp_path / "no" / "dir.txt", np.ones((4, 3)))


def test_mesh_round_trip(tmp_path):
    pts = generate(DatasetSpec("ball", 300, 0))
    mesh, _ = run_sch(pts, HullConfig(), {"kind": "ball", "n": 300, "seed": 0})
    path = tmp_path / "hull.txt"
    write_mesh(path, mesh)
    text = path.read_text().splitlines()
    assert text[0].startswith("v ") and text[-1].startswith("f ")
    assert min(int(x) for line in text if line[0] == "f" for x in line.split()[1:]) == 1
    back = read_mesh(path)
    np.testing.assert_array_equal(back.vertices, mesh.vertices)
    np.testing.assert_array_equal(back.faces, mesh.faces)


def test_record_round_trip():
    rec = RunRecord(dataset={"kind": "cube", "n": 10, "seed": 1}, algorithm="sch",
                    n_input=10, eliminated_initial=2, eliminated_planes=3,
                    eliminated_recheck=1, suspicious=4, hull_vertices=4, ms_total=1.25)
    back = RunRecord.from_json(rec.to_json())
    assert back == rec
    assert rec.pct_suspicious == 40.0 and rec.accounting_ok()
    assert "pct_suspicious" not in rec.to_dict()
    with pytest.raises(ValueError):
        RunRecord.from_dict({**rec.to_dict(), "pct_initial": 20.0})


# ---------------------------------------------------------------- commands


def test_gen_halton_nine(tmp_path):
    out = tmp_path / "h.txt"
    cmd_gen(DatasetSpec("halton", 9), out)
    pts = read_points(out)
    expect = [[1 / 2, 1 / 3, 1 / 5], [1 / 4, 2 / 3, 2 / 5], [3 / 4, 1 / 9, 3 / 5],
              [1 / 8, 4 / 9, 4 / 5], [5 / 8, 7 / 9, 1 / 25], [3 / 8, 2 / 9, 6 / 25],
              [7 / 8, 5 / 9, 11 / 25], [1 / 16, 8 / 9, 16 / 25], [9 / 16, 1 / 27, 21 / 25]]
    assert np.abs(pts - np.array(expect)).max() <= 1e-15


def test_gen_sphere_radii(tmp_path):
    out = tmp_path / "s.txt"
    assert main(["gen", "--dist", "sphere", "--n", "1e3", "--seed", "4", "--out", str(out)]) == 0
    pts = read_points(out)
    assert len(pts) == 1000
    assert np.abs(np.linalg.norm(pts, axis=1) - 1).max() <= 1e-9


@pytest.mark.parametrize("name", ["a.txt", "a.bin"])
def test_gen_byte_identical(tmp_path, name):
    args = ["gen", "--dist", "gaussring", "--n", "500", "--seed", "9"]
    assert main(args + ["--out", str(tmp_path / ("1" + name))]) == 0
    assert main(args + ["--out", str(tmp_path / ("2" + name))]) == 0
    assert (tmp_path / ("1" + name)).read_bytes() == (tmp_path / ("2" + name)).read_bytes()


def test_hull_tetrahedron(tmp_path):
    src = tmp_path / "tet.txt"
    src.write_text("0 0 0\n1 0 0\n0 1 0\n0 0 1\n")
    stats, hull = tmp_path / "stats.json", tmp_path / "hull.txt"
    assert main(["hull", "--in", str(src), "--stats-out", str(stats),
                 "--hull-out", str(hull)]) == 0
    rec = json.loads(stats.read_text())
    assert rec["suspicious"] == 4 and rec["hull_vertices"] == 4
    for key in ("n_input", "n_sampled", "eliminated_initial", "eliminated_planes",
                "eliminated_recheck", "suspicious", "hull_vertices", "ms_extremes",
                "ms_initial_filter", "ms_sectors", "ms_recheck", "ms_final_hull", "ms_total",
                "divisions", "sample_fraction", "algorithm", "dataset"):
        assert key in rec
    mesh = read_mesh(hull)
    assert mesh.n_vertices == 4
    assert validate_hull(read_points(src), mesh).ok


@pytest.mark.parametrize("algo", ["quickhull", "giftwrap"])
def test_hull_file_validates(tmp_path, algo):
    src, hull = tmp_path / "p.bin", tmp_path / "h.txt"
    assert main(["gen", "--dist", "cube", "--n", "3000", "--out", str(src)]) == 0
    assert main(["hull", "--in", str(src), "--algo", algo, "--divisions", "4",
                 "--hull-out", str(hull), "--stats-out", str(tmp_path / "s.json")]) == 0
    assert validate_hull(read_points(src), read_mesh(hull)).ok


def test_hull_no_filter(tmp_path, capsys):
    src = tmp_path / "p.txt"
    write_points(src, generate(DatasetSpec("gauss", 400, 1)))
    assert main(["hull", "--in", str(src), "--no-filter"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["algorithm"] == "quickhull" and rec["suspicious"] == 400


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0 0\n1 2\n")
    assert main(["hull", "--in", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err
    flat = tmp_path / "flat.txt"
    flat.write_text("0 0 0\n1 0 0\n0 1 0\n1 1 0\n")
    assert main(["hull", "--in", str(flat)]) == 1
    assert main(["hull", "--in", str(tmp_path / "missing.txt")]) == 1
    assert main(["gen", "--dist", "ball", "--n", "3", "--out", str(tmp_path / "x")]) == 1
    assert main(["gen", "--dist", "torus", "--n", "30", "--out", str(tmp_path / "x")]) == 1
    assert main(["bench", "--dist", "ball", "--n-list", "100", "--repeats", "0"]) == 1


def test_internal_error_exit_code(monkeypatch, tmp_path):
    import sch3d.cli as cli

    def boom(*args, **kwargs):
        raise RuntimeError("kaput")
    monkeypatch.setattr(cli, "cmd_gen", boom)
    assert main(["gen", "--dist", "ball", "--n", "10", "--out", str(tmp_path / "x")]) == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "p.txt"
    done = subprocess.run([sys.executable, "-m", "sch3d", "gen", "--dist", "cube", "--n", "10",
                           "--out", str(out)], capture_output=True)
    assert done.returncode == 0 and len(read_points(out)) == 10


# ---------------------------------------------------------------- bench


def read_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bench_row_accounting():
    buf = io.StringIO()
    records = bench("ball", [2000], [1, 8], repeats=3, out=buf)
    rows = read_rows(buf.getvalue())
    assert list(rows[0].keys()) == CSV_COLUMNS
    for d in ("1", "8"):
        for algo in ("sch", "quickhull"):
            cell = [r for r in rows if r["divisions"] == d and r["algorithm"] == algo]
            assert [r["repeat"] for r in cell] == ["0", "1", "2", "median"]
            times = sorted(float(r["ms_total"]) for r in cell[:3])
            assert float(cell[3]["ms_total"]) == times[1]
    for row in rows:
        total = sum(int(row[k]) for k in ("eliminated_initial", "eliminated_planes",
                                           "eliminated_recheck", "suspicious"))
        assert total == int(row["n"]) and int(row["hull_vertices"]) <= int(row["suspicious"])
    assert all(r.accounting_ok() for r in records)


def test_bench_sphere_all_suspicious(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--dist", "sphere", "--n-list", "1e4", "--d-list", "4",
                 "--repeats", "1", "--csv", str(out)]) == 0
    rows = [r for r in read_rows(out.read_text()) if r["algorithm"] == "sch"]
    assert all(float(r["suspicious_fraction"]) == 1.0 for r in rows)


def test_bench_stable_except_timing():
    a, b = io.StringIO(), io.StringIO()
    bench("gauss", [3000], [4], repeats=1, seed=3, out=a)
    bench("gauss", [3000], [4], repeats=1, seed=3, out=b)
    strip = [{k: v for k, v in r.items() if not k.startswith("ms_")} for r in read_rows(a.getvalue())]
    again = [{k: v for k, v in r.items() if not k.startswith("ms_")} for r in read_rows(b.getvalue())]
    assert strip == again


@pytest.mark.slow
def test_bench_d8_not_slower_than_d1():
    records = bench("ball", [10**4], [1, 8], repeats=5)
    med = {d: np.median([r.ms_total for r in records if r.algorithm == "sch" and r.divisions == d])
           for d in (1, 8)}
    # generous noise allowance for a shared host
    assert med[8] <= 1.5 * med[1]


@pytest.mark.slow
def test_hull_gauss_1e5_stats(tmp_path):
    src, stats = tmp_path / "g.bin", tmp_path / "s.json"
    assert main(["gen", "--dist", "gauss", "--n", "1e5", "--out", str(src)]) == 0
    assert main(["hull", "--in", str(src), "--divisions", "4", "--stats-out", str(stats)]) == 0
    rec = json.loads(stats.read_text())
    assert abs(rec["eliminated_initial"] / rec["n_input"] - 0.8979) <= 0.03
