"""``sch3d`` command line: ``gen``, ``hull`` and ``bench``.

Exit status is 0 on success, 1 for bad input (unreadable or malformed files,
degenerate point sets, invalid arguments) and 2 for internal errors.
"""
import argparse
import json
import sys
import traceback

from .bench import bench, dataset_dict, run_sch
from .distributions import DatasetSpec, Kind, generate
from .errors import IoError, SCHError
from .hull import Algorithm, HullConfig
from .io import read_points, write_mesh, write_points

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_INTERNAL = 2


def _int_list(text):
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _count(text):
    # accepts 100000 as well as 1e5
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def cmd_gen(spec, out_path, binary=None):
    write_points(out_path, generate(spec), binary=binary)


def cmd_hull(in_path, config, stats_out=None, hull_out=None):
    """Hull of the points in ``in_path``; returns the RunRecord."""
    pts = read_points(in_path)
    mesh, rec = run_sch(pts, config, dataset_dict(n=len(pts)))
    if hull_out:
        write_mesh(hull_out, mesh)
    if stats_out:
        try:
            with open(stats_out, "w") as fh:
                fh.write(rec.to_json(indent=2) + "\n")
        except OSError as exc:
            raise IoError(f"cannot write {stats_out}: {exc.strerror or exc}") from exc
    return rec


def cmd_bench(dist, n_list, d_list, repeats, csv_out, seed=0):
    def progress(name, n, d, ms):
        print(f"{name:9s} n={n:<9d} d={d:<3d} median {ms:9.1f} ms", file=sys.stderr)

    if csv_out in (None, "-"):
        return bench(dist, n_list, d_list, repeats, seed, sys.stdout, progress)
    with open(csv_out, "w", newline="") as fh:
        return bench(dist, n_list, d_list, repeats, seed, fh, progress)


def build_parser():
    parser = argparse.ArgumentParser(prog="sch3d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a point set")
    g.add_argument("--dist", required=True, choices=[k.value for k in Kind])
    g.add_argument("--n", required=True, type=_count)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--radius", type=float, default=1.0)
    g.add_argument("--out", required=True)
    g.add_argument("--format", choices=["text", "binary"],
                   help="default: binary for .bin files, text otherwise")

    h = sub.add_parser("hull", help="convex hull of a point file")
    h.add_argument("--in", dest="in_path", required=True)
    h.add_argument("--algo", choices=[a.value for a in Algorithm], default="quickhull")
    h.add_argument("--divisions", type=int, default=8)
    h.add_argument("--sample-fraction", type=float, default=0.1)
    h.add_argument("--no-filter", action="store_true")
    h.add_argument("--seed", type=int, default=0, help="seed for the extremes sample")
    h.add_argument("--stats-out")
    h.add_argument("--hull-out")

    b = sub.add_parser("bench", help="time sch against quickhull")
    b.add_argument("--dist", required=True, choices=[k.value for k in Kind])
    b.add_argument("--n-list", required=True, type=_int_list)
    b.add_argument("--d-list", type=_int_list, default=[8])
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", default="-", help="output CSV path, '-' for stdout")
    return parser


def _dispatch(args):
    if args.command == "gen":
        spec = DatasetSpec(args.dist, args.n, args.seed, args.radius)
        binary = None if args.format is None else args.format == "binary"
        cmd_gen(spec, args.out, binary)
    elif args.command == "hull":
        config = HullConfig(divisions=args.divisions, sample_fraction=args.sample_fraction,
                            filter_enabled=not args.no_filter,
                            final_algorithm=Algorithm(args.algo), seed=args.seed)
        rec = cmd_hull(args.in_path, config, args.stats_out, args.hull_out)
        if not args.stats_out:
            print(json.dumps(rec.to_dict(), indent=2))
    else:
        cmd_bench(args.dist, args.n_list, args.d_list, args.repeats, args.csv, args.seed)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are bad input here
        return EXIT_OK if exc.code == 0 else EXIT_BAD_INPUT
    try:
        _dispatch(args)
    except (SCHError, ValueError, OSError) as exc:
        print(f"sch3d {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
