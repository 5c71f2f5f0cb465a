"""Run records and the benchmark sweep behind ``sch3d bench``."""
import csv
import json
import statistics
import time
from dataclasses import asdict, dataclass, field, fields

from .distributions import DatasetSpec, generate
from .filter import DEFAULT_DIVISIONS, DEFAULT_SAMPLE_FRACTION
from .hull import Algorithm, HullConfig, quickhull, schull

_STAGES = ("extremes", "initial_filter", "sectors", "recheck", "final_hull", "total")


@dataclass
class RunRecord:
    """One hull computation: what ran, what the filter did, how long it took.

    Only counts and times are stored; percentages are derived on access.
    """

    dataset: dict
    algorithm: str
    divisions: int = DEFAULT_DIVISIONS
    sample_fraction: float = DEFAULT_SAMPLE_FRACTION
    n_input: int = 0
    n_sampled: int = 0
    eliminated_initial: int = 0
    eliminated_planes: int = 0
    eliminated_recheck: int = 0
    suspicious: int = 0
    hull_vertices: int = 0
    hull_faces: int = 0
    ms_extremes: float = 0.0
    ms_initial_filter: float = 0.0
    ms_sectors: float = 0.0
    ms_recheck: float = 0.0
    ms_final_hull: float = 0.0
    ms_total: float = 0.0
    extra: dict = field(default_factory=dict)

    def pct(self, count):
        return 100.0 * count / self.n_input if self.n_input else 0.0

    @property
    def pct_initial(self):
        return self.pct(self.eliminated_initial)

    @property
    def pct_planes(self):
        return self.pct(self.eliminated_planes)

    @property
    def pct_recheck(self):
        return self.pct(self.eliminated_recheck)

    @property
    def pct_suspicious(self):
        return self.pct(self.suspicious)

    @property
    def pct_hull(self):
        return self.pct(self.hull_vertices)

    def accounting_ok(self):
        total = (self.eliminated_initial + self.eliminated_planes
                 + self.eliminated_recheck + self.suspicious)
        return total == self.n_input and self.hull_vertices <= self.suspicious

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown RunRecord keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def algorithm_label(config):
    if not config.filter_enabled:
        return config.final_algorithm.value
    if config.final_algorithm is Algorithm.QUICKHULL:
        return "sch"
    return f"sch-{config.final_algorithm.value}"


def dataset_dict(spec=None, n=None):
    if spec is None:
        return {"kind": "file", "n": n, "seed": None}
    return {"kind": spec.kind.value, "n": spec.n, "seed": spec.seed}


def record_from_run(mesh, stats, config, dataset):
    ms = {k: float(stats.durations_ms.get(k, 0.0)) for k in _STAGES}
    return RunRecord(
        dataset=dataset,
        algorithm=algorithm_label(config),
        divisions=config.divisions,
        sample_fraction=config.sample_fraction,
        n_input=stats.n_input,
        n_sampled=stats.n_sampled_for_extremes,
        eliminated_initial=stats.n_eliminated_initial,
        eliminated_planes=stats.n_eliminated_planes,
        eliminated_recheck=stats.n_eliminated_recheck,
        suspicious=stats.n_suspicious,
        hull_vertices=mesh.n_vertices,
        hull_faces=mesh.n_faces,
        **{f"ms_{k}": v for k, v in ms.items()},
    )


def run_sch(points, config, dataset):
    mesh, stats = schull(points, config)
    return mesh, record_from_run(mesh, stats, config, dataset)


def run_quickhull(points, dataset, divisions=DEFAULT_DIVISIONS):
    t0 = time.perf_counter()
    mesh = quickhull(points)
    ms = (time.perf_counter() - t0) * 1e3
    n = len(points)
    rec = RunRecord(dataset=dataset, algorithm="quickhull", divisions=divisions,
                    sample_fraction=0.0, n_input=n, suspicious=n,
                    hull_vertices=mesh.n_vertices, hull_faces=mesh.n_faces,
                    ms_final_hull=ms, ms_total=ms)
    return mesh, rec


CSV_COLUMNS = [
    "dist", "n", "seed", "divisions", "algorithm", "repeat",
    "n_sampled", "eliminated_initial", "eliminated_planes", "eliminated_recheck",
    "suspicious", "hull_vertices", "hull_faces",
    "pct_initial", "pct_planes", "pct_recheck", "pct_suspicious", "pct_hull",
    "suspicious_fraction",
    "ms_extremes", "ms_initial_filter", "ms_sectors", "ms_recheck", "ms_final_hull",
    "ms_total",
]


def csv_row(rec, repeat):
    row = {
        "dist": rec.dataset["kind"], "n": rec.n_input, "seed": rec.dataset["seed"],
        "divisions": rec.divisions, "algorithm": rec.algorithm, "repeat": repeat,
        "pct_initial": rec.pct_initial, "pct_planes": rec.pct_planes,
        "pct_recheck": rec.pct_recheck, "pct_suspicious": rec.pct_suspicious,
        "pct_hull": rec.pct_hull,
        "suspicious_fraction": rec.suspicious / rec.n_input if rec.n_input else 0.0,
    }
    for key in CSV_COLUMNS:
        if key not in row:
            row[key] = getattr(rec, key)
    return row


def median_row(records):
    """Summary row: counts from the first repeat (they are identical across
    repeats), timings as medians."""
    row = csv_row(records[0], "median")
    for key in CSV_COLUMNS:
        if key.startswith("ms_"):
            row[key] = statistics.median(getattr(r, key) for r in records)
    return row


def bench(dist, n_list, d_list, repeats=3, seed=0, out=None, progress=None):
    """Time schull and quickhull over ``n_list x d_list``.

    Each (n, d) cell gets one untimed warm-up run per algorithm, then
    ``repeats`` timed runs, each written as a row, followed by a median row.
    ``out`` is a writable text stream for the CSV. Returns the records.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    writer = None
    if out is not None:
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS)
        writer.writeheader()
    records = []
    for n in n_list:
        spec = DatasetSpec(dist, n, seed)
        pts = generate(spec)
        ds = dataset_dict(spec)
        for d in d_list:
            config = HullConfig(divisions=d, seed=seed)
            runners = {
                "sch": lambda: run_sch(pts, config, ds)[1],
                "quickhull": lambda: run_quickhull(pts, ds, d)[1],
            }
            for name, run in runners.items():
                run()  # warm-up
                cell = []
                for r in range(repeats):
                    rec = run()
                    cell.append(rec)
                    if writer:
                        writer.writerow(csv_row(rec, r))
                if writer:
                    writer.writerow(median_row(cell))
                records.extend(cell)
                if progress:
                    progress(name, n, d, statistics.median(c.ms_total for c in cell))
    return records
