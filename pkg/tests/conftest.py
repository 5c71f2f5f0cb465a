import numpy as np
import pytest
from scipy.spatial import ConvexHull

from sch3d import DatasetSpec, Kind, generate
from sch3d.geometry import sorted_unique_rows

KINDS = [k.value for k in Kind]


def qhull_vertices(points):
    """Extreme points per scipy's Qhull, our independent oracle."""
    pts = np.asarray(points, dtype=float)
    return sorted_unique_rows(pts[ConvexHull(pts).vertices])


def rows(points):
    return sorted_unique_rows(np.asarray(points, dtype=float))


def contains_rows(haystack, needles, tol=1e-12):
    """Every row of ``needles`` appears in ``haystack`` (within ``tol``)."""
    from scipy.spatial import cKDTree
    if len(needles) == 0:
        return True
    dist, _ = cKDTree(haystack).query(needles)
    return bool(dist.max() <= tol)


@pytest.fixture
def points_of():
    def make(kind, n, seed=0):
        return generate(DatasetSpec(kind, n, seed))
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
