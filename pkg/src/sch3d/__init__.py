"""Convex hulls of large 3D point sets with a sector-based point filter.

Most points of a large cloud cannot be hull vertices. :func:`run_filter`
discards them cheaply and :func:`schull` hands the survivors to QuickHull.
"""
from .distributions import DatasetSpec, Kind, generate, halton_element, halton_sequence
from .errors import (DegenerateExtremes, DegenerateInput, DegenerateTriangle, EmptyInput,
                     InvalidBase, InvalidSpec, IoError, OracleCapExceeded, ParseError,
                     SCHError, ZeroDirection)
from .filter import (FilterStats, InitialPolyhedron, SectorGrid, build_initial_polyhedron,
                     build_neighbor_table, classify_inside, estimate_extremes, run_filter,
                     sector_of)
from .geometry import HullMesh, OrientedPlane, orient3d, plane_through, signed_eval
from .hull import Algorithm, HullConfig, HullReport, gift_wrap, quickhull, schull, validate_hull
from .io import read_mesh, read_points, write_mesh, write_points

__version__ = "0.1.0"

__all__ = [
    "Algorithm", "DatasetSpec", "DegenerateExtremes", "DegenerateInput", "DegenerateTriangle",
    "EmptyInput", "FilterStats", "HullConfig", "HullMesh", "HullReport", "InitialPolyhedron",
    "InvalidBase", "InvalidSpec", "IoError", "Kind", "OracleCapExceeded", "OrientedPlane",
    "ParseError", "SCHError", "SectorGrid", "ZeroDirection", "build_initial_polyhedron",
    "build_neighbor_table", "classify_inside", "estimate_extremes", "generate", "gift_wrap",
    "halton_element", "halton_sequence", "orient3d", "plane_through", "quickhull",
    "read_mesh", "read_points", "run_filter", "schull", "sector_of", "signed_eval",
    "validate_hull", "write_mesh", "write_points",
]
