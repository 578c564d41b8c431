"""Exact checking of the 20n - 24 edge bound for RAC drawings with two bends per edge."""
from .drawing import Drawing, PolylineEdge, normalize, parse, serialize, validate_rac
from .multigraph import Multigraph, OrthoFinEdge, check_theorem2, faces
from .orthofin import extract
from .certify import certify
from .generators import corpus_fixture, extremal_orthofin, grid_rac2

__all__ = [
    "Drawing", "PolylineEdge", "normalize", "parse", "serialize", "validate_rac",
    "Multigraph", "OrthoFinEdge", "check_theorem2", "faces", "extract", "certify",
    "corpus_fixture", "extremal_orthofin", "grid_rac2",
]
