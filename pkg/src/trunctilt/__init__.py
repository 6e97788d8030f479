"""Exact computations over truncated path algebras.

Quivers, modules, syzygies and projective dimensions, the strong tilting
module T and the tilted algebra End(T)^op as a quiver with relations.
"""

from importlib import resources

from .algebra import TruncatedAlgebra, build_algebra
from .fields import QQ, field_from_spec
from .quiver import Quiver, classify_vertices, has_precyclic_source, parse_quiver

__all__ = [
    "QQ",
    "Quiver",
    "TruncatedAlgebra",
    "build_algebra",
    "classify_vertices",
    "data_path",
    "field_from_spec",
    "has_precyclic_source",
    "load_example",
    "parse_quiver",
]


def data_path(name: str) -> str:
    """Path of a bundled quiver file, e.g. ``data_path("example91.quiver")``."""
    return str(resources.files(__name__).joinpath("data", name))


def load_example(name: str, field=QQ) -> TruncatedAlgebra:
    with open(data_path(name), encoding="utf-8") as fh:
        q, t, _ = parse_quiver(fh.read())
    return TruncatedAlgebra(q, t, field)
