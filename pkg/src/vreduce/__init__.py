"""Exact reduction of 1-sharbly chains over real quadratic fields."""

from .gl2 import Mat2, RayVector, Vec2, content, normal_form, ray_normalize
from .qfield import FieldElem, QuadraticField, canonical_associate, field, nearest_integer, parse_elem
from .reducer import (
    ReducerConfig,
    ReductionError,
    ReductionTrace,
    central_point,
    reduce_chain,
    reducing_point,
    subdivide,
)
from .sharbly import (
    LiftedChain,
    LiftedSharbly1,
    Sharbly,
    SharblyChain,
    boundary,
    gamma_key,
    is_voronoi_reduced,
    size,
)
from .voronoi import L, SymPair, VoronoiCone, barycenter, containing_cone, cone_data, is_reduced_set, min_vectors

__version__ = "0.1.0"

__all__ = [
    "FieldElem",
    "QuadraticField",
    "field",
    "parse_elem",
    "canonical_associate",
    "nearest_integer",
    "Vec2",
    "RayVector",
    "Mat2",
    "content",
    "ray_normalize",
    "normal_form",
    "SymPair",
    "VoronoiCone",
    "L",
    "barycenter",
    "min_vectors",
    "containing_cone",
    "is_reduced_set",
    "cone_data",
    "Sharbly",
    "SharblyChain",
    "LiftedSharbly1",
    "LiftedChain",
    "boundary",
    "size",
    "gamma_key",
    "is_voronoi_reduced",
    "ReducerConfig",
    "ReductionError",
    "ReductionTrace",
    "reducing_point",
    "central_point",
    "subdivide",
    "reduce_chain",
]
