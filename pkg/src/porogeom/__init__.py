"""Numerical geometry of planar extension domains: Whitney-type
decompositions, porosity profiles, box-counting dimension, and weighted
geodesics for curve-condition and John constants."""

__version__ = "0.1.0"

from .boxdim import box_count, box_dimension, koch_dimension_closed_form
from .domain import (
    Domain,
    build_cone_domain,
    build_koch_snowflake,
    build_regular_polygon,
    build_unit_square,
    rasterize,
)
from .dyadic import DyadicCube, whitney_of_open_set, whitney_of_square
from .geodesic import (
    build_complement_graph,
    build_interior_graph,
    curve_condition_constant,
    curve_functional,
    john_constant,
    shortcut_check,
    weighted_geodesic,
)
from .porosity import PorosityParams, epsilon_schedule, porosity_profile

__all__ = [
    "Domain",
    "DyadicCube",
    "PorosityParams",
    "box_count",
    "box_dimension",
    "build_complement_graph",
    "build_cone_domain",
    "build_interior_graph",
    "build_koch_snowflake",
    "build_regular_polygon",
    "build_unit_square",
    "curve_condition_constant",
    "curve_functional",
    "epsilon_schedule",
    "john_constant",
    "koch_dimension_closed_form",
    "porosity_profile",
    "rasterize",
    "shortcut_check",
    "weighted_geodesic",
    "whitney_of_open_set",
    "whitney_of_square",
]
