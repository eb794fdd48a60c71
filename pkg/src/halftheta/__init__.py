"""Constrained half-theta-6 graphs, their degree-bounded subgraphs G9 and G6, and checks."""

from .cones import ConeRef, Instance, InvalidInstance, SubconeRef, validate_general_position
from .degree import build_g6, build_g9, canonical_paths, compute_charges, find_transformations, reduce_degree
from .instance_io import generate_instance, load_instance, parse_instance, save_instance, serialize_instance
from .render import render_svg
from .spanner import build_half_theta6
from .verify import run_pipeline, spanning_ratio, verify_instance
from .visibility import GeoGraph, build_visibility_graph

__version__ = "0.1.0"

__all__ = [
    "ConeRef", "GeoGraph", "Instance", "InvalidInstance", "SubconeRef",
    "build_g6", "build_g9", "build_half_theta6", "build_visibility_graph", "canonical_paths",
    "compute_charges", "find_transformations", "generate_instance", "load_instance",
    "parse_instance", "reduce_degree", "render_svg", "run_pipeline", "save_instance",
    "serialize_instance", "spanning_ratio", "validate_general_position", "verify_instance",
]
