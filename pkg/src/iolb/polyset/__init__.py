"""Parametric polyhedral sets and relations over the integers."""
from .sets import (
    AffRelation, AffineMapForm, IntSet, LinExpr, ParamSpace, Polyhedron, Subspace,
    add_constraints, apply, as_affine_map, as_translation, change_basis, compose, domain,
    empty_set, frontier, identity, image, intersect, intersect_domain, intersect_range,
    inverse, is_invertible_map, kernel_basis, linear_image, project_onto, project_out, subtract, union,
    universe,
)
from .count import Growth, card_at, card_leading, count_polynomial, dim_of, points_at
from .parse import ParseError, parse, parse_relation, parse_set
from .system import Unbounded

__all__ = [
    "AffRelation", "AffineMapForm", "Growth", "IntSet", "LinExpr", "ParamSpace", "ParseError",
    "Polyhedron", "Subspace", "Unbounded", "add_constraints", "apply", "as_affine_map",
    "as_translation", "card_at", "card_leading", "change_basis", "compose", "count_polynomial",
    "dim_of", "domain", "empty_set", "frontier", "identity", "image", "intersect",
    "intersect_domain", "intersect_range", "inverse", "is_invertible_map", "kernel_basis", "linear_image",
    "parse", "parse_relation", "parse_set", "points_at", "project_onto", "project_out",
    "subtract", "union", "universe",
]
