"""Pauli-coefficient polynomial families, indefinite forms and cark tuples of real quadratic fields."""

from .algebra import GaussRat, MultiPoly, parse_poly
from .families import PauliCoeffs, family_direct, family_recursive, identity_suite, property_suite
from .field import FractionalIdeal, field_from_d, form_from_ideal, ideal_norm
from .forms import BQF, FormClass, NarrowClassGroup, PellSolution, narrow_classes, pell_fundamental, reduce
from .psl2 import Psl2Mat
from .surface import SurfacePoint, SurfaceSpec, enumerate_points, k_field, round_trip
from .words import CarkTuple, cark_graph, decompose, form_from_automorphism, tuple_to_matrix

__all__ = [
    "BQF",
    "CarkTuple",
    "FormClass",
    "FractionalIdeal",
    "GaussRat",
    "MultiPoly",
    "NarrowClassGroup",
    "PauliCoeffs",
    "PellSolution",
    "Psl2Mat",
    "SurfacePoint",
    "SurfaceSpec",
    "cark_graph",
    "decompose",
    "enumerate_points",
    "family_direct",
    "family_recursive",
    "field_from_d",
    "form_from_automorphism",
    "form_from_ideal",
    "identity_suite",
    "ideal_norm",
    "k_field",
    "narrow_classes",
    "parse_poly",
    "pell_fundamental",
    "property_suite",
    "reduce",
    "round_trip",
    "tuple_to_matrix",
]
