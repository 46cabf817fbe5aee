"""Exact verification of Lie-Rinehart connections on matrix-factorization
modules over the Brieskorn singularities x^m + y^n + z^2."""

from .exactring import HypersurfaceRing, Poly, RingElem, normal_form, parse_poly
from .matfac import MatrixFactorization, RingMatrix, brieskorn_factorization
from .derivations import Derivation, standard_generators, represent
from .connections import chern_report, lift_solver, formula_connection

__version__ = "0.1.0"

__all__ = [
    "HypersurfaceRing", "Poly", "RingElem", "normal_form", "parse_poly",
    "MatrixFactorization", "RingMatrix", "brieskorn_factorization",
    "Derivation", "standard_generators", "represent",
    "chern_report", "lift_solver", "formula_connection",
]
