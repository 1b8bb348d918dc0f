"""Exact computations with matrix factorizations of isolated hypersurface singularities."""
from .bulk import MilnorElement, boundary_bulk, chern, hrr_check, residue_pairing
from .cohomology import hom_cohomology
from .errors import ComputationError, ContextError, InputError, MFError, ParseError, ValidationError
from .klpair import gram_matrix, kl_pairing
from .mfcore import MatrixFactorization, Morphism, direct_sum, dq_wedge, hom_differential, shift, validate_mf
from .milnor import MilnorContext
from .polyring import Polynomial, RingContext, parse_polynomial
from .problem import Problem, load_problem
from .residue import residue
from .superlin import SuperMatrix, supertrace

__all__ = [
    "ComputationError",
    "ContextError",
    "InputError",
    "MFError",
    "MatrixFactorization",
    "MilnorContext",
    "MilnorElement",
    "Morphism",
    "ParseError",
    "Polynomial",
    "Problem",
    "RingContext",
    "SuperMatrix",
    "ValidationError",
    "boundary_bulk",
    "chern",
    "direct_sum",
    "dq_wedge",
    "gram_matrix",
    "hom_cohomology",
    "hom_differential",
    "hrr_check",
    "kl_pairing",
    "load_problem",
    "parse_polynomial",
    "residue",
    "residue_pairing",
    "shift",
    "supertrace",
    "validate_mf",
]
