"""Exact computations for stacky polytopes, their Gale duals and stacky fans."""

from .abgroup import FGAbelianGroup, GroupHom, gale_dual, verify_gale_sequence
from .fan import StackyFan, correspondence_check, normal_fan
from .intlinalg import Matrix, hnf, kernel_basis, lp_check, snf
from .polytope import HPolytope, StrataFamily
from .quotient import (
    StackyPolytope,
    f_tau,
    from_torus_quotient,
    quotient_data,
    stabilizers,
    validate,
    wps,
)

__version__ = "0.1.0"

__all__ = [
    "FGAbelianGroup", "GroupHom", "gale_dual", "verify_gale_sequence",
    "StackyFan", "correspondence_check", "normal_fan",
    "Matrix", "hnf", "kernel_basis", "lp_check", "snf",
    "HPolytope", "StrataFamily",
    "StackyPolytope", "f_tau", "from_torus_quotient", "quotient_data", "stabilizers",
    "validate", "wps",
]
