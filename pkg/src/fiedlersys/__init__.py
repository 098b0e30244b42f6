"""Fiedler-type linearizations of higher-order LTI systems.

A system ``P(d/dt) x = B u, y = C x + D u`` is linearized into a pencil
``z T - N`` built from Fiedler factors; zeros and zero directions of the
system are read off the pencil.
"""

from .errors import (FiedlerError, ImproperPermutationError, PreconditionError,
                     SingularityError, SingularSystemError, SpuriousVectorError,
                     UnsupportedDegreeError, ValidationError)
from .fiedler import (BlockPencil, companion_pencil, fiedler_pencil, is_operation_free,
                      is_pentadiagonal, poly_pencil, structured_form)
from .index import Bijection, CipPair, cip, ciss, csf, from_factor_order, parse_order
from .pgf import (ProperPermutation, hermitian_pgf, parse_pgf, pgf_pencil, tridiagonal_pgf,
                  tridiagonal_pgf_even)
from .polymat import MatrixPoly
from .recovery import (E_sigma, F_sigma, H_sigma, K_sigma, lift_left_G, lift_right_G,
                       project_left, project_right)
from .spectral import PencilSpectrum, solve_pencil
from .system import StateSpaceSystem, ZeroDirection, invariant_zeros_oracle, random_system
from .verify import VerificationReport, decoupling_zeros, verify_all

__version__ = "0.1.0"

__all__ = [
    "Bijection",
    "BlockPencil",
    "CipPair",
    "E_sigma",
    "F_sigma",
    "FiedlerError",
    "H_sigma",
    "ImproperPermutationError",
    "K_sigma",
    "MatrixPoly",
    "PencilSpectrum",
    "PreconditionError",
    "ProperPermutation",
    "SingularSystemError",
    "SingularityError",
    "SpuriousVectorError",
    "StateSpaceSystem",
    "UnsupportedDegreeError",
    "ValidationError",
    "VerificationReport",
    "ZeroDirection",
    "cip",
    "ciss",
    "companion_pencil",
    "csf",
    "decoupling_zeros",
    "fiedler_pencil",
    "from_factor_order",
    "hermitian_pgf",
    "invariant_zeros_oracle",
    "is_operation_free",
    "is_pentadiagonal",
    "lift_left_G",
    "lift_right_G",
    "parse_order",
    "parse_pgf",
    "pgf_pencil",
    "poly_pencil",
    "project_left",
    "project_right",
    "random_system",
    "solve_pencil",
    "structured_form",
    "tridiagonal_pgf",
    "tridiagonal_pgf_even",
    "verify_all",
]
