"""Exact analysis of two-dimensional Hermite subdivision schemes.

Spectral polynomials, Gregory-operator factorizations by symbol division,
contractivity certificates for C^d convergence, and polynomial reproduction.
All arithmetic is over :class:`fractions.Fraction`.
"""

from .catalog import h1_mask
from .combinatorics import gregory, stirling_first, stirling_second
from .factorize import (
    CertificationResult,
    FactorizationResult,
    certify_cd,
    factor_step,
    factorize_gregory,
    factorize_taylor,
    gregory_chain,
)
from .laurent import Laurent, LaurentMatrix, NonDivisibleError
from .masks import (
    ContractivityResult,
    HermiteSequence,
    MatrixMask,
    apply_subdivision,
    contractivity_certificate,
    hermite_refine,
    iterate_mask,
    operator_norm,
)
from .polyalg import Polynomial
from .scheme import load_scheme, parse_expression, save_scheme
from .spectral import check_reproduction, reproduction_degree, solve_spectral
from .stencil import eigenspace, gregory_generator, gregory_operator, taylor_operator

__all__ = [
    "CertificationResult",
    "ContractivityResult",
    "FactorizationResult",
    "HermiteSequence",
    "Laurent",
    "LaurentMatrix",
    "MatrixMask",
    "NonDivisibleError",
    "Polynomial",
    "apply_subdivision",
    "certify_cd",
    "check_reproduction",
    "contractivity_certificate",
    "eigenspace",
    "factor_step",
    "factorize_gregory",
    "factorize_taylor",
    "gregory",
    "gregory_chain",
    "gregory_generator",
    "gregory_operator",
    "h1_mask",
    "hermite_refine",
    "iterate_mask",
    "load_scheme",
    "operator_norm",
    "parse_expression",
    "reproduction_degree",
    "save_scheme",
    "solve_spectral",
    "stirling_first",
    "stirling_second",
    "taylor_operator",
]
