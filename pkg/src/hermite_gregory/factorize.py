"""Taylor and Gregory factorizations by exact symbol division.

Conventions (z-symbols, ``Delta`` has symbol ``z^-1 - 1``):

* ``factorize_taylor``:  ``T(z) A(z) = 1/2 B(z) T(z^2)``
* ``factor_step``:       ``Delta_V(z) B(z) = 1/2 C(z) Delta_V(z^2)``
* ``factorize_gregory``: ``G_n(z) A(z) = 2^-n B(z) G_n(z^2)``; this is
  ``FactorizationResult.mask``.  The chain of Taylor and ``factor_step``
  factorizations produces ``2 * mask`` instead (factor ``2^-(n+1)``), which is
  the mask whose fixed vectors are spanned by ``[1, G_n]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .laurent import DELTA, Z_INV, Laurent, LaurentMatrix, NonDivisibleError
from .linalg import Matrix2
from .masks import ContractivityResult, MatrixMask, contractivity_certificate, from_symbol, symbol
from .polyalg import Polynomial
from .spectral import SpectralResult, solve_spectral
from .stencil import (
    StencilOperator,
    delta_V,
    eigenspace,
    generator_matrix,
    gregory_generator,
    gregory_operator,
    gregory_sum_symbol,
    taylor_operator,
)

__all__ = [
    "CertificationResult",
    "FactorizationResult",
    "NonDivisibleError",
    "certify_cd",
    "factor_step",
    "factor_through",
    "factorize_gregory",
    "factorize_taylor",
    "gregory_chain",
    "laurent_divide",
    "alternative_chain",
]


def laurent_divide(numerator: Laurent, denominator: Laurent, context: str = "") -> Laurent:
    """Exact quotient; raises :class:`NonDivisibleError` carrying the remainder."""
    return numerator.exact_div(denominator, context)


def factor_through(
    op: StencilOperator, mask: MatrixMask, scale, context: str = ""
) -> MatrixMask:
    """Solve ``L(z) A(z) = B(z) L(z^2) / scale`` for ``B``.

    ``B = scale * L(z) A(z) adj(L(z^2)) / det L(z^2)``, with the division done
    exactly, and the defining identity re-expanded before returning.
    """
    L = op.symbol
    L2 = L.substitute_power(2)
    lhs = L @ symbol(mask)
    numerator = (lhs @ L2.adjugate()).scale(Fraction(scale))
    quotient = numerator.exact_div(L2.det(), context)
    if not (lhs.scale(Fraction(scale)) - quotient @ L2).is_zero():
        raise AssertionError("factorization identity does not expand to zero")
    return from_symbol(quotient, 2)


def factorize_taylor(mask: MatrixMask) -> MatrixMask:
    """Mask ``B`` with ``T S_A = 1/2 S_B T``; fails unless constants are spectral."""
    return factor_through(taylor_operator(), mask, 2, "Taylor factorization")


def factor_step(mask: MatrixMask, V: Matrix2) -> MatrixMask:
    """Mask ``C`` with ``Delta_V S_B = 1/2 S_C Delta_V``.

    Division fails when the first column of ``V`` is not a fixed vector of
    the even and odd sub-masks of ``B``.
    """
    return factor_through(delta_V(V), mask, 2, "Delta_V factorization")


@dataclass(frozen=True)
class FactorizationResult:
    """n-th Gregory factorization.

    ``mask`` satisfies ``G_n(z) A(z) = 2^-n mask(z) G_n(z^2)``.
    ``mask_taylor_normalized`` is ``2 * mask``, the mask reached through
    the Taylor step followed by ``n`` difference steps.
    ``residual`` is the expanded identity and is always zero.
    """

    n: int
    mask: MatrixMask
    residual: LaurentMatrix

    @property
    def mask_taylor_normalized(self) -> MatrixMask:
        return self.mask.scaled(2)

    def contraction_mask(self, scale=Fraction(1, 2)) -> MatrixMask:
        return self.mask.scaled(scale)


def factorize_gregory(mask: MatrixMask, n: int) -> FactorizationResult:
    """Entrywise quotient formulas for the mask of the n-th Gregory factorization."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if mask.dilation != 2:
        raise ValueError("factorization needs a dilation-2 mask")
    A = symbol(mask)
    a11, a12, a21, a22 = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    d1 = DELTA
    s1 = Z_INV + 1
    d2 = DELTA.substitute_power(2)
    g = gregory_sum_symbol(n)
    g2 = g.substitute_power(2)
    c = 2**n

    lower = d1 * a11 + g * a21
    b11 = (d2 * a22 - g2 * a21).exact_div(
        d1 * s1 ** (n + 1), f"b11, divisor (z^-1-1)(z^-1+1)^{n + 1}"
    )
    b12 = (d1 ** (n - 1) * a21).exact_div(s1, "b12, divisor (z^-1+1)")
    b21 = (d2 * (d1 * a12 + g * a22) - g2 * lower).exact_div(
        d2 ** (n + 1), f"b21, divisor (z^-2-1)^{n + 1}"
    )
    b22 = lower.exact_div(d2, "b22, divisor (z^-2-1)")
    B = LaurentMatrix([[b11 * c, b12 * c], [b21 * c, b22 * c]])

    G = gregory_operator(n).symbol
    residual = (G @ A).scale(c) - B @ G.substitute_power(2)
    if not residual.is_zero():
        raise AssertionError(f"Gregory factorization of order {n} does not verify")
    return FactorizationResult(n, from_symbol(B, 2), residual)


def gregory_chain(mask: MatrixMask, n: int) -> list[MatrixMask]:
    """``[B^0, B^1, ..., B^n]``: Taylor step, then ``factor_step`` with ``V^0 .. V^(n-1)``."""
    chain = [factorize_taylor(mask)]
    for level in range(n):
        chain.append(factor_step(chain[-1], gregory_generator(level)))
    return chain


def alternative_chain(mask: MatrixMask, n: int, completions: Sequence) -> list[MatrixMask]:
    """Like :func:`gregory_chain` but with generators ``[v, w]`` where ``v``
    spans the current fixed-vector space and ``w = completions[level]``."""
    chain = [factorize_taylor(mask)]
    for level in range(n):
        basis = eigenspace(chain[-1])
        if len(basis) != 1:
            raise ValueError(f"level {level}: fixed-vector space has dimension {len(basis)}")
        V = generator_matrix(basis[0], completions[level])
        chain.append(factor_step(chain[-1], V))
    return chain


@dataclass(frozen=True)
class CertificationResult:
    """Evidence for (or against) C^d convergence.

    ``failed_stage`` is ``None`` on success, otherwise one of ``"spectral"``,
    ``"factorization"`` or ``"contractivity"``.
    """

    order: int
    scale: Fraction
    spectral: SpectralResult
    factorization: FactorizationResult | None = None
    contractivity: ContractivityResult | None = None
    failed_stage: str | None = None
    error: str | None = None

    @property
    def certified(self) -> bool:
        return self.failed_stage is None

    @property
    def spectral_polynomials(self) -> tuple[Polynomial, ...]:
        return self.spectral.polynomials


def certify_cd(
    mask: MatrixMask,
    d: int,
    max_iter: int = 12,
    scale=Fraction(1, 2),
    limit: int | None = None,
) -> CertificationResult:
    """Spectral condition, Gregory factorization of order ``d``, then contractivity.

    Contractivity is checked for ``scale * mask`` where ``mask`` is the
    ``2^-d``-normalized factor.  With the default ``1/2`` the H1 scheme at
    ``omega = -1/10`` certifies at power 6.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    scale = Fraction(scale)
    spec = solve_spectral(mask, d)
    if not spec.ok:
        return CertificationResult(d, scale, spec, failed_stage="spectral")
    try:
        fact = factorize_gregory(mask, d)
    except NonDivisibleError as exc:
        return CertificationResult(d, scale, spec, failed_stage="factorization", error=str(exc))
    contr = contractivity_certificate(fact.contraction_mask(scale), max_iter, limit)
    return CertificationResult(
        d,
        scale,
        spec,
        fact,
        contr,
        failed_stage=None if contr.certified else "contractivity",
    )
