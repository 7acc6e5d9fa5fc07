"""Dilation-1 difference operators acting on 2-vector sequences.

Operators are stored only as matrix symbols: ``(L c)(z) = L(z) c(z)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import gregory
from .laurent import DELTA, Laurent, LaurentMatrix
from .linalg import IDENTITY2, Matrix2, mat, mat_inv, mat_sub, nullspace
from .masks import HermiteSequence, MatrixMask

__all__ = [
    "StencilOperator",
    "apply_stencil",
    "delta_V",
    "eigenspace",
    "generator_matrix",
    "gregory_generator",
    "gregory_operator",
    "gregory_sum_symbol",
    "spans_same_line",
    "taylor_operator",
]


@dataclass(frozen=True)
class StencilOperator:
    symbol: LaurentMatrix

    def __matmul__(self, other: "StencilOperator") -> "StencilOperator":
        return StencilOperator(self.symbol @ other.symbol)

    def __call__(self, data: HermiteSequence) -> HermiteSequence:
        return apply_stencil(self, data)


def taylor_operator() -> StencilOperator:
    return StencilOperator(LaurentMatrix([[DELTA, -1], [0, 1]]))


def gregory_sum_symbol(n: int) -> Laurent:
    """``g_n(z) = -sum_{l<n} G_l (z^-1 - 1)^l``."""
    total = Laurent()
    power = Laurent.const(1)
    for ell in range(n):
        total = total + power * gregory(ell)
        power = power * DELTA
    return -total


def gregory_operator(n: int) -> StencilOperator:
    """``[[0, Delta^n], [Delta, -sum_{l<n} G_l Delta^l]]``."""
    if n < 1:
        raise ValueError("the Gregory operators start at n = 1")
    return StencilOperator(LaurentMatrix([[0, DELTA**n], [DELTA, gregory_sum_symbol(n)]]))


def generator_matrix(v, w) -> Matrix2:
    """Matrix with columns ``v`` and ``w``."""
    return mat(v[0], w[0], v[1], w[1])


def gregory_generator(n: int) -> Matrix2:
    """``V^0 = [[0, 1], [1, 0]]`` and ``V^n = [[1, 0], [G_n, 1]]`` for n >= 1."""
    if n == 0:
        return mat(0, 1, 1, 0)
    return mat(1, 0, gregory(n), 1)


def delta_V(V: Matrix2) -> StencilOperator:
    """``diag(Delta, 1) V^-1``; raises ``SingularMatrixError`` for singular V."""
    inv = mat_inv(V)
    return StencilOperator(
        LaurentMatrix(
            [
                [DELTA * inv[0][0], DELTA * inv[0][1]],
                [inv[1][0], inv[1][1]],
            ]
        )
    )


def apply_stencil(op: StencilOperator, data: HermiteSequence) -> HermiteSequence:
    c0, c1 = data.symbol()
    s = op.symbol
    return HermiteSequence.from_symbol(s[0, 0] * c0 + s[0, 1] * c1, s[1, 0] * c0 + s[1, 1] * c1)


def eigenspace(mask: MatrixMask) -> list[tuple[Fraction, Fraction]]:
    """Basis of ``{v : sum_j B_2j v = v and sum_j B_2j+1 v = v}``."""
    if mask.dilation != 2:
        raise ValueError("eigenspace is defined for dilation-2 masks")
    even = mat_sub(mask.residue_sum(0), IDENTITY2)
    odd = mat_sub(mask.residue_sum(1), IDENTITY2)
    rows = [even[0], even[1], odd[0], odd[1]]
    basis = []
    for v in nullspace(rows, 2):
        lead = next(x for x in v if x != 0)
        basis.append(tuple(x / lead for x in v))
    return basis


def spans_same_line(basis, v) -> bool:
    """True if ``basis`` is one vector proportional to the nonzero vector ``v``."""
    if len(basis) != 1:
        return False
    b = basis[0]
    return b[0] * v[1] - b[1] * v[0] == 0
