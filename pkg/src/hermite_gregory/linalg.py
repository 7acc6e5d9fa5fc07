"""Small exact linear algebra over Fractions.

2x2 matrices are plain nested tuples ``((a, b), (c, d))``; vectors are pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
Vector2 = tuple[Fraction, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)
ZERO2: Matrix2 = ((ZERO, ZERO), (ZERO, ZERO))
IDENTITY2: Matrix2 = ((ONE, ZERO), (ZERO, ONE))


class SingularMatrixError(ValueError):
    pass


def mat(a, b, c, d) -> Matrix2:
    return ((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)))


def mat_add(x: Matrix2, y: Matrix2) -> Matrix2:
    return (
        (x[0][0] + y[0][0], x[0][1] + y[0][1]),
        (x[1][0] + y[1][0], x[1][1] + y[1][1]),
    )


def mat_sub(x: Matrix2, y: Matrix2) -> Matrix2:
    return (
        (x[0][0] - y[0][0], x[0][1] - y[0][1]),
        (x[1][0] - y[1][0], x[1][1] - y[1][1]),
    )


def mat_scale(s, x: Matrix2) -> Matrix2:
    return ((s * x[0][0], s * x[0][1]), (s * x[1][0], s * x[1][1]))


def mat_mul(x: Matrix2, y: Matrix2) -> Matrix2:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def mat_vec(x: Matrix2, v: Vector2) -> Vector2:
    return (x[0][0] * v[0] + x[0][1] * v[1], x[1][0] * v[0] + x[1][1] * v[1])


def det2(x: Matrix2) -> Fraction:
    return x[0][0] * x[1][1] - x[0][1] * x[1][0]


def mat_inv(x: Matrix2) -> Matrix2:
    d = det2(x)
    if d == 0:
        raise SingularMatrixError(f"matrix {format_matrix(x)} is singular")
    return ((x[1][1] / d, -x[0][1] / d), (-x[1][0] / d, x[0][0] / d))


def is_zero_matrix(x: Matrix2) -> bool:
    return x[0][0] == 0 and x[0][1] == 0 and x[1][0] == 0 and x[1][1] == 0


def max_row_sum(x: Matrix2) -> Fraction:
    """Matrix norm induced by the max-norm on R^2."""
    return max(abs(x[0][0]) + abs(x[0][1]), abs(x[1][0]) + abs(x[1][1]))


def format_matrix(x: Matrix2) -> str:
    return "[[{}, {}], [{}, {}]]".format(x[0][0], x[0][1], x[1][0], x[1][1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Exact null-space basis by Gaussian elimination.

    The pivot in each column is the first row with a nonzero entry, so the
    result is deterministic.  Basis vectors have a 1 in their free column.
    """
    work = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        lead = work[r][c]
        work[r] = [v / lead for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [ZERO] * ncols
        vec[free] = ONE
        for row, pc in enumerate(pivots):
            vec[pc] = -work[row][free]
        basis.append(tuple(vec))
    return basis


@dataclass(frozen=True)
class Inconsistency:
    """An equation that contradicts the ones accepted before it."""

    label: Hashable
    residual: Fraction


def solve_consistent(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    labels: Sequence[Hashable] | None = None,
) -> tuple[list[Fraction] | None, Inconsistency | None, int]:
    """Solve ``rows @ x = rhs`` exactly, processing equations in order.

    Returns ``(solution, None, rank)`` when consistent (free unknowns are set
    to zero) or ``(None, witness, rank)`` where ``witness`` names the first
    equation that reduces to ``0 = residual`` with ``residual != 0``.
    """
    ncols = len(rows[0]) if rows else 0
    labels = list(labels) if labels is not None else list(range(len(rows)))
    # reduced[c] = (row with leading 1 at column c, rhs)
    reduced: dict[int, tuple[list[Fraction], Fraction]] = {}
    for row, b, label in zip(rows, rhs, labels):
        row = [Fraction(v) for v in row]
        b = Fraction(b)
        for c in sorted(reduced):
            if row[c] != 0:
                prow, pb = reduced[c]
                f = row[c]
                row = [a - f * p for a, p in zip(row, prow)]
                b -= f * pb
        lead = next((c for c in range(ncols) if row[c] != 0), None)
        if lead is None:
            if b != 0:
                return None, Inconsistency(label, b), len(reduced)
            continue
        inv = 1 / row[lead]
        row = [v * inv for v in row]
        b *= inv
        for c, (prow, pb) in list(reduced.items()):
            if prow[lead] != 0:
                f = prow[lead]
                reduced[c] = ([a - f * p for a, p in zip(prow, row)], pb - f * b)
        reduced[lead] = (row, b)
    x = [ZERO] * ncols
    for c, (_, b) in reduced.items():
        x[c] = b
    return x, None, len(reduced)
