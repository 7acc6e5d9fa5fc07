"""Spectral polynomials and polynomial reproduction of Hermite subdivision operators.

A mask satisfies the spectral condition of order ``d`` when for each
``k <= d`` some ``P_k`` of degree ``k`` with leading coefficient ``1/k!``
gives ``S_A [P_k; P_k'] = 2^-k [P_k; P_k']`` on integer samples.  On each
output parity class both sides are polynomials of degree at most ``k`` in
the output index, so finitely many indices decide the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .linalg import Inconsistency, Vector2, solve_consistent
from .masks import HermiteSequence, MatrixMask, hermite_refine
from .polyalg import Polynomial, differentiate, sample_pair

__all__ = [
    "SpectralResult",
    "check_reproduction",
    "reproduction_degree",
    "solve_spectral",
    "subdivide_at",
    "verify_spectral",
]


def subdivide_at(mask: MatrixMask, f: Callable[[int], Vector2], j: int) -> Vector2:
    """``(S_A c)_j`` for the bi-infinite sequence ``c_i = f(i)``."""
    lo, hi = mask.support
    m = mask.dilation
    first, second = Fraction(0), Fraction(0)
    for i in range(-((hi - j) // m), (j - lo) // m + 1):
        a = mask[j - m * i]
        v = f(i)
        first += a[0][0] * v[0] + a[0][1] * v[1]
        second += a[1][0] * v[0] + a[1][1] * v[1]
    return first, second


def _pair_samples(p: Polynomial) -> Callable[[int], Vector2]:
    dp = differentiate(p)
    return lambda i: (p(i), dp(i))


@dataclass(frozen=True)
class SpectralResult:
    """Spectral polynomials ``P_0 .. P_order``.

    When the condition breaks at some ``k <= requested`` then
    ``failure_order == k``, ``order == k - 1`` and ``witness`` records the
    first contradictory equation as ``((index, component), residual)``.
    """

    requested: int
    order: int
    polynomials: tuple[Polynomial, ...]
    failure_order: int | None = None
    witness: Inconsistency | None = None

    @property
    def ok(self) -> bool:
        return self.failure_order is None


def _sample_indices(k: int) -> list[int]:
    return list(range(-(k + 2), k + 3))


def _verify_indices(k: int) -> list[int]:
    return list(range(k + 3, 3 * k + 9))


def _solve_level(mask: MatrixMask, k: int, indices: Sequence[int]):
    scale = Fraction(1, 2**k)
    residuals = []
    for m in range(k + 1):
        mono = Polynomial.monomial(m)
        dmono = differentiate(mono)
        f = _pair_samples(mono)
        res = {}
        for j in indices:
            out = subdivide_at(mask, f, j)
            res[j] = (out[0] - scale * mono(j), out[1] - scale * dmono(j))
        residuals.append(res)
    lead = Fraction(1, factorial(k))
    rows, rhs, labels = [], [], []
    for j in indices:
        for r in range(2):
            rows.append([residuals[m][j][r] for m in range(k)])
            rhs.append(-lead * residuals[k][j][r])
            labels.append((j, r))
    if k == 0:
        # nothing to solve; every equation must already read 0 = 0
        for (j, r), b in zip(labels, rhs):
            if b != 0:
                return None, Inconsistency((j, r), b)
        return Polynomial.constant(1), None
    sol, witness, _ = solve_consistent(rows, rhs, labels)
    if sol is None:
        return None, witness
    return Polynomial(list(sol) + [lead]), None


def solve_spectral(mask: MatrixMask, d: int) -> SpectralResult:
    """Find spectral polynomials up to order ``d`` or the first order that fails.

    Each candidate is re-checked on a window disjoint from the one used to
    build its linear system.
    """
    if mask.dilation != 2:
        raise ValueError("the spectral condition is defined for dilation-2 masks")
    if d < 0:
        raise ValueError("d must be non-negative")
    polys: list[Polynomial] = []
    for k in range(d + 1):
        p, witness = _solve_level(mask, k, _sample_indices(k))
        if p is None:
            return SpectralResult(d, k - 1, tuple(polys), k, witness)
        if not _level_holds(mask, p, k, _verify_indices(k)):
            raise AssertionError(f"spectral polynomial of order {k} failed verification")
        polys.append(p)
    return SpectralResult(d, d, tuple(polys))


def _level_holds(mask: MatrixMask, p: Polynomial, k: int, indices) -> bool:
    dp = differentiate(p)
    f = _pair_samples(p)
    scale = Fraction(1, 2**k)
    for j in indices:
        out = subdivide_at(mask, f, j)
        if out != (scale * p(j), scale * dp(j)):
            return False
    return True


def verify_spectral(
    mask: MatrixMask, polys: Sequence[Polynomial], window: tuple[int, int]
) -> bool:
    """Check the eigen-relation for every ``polys[k]`` at output indices in ``window``."""
    lo, hi = window
    return all(_level_holds(mask, p, k, range(lo, hi + 1)) for k, p in enumerate(polys))


def _one_step_reproduces(mask: MatrixMask, m: int, indices) -> bool:
    f = Polynomial.monomial(m)
    df = differentiate(f)
    samples = _pair_samples(f)
    for j in indices:
        out = subdivide_at(mask, samples, j)
        x = Fraction(j, 2)
        # refined level-1 data is D^-1 S_A c
        if (out[0], 2 * out[1]) != (f(x), df(x)):
            return False
    return True


def _two_step_reproduces(mask: MatrixMask, m: int) -> bool:
    f = Polynomial.monomial(m)
    df = differentiate(f)
    lo, hi = mask.support
    width = 2 * (hi - lo) + m + 4
    data = sample_pair((f, df), -width, width)
    result = hermite_refine(mask, data, 2)
    samples = result.samples()
    if not samples:
        return False
    return all(v == (f(x), df(x)) for x, v in samples)


def reproduction_degree(mask: MatrixMask, max_degree: int) -> int:
    """Largest ``m <= max_degree`` such that all monomials up to ``x^m`` are reproduced (-1 if none)."""
    if mask.dilation != 2:
        raise ValueError("reproduction is defined for dilation-2 masks")
    lo, hi = mask.support
    indices = range(-2 * (hi - lo) - 4, 2 * (hi - lo) + 5)
    for m in range(max_degree + 1):
        if not (_one_step_reproduces(mask, m, indices) and _two_step_reproduces(mask, m)):
            return m - 1
    return max_degree


def check_reproduction(mask: MatrixMask, degree: int) -> bool:
    return reproduction_degree(mask, degree) >= degree
