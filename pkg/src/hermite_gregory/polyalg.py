"""Exact polynomials with the differential and forward-difference calculus.

Besides the direct operators (``differentiate``, ``forward_difference``) this
module carries the coefficient formulas that express iterated differences
through Stirling numbers, so the two routes can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Sequence

from .combinatorics import gregory, stirling_second

__all__ = [
    "Polynomial",
    "PolyPair",
    "delta_coefficients",
    "delta_minus_D",
    "delta_minus_D_closed_form",
    "differentiate",
    "forward_difference",
    "iterated_difference_closed_form",
    "monomial_family",
    "p_closed_form",
    "pq_sequence",
    "pq_recursion",
    "sigma_closed_form",
    "sample_pair",
]


class Polynomial:
    """Dense polynomial; ``coeffs[j]`` multiplies ``x**j``.

    Trailing zeros are trimmed, so the zero polynomial has no coefficients
    and ``degree`` is ``None`` for it.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, j: int) -> Fraction:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[j] + other[j] for j in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial([c * other for c in self.coeffs])
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def shift(self, h=1) -> "Polynomial":
        """Return x -> p(x + h)."""
        h = Fraction(h)
        out = [Fraction(0)] * len(self.coeffs)
        for m, c in enumerate(self.coeffs):
            for j in range(m + 1):
                out[j] += c * comb(m, j) * h ** (m - j)
        return Polynomial(out)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
            if mono and c == 1:
                parts.append(mono)
            elif mono:
                parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        return " + ".join(reversed(parts)).replace("+ -", "- ")


@dataclass(frozen=True)
class PolyPair:
    first: Polynomial
    second: Polynomial

    def __iter__(self):
        yield self.first
        yield self.second


def differentiate(p: Polynomial) -> Polynomial:
    return Polynomial([(j + 1) * p[j + 1] for j in range(len(p.coeffs) - 1)])


def forward_difference(p: Polynomial, times: int = 1) -> Polynomial:
    """Apply ``p -> p(x+1) - p(x)`` ``times`` times by shift-and-subtract."""
    if times < 0:
        raise ValueError("times must be non-negative")
    for _ in range(times):
        if p.is_zero():
            break
        p = p.shift(1) - p
    return p


def delta_coefficients(p: Polynomial) -> Polynomial:
    """Single forward difference via the binomial coefficient formula."""
    k = p.degree
    if k is None or k == 0:
        return Polynomial()
    return Polynomial(
        [sum(comb(m + 1, j) * p[m + 1] for m in range(j, k)) for j in range(k)]
    )


def iterated_difference_closed_form(p: Polynomial, ell: int) -> Polynomial:
    """``ell``-fold forward difference through second-kind Stirling numbers.

    Coefficient j of the result is
    ``ell! * sum_{m>=j} p[m] * C(m, j) * S2(m - j, ell)``.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    k = p.degree
    if k is None or k == 0 or ell > k:
        return Polynomial()
    fl = factorial(ell)
    return Polynomial(
        [
            fl * sum(p[m] * comb(m, j) * stirling_second(m - j, ell) for m in range(j, k + 1))
            for j in range(k - ell + 1)
        ]
    )


def delta_minus_D(p: Polynomial) -> Polynomial:
    return forward_difference(p) - differentiate(p)


def delta_minus_D_closed_form(p: Polynomial) -> Polynomial:
    k = p.degree
    if k is None or k <= 1:
        return Polynomial()
    return Polynomial(
        [sum(comb(m + 1, j) * p[m + 1] for m in range(j + 1, k)) for j in range(k - 1)]
    )


def monomial_family(d: int) -> list[Polynomial]:
    """The pure spectral family x**k / k!, k = 0..d."""
    return [Polynomial.monomial(k, Fraction(1, factorial(k))) for k in range(d + 1)]


def _gregory_sum(h: Polynomial, n: int, a: Callable[[int], Fraction]) -> Polynomial:
    dh = differentiate(h)
    total = Polynomial()
    term = dh
    for ell in range(n):
        total = total + term * a(ell)
        term = forward_difference(term)
    return total


def pq_sequence(spectral: Sequence[Polynomial], n: int, k: int) -> PolyPair:
    """Polynomial pair carried by the n-th Gregory operator.

    For ``n >= 1`` with ``h`` the spectral polynomial of index ``k + n + 1``:
    ``p = Delta^n D h`` and ``q = Delta h - sum_{l<n} G_l Delta^l D h``.
    ``n == 0`` gives the Taylor pair ``(Delta h - D h, D h)`` with
    ``h = spectral[k + 1]``.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    idx = k + n + 1
    if idx >= len(spectral):
        raise IndexError(
            f"need spectral polynomial of index {idx}, only 0..{len(spectral) - 1} available"
        )
    h = spectral[idx]
    if n == 0:
        return PolyPair(delta_minus_D(h), differentiate(h))
    p = forward_difference(differentiate(h), n)
    q = forward_difference(h) - _gregory_sum(h, n, gregory)
    return PolyPair(p, q)


def pq_recursion(
    h: Sequence[Polynomial],
    n: int,
    k: int,
    a: Callable[[int], Fraction] | None = None,
) -> PolyPair:
    """Iterate ``[f; g]_k^{n+1} = [[Delta, 0], [-a_n, 1]] [f; g]_{k+1}^{n}``.

    The recursion starts at ``f_k^1 = Delta D h_{k+2}`` and
    ``g_k^1 = Delta h_{k+2} - D h_{k+2}``; ``a`` defaults to the Gregory
    coefficients.  Needs ``h`` up to index ``k + n + 1``.
    """
    if n < 1:
        raise ValueError("the recursion starts at n = 1")
    a = a or gregory
    if k + n + 1 >= len(h):
        raise IndexError(f"need h up to index {k + n + 1}")

    def start(kk: int) -> PolyPair:
        hh = h[kk + 2]
        return PolyPair(forward_difference(differentiate(hh)), delta_minus_D(hh))

    # level 1 pairs for indices k .. k + n - 1
    pairs = [start(kk) for kk in range(k, k + n)]
    for level in range(1, n):
        an = a(level)
        pairs = [
            PolyPair(forward_difference(nxt.first), nxt.second - nxt.first * an)
            for nxt in pairs[1:]
        ]
    return pairs[0]


def p_closed_form(tau: Polynomial, n: int, k: int) -> Polynomial:
    """Coefficients of ``Delta^n D tau`` for ``tau`` of degree ``k + n + 1``."""
    fn = factorial(n)
    return Polynomial(
        [
            fn
            * sum(
                (m + 1) * tau[m + 1] * comb(m, j) * stirling_second(m - j, n)
                for m in range(j, k + n + 1)
            )
            for j in range(k + 1)
        ]
    )


def sigma_closed_form(
    tau: Polynomial, n: int, k: int, a: Callable[[int], Fraction] | None = None
) -> Polynomial:
    """Coefficients of ``Delta tau - sum_{l<n} a_l Delta^l D tau`` (a_0 = 1)."""
    a = a or gregory
    out = []
    for j in range(k + n + 1):
        total = Fraction(0)
        for m in range(j, k + n + 1):
            inner = sum(
                (a(ell) * factorial(ell) * stirling_second(m - j, ell) for ell in range(n)),
                Fraction(0),
            )
            total += comb(m + 1, j) * (1 - (m + 1 - j) * inner) * tau[m + 1]
        out.append(total)
    return Polynomial(out)


def sample_pair(pair, lo: int, hi: int):
    """Integer samples ``[first(j), second(j)]`` for ``j = lo..hi``."""
    from .masks import HermiteSequence

    first, second = pair
    return HermiteSequence(lo, [(first(j), second(j)) for j in range(lo, hi + 1)])
