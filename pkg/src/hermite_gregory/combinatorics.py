"""Stirling numbers of both kinds and Gregory coefficients, in exact arithmetic.

All scalars in this package are :class:`fractions.Fraction` values.  The
tables here are memoized and grow on demand; after warm-up they are only
read, so sharing them between threads is safe.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

__all__ = [
    "CombinatoricsTable",
    "TABLE",
    "gregory",
    "stirling_first",
    "stirling_second",
    "stirling_second_recurrence",
    "to_fraction",
]


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and decimal strings like ``"-0.12"`` or ``"3/7"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(value)


class CombinatoricsTable:
    """Memoized Stirling/Gregory tables.

    ``first[n][m]`` holds the unsigned Stirling number of the first kind and
    ``gregory_values[n]`` the n-th Gregory coefficient.  :meth:`extend` grows
    both up to a bound; lookups past the current bound extend automatically.
    """

    def __init__(self, bound: int = 16):
        self.first: list[list[int]] = [[1]]
        self.gregory_values: list[Fraction] = []
        self.extend(bound)

    @property
    def bound(self) -> int:
        return len(self.first) - 1

    def extend(self, bound: int) -> None:
        while len(self.first) <= bound:
            n = len(self.first) - 1
            prev = self.first[n]
            # [n+1 m] = n [n m] + [n m-1]
            row = [0] * (n + 2)
            for m in range(1, n + 2):
                left = prev[m] if m <= n else 0
                row[m] = n * left + prev[m - 1]
            self.first.append(row)
        while len(self.gregory_values) <= bound:
            n = len(self.gregory_values)
            row = self.first[n]
            total = sum(
                (Fraction(row[j] * (-1) ** (n - j), j + 1) for j in range(n + 1)),
                Fraction(0),
            )
            self.gregory_values.append(total / factorial(n))

    def stirling_first(self, n: int, m: int) -> int:
        if n < 0 or m < 0:
            raise ValueError("Stirling numbers need non-negative arguments")
        if m > n:
            return 0
        if n > self.bound:
            self.extend(n)
        return self.first[n][m]

    def gregory(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("Gregory coefficients are indexed from 0")
        if n > self.bound:
            self.extend(n)
        return self.gregory_values[n]


TABLE = CombinatoricsTable()


def stirling_first(n: int, m: int) -> int:
    """Unsigned Stirling number of the first kind (permutations of n with m cycles)."""
    return TABLE.stirling_first(n, m)


@lru_cache(maxsize=None)
def stirling_second(n: int, m: int) -> int:
    """Stirling number of the second kind via the alternating binomial sum."""
    if n < 0 or m < 0:
        raise ValueError("Stirling numbers need non-negative arguments")
    if m > n:
        return 0
    total = sum(comb(m, j) * (-1) ** (m - j) * j**n for j in range(m + 1))
    q, r = divmod(total, factorial(m))
    assert r == 0
    return q


def stirling_second_recurrence(n: int, m: int) -> int:
    # {n+1 m} = m {n m} + {n m-1}; used to cross-check the closed form
    if n < 0 or m < 0:
        raise ValueError("Stirling numbers need non-negative arguments")
    row = [1]
    for k in range(n):
        new = [0] * (k + 2)
        for j in range(1, k + 2):
            new[j] = j * (row[j] if j <= k else 0) + row[j - 1]
        row = new
    return row[m] if m < len(row) else 0


def gregory(n: int) -> Fraction:
    """Gregory coefficient G_n (Cauchy number of the first kind divided by n!)."""
    return TABLE.gregory(n)
