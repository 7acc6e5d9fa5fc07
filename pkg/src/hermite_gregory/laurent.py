"""Laurent polynomials in z with exact coefficients, and 2x2 matrices of them.

A sequence ``c`` corresponds to the symbol ``sum_j c_j z**j``.  Under this
convention the forward difference ``(c_{j+1} - c_j)_j`` has symbol
``(z**-1 - 1) c(z)`` and a dilation-m subdivision operator acts as
``(S c)(z) = A(z) c(z**m)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

__all__ = ["Laurent", "LaurentMatrix", "NonDivisibleError", "Z", "Z_INV", "DELTA"]


class NonDivisibleError(ArithmeticError):
    """Exact division left a nonzero remainder.

    ``remainder`` satisfies ``numerator = quotient * denominator + remainder``.
    ``context`` names the symbol entry or divisor that failed.
    """

    def __init__(self, numerator, denominator, remainder, context: str = ""):
        self.numerator = numerator
        self.denominator = denominator
        self.remainder = remainder
        self.context = context
        where = f" ({context})" if context else ""
        super().__init__(f"{numerator} is not divisible by {denominator}{where}; remainder {remainder}")


class Laurent:
    """Immutable Laurent polynomial ``sum_i coeffs[i] * z**(low + i)``."""

    __slots__ = ("low", "coeffs")

    def __init__(self, coeffs: Iterable = (), low: int = 0):
        cs = [Fraction(c) for c in coeffs]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        end = len(cs)
        while end > start and cs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", tuple(cs[start:end]))
        object.__setattr__(self, "low", low + start if end > start else 0)

    def __setattr__(self, name, value):
        raise AttributeError("Laurent polynomials are immutable")

    @classmethod
    def from_dict(cls, terms: Mapping[int, object]) -> "Laurent":
        terms = {e: Fraction(c) for e, c in terms.items() if c != 0}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls([terms.get(e, 0) for e in range(lo, hi + 1)], lo)

    @classmethod
    def const(cls, c) -> "Laurent":
        return cls([c])

    @classmethod
    def monomial(cls, exponent: int, c=1) -> "Laurent":
        return cls([c], exponent)

    # -- inspection -------------------------------------------------------
    @property
    def high(self) -> int | None:
        return self.low + len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, exponent: int) -> Fraction:
        i = exponent - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def terms(self) -> dict[int, Fraction]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def __call__(self, z) -> Fraction:
        z = Fraction(z)
        if self.is_zero():
            return Fraction(0)
        return sum((c * z ** (self.low + i) for i, c in enumerate(self.coeffs)), Fraction(0))

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Laurent):
            if isinstance(other, (int, Fraction)):
                other = Laurent.const(other)
            else:
                return NotImplemented
        return self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.low, self.coeffs))

    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        return Laurent([self.coeff(e) + other.coeff(e) for e in range(lo, hi + 1)], lo)

    __radd__ = __add__

    def __neg__(self):
        return Laurent([-c for c in self.coeffs], self.low)

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Laurent([c * other for c in self.coeffs], self.low)
        if not isinstance(other, Laurent):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Laurent()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Laurent(out, self.low + other.low)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        result = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute_power(self, m: int) -> "Laurent":
        """Return p(z**m) for a positive integer m."""
        if m < 1:
            raise ValueError("m must be positive")
        return Laurent.from_dict({m * e: c for e, c in self.terms().items()})

    def divmod(self, other: "Laurent") -> tuple["Laurent", "Laurent"]:
        """Division in the variable u = 1/z.

        Both operands are written as u**a * P(u) with P(0) != 0 and P is long
        divided by Q.  The remainder R is returned as u**a * R(u) so that
        ``self == q * other + r`` holds exactly.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return Laurent(), Laurent()
        # in u, exponent e of z becomes -e; P(u) coefficients ascending in u
        a = -self.high
        b = -other.high
        p = list(reversed(self.coeffs))
        q = list(reversed(other.coeffs))
        quot = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
        rem = p[:]
        lead = q[-1]
        for shift in range(len(p) - len(q), -1, -1):
            c = rem[shift + len(q) - 1] / lead
            quot[shift] = c
            if c != 0:
                for i, qc in enumerate(q):
                    rem[shift + i] -= c * qc
        rem = rem[: len(q) - 1] if len(q) > 1 else []
        # back to z: u**k -> z**-k
        q_lau = Laurent.from_dict({-(k + a - b): c for k, c in enumerate(quot) if c != 0})
        r_lau = Laurent.from_dict({-(k + a): c for k, c in enumerate(rem) if c != 0})
        return q_lau, r_lau

    def exact_div(self, other: "Laurent", context: str = "") -> "Laurent":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise NonDivisibleError(self, other, r, context)
        return q

    def __repr__(self):
        return f"Laurent({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e, c in sorted(self.terms().items()):
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "z"
            else:
                mono = f"z^{e}"
            if mono and c == 1:
                term = mono
            elif mono and c == -1:
                term = "-" + mono
            elif mono:
                term = f"{c}*{mono}"
            else:
                term = str(c)
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")


def _lift(x):
    if isinstance(x, Laurent):
        return x
    if isinstance(x, (int, Fraction)):
        return Laurent.const(x)
    return NotImplemented


Z = Laurent.monomial(1)
Z_INV = Laurent.monomial(-1)
#: symbol of the forward difference operator
DELTA = Z_INV - 1


class LaurentMatrix:
    """2x2 matrix of Laurent polynomials (a matrix symbol)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(tuple(_as_laurent(e) for e in row) for row in entries)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("LaurentMatrix must be 2x2")
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentMatrix is immutable")

    @classmethod
    def identity(cls) -> "LaurentMatrix":
        return cls([[1, 0], [0, 1]])

    @classmethod
    def zero(cls) -> "LaurentMatrix":
        return cls([[0, 0], [0, 0]])

    @classmethod
    def constant(cls, m) -> "LaurentMatrix":
        return cls([[m[0][0], m[0][1]], [m[1][0], m[1][1]]])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix(
            [[self[i, j] + other[i, j] for j in range(2)] for i in range(2)]
        )

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix(
            [[self[i, j] - other[i, j] for j in range(2)] for i in range(2)]
        )

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "LaurentMatrix":
        s = _as_laurent(s)
        return LaurentMatrix([[s * self[i, j] for j in range(2)] for i in range(2)])

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix(
            [
                [self[i, 0] * other[0, j] + self[i, 1] * other[1, j] for j in range(2)]
                for i in range(2)
            ]
        )

    def det(self) -> Laurent:
        return self[0, 0] * self[1, 1] - self[0, 1] * self[1, 0]

    def adjugate(self) -> "LaurentMatrix":
        return LaurentMatrix([[self[1, 1], -self[0, 1]], [-self[1, 0], self[0, 0]]])

    def substitute_power(self, m: int) -> "LaurentMatrix":
        return LaurentMatrix(
            [[self[i, j].substitute_power(m) for j in range(2)] for i in range(2)]
        )

    def exact_div(self, d: Laurent, context: str = "") -> "LaurentMatrix":
        out = []
        for i in range(2):
            row = []
            for j in range(2):
                where = f"entry ({i + 1},{j + 1})" + (f" of {context}" if context else "")
                row.append(self[i, j].exact_div(d, where))
            out.append(row)
        return LaurentMatrix(out)

    def __call__(self, z):
        return tuple(tuple(self[i, j](z) for j in range(2)) for i in range(2))

    def exponent_range(self) -> tuple[int, int] | None:
        lows = [e.low for row in self.entries for e in row if not e.is_zero()]
        highs = [e.high for row in self.entries for e in row if not e.is_zero()]
        if not lows:
            return None
        return min(lows), max(highs)

    def __repr__(self):
        return "LaurentMatrix([[{}, {}], [{}, {}]])".format(
            self[0, 0], self[0, 1], self[1, 0], self[1, 1]
        )


def _as_laurent(x) -> Laurent:
    if isinstance(x, Laurent):
        return x
    return Laurent.const(x)
