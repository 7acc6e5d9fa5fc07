"""Matrix masks, vector sequences and the subdivision operators they define.

A mask ``A`` with dilation ``m`` acts on a sequence ``c`` of 2-vectors by
``(S_A c)_j = sum_k A_{j - m k} c_k``.  Everything is exact; the iterated
masks used for contractivity checks are computed on a common-denominator
integer representation so that ten iterations stay cheap.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

from .laurent import Laurent, LaurentMatrix
from .linalg import (
    ZERO,
    ZERO2,
    Matrix2,
    Vector2,
    is_zero_matrix,
    mat_add,
    mat_scale,
    mat_vec,
    max_row_sum,
)

__all__ = [
    "ContractivityResult",
    "DEFAULT_MAX_SUPPORT",
    "HermiteSequence",
    "MatrixMask",
    "RefinementResult",
    "SupportLimitError",
    "apply_subdivision",
    "contractivity_certificate",
    "from_symbol",
    "hermite_refine",
    "iterate_mask",
    "operator_norm",
    "symbol",
]

DEFAULT_MAX_SUPPORT = 10**6


class SupportLimitError(RuntimeError):
    """An iterated mask would exceed the configured number of stored matrices."""


def max_support() -> int:
    value = os.environ.get("HERMITE_MAX_SUPPORT")
    return int(value) if value else DEFAULT_MAX_SUPPORT


def _as_matrix(m) -> Matrix2:
    return (
        (Fraction(m[0][0]), Fraction(m[0][1])),
        (Fraction(m[1][0]), Fraction(m[1][1])),
    )


@dataclass(frozen=True)
class MatrixMask:
    """Finitely supported sequence of 2x2 matrices starting at ``offset``.

    Zero matrices at either end are trimmed on construction, so the stored
    range is exactly the support.
    """

    offset: int
    matrices: tuple[Matrix2, ...]
    dilation: int = 2

    def __post_init__(self):
        if self.dilation < 2:
            raise ValueError("dilation must be at least 2")
        mats = [_as_matrix(m) for m in self.matrices]
        start = 0
        while start < len(mats) and is_zero_matrix(mats[start]):
            start += 1
        end = len(mats)
        while end > start and is_zero_matrix(mats[end - 1]):
            end -= 1
        object.__setattr__(self, "matrices", tuple(mats[start:end]))
        object.__setattr__(self, "offset", self.offset + start if end > start else 0)

    @classmethod
    def from_dict(cls, entries: dict[int, Matrix2], dilation: int = 2) -> "MatrixMask":
        if not entries:
            return cls(0, (), dilation)
        lo, hi = min(entries), max(entries)
        return cls(lo, tuple(entries.get(j, ZERO2) for j in range(lo, hi + 1)), dilation)

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.matrices:
            return None
        return self.offset, self.offset + len(self.matrices) - 1

    def __len__(self) -> int:
        return len(self.matrices)

    def __getitem__(self, j: int) -> Matrix2:
        i = j - self.offset
        if 0 <= i < len(self.matrices):
            return self.matrices[i]
        return ZERO2

    def items(self) -> Iterator[tuple[int, Matrix2]]:
        for i, m in enumerate(self.matrices):
            yield self.offset + i, m

    def scaled(self, s) -> "MatrixMask":
        s = Fraction(s)
        return MatrixMask(self.offset, tuple(mat_scale(s, m) for m in self.matrices), self.dilation)

    def residue_sum(self, r: int) -> Matrix2:
        """Sum of the matrices whose index is congruent to ``r`` modulo the dilation."""
        total = ZERO2
        for j, m in self.items():
            if (j - r) % self.dilation == 0:
                total = mat_add(total, m)
        return total

    def to_dict(self) -> dict[int, Matrix2]:
        return dict(self.items())


@dataclass(frozen=True)
class HermiteSequence:
    """Finitely supported sequence of 2-vectors; unstored indices read as zero."""

    offset: int
    values: tuple[Vector2, ...] = field(default=())

    def __post_init__(self):
        vals = tuple((Fraction(v[0]), Fraction(v[1])) for v in self.values)
        object.__setattr__(self, "values", vals)

    @classmethod
    def delta(cls, index: int, vector) -> "HermiteSequence":
        return cls(index, (vector,))

    @classmethod
    def constant(cls, vector, lo: int, hi: int) -> "HermiteSequence":
        return cls(lo, tuple(vector for _ in range(lo, hi + 1)))

    @property
    def end(self) -> int:
        return self.offset + len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, j: int) -> Vector2:
        i = j - self.offset
        if 0 <= i < len(self.values):
            return self.values[i]
        return (ZERO, ZERO)

    def items(self) -> Iterator[tuple[int, Vector2]]:
        for i, v in enumerate(self.values):
            yield self.offset + i, v

    def window(self, lo: int, hi: int) -> "HermiteSequence":
        return HermiteSequence(lo, tuple(self[j] for j in range(lo, hi + 1)))

    def trimmed(self) -> "HermiteSequence":
        nz = [j for j, v in self.items() if v[0] != 0 or v[1] != 0]
        if not nz:
            return HermiteSequence(0, ())
        return self.window(nz[0], nz[-1])

    def __eq__(self, other):
        if not isinstance(other, HermiteSequence):
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return a.offset == b.offset and a.values == b.values

    def __hash__(self):
        t = self.trimmed()
        return hash((t.offset, t.values))

    def _combine(self, other: "HermiteSequence", sign: int) -> "HermiteSequence":
        if not self.values:
            return other if sign > 0 else other.scaled(-1)
        if not other.values:
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.end, other.end)
        return HermiteSequence(
            lo,
            tuple(
                (self[j][0] + sign * other[j][0], self[j][1] + sign * other[j][1])
                for j in range(lo, hi + 1)
            ),
        )

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scaled(self, s) -> "HermiteSequence":
        s = Fraction(s)
        return HermiteSequence(self.offset, tuple((s * a, s * b) for a, b in self.values))

    def map_rows(self, s0, s1) -> "HermiteSequence":
        """Multiply first components by ``s0`` and second components by ``s1``."""
        s0, s1 = Fraction(s0), Fraction(s1)
        return HermiteSequence(self.offset, tuple((s0 * a, s1 * b) for a, b in self.values))

    def symbol(self) -> tuple[Laurent, Laurent]:
        return (
            Laurent([v[0] for v in self.values], self.offset),
            Laurent([v[1] for v in self.values], self.offset),
        )

    @classmethod
    def from_symbol(cls, first: Laurent, second: Laurent) -> "HermiteSequence":
        ranges = [(p.low, p.high) for p in (first, second) if not p.is_zero()]
        if not ranges:
            return cls(0, ())
        lo = min(r[0] for r in ranges)
        hi = max(r[1] for r in ranges)
        return cls(lo, tuple((first.coeff(j), second.coeff(j)) for j in range(lo, hi + 1)))


def apply_subdivision(mask: MatrixMask, data: HermiteSequence) -> HermiteSequence:
    """``(S c)_j = sum_k A_{j - m k} c_k`` with ``m`` the mask dilation."""
    if not mask.matrices or not data.values:
        return HermiteSequence(0, ())
    m = mask.dilation
    lo = m * data.offset + mask.offset
    hi = m * data.end + mask.offset + len(mask.matrices) - 1
    acc0 = [ZERO] * (hi - lo + 1)
    acc1 = [ZERO] * (hi - lo + 1)
    for k, v in data.items():
        if v[0] == 0 and v[1] == 0:
            continue
        base = m * k + mask.offset - lo
        for i, a in enumerate(mask.matrices):
            acc0[base + i] += a[0][0] * v[0] + a[0][1] * v[1]
            acc1[base + i] += a[1][0] * v[0] + a[1][1] * v[1]
    return HermiteSequence(lo, tuple(zip(acc0, acc1)))


def symbol(mask: MatrixMask) -> LaurentMatrix:
    """Matrix symbol ``sum_j A_j z**j``."""
    off = mask.offset
    return LaurentMatrix(
        [
            [Laurent([a[i][j] for a in mask.matrices], off) for j in range(2)]
            for i in range(2)
        ]
    )


def from_symbol(sym: LaurentMatrix, dilation: int = 2) -> MatrixMask:
    rng = sym.exponent_range()
    if rng is None:
        return MatrixMask(0, (), dilation)
    lo, hi = rng
    mats = tuple(
        tuple(tuple(sym[i, j].coeff(e) for j in range(2)) for i in range(2))
        for e in range(lo, hi + 1)
    )
    return MatrixMask(lo, mats, dilation)


# -- iterated masks on an integer representation ----------------------------

_IntMat = tuple[int, int, int, int]


def _integer_form(mask: MatrixMask) -> tuple[int, list[_IntMat]]:
    den = 1
    for a in mask.matrices:
        for row in a:
            for x in row:
                den = lcm(den, x.denominator)
    ints = [
        tuple(int(x * den) for x in (a[0][0], a[0][1], a[1][0], a[1][1])) for a in mask.matrices
    ]
    return den, ints


def _int_mul(x: _IntMat, y: _IntMat) -> _IntMat:
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def _predicted_length(n: int, m: int, level: int) -> int:
    # support width of B(z) B(z^m) ... B(z^(m^(level-1)))
    return (n - 1) * sum(m**i for i in range(level)) + 1


def _iterates(mask: MatrixMask, limit: int | None) -> Iterator[tuple[int, int, int, list[_IntMat]]]:
    """Yield ``(level, denominator, offset, integer matrices)`` for level = 1, 2, ..."""
    m = mask.dilation
    den, base = _integer_form(mask)
    n = len(base)
    cur, cur_off, cur_den, level = list(base), mask.offset, den, 1
    limit = max_support() if limit is None else limit
    while True:
        if len(cur) > limit:
            raise SupportLimitError(
                f"iterated mask at level {level} needs {len(cur)} matrices (limit {limit})"
            )
        yield level, cur_den, cur_off, cur
        step = m**level
        new_len = _predicted_length(n, m, level + 1)
        if new_len > limit:
            raise SupportLimitError(
                f"iterated mask at level {level + 1} needs {new_len} matrices (limit {limit})"
            )
        out = [(0, 0, 0, 0)] * new_len
        for k, b in enumerate(base):
            if b == (0, 0, 0, 0):
                continue
            shift = k * step
            for i, a in enumerate(cur):
                p = _int_mul(a, b)
                o = out[shift + i]
                out[shift + i] = (o[0] + p[0], o[1] + p[1], o[2] + p[2], o[3] + p[3])
        cur = out
        cur_off = cur_off + mask.offset * step
        cur_den *= den
        level += 1


def _int_norm(den: int, offset: int, mats: Sequence[_IntMat], dilation: int) -> Fraction:
    row0 = [0] * dilation
    row1 = [0] * dilation
    for i, a in enumerate(mats):
        r = (offset + i) % dilation
        row0[r] += abs(a[0]) + abs(a[1])
        row1[r] += abs(a[2]) + abs(a[3])
    return Fraction(max(max(row0), max(row1)), den)


def iterate_mask(mask: MatrixMask, n: int, limit: int | None = None) -> MatrixMask:
    """Mask of ``S_B`` applied ``n`` times; its symbol is ``B(z) B(z^2) ... B(z^(2^(n-1)))``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return mask
    for level, den, off, mats in _iterates(mask, limit):
        if level == n:
            return MatrixMask(
                off,
                tuple(
                    ((Fraction(a[0], den), Fraction(a[1], den)), (Fraction(a[2], den), Fraction(a[3], den)))
                    for a in mats
                ),
                mask.dilation**n,
            )
    raise AssertionError("unreachable")


def operator_norm(mask: MatrixMask) -> Fraction:
    """Exact ``sup ||S c|| / ||c||`` in the max-norm.

    Equals the largest max-row-sum norm of ``sum_k |A_{r + m k}|`` over the
    residues ``r`` modulo the dilation ``m``.
    """
    if not mask.matrices:
        return Fraction(0)
    m = mask.dilation
    best = Fraction(0)
    for r in range(m):
        acc = ZERO2
        for j, a in mask.items():
            if (j - r) % m == 0:
                acc = mat_add(acc, tuple(tuple(abs(x) for x in row) for row in a))
        best = max(best, max_row_sum(acc))
    return best


@dataclass(frozen=True)
class ContractivityResult:
    """Outcome of searching for ``N`` with ``||S^N|| < 1``.

    ``norms[i]`` is the exact norm at power ``i + 1``.  On success
    ``iterations`` is the smallest such power and ``norm`` its value; on
    failure ``iterations`` is ``None`` and ``norm`` is the value at the last
    power tried.
    """

    certified: bool
    iterations: int | None
    norm: Fraction
    norms: tuple[Fraction, ...]

    @property
    def best_norm(self) -> Fraction:
        return min(self.norms)


def contractivity_certificate(
    mask: MatrixMask, max_iter: int = 12, limit: int | None = None
) -> ContractivityResult:
    if mask.dilation != 2:
        raise ValueError("contractivity is checked on dilation-2 masks")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    norms: list[Fraction] = []
    if not mask.matrices:
        return ContractivityResult(True, 1, Fraction(0), (Fraction(0),))
    for level, den, off, mats in _iterates(mask, limit):
        value = _int_norm(den, off, mats, 2**level)
        norms.append(value)
        if value < 1:
            return ContractivityResult(True, level, value, tuple(norms))
        if level == max_iter:
            return ContractivityResult(False, None, value, tuple(norms))
    raise AssertionError("unreachable")


# -- Hermite refinement --------------------------------------------------------


@dataclass(frozen=True)
class RefinementResult:
    """Refined data after ``levels`` steps.

    ``valid`` is the index window (at the final level) whose values never
    depended on the zero padding outside the input data, or ``None``.
    """

    levels: int
    sequence: HermiteSequence
    valid: tuple[int, int] | None

    def samples(self, valid_only: bool = True) -> list[tuple[Fraction, Vector2]]:
        scale = Fraction(1, 2**self.levels)
        if valid_only:
            if self.valid is None:
                return []
            lo, hi = self.valid
            return [(j * scale, self.sequence[j]) for j in range(lo, hi + 1)]
        return [(j * scale, v) for j, v in self.sequence.items()]


def hermite_refine(mask: MatrixMask, data: HermiteSequence, levels: int) -> RefinementResult:
    """Run ``c^{n+1} = D^{-(n+1)} S_A D^n c^n`` with ``D = diag(1, 1/2)``."""
    if mask.dilation != 2:
        raise ValueError("Hermite refinement needs a dilation-2 mask")
    if levels < 1:
        raise ValueError("levels must be positive")
    seq = data
    valid: tuple[int, int] | None = (data.offset, data.end) if data.values else None
    sup = mask.support
    for n in range(levels):
        scaled = seq.map_rows(1, Fraction(1, 2**n))
        seq = apply_subdivision(mask, scaled).map_rows(1, 2 ** (n + 1))
        if valid is not None and sup is not None:
            lo, hi = 2 * valid[0] + sup[1], 2 * valid[1] + sup[0]
            valid = (lo, hi) if lo <= hi else None
        else:
            valid = None
    if valid is not None and seq.values:
        # keep the window inside the stored range for reporting
        lo, hi = max(valid[0], seq.offset), min(valid[1], seq.end)
        valid = (lo, hi) if lo <= hi else None
    return RefinementResult(levels, seq, valid)


def as_mask(entries: Iterable[tuple[int, Matrix2]], dilation: int = 2) -> MatrixMask:
    return MatrixMask.from_dict(dict(entries), dilation)


def apply_matrix(a: Matrix2, seq: HermiteSequence) -> HermiteSequence:
    """Pointwise product with a constant matrix."""
    return HermiteSequence(seq.offset, tuple(mat_vec(a, v) for v in seq.values))
