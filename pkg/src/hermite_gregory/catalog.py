"""Ready-made masks."""

from __future__ import annotations

from fractions import Fraction

from .masks import MatrixMask


def h1_mask(theta, omega) -> MatrixMask:
    """Primal two-parameter Hermite mask supported on [-2, 2].

    Reproduces cubics for all parameters; ``theta = 1/32`` adds a
    fourth-order spectral polynomial.
    """
    t, w = Fraction(theta), Fraction(omega)
    h = Fraction(1, 2)
    e = Fraction(1, 8)
    q = Fraction(3, 4)
    return MatrixMask(
        -2,
        (
            ((t, -t / 2), (-3 * w / 2, w / 2)),
            ((h, -e), (q, -e)),
            ((1 - 2 * t, 0), (0, (1 + 4 * w) / 2)),
            ((h, e), (-q, -e)),
            ((t, t / 2), (3 * w / 2, w / 2)),
        ),
    )
