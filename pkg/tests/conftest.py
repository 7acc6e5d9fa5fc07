from fractions import Fraction

import pytest
from hypothesis import settings

from hermite_gregory.catalog import h1_mask
from hermite_gregory.masks import HermiteSequence, MatrixMask

settings.register_profile("default", deadline=None)
settings.load_profile("default")

THETA = Fraction(1, 32)


@pytest.fixture(scope="session")
def h1():
    """H1 at theta = 1/32, omega = -1/10."""
    return h1_mask(THETA, Fraction(-1, 10))


def golden_b4(omega) -> MatrixMask:
    """Hand-transcribed B^[4] table for theta = 1/32, offsets -4..2."""
    w = Fraction(omega)
    F = Fraction
    mats = [
        ((0, -24 * w), (0, 0)),
        ((0, 96 * w + 12), (0, w)),
        ((-w, -168 * w - 48), (0, -5 * w - F(1, 2))),
        ((4 * w + F(1, 2), 192 * w + 72), (w / 24, 20 * w + 3)),
        ((-6 * w - 2, -168 * w - 48), (-5 * w / 24 - F(1, 48), 4 * w - 2)),
        ((4 * w + F(5, 2), 96 * w + 12), (19 * w / 24 + F(1, 8), 19 * w + 3)),
        ((-w, -24 * w), (3 * w / 8 - F(1, 16), 9 * w + F(1, 2))),
    ]
    return MatrixMask(-4, tuple(tuple(tuple(F(x) for x in r) for r in m) for m in mats))


def seq(offset, values) -> HermiteSequence:
    return HermiteSequence(offset, tuple((Fraction(a), Fraction(b)) for a, b in values))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
