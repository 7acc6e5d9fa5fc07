from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hermite_gregory.factorize import laurent_divide
from hermite_gregory.laurent import DELTA, Z, Z_INV, Laurent, LaurentMatrix, NonDivisibleError

F = Fraction
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
laurents = st.builds(
    lambda cs, low: Laurent(cs, low),
    st.lists(coeff, min_size=0, max_size=6),
    st.integers(min_value=-4, max_value=4),
)
nonzero = laurents.filter(lambda p: not p.is_zero())


def test_divide_examples():
    assert laurent_divide(Z_INV**2 - 1, Z_INV - 1) == Z_INV + 1
    assert laurent_divide(DELTA**3, DELTA**2) == DELTA
    with pytest.raises(NonDivisibleError) as err:
        laurent_divide(Z_INV + 3, Z_INV - 1, "demo")
    assert err.value.remainder == Laurent.const(4)
    assert "demo" in str(err.value)


@given(laurents, nonzero)
def test_divmod_identity(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a


@given(laurents, nonzero)
def test_exact_division_of_products(a, b):
    assert (a * b).exact_div(b) == a


@given(laurents, laurents, laurents)
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == Laurent()


@given(laurents, st.integers(min_value=1, max_value=4), st.sampled_from([F(1, 2), F(-2), F(3)]))
def test_substitution_is_evaluation_at_power(p, m, z):
    assert p.substitute_power(m)(z) == p(z**m)


def test_monomials_and_trimming():
    assert Laurent([0, 0, 1, 0], -3) == Laurent.monomial(-1)
    assert Z * Z_INV == Laurent.const(1)
    assert DELTA(1) == 0
    assert Laurent([1, 2], -1).high == 0


def test_matrix_algebra():
    m = LaurentMatrix([[DELTA, -1], [0, 1]])
    assert m.det() == DELTA
    assert m @ m.adjugate() == LaurentMatrix.identity().scale(1) @ LaurentMatrix(
        [[DELTA, 0], [0, DELTA]]
    )
    assert m(1) == ((0, -1), (0, 1))
    with pytest.raises(NonDivisibleError):
        m.exact_div(Z_INV + 1, "entry test")
