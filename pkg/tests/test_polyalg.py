from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from hermite_gregory.combinatorics import gregory
from hermite_gregory.polyalg import (
    PolyPair,
    Polynomial,
    delta_coefficients,
    delta_minus_D,
    delta_minus_D_closed_form,
    differentiate,
    forward_difference,
    iterated_difference_closed_form,
    monomial_family,
    p_closed_form,
    pq_recursion,
    pq_sequence,
    sample_pair,
    sigma_closed_form,
)

F = Fraction
X = Polynomial.monomial


def poly(*coeffs):
    return Polynomial([F(c) for c in coeffs])


coeff = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(coeff, min_size=0, max_size=11).map(Polynomial)


def spectral_like(draw_coeffs, top):
    """Degree-i polynomials with leading coefficient 1/i!."""
    out = []
    for i in range(top + 1):
        lower = draw_coeffs[i][:i]  # prefix of a shared coefficient list
        out.append(Polynomial(list(lower) + [F(1, factorial(i))]))
    return out


small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
families = st.lists(small, min_size=12, max_size=12).map(
    lambda c: spectral_like([c[: i + 1] for i in range(12)], 11)
)


def shift_subtract(p, times):
    """Pointwise oracle: evaluate the iterated difference at integer points."""
    def value(x):
        total = F(0)
        for i in range(times + 1):
            sign = (-1) ** (times - i)
            total += sign * F(factorial(times), factorial(i) * factorial(times - i)) * p(x + i)
        return total
    return value


def same_values(p, f, points=range(-6, 7)):
    return all(p(x) == f(x) for x in points)


def test_polynomial_basics():
    p = poly(1, 0, 3)
    assert p.degree == 2
    assert Polynomial().degree is None
    assert poly(0, 0, 0).is_zero()
    assert p(2) == 13
    assert (p * poly(0, 1)) == poly(0, 1, 0, 3)
    assert (p - p).degree is None


def test_differentiate_examples():
    assert differentiate(X(3, F(1, 6))) == X(2, F(1, 2))
    assert differentiate(poly(5)).is_zero()
    p4 = Polynomial([F(1, 360), 0, 0, 0, F(1, 24)])
    assert differentiate(p4) == X(3, F(1, 6))


def test_forward_difference_examples():
    assert forward_difference(X(2), 1) == poly(1, 2)
    assert forward_difference(X(3), 2) == poly(6, 6)
    assert forward_difference(X(2), 3).is_zero()


def test_closed_form_examples():
    assert iterated_difference_closed_form(X(3), 2) == poly(6, 6)
    assert iterated_difference_closed_form(X(1), 1) == poly(1)
    assert iterated_difference_closed_form(X(5), 5) == poly(120)


def test_delta_minus_D_examples():
    assert delta_minus_D(X(1)).is_zero()
    assert delta_minus_D(poly(7)).is_zero()
    assert delta_minus_D(X(2)) == poly(1)
    assert delta_minus_D(X(3)) == poly(1, 3)


@given(polys)
def test_difference_and_derivative_commute(p):
    assert forward_difference(differentiate(p)) == differentiate(forward_difference(p))


@given(polys, st.integers(min_value=1, max_value=12))
def test_iterated_difference_closed_form_matches_shifts(p, ell):
    closed = iterated_difference_closed_form(p, ell)
    assert closed == forward_difference(p, ell)
    assert same_values(closed, shift_subtract(p, ell))


@given(polys)
def test_delta_coefficient_formula(p):
    assert delta_coefficients(p) == forward_difference(p)


@given(polys)
def test_delta_minus_D_closed_form(p):
    assert delta_minus_D_closed_form(p) == delta_minus_D(p)


def test_pq_sequence_examples():
    family = monomial_family(6)
    assert tuple(pq_sequence(family, 1, 0)) == (poly(1), poly(F(1, 2)))
    assert tuple(pq_sequence(family, 2, 0)) == (poly(1), poly(F(-1, 12)))


def test_pq_sequence_direct_oracle():
    # n = 1, k = 1 uses h = x^3/6: p = Delta D h, q = Delta h - D h
    h = lambda x: F(x) ** 3 / 6
    dh = lambda x: F(x) ** 2 / 2
    p, q = pq_sequence(monomial_family(4), 1, 1)
    assert p.degree == 1 and q.degree == 1
    assert same_values(p, lambda x: dh(x + 1) - dh(x))
    assert same_values(q, lambda x: h(x + 1) - h(x) - dh(x))


def test_pq_sequence_zero_index_is_taylor_pair():
    family = monomial_family(3)
    p, q = pq_sequence(family, 0, 1)
    assert p == delta_minus_D(family[2]) and q == differentiate(family[2])


def test_pq_sequence_needs_enough_polynomials():
    with pytest.raises(IndexError):
        pq_sequence(monomial_family(3), 2, 1)


@settings(max_examples=40)
@given(families)
def test_recursion_matches_closed_forms(h):
    for n in range(1, 6):
        for k in range(4):
            f, g = pq_recursion(h, n, k)
            tau = h[k + n + 1]
            assert f == p_closed_form(tau, n, k)
            assert f == forward_difference(differentiate(tau), n)
            assert g == sigma_closed_form(tau, n, k)
            assert (f, g) == tuple(pq_sequence(h, n, k))


@settings(max_examples=40)
@given(families)
def test_gregory_weights_collapse_degree(h):
    for n in range(1, 6):
        for k in range(4):
            g = pq_recursion(h, n, k).second
            assert g.degree is None or g.degree <= k


def test_perturbed_weights_keep_high_degree():
    h = monomial_family(10)
    for n in range(2, 6):
        for bad in range(1, n):
            a = lambda ell, bad=bad: gregory(ell) + (1 if ell == bad else 0)
            degrees = [pq_recursion(h, n, k, a).second.degree for k in range(4)]
            assert any(d is not None and d > k for k, d in enumerate(degrees))


def test_sigma_requires_a0_equal_one():
    tau = X(4, F(1, 24))
    assert sigma_closed_form(tau, 2, 1) == pq_sequence(monomial_family(4), 2, 1).second


def test_sample_pair():
    data = sample_pair(PolyPair(X(2), X(1, 2)), -1, 2)
    assert data.offset == -1
    assert list(data.values) == [(1, -2), (0, 0), (1, 2), (4, 4)]
