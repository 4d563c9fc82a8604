"""Graded wedge algebra of forms and multivectors on a chart."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plectic.errors import ChartMismatch, DegreeMixError
from plectic.exterior import (
    Form,
    Multivector,
    VectorField,
    form_equal,
    merge_indices,
    wedge,
)
from plectic.scalarfield import Poly, RationalFn


def _basis_form(m, *idx):
    return Form.basis(m, tuple(idx))


def test_merge_indices_signs():
    assert merge_indices((1,), (2,)) == (1, (1, 2))
    assert merge_indices((2,), (1,)) == (-1, (1, 2))
    assert merge_indices((1, 3), (2,)) == (-1, (1, 2, 3))
    assert merge_indices((1, 2), (2,)) == (0, ())
    assert merge_indices((), (1, 2)) == (1, (1, 2))


def test_basis_validation():
    with pytest.raises(ValueError):
        Form(3, 2, {(2, 1): RationalFn.one(3)})
    with pytest.raises(ValueError):
        Form(3, 2, {(1, 1): RationalFn.one(3)})
    with pytest.raises(IndexError):
        Form(3, 1, {(4,): RationalFn.one(3)})
    with pytest.raises(IndexError):
        Form(3, 1, {(0,): RationalFn.one(3)})


def test_wedge_antisymmetry_of_basis():
    m = 3
    a = _basis_form(m, 1)
    b = _basis_form(m, 2)
    assert wedge(a, b) == _basis_form(m, 1, 2)
    assert wedge(b, a) == -_basis_form(m, 1, 2)
    assert wedge(a, a).is_zero


def test_wedge_square_of_one_form_vanishes():
    m = 3
    x1 = RationalFn.coordinate(m, 1)
    a = Form(m, 1, {(1,): x1, (2,): RationalFn.one(m), (3,): x1 * x1})
    assert wedge(a, a).is_zero


@st.composite
def _forms(draw, m=3, degree=None):
    from itertools import combinations

    if degree is None:
        degree = draw(st.integers(0, m))
    idxs = list(combinations(range(1, m + 1), degree))
    coeffs = {}
    for idx in idxs:
        c = draw(st.fractions(min_value=-3, max_value=3, max_denominator=2))
        e1 = draw(st.integers(0, 1))
        if c:
            poly = Poly.monomial(m, (e1, 0, 0), c)
            coeffs[idx] = RationalFn(poly)
    return Form(m, degree, coeffs)


@given(_forms(), _forms(), _forms())
@settings(max_examples=50, deadline=None)
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(_forms(), _forms())
@settings(max_examples=50, deadline=None)
def test_wedge_graded_commutative(a, b):
    """a ^ b = (-1)**(pq) b ^ a."""
    lhs = wedge(a, b)
    rhs = wedge(b, a)
    if (a.degree * b.degree) % 2:
        rhs = -rhs
    assert lhs == rhs


@given(_forms(degree=1), _forms(degree=1), _forms(degree=2))
@settings(max_examples=50, deadline=None)
def test_wedge_bilinear(a, b, c):
    assert wedge(a + b, c) == wedge(a, c) + wedge(b, c)
    assert wedge(a.scale(3), c) == wedge(a, c).scale(3)


def test_degree_mix_rejected():
    m = 2
    with pytest.raises(DegreeMixError):
        _basis_form(m, 1) + _basis_form(m, 1, 2)
    # zero is degree-agnostic on either side
    assert Form.zero(m, 2) + _basis_form(m, 1) == _basis_form(m, 1)
    assert _basis_form(m, 1) + Form.zero(m, 0) == _basis_form(m, 1)


def test_kind_and_chart_mismatch():
    with pytest.raises(ChartMismatch):
        wedge(_basis_form(2, 1), _basis_form(3, 1))
    with pytest.raises(ChartMismatch):
        wedge(_basis_form(2, 1), Multivector.basis(2, (1,)))
    with pytest.raises(ChartMismatch):
        _basis_form(2, 1) + Multivector.basis(2, (1,))


def test_degree_zero_is_scalar():
    m = 2
    f = Form.function(m, RationalFn.coordinate(m, 1))
    assert f.degree == 0
    assert f.scalar_value() == RationalFn.coordinate(m, 1)
    assert wedge(f, _basis_form(m, 2)).coeff((2,)) == RationalFn.coordinate(m, 1)


def test_zero_equality_across_degrees():
    assert form_equal(Form.zero(2, 1), Form.zero(2, 2))
    assert Form.zero(2, 1) == Form.zero(2, 0)
    assert not form_equal(Form.zero(2, 1), _basis_form(2, 1))


def test_vector_field_api():
    m = 3
    v = VectorField.from_components([1, 0, RationalFn.coordinate(m, 1)])
    assert v.degree == 1
    assert v.component(2).is_zero
    assert v.component(3) == RationalFn.coordinate(m, 1)
    assert list(v.components()) == [
        RationalFn.one(m),
        RationalFn.zero(m),
        RationalFn.coordinate(m, 1),
    ]
    # directional derivative of x1*x3
    f = RationalFn(Poly.coordinate(m, 1) * Poly.coordinate(m, 3))
    got = v.apply(f)
    x1, x3 = RationalFn.coordinate(m, 1), RationalFn.coordinate(m, 3)
    assert got == x3 + x1 * x1


def test_multivector_wedge_mirrors_forms():
    m = 4
    e = lambda *i: Multivector.basis(m, tuple(i))
    assert wedge(e(2), e(1)) == -e(1, 2)
    assert wedge(e(1, 2), e(3, 4)) == e(1, 2, 3, 4)
    assert wedge(e(1, 3), e(2, 4)) == -e(1, 2, 3, 4)


def test_terms_sorted_and_coeff_lookup():
    m = 3
    a = Form(m, 1, {(3,): RationalFn.one(m), (1,): RationalFn.from_const(m, 2)})
    assert [idx for idx, _ in a.terms()] == [(1,), (3,)]
    assert a.coeff((1,)) == RationalFn.from_const(m, 2)
    assert a.coeff((2,)).is_zero


def test_scalar_multiplication_forms():
    m = 2
    a = _basis_form(m, 1)
    assert a.scale(Fraction(1, 2)) + a.scale(Fraction(1, 2)) == a
    assert (a * RationalFn.coordinate(m, 2)).coeff((1,)) == RationalFn.coordinate(m, 2)
    assert (RationalFn.coordinate(m, 2) * a) == a * RationalFn.coordinate(m, 2)
