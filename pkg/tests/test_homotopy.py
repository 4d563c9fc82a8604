"""Graded signs, unshuffles, the k-ary brackets, and the Leibniz-style algebra."""

import itertools
import random

import pytest
from conftest import rand_element, rand_ham

from plectic.catalog import by_key, make_symplectic, make_volume
from plectic.errors import InvalidInput, InvalidPermutation
from plectic.exterior import Form, VectorField
from plectic.homotopy import (
    JacobiReport,
    Permutation,
    form_element,
    gen_jacobi_residual,
    hamiltonian_element,
    koszul_sign,
    l_k,
    leibniz_axiom_residuals,
    leibniz_bracket,
    leibniz_delta,
    unshuffles,
)
from plectic.scalarfield import RationalFn


def _x(m, i):
    return RationalFn.coordinate(m, i)


# -- permutations and signs ------------------------------------------------


def test_permutation_basics():
    p = Permutation((2, 3, 1))
    assert p(1) == 2 and p(3) == 1
    assert p.parity() == 1
    assert Permutation((2, 1)).parity() == -1
    assert Permutation((1, 2, 3)).parity() == 1
    with pytest.raises(InvalidPermutation):
        Permutation((1, 1))
    with pytest.raises(InvalidPermutation):
        Permutation((0, 1))


def test_koszul_sign_small_cases():
    swap = Permutation((2, 1))
    assert koszul_sign(swap, [1, 1]) == -1
    assert koszul_sign(swap, [0, 1]) == 1
    assert koszul_sign(swap, [1, 2]) == 1
    assert koszul_sign(Permutation((1, 2, 3)), [5, 7, 9]) == 1


def _koszul_oracle(sigma, degrees):
    # product over inverted pairs of the permuted sequence
    seq = sigma.images
    sign = 1
    for s in range(len(seq)):
        for t in range(s + 1, len(seq)):
            if seq[s] > seq[t]:
                if (degrees[seq[s] - 1] * degrees[seq[t] - 1]) % 2:
                    sign = -sign
    return sign


def test_koszul_sign_against_inversion_product():
    rng = random.Random(41)
    for k in (2, 3, 4, 5):
        for images in itertools.permutations(range(1, k + 1)):
            sigma = Permutation(images)
            degrees = [rng.randint(0, 3) for _ in range(k)]
            assert koszul_sign(sigma, degrees) == _koszul_oracle(sigma, degrees)


def test_koszul_all_odd_equals_parity():
    for images in itertools.permutations((1, 2, 3, 4)):
        sigma = Permutation(images)
        assert koszul_sign(sigma, [1, 1, 1, 1]) == sigma.parity()
        assert koszul_sign(sigma, [2, 2, 2, 2]) == 1


def test_unshuffles_2_1_frozen():
    got = [s.images for s in unshuffles(2, 1)]
    assert got == [(1, 2, 3), (1, 3, 2), (2, 3, 1)]


@pytest.mark.parametrize("p,q", [(1, 1), (2, 2), (1, 3), (3, 1), (2, 3)])
def test_unshuffles_against_filter(p, q):
    got = {s.images for s in unshuffles(p, q)}
    want = set()
    for images in itertools.permutations(range(1, p + q + 1)):
        if list(images[:p]) == sorted(images[:p]) and list(images[p:]) == sorted(images[p:]):
            want.add(images)
    assert got == want
    from math import comb

    assert len(got) == comb(p + q, p)


def test_unshuffles_degenerate_blocks():
    assert [s.images for s in unshuffles(0, 3)] == [(1, 2, 3)]
    assert [s.images for s in unshuffles(3, 0)] == [(1, 2, 3)]


# -- the complex -----------------------------------------------------------


def test_hamiltonian_element_certifies():
    s = make_volume(2)
    m = 3
    e = hamiltonian_element(s, Form(m, 1, {(2,): _x(m, 1)}))
    assert e.degree == 0
    assert e.payload.vf == VectorField.basis_field(m, 3, -1)


def test_hamiltonian_element_rejects_non_hamiltonian():
    s = by_key("multiphase:2:3")
    m = s.chart_dim
    with pytest.raises(InvalidInput):
        hamiltonian_element(s, Form(m, 1, {(4,): _x(m, 1)}))


def test_form_element_slot_checks():
    s = make_volume(2)
    f = Form.function(3, _x(3, 1))
    e = form_element(s, 1, f)
    assert e.degree == 1 and e.form == f
    with pytest.raises(InvalidInput):
        form_element(s, 2, f)  # n = 2: slots stop at 1
    with pytest.raises(InvalidInput):
        form_element(s, 1, Form.basis(3, (1,)))  # wrong payload degree
    with pytest.raises(InvalidInput):
        form_element(s, 0, f)


def test_element_addition_respects_slots():
    rng = random.Random(42)
    s = make_volume(2)
    a = rand_element(rng, s, slot=0)
    b = rand_element(rng, s, slot=1)
    with pytest.raises(InvalidInput):
        a + b
    c = rand_element(rng, s, slot=1)
    assert (b + c).degree == 1


# -- k-ary brackets --------------------------------------------------------


def test_l1_is_differential():
    s = make_volume(2)
    m = 3
    a = rand_ham(random.Random(43), s)
    assert l_k(s, 1, [hamiltonian_element(s, a)]) is None

    e = form_element(s, 1, Form.function(m, _x(m, 1)))
    out = l_k(s, 1, [e])
    assert out is not None and out.degree == 0
    assert out.payload.alpha == Form.basis(m, (1,))
    assert out.payload.vf.is_zero


def test_l1_squares_to_zero():
    s = make_volume(3)
    m = 4
    e = form_element(s, 2, Form.function(m, _x(m, 1) * _x(m, 2)))
    once = l_k(s, 1, [e])
    assert once is not None and once.degree == 1
    twice = l_k(s, 1, [once])
    assert twice is None


def test_l2_is_semi_bracket():
    s = make_symplectic(1)
    m = 2
    q = hamiltonian_element(s, Form.function(m, _x(m, 1)))
    p = hamiltonian_element(s, Form.function(m, _x(m, 2)))
    out = l_k(s, 2, [q, p])
    assert out is not None and out.degree == 0
    assert out.payload.alpha.scalar_value() == RationalFn.one(m)


def test_l3_volume_triple_frozen():
    s = make_volume(2)
    m = 3
    els = [
        hamiltonian_element(s, Form(m, 1, {(2,): _x(m, 1)})),
        hamiltonian_element(s, Form(m, 1, {(3,): _x(m, 2)})),
        hamiltonian_element(s, Form(m, 1, {(1,): _x(m, 3)})),
    ]
    out = l_k(s, 3, els)
    assert out is not None and out.degree == 1
    assert out.form.scalar_value() == RationalFn.one(m)


def test_lk_zero_off_slot_zero():
    rng = random.Random(44)
    s = make_volume(2)
    a = rand_element(rng, s, slot=0)
    b = rand_element(rng, s, slot=1)
    assert l_k(s, 2, [a, b]) is None
    assert l_k(s, 2, [b, b]) is None


def test_lk_structural_zero_above_level():
    rng = random.Random(45)
    s1 = make_symplectic(1)
    els = [rand_element(rng, s1, slot=0) for _ in range(3)]
    assert l_k(s1, 3, els) is None

    s2 = make_volume(2)
    els = [rand_element(rng, s2, slot=0) for _ in range(4)]
    assert l_k(s2, 4, els) is None


def test_lk_antisymmetry_slot_zero():
    rng = random.Random(46)
    s = make_volume(2)
    a, b, c = (rand_element(rng, s, slot=0) for _ in range(3))

    def alpha_of(e):
        return Form.zero(3, 1) if e is None else e.form

    ab = l_k(s, 2, [a, b])
    ba = l_k(s, 2, [b, a])
    assert alpha_of(ab) == -alpha_of(ba)

    abc = l_k(s, 3, [a, b, c])
    bac = l_k(s, 3, [b, a, c])
    cab = l_k(s, 3, [c, a, b])  # even rotation
    assert (abc is None) == (bac is None)
    if abc is not None:
        assert abc.form == -bac.form
        assert cab is not None and cab.form == abc.form


def test_lk_rejects_foreign_elements():
    s = make_volume(2)
    other = make_volume(2)
    e = hamiltonian_element(other, Form(3, 1, {(2,): _x(3, 1)}))
    with pytest.raises(InvalidInput):
        l_k(s, 1, [e])
    with pytest.raises(InvalidInput):
        l_k(s, 2, [e])


def test_lk_arity_mismatch():
    s = make_volume(2)
    e = hamiltonian_element(s, Form(3, 1, {(2,): _x(3, 1)}))
    with pytest.raises(InvalidInput):
        l_k(s, 2, [e])
    with pytest.raises(InvalidInput):
        l_k(s, 0, [])


# -- generalized Jacobi ----------------------------------------------------


@pytest.mark.parametrize("key", ["symplectic:1", "volume:2", "volume:3", "cartan3", "hyperkahler"])
def test_gen_jacobi_vanishes(key):
    s = by_key(key)
    rng = random.Random(sum(map(ord, key)))
    for m in range(1, s.n + 3):
        for _ in range(3):
            els = [rand_element(rng, s) for _ in range(m)]
            report = gen_jacobi_residual(s, m, els)
            assert isinstance(report, JacobiReport)
            assert report.residual is None, f"{key}: m={m}"


def test_gen_jacobi_trace_consistent():
    s = make_volume(2)
    rng = random.Random(47)
    m = 3
    els = [rand_element(rng, s, slot=0) for _ in range(m)]
    report = gen_jacobi_residual(s, m, els)
    from math import comb

    assert len(report.trace) == sum(comb(m, i) for i in range(1, m + 1))
    total = None
    for i, j, sigma, sign, contribution in report.trace:
        assert i + j == m + 1
        assert sign in (-1, 1)
        if contribution is None:
            continue
        signed = contribution if sign > 0 else contribution.scale(-1)
        total = signed if total is None else total + signed
    if total is not None and total.is_zero:
        total = None
    assert (total is None) == (report.residual is None)


def test_gen_jacobi_arity_checks():
    s = make_volume(2)
    e = hamiltonian_element(s, Form(3, 1, {(2,): _x(3, 1)}))
    with pytest.raises(InvalidInput):
        gen_jacobi_residual(s, 2, [e])


# -- Leibniz-style algebra -------------------------------------------------


def test_leibniz_bracket_frozen_example():
    s = make_volume(2)
    m = 3
    a = hamiltonian_element(s, Form(m, 1, {(2,): _x(m, 1)}))
    b = hamiltonian_element(s, Form(m, 1, {(1,): _x(m, 3)}))
    out = leibniz_bracket(s, a, b)
    assert out is not None and out.degree == 0
    assert out.payload.alpha == -Form.basis(m, (1,))


def test_leibniz_bracket_can_cancel():
    s = make_volume(2)
    m = 3
    a = hamiltonian_element(s, Form(m, 1, {(2,): _x(m, 1)}))
    b = hamiltonian_element(s, Form(m, 1, {(3,): _x(m, 2)}))
    assert leibniz_bracket(s, a, b) is None


def test_leibniz_bracket_zero_off_slot_zero():
    rng = random.Random(48)
    s = make_volume(2)
    a = rand_element(rng, s, slot=1)
    b = rand_element(rng, s, slot=0)
    assert leibniz_bracket(s, a, b) is None


def test_leibniz_delta_on_slots():
    s = make_volume(3)
    m = 4
    assert leibniz_delta(hamiltonian_element(s, rand_ham(random.Random(49), s))) is None
    e2 = form_element(s, 2, Form.function(m, _x(m, 1)))
    d1 = leibniz_delta(e2)
    assert d1 is not None and d1.degree == 1
    d0 = leibniz_delta(d1)
    assert d0 is None  # dd = 0


def test_leibniz_delta_lands_in_certified_slot_zero():
    s = make_volume(2)
    m = 3
    e = form_element(s, 1, Form.function(m, _x(m, 1) * _x(m, 2)))
    out = leibniz_delta(e)
    assert out is not None and out.degree == 0
    assert out.payload.vf.is_zero
    assert out.payload.alpha == Form(m, 1, {(1,): _x(m, 2), (2,): _x(m, 1)})


def test_der_lemma():
    """lie(v_a, beta) = bracket value + d iota(v_a) beta for slot-0 pairs."""
    from plectic.cartan import exterior_derivative, interior_product, lie_derivative

    rng = random.Random(50)
    for key in ("symplectic:2", "volume:2", "volume:3"):
        s = by_key(key)
        for _ in range(4):
            a = rand_ham(rng, s)
            b = rand_ham(rng, s)
            lhs = lie_derivative(a.vf, b.alpha)
            semi = interior_product(b.vf, interior_product(a.vf, s.omega))
            rhs = semi + exterior_derivative(interior_product(a.vf, b.alpha))
            assert lhs == rhs


@pytest.mark.parametrize("key", ["symplectic:1", "volume:2", "volume:3", "cartan3"])
def test_leibniz_axioms_hold(key):
    s = by_key(key)
    rng = random.Random(len(key) * 13)
    for _ in range(4):
        a, b, c = (rand_element(rng, s) for _ in range(3))
        report = leibniz_axiom_residuals(s, a, b, c)
        assert report.all_zero, f"{key}: {report}"


def test_leibniz_skew_defect_explicit():
    s = make_volume(2)
    rng = random.Random(51)
    a = hamiltonian_element(s, rand_ham(rng, s))
    b = hamiltonian_element(s, rand_ham(rng, s))
    report = leibniz_axiom_residuals(s, a, b, a)
    assert report.skew_defect is None or report.skew_defect.is_zero
