"""Shared random builders for structure-level tests.

All randomness is drawn from explicitly seeded ``random.Random`` instances
inside each test, so every run sees the same inputs.
"""

from fractions import Fraction
from itertools import combinations

from plectic.exterior import Form
from plectic.homotopy import form_element, hamiltonian_element
from plectic.plectic import HamiltonianForm, hamiltonian_vf
from plectic.scalarfield import Poly, RationalFn


def rand_poly(rng, m, max_deg=2, n_terms=2):
    terms = []
    for _ in range(rng.randint(1, n_terms)):
        expo = [0] * m
        for _ in range(rng.randint(0, max_deg)):
            expo[rng.randrange(m)] += 1
        terms.append((tuple(expo), Fraction(rng.randint(-3, 3))))
    return RationalFn(Poly(m, terms))


def rand_form(rng, m, degree, max_deg=2, n_terms=2):
    idxs = list(combinations(range(1, m + 1), degree))
    coeffs = {}
    for idx in rng.sample(idxs, min(n_terms, len(idxs))):
        coeffs[idx] = rand_poly(rng, m, max_deg)
    return Form(m, degree, coeffs)


def rand_ham(rng, structure, max_deg=2):
    """A certified slot-0 payload; only sound on structures whose
    contraction matrix is square, where every form is Hamiltonian."""
    alpha = rand_form(rng, structure.chart_dim, structure.n - 1, max_deg)
    out = hamiltonian_vf(structure, alpha)
    assert isinstance(out, HamiltonianForm), f"free sampling failed on {structure!r}"
    return out


def rand_element(rng, structure, slot=None):
    """A random element of the complex at the given (or a random) slot."""
    n = structure.n
    if slot is None:
        slot = rng.randint(0, n - 1)
    if slot == 0:
        return hamiltonian_element(structure, rand_ham(rng, structure))
    payload = rand_form(rng, structure.chart_dim, n - 1 - slot)
    return form_element(structure, slot, payload)
