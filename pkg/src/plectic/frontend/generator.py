"""Seeded random inputs for the property suites.

Hamiltonian pairs are produced so that sampling never stalls:

* when the contraction matrix is square (symplectic, volume, and friends),
  every polynomial input form works, so forms are drawn freely and the
  field is solved for;
* otherwise (multi-phase charts with n >= 2) the pairing equation is
  row-reduced once over the joint coefficient space of (alpha, v) up to a
  degree cap, and samples are random combinations of the kernel basis.

Either way the sample is certified before it leaves this module, and
forms are optionally perturbed by an exact term d(beta), which changes the
form but not its field.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from ..cartan import exterior_derivative
from ..errors import InvalidInput
from ..exterior import Form, Multivector, VectorField, merge_indices
from ..homotopy import GradedElement, form_element, hamiltonian_element
from ..plectic import HamiltonianForm, PlecticStructure, hamiltonian_vf
from ..scalarfield import Poly, RationalFn

__all__ = [
    "random_scalar",
    "random_form",
    "random_multivector",
    "random_closed_form",
    "random_hamiltonian",
    "random_element",
    "hamiltonian_basis",
]


def random_scalar(rng, m: int, max_deg: int = 2, n_terms: int = 2) -> RationalFn:
    """Random polynomial scalar with small integer coefficients."""
    terms = []
    for _ in range(rng.randint(1, n_terms)):
        expo = [0] * m
        for _ in range(rng.randint(0, max_deg)):
            expo[rng.randrange(m)] += 1
        terms.append((tuple(expo), Fraction(rng.randint(-3, 3))))
    return RationalFn(Poly(m, terms))


def _random_graded(rng, cls, m, degree, max_deg, n_terms):
    idxs = list(itertools.combinations(range(1, m + 1), degree))
    coeffs = {}
    for idx in rng.sample(idxs, min(n_terms, len(idxs))):
        coeffs[idx] = random_scalar(rng, m, max_deg)
    return cls(m, degree, coeffs)


def random_form(rng, m: int, degree: int, max_deg: int = 2, n_terms: int = 2) -> Form:
    return _random_graded(rng, Form, m, degree, max_deg, n_terms)


def random_multivector(rng, m: int, degree: int, max_deg: int = 2, n_terms: int = 2) -> Multivector:
    return _random_graded(rng, Multivector, m, degree, max_deg, n_terms)


def random_closed_form(rng, m: int, degree: int, max_deg: int = 2) -> Form:
    """A random exact (hence closed) form of the given degree >= 1."""
    if degree < 1:
        raise InvalidInput("need degree >= 1")
    return exterior_derivative(random_form(rng, m, degree - 1, max_deg))


# -- Hamiltonian sampling --------------------------------------------------


def _monomials_upto(m: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(d + 1):
        for picks in itertools.combinations_with_replacement(range(m), total):
            expo = [0] * m
            for i in picks:
                expo[i] += 1
            out.append(tuple(expo))
    return out


def _rref_fractions(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots: list[int] = []
    at = 0
    for col in range(ncols):
        sel = next((r for r in range(at, nrows) if rows[r][col]), None)
        if sel is None:
            continue
        rows[at], rows[sel] = rows[sel], rows[at]
        pv = rows[at][col]
        if pv != 1:
            rows[at] = [e / pv for e in rows[at]]
        for r in range(nrows):
            if r != at and rows[r][col]:
                f = rows[r][col]
                rows[r] = [e - f * p for e, p in zip(rows[r], rows[at])]
        pivots.append(col)
        at += 1
        if at == nrows:
            break
    return rows, pivots


_BASIS_MEMO: dict[tuple, tuple[HamiltonianForm, ...]] = {}


def hamiltonian_basis(structure: PlecticStructure, max_deg: int = 2) -> tuple[HamiltonianForm, ...]:
    """A basis of the space of Hamiltonian pairs with form degree <= max_deg.

    Solves the pairing equation jointly in the coefficients of alpha and v
    (field degree capped one below the form degree).  Only implemented for
    constant structure forms; the square case never needs it.
    """
    if not structure.is_constant:
        raise InvalidInput("joint coefficient solving needs a constant structure form")
    memo_key = (structure.key or str(structure.omega), structure.n, structure.chart_dim, max_deg)
    cached = _BASIS_MEMO.get(memo_key)
    if cached is not None:
        return cached
    m, n = structure.chart_dim, structure.n
    mon_v = _monomials_upto(m, max(max_deg - 1, 0))
    mon_a = _monomials_upto(m, max_deg)
    alpha_idxs = list(itertools.combinations(range(1, m + 1), n - 1))
    v_vars = [(i, mu) for i in range(1, m + 1) for mu in mon_v]
    a_vars = [(K, nu) for K in alpha_idxs for nu in mon_a]
    col_of_v = {var: c for c, var in enumerate(v_vars)}
    col_of_a = {var: len(v_vars) + c for c, var in enumerate(a_vars)}
    ncols = len(v_vars) + len(a_vars)

    flat = [[c.constant_value() for c in row] for row in structure.flat_matrix]
    rows: list[list[Fraction]] = []
    zero = Fraction(0)
    for r, J in enumerate(structure.row_index):
        for mu in mon_v:
            row = [zero] * ncols
            for i in range(1, m + 1):
                c = flat[r][i - 1]
                if c:
                    row[col_of_v[(i, mu)]] = c
            # d(alpha) contribution: the x^mu coefficient of dx_J collects
            # every (K, mu + e_j) with dx_j ^ dx_K = +-dx_J
            for j in range(1, m + 1):
                for K in alpha_idxs:
                    sign, merged = merge_indices((j,), K)
                    if sign == 0 or merged != J:
                        continue
                    nu = tuple(e + 1 if t == j - 1 else e for t, e in enumerate(mu))
                    if sum(nu) > max_deg:
                        continue
                    row[col_of_a[(K, nu)]] += Fraction(sign * nu[j - 1])
            rows.append(row)
    red, pivots = _rref_fractions(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        u = [zero] * ncols
        u[free] = Fraction(1)
        for r, p in enumerate(pivots):
            if red[r][free]:
                u[p] = -red[r][free]
        comps = {}
        for (i, mu), c in zip(v_vars, u[: len(v_vars)]):
            if c:
                comps.setdefault(i, []).append((mu, c))
        vf = VectorField(m, [((i, ), RationalFn(Poly(m, ts))) for i, ts in comps.items()])
        fcoeffs = {}
        for (K, nu), c in zip(a_vars, u[len(v_vars):]):
            if c:
                fcoeffs.setdefault(K, []).append((nu, c))
        alpha = Form(m, n - 1, {K: RationalFn(Poly(m, ts)) for K, ts in fcoeffs.items()})
        hf = HamiltonianForm(alpha=alpha, vf=vf)
        if not hf.verify(structure):
            raise RuntimeError("kernel basis vector failed to certify")
        basis.append(hf)
    if not basis:
        raise RuntimeError("empty Hamiltonian space; degree cap too low")
    _BASIS_MEMO[memo_key] = tuple(basis)
    return _BASIS_MEMO[memo_key]


def _square_constant(structure: PlecticStructure) -> bool:
    return len(structure.row_index) == structure.chart_dim and structure.is_constant


def random_hamiltonian(
    rng, structure: PlecticStructure, max_deg: int = 2, require_field: bool = False
) -> HamiltonianForm:
    """A certified random Hamiltonian pair with coefficients of degree <= max_deg.

    With ``require_field`` the sample is redrawn (bounded) until the vector
    field is nonzero, so identity checks exercise more than 0 = 0.
    """
    for _ in range(64):
        hf = _draw_hamiltonian(rng, structure, max_deg)
        if not require_field or hf.vf.coeffs:
            return hf
    raise RuntimeError(f"could not draw a nonzero field on {structure!r}")


def _draw_hamiltonian(rng, structure: PlecticStructure, max_deg: int) -> HamiltonianForm:
    if _square_constant(structure):
        alpha = random_form(rng, structure.chart_dim, structure.n - 1, max_deg)
        out = hamiltonian_vf(structure, alpha)
        if not isinstance(out, HamiltonianForm):
            raise RuntimeError(f"free sampling failed on {structure!r}")
        hf = out
    else:
        basis = hamiltonian_basis(structure, max_deg)
        picks = rng.sample(range(len(basis)), min(3, len(basis)))
        hf = None
        for t in picks:
            c = Fraction(rng.randint(-3, 3))
            if not c:
                continue
            part = basis[t].scale(c)
            hf = part if hf is None else hf + part
        if hf is None:
            hf = basis[picks[0]]
    if structure.n >= 2 and rng.random() < 0.5:
        # exact perturbation: changes the form, keeps the field
        beta = random_form(rng, structure.chart_dim, structure.n - 2, max_deg)
        hf = HamiltonianForm(alpha=hf.alpha + exterior_derivative(beta), vf=hf.vf)
    return hf


def random_element(
    rng,
    structure: PlecticStructure,
    max_deg: int = 2,
    slot: int | None = None,
    require_field: bool = False,
) -> GradedElement:
    """A random element of the complex at the given (or a random) slot."""
    if slot is None:
        slot = rng.randint(0, structure.n - 1)
    if slot == 0:
        return hamiltonian_element(
            structure, random_hamiltonian(rng, structure, max_deg, require_field=require_field)
        )
    payload = random_form(rng, structure.chart_dim, structure.n - 1 - slot, max_deg)
    return form_element(structure, slot, payload)
