"""The homotopy Lie algebra and dg Leibniz algebra of a plectic structure.

The underlying complex L has slots 0..n-1: slot 0 holds Hamiltonian
(n-1)-forms, slot i > 0 holds all (n-1-i)-forms.  The differential is the
exterior derivative on positive slots and zero on slot 0.

Brackets: l_1 is the differential; for k >= 2, l_k vanishes unless every
argument sits in slot 0, where

    l_k(a_1..a_k) = s(k) * iota(v_1 ^ ... ^ v_k) omega,
    s(k) = (-1)**(k//2 + 1)   for even k,
    s(k) = (-1)**((k-1)//2)   for odd k.

The zero element of the complex is represented by None throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cartan import exterior_derivative, interior_product, lie_derivative, wedge
from .errors import InvalidInput, InvalidPermutation
from .exterior import Form, VectorField
from .plectic import (
    HamiltonianForm,
    NotHamiltonian,
    PlecticStructure,
    ham_bracket,
    hamiltonian_vf,
)

__all__ = [
    "Permutation",
    "koszul_sign",
    "unshuffles",
    "GradedElement",
    "hamiltonian_element",
    "form_element",
    "l_k",
    "JacobiReport",
    "gen_jacobi_residual",
    "leibniz_delta",
    "leibniz_bracket",
    "LeibnizReport",
    "leibniz_axiom_residuals",
]


class Permutation:
    """A bijection of {1..k}, stored as the tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        k = len(images)
        if sorted(images) != list(range(1, k + 1)):
            raise InvalidPermutation(f"{images!r} is not a bijection of 1..{k}")
        self.images = images

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def parity(self) -> int:
        """(-1) to the number of inversions of the image sequence."""
        inv = 0
        seq = self.images
        for a in range(len(seq)):
            for b in range(a + 1, len(seq)):
                if seq[a] > seq[b]:
                    inv += 1
        return -1 if inv % 2 else 1

    def __repr__(self):
        return f"Permutation{self.images}"


def koszul_sign(sigma: Permutation, degrees) -> int:
    """Sign relating x_1 ^..^ x_k to its sigma-permutation in a graded
    commutative algebra: bubble-sort the permuted sequence back to identity
    and multiply (-1)**(d_a * d_b) per adjacent swap.  Does not include the
    sign of the permutation itself.
    """
    degrees = list(degrees)
    if len(degrees) != len(sigma):
        raise InvalidInput(f"{len(degrees)} degrees for a permutation of {len(sigma)}")
    arr = list(sigma.images)
    deg = [degrees[i - 1] for i in arr]
    sign = 1
    for top in range(len(arr), 1, -1):
        for t in range(top - 1):
            if arr[t] > arr[t + 1]:
                if (deg[t] * deg[t + 1]) % 2:
                    sign = -sign
                arr[t], arr[t + 1] = arr[t + 1], arr[t]
                deg[t], deg[t + 1] = deg[t + 1], deg[t]
    return sign


def unshuffles(p: int, q: int) -> list[Permutation]:
    """All (p,q)-unshuffles of {1..p+q}: ascending inside each block.

    Ordered lexicographically by the first block.
    """
    if p < 0 or q < 0:
        raise InvalidInput("block sizes must be >= 0")
    universe = range(1, p + q + 1)
    out = []
    for first in itertools.combinations(universe, p):
        second = tuple(i for i in universe if i not in first)
        out.append(Permutation(first + second))
    return out


@dataclass(frozen=True)
class GradedElement:
    """Element of the complex: slot degree plus payload.

    Slot 0 carries a HamiltonianForm (the vector field travels with the
    form); slot i in 1..n-1 carries a plain (n-1-i)-form.
    """

    structure: PlecticStructure
    degree: int
    payload: HamiltonianForm | Form

    @property
    def form(self) -> Form:
        return self.payload.alpha if self.degree == 0 else self.payload

    def scale(self, c) -> "GradedElement":
        return GradedElement(self.structure, self.degree, self.payload.scale(c))

    def __add__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        if other.structure is not self.structure:
            raise InvalidInput("cannot add elements over different structures")
        if other.degree != self.degree:
            raise InvalidInput(f"cannot add slot {self.degree} to slot {other.degree}")
        return GradedElement(self.structure, self.degree, self.payload + other.payload)

    @property
    def is_zero(self) -> bool:
        return self.form.is_zero


def hamiltonian_element(structure: PlecticStructure, alpha) -> GradedElement:
    """Wrap a Hamiltonian (n-1)-form as a slot-0 element.

    Accepts a certified HamiltonianForm or a plain Form, which is certified
    here; a non-Hamiltonian form is an error at construction.
    """
    if isinstance(alpha, HamiltonianForm):
        return GradedElement(structure, 0, alpha)
    out = hamiltonian_vf(structure, alpha)
    if isinstance(out, NotHamiltonian):
        raise InvalidInput(f"form is not Hamiltonian ({out.reason}): {out.detail}")
    return GradedElement(structure, 0, out)


def form_element(structure: PlecticStructure, degree: int, payload: Form) -> GradedElement:
    """Wrap a form as a slot-degree element, degree in 1..n-1."""
    if not 1 <= degree <= structure.n - 1:
        raise InvalidInput(f"slot degree {degree} outside 1..{structure.n - 1}")
    expected = structure.n - 1 - degree
    if payload.degree != expected and not payload.is_zero:
        raise InvalidInput(f"slot {degree} holds {expected}-forms, got degree {payload.degree}")
    if payload.chart_dim != structure.chart_dim:
        raise InvalidInput("payload lives on the wrong chart")
    return GradedElement(structure, degree, payload)


def _wrap(structure: PlecticStructure, degree: int, form: Form, vf: VectorField | None = None):
    """Internal: wrap a computed form at a slot, or None when it is zero."""
    if form.is_zero:
        return None
    if degree == 0:
        if vf is None:
            out = hamiltonian_vf(structure, form)
            if isinstance(out, NotHamiltonian):
                raise RuntimeError(f"internal: computed slot-0 value is not Hamiltonian ({out.reason})")
            return GradedElement(structure, 0, out)
        hf = HamiltonianForm(alpha=form, vf=vf)
        if not hf.verify(structure):
            raise RuntimeError("internal: supplied field does not certify computed value")
        return GradedElement(structure, 0, hf)
    return GradedElement(structure, degree, form)


def _check_elems(structure: PlecticStructure, elems) -> list[GradedElement]:
    elems = list(elems)
    for e in elems:
        if not isinstance(e, GradedElement):
            raise InvalidInput(f"expected GradedElement, got {type(e).__name__}")
        if e.structure is not structure:
            raise InvalidInput("element was built against a different structure")
    return elems


def l_k(structure: PlecticStructure, k: int, elems) -> GradedElement | None:
    """The k-ary bracket; None is the zero element.

    k = 1 is the differential (zero on slot 0).  For k >= 2 the value is
    zero unless every argument is in slot 0, and is then the signed full
    contraction of the Hamiltonian fields into omega; the k = 2 case is the
    semi-bracket.  Structural zero for k > n+1.
    """
    if k < 1:
        raise InvalidInput(f"arity must be >= 1, got {k}")
    elems = _check_elems(structure, elems)
    if len(elems) != k:
        raise InvalidInput(f"arity {k} with {len(elems)} arguments")
    if k == 1:
        e = elems[0]
        if e.degree == 0:
            return None
        df = exterior_derivative(e.payload)
        if e.degree == 1:
            # Exact (n-1)-forms are Hamiltonian with the zero field.
            return _wrap(structure, 0, df, vf=VectorField.zero_field(structure.chart_dim))
        return _wrap(structure, e.degree - 1, df)
    if any(e.degree != 0 for e in elems):
        return None
    if k > structure.n + 1:
        return None
    fields = [e.payload.vf for e in elems]
    if k == 2:
        value = ham_bracket(structure, elems[0].payload, elems[1].payload)
        if value.alpha.is_zero:
            return None
        return GradedElement(structure, 0, value)
    w = fields[0]
    for v in fields[1:]:
        w = wedge(w, v)
    value_form = interior_product(w, structure.omega)
    half = k // 2
    sign = (-1) ** (half + 1) if k % 2 == 0 else (-1) ** half
    if sign < 0:
        value_form = -value_form
    slot = k - 2
    if slot == 0:
        return _wrap(structure, 0, value_form)
    return _wrap(structure, slot, value_form)


@dataclass(frozen=True)
class JacobiReport:
    """Outcome of one generalized Jacobi evaluation.

    ``trace`` rows record (i, j, unshuffle, integer sign, unsigned
    contribution); the residual is the signed sum of the contributions.
    """

    m: int
    residual: GradedElement | None
    trace: tuple[tuple[int, int, Permutation, int, GradedElement | None], ...] = field(repr=False)


def gen_jacobi_residual(structure: PlecticStructure, m: int, elems) -> JacobiReport:
    """Evaluate sum over i+j = m+1 and (i, m-i)-unshuffles of

        sign(sigma) * koszul(sigma) * (-1)**(i*(j-1))
            * l_j(l_i(x_{sigma(1..i)}), x_{sigma(i+1..m)})

    which the bracket family annihilates identically.
    """
    elems = _check_elems(structure, elems)
    if m != len(elems) or m < 1:
        raise InvalidInput(f"arity {m} with {len(elems)} arguments")
    degrees = [e.degree for e in elems]
    trace = []
    residual: GradedElement | None = None
    for i in range(1, m + 1):
        j = m + 1 - i
        for sigma in unshuffles(i, m - i):
            xs = [elems[sigma(t) - 1] for t in range(1, m + 1)]
            sign = sigma.parity() * koszul_sign(sigma, degrees) * (-1) ** (i * (j - 1))
            inner = l_k(structure, i, xs[:i])
            if inner is None:
                contribution = None
            else:
                contribution = l_k(structure, j, [inner] + xs[i:])
            trace.append((i, j, sigma, sign, contribution))
            if contribution is not None:
                signed = contribution if sign > 0 else contribution.scale(-1)
                residual = signed if residual is None else residual + signed
    if residual is not None and residual.is_zero:
        residual = None
    return JacobiReport(m=m, residual=residual, trace=tuple(trace))


def leibniz_delta(elem: GradedElement) -> GradedElement | None:
    """The Leibniz differential: d on positive slots, zero on slot 0."""
    if elem.degree == 0:
        return None
    structure = elem.structure
    df = exterior_derivative(elem.payload)
    if elem.degree == 1:
        if df.is_zero:
            return None
        out = hamiltonian_vf(structure, df)
        if isinstance(out, NotHamiltonian):
            raise RuntimeError(f"internal: exact form failed to certify ({out.reason})")
        return GradedElement(structure, 0, out)
    return _wrap(structure, elem.degree - 1, df)


def leibniz_bracket(structure: PlecticStructure, a: GradedElement, b: GradedElement) -> GradedElement | None:
    """Loday-style bracket: lie(v_a, -) on the payload when a is in slot 0,
    zero otherwise.  Slot-0 outputs are re-certified through the linear
    solver.
    """
    _check_elems(structure, [a, b])
    if a.degree != 0:
        return None
    v = a.payload.vf
    out_form = lie_derivative(v, b.form)
    if out_form.is_zero:
        return None
    if b.degree == 0:
        certified = hamiltonian_vf(structure, out_form)
        if isinstance(certified, NotHamiltonian):
            raise RuntimeError(f"internal: Lie derivative left the Hamiltonian class ({certified.reason})")
        return GradedElement(structure, 0, certified)
    return GradedElement(structure, b.degree, out_form)


@dataclass(frozen=True)
class LeibnizReport:
    """Residuals of the three dg Leibniz laws; None means vacuously zero.

    derivation: delta[a,b] - [delta a, b] - (-1)**deg(a) [a, delta b]
    jacobi:     [a,[b,c]] - [[a,b],c] - (-1)**(deg a * deg b) [b,[a,c]]
    skew_defect (slot-0 pair only):
                [a,b] + [b,a] - d(iota(v_a) beta + iota(v_b) alpha)
    """

    derivation: GradedElement | None
    jacobi: GradedElement | None
    skew_defect: GradedElement | None

    @property
    def all_zero(self) -> bool:
        return all(r is None or r.is_zero for r in (self.derivation, self.jacobi, self.skew_defect))


def _acc(total, term, sign=1):
    if term is None:
        return total
    signed = term if sign > 0 else term.scale(-1)
    return signed if total is None else total + signed


def leibniz_axiom_residuals(
    structure: PlecticStructure, a: GradedElement, b: GradedElement, c: GradedElement
) -> LeibnizReport:
    """Check the differential rule, the left Leibniz law, and the symmetric
    defect on a triple; all residuals are zero on valid inputs."""
    _check_elems(structure, [a, b, c])
    br = lambda x, y: leibniz_bracket(structure, x, y)

    derivation = None
    ab = br(a, b)
    derivation = _acc(derivation, None if ab is None else leibniz_delta(ab))
    da = leibniz_delta(a)
    if da is not None:
        derivation = _acc(derivation, br(da, b), -1)
    db = leibniz_delta(b)
    if db is not None:
        sign = -1 if a.degree % 2 == 0 else 1
        derivation = _acc(derivation, br(a, db), sign)

    jac = None
    bc = br(b, c)
    jac = _acc(jac, None if bc is None else br(a, bc))
    jac = _acc(jac, None if ab is None else br(ab, c), -1)
    ac = br(a, c)
    sign = -1 if (a.degree * b.degree) % 2 == 0 else 1
    jac = _acc(jac, None if ac is None else br(b, ac), sign)

    skew = None
    if a.degree == 0 and b.degree == 0:
        skew = _acc(skew, ab)
        skew = _acc(skew, br(b, a))
        cross = interior_product(a.payload.vf, b.form) + interior_product(b.payload.vf, a.form)
        exact = exterior_derivative(cross)
        skew = _acc(
            skew,
            _wrap(structure, 0, exact, vf=VectorField.zero_field(structure.chart_dim)),
            -1,
        )
    if derivation is not None and derivation.is_zero:
        derivation = None
    if jac is not None and jac.is_zero:
        jac = None
    if skew is not None and skew.is_zero:
        skew = None
    return LeibnizReport(derivation=derivation, jacobi=jac, skew_defect=skew)
