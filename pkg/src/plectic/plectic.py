"""Closed nondegenerate forms of higher degree and their Hamiltonian calculus.

A structure of level n on an m-chart is a closed (n+1)-form omega whose
contraction map v -> iota(v) omega is injective.  Level 1 is classical
symplectic geometry; a scalar function then plays the role of the
Hamiltonian (n-1)-form.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

from .cartan import exterior_derivative, interior_product, lie_derivative, vf_bracket, wedge
from .errors import (
    ChartMismatch,
    DegeneracyWarning,
    DegenerateError,
    DegreeMismatchError,
    InvalidInput,
    NotClosedError,
)
from .exterior import Form, VectorField, _as_vector_field
from .scalarfield import (
    NonUniqueSolution,
    NoSolution,
    Rational,
    RationalFn,
    kernel_vector,
    solve_linear,
)

__all__ = [
    "PlecticStructure",
    "HamiltonianForm",
    "NotHamiltonian",
    "validate_plectic",
    "hamiltonian_vf",
    "ham_bracket",
    "structure_lie_derivative",
    "jacobi_defect",
    "d_contraction_identity",
]


@dataclass(frozen=True)
class PlecticStructure:
    """A validated structure form together with its contraction matrix.

    ``flat_matrix`` has one row per degree-n multi-index (lexicographic) and
    one column per coordinate; column i expands iota(del_i) omega in the
    degree-n basis.  Injectivity of the contraction map is full column rank.
    """

    n: int
    chart_dim: int
    omega: Form
    row_index: tuple[tuple[int, ...], ...]
    flat_matrix: tuple[tuple[RationalFn, ...], ...]
    key: str | None = None

    @property
    def is_constant(self) -> bool:
        return all(c.is_constant for c in self.omega.coeffs.values())

    def __repr__(self) -> str:
        tag = self.key or f"omega={self.omega}"
        return f"PlecticStructure(n={self.n}, chart_dim={self.chart_dim}, {tag})"


@dataclass(frozen=True)
class HamiltonianForm:
    """An (n-1)-form alpha with d(alpha) = -iota(vf) omega.

    The pairing is linear, so sums and rational multiples of certified pairs
    stay certified.
    """

    alpha: Form
    vf: VectorField

    def verify(self, structure: PlecticStructure) -> bool:
        lhs = exterior_derivative(self.alpha)
        rhs = -interior_product(self.vf, structure.omega)
        return lhs == rhs

    def __add__(self, other):
        if not isinstance(other, HamiltonianForm):
            return NotImplemented
        return HamiltonianForm(self.alpha + other.alpha, _as_vector_field(self.vf + other.vf))

    def __neg__(self):
        return HamiltonianForm(-self.alpha, _as_vector_field(-self.vf))

    def __sub__(self, other):
        if not isinstance(other, HamiltonianForm):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "HamiltonianForm":
        return HamiltonianForm(self.alpha.scale(c), _as_vector_field(self.vf.scale(c)))


@dataclass(frozen=True)
class NotHamiltonian:
    """Why a form has no Hamiltonian vector field in this coefficient class.

    ``reason`` is "inconsistent" when the linear system has no solution at
    all, or "nonpolynomial" when the only solution has a nonconstant
    denominator, i.e. the field fails to be globally defined.
    """

    reason: str
    detail: str = ""


_DEFAULT_SAMPLE_COUNT = None  # origin plus 2m unit points


def _sample_points(m: int):
    yield [Rational(0)] * m
    for i in range(m):
        for s in (1, -1):
            pt = [Rational(0)] * m
            pt[i] = Rational(s)
            yield pt


def validate_plectic(omega: Form, n: int, key: str | None = None, sample_points=None) -> PlecticStructure:
    """Check closedness and nondegeneracy; build the contraction matrix.

    Raises DegreeMismatchError, NotClosedError (with the exterior-derivative
    residual) or DegenerateError (with a kernel vector field witness).  For
    nonconstant coefficients the generic rank is the verdict; a rank drop of
    the evaluated matrix at the origin or a unit point is only warned about.
    """
    if omega.kind != "form":
        raise TypeError("validate_plectic expects a Form")
    m = omega.chart_dim
    if n < 1:
        raise InvalidInput(f"level must be >= 1, got {n}")
    if omega.degree != n + 1:
        raise DegreeMismatchError(f"expected a form of degree {n + 1}, got degree {omega.degree}")
    if n + 1 > m:
        raise DegreeMismatchError(f"degree {n + 1} form cannot be nondegenerate on a {m}-chart")
    residual = exterior_derivative(omega)
    if not residual.is_zero:
        raise NotClosedError(f"d(omega) != 0: {residual}", residual=residual)
    rows_idx = tuple(itertools.combinations(range(1, m + 1), n))
    row_pos = {idx: r for r, idx in enumerate(rows_idx)}
    cols = []
    for i in range(1, m + 1):
        contraction = interior_product(VectorField.basis_field(m, i), omega)
        col = [RationalFn.zero(m)] * len(rows_idx)
        for idx, c in contraction.coeffs.items():
            col[row_pos[idx]] = c
        cols.append(col)
    matrix = tuple(tuple(cols[i][r] for i in range(m)) for r in range(len(rows_idx)))
    witness = kernel_vector([list(r) for r in matrix])
    if witness is not None:
        wf = VectorField(m, [((i,), c) for i, c in enumerate(witness, start=1) if not c.is_zero])
        raise DegenerateError(f"contraction map has kernel: {wf!r}", witness=wf)
    structure = PlecticStructure(
        n=n, chart_dim=m, omega=omega, row_index=rows_idx, flat_matrix=matrix, key=key
    )
    if not structure.is_constant:
        pts = sample_points if sample_points is not None else _sample_points(m)
        for pt in pts:
            try:
                numeric = [[c.evaluate(pt) for c in row] for row in matrix]
            except ZeroDivisionError:
                warnings.warn(
                    DegeneracyWarning(f"coefficient pole at sample point {pt}; rank not checked there")
                )
                continue
            if _numeric_rank(numeric) < m:
                warnings.warn(
                    DegeneracyWarning(f"contraction matrix drops rank at sample point {pt}")
                )
    return structure


def _numeric_rank(rows: list[list[Rational]]) -> int:
    rows = [r[:] for r in rows]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [e / pv for e in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [e - f * p for e, p in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def hamiltonian_vf(structure: PlecticStructure, alpha: Form) -> HamiltonianForm | NotHamiltonian:
    """Solve iota(v) omega = -d(alpha) for the unique vector field v.

    The solution is unique whenever it exists because the contraction matrix
    has full column rank.  A solution whose components keep a nonconstant
    denominator is rejected: such a field is not globally defined.
    """
    if alpha.kind != "form":
        raise TypeError("hamiltonian_vf expects a Form")
    if alpha.chart_dim != structure.chart_dim:
        raise ChartMismatch(f"chart dimensions differ: {alpha.chart_dim} vs {structure.chart_dim}")
    if alpha.degree != structure.n - 1:
        raise InvalidInput(f"expected degree {structure.n - 1}, got {alpha.degree}")
    m = structure.chart_dim
    da = exterior_derivative(alpha)
    rhs = [-da.coeff(idx) for idx in structure.row_index]
    outcome = solve_linear([list(r) for r in structure.flat_matrix], rhs)
    if isinstance(outcome, NoSolution):
        return NotHamiltonian(reason="inconsistent", detail="iota(v) omega = -d(alpha) has no solution")
    if isinstance(outcome, NonUniqueSolution):
        raise RuntimeError("validated structure produced an underdetermined system")
    bad = [i for i, c in enumerate(outcome.x, start=1) if not c.is_polynomial]
    if bad:
        return NotHamiltonian(
            reason="nonpolynomial",
            detail=f"solution components {bad} have nonconstant denominators",
        )
    v = VectorField(m, [((i,), c) for i, c in enumerate(outcome.x, start=1) if not c.is_zero])
    hf = HamiltonianForm(alpha=alpha, vf=v)
    if not hf.verify(structure):
        raise RuntimeError("internal consistency failure: solved field does not certify")
    return hf


def ham_bracket(structure: PlecticStructure, a: HamiltonianForm, b: HamiltonianForm) -> HamiltonianForm:
    """Semi-bracket {a, b} = iota(v_b) iota(v_a) omega, with field [v_a, v_b].

    The bracket of certified pairs certifies with the commutator field; this
    is re-verified on every call and a failure aborts, because it can only
    mean corrupted inputs.
    """
    value = interior_product(b.vf, interior_product(a.vf, structure.omega))
    field = vf_bracket(a.vf, b.vf)
    out = HamiltonianForm(alpha=value, vf=field)
    if not out.verify(structure):
        raise RuntimeError("internal consistency failure: bracket does not certify")
    return out


def structure_lie_derivative(structure: PlecticStructure, a: HamiltonianForm) -> Form:
    """lie(v_a, omega); zero exactly when the flow of v_a preserves omega."""
    return lie_derivative(a.vf, structure.omega)


def jacobi_defect(
    structure: PlecticStructure, a1: HamiltonianForm, a2: HamiltonianForm, a3: HamiltonianForm
) -> tuple[Form, Form]:
    """Both sides of the bracket's Jacobi failure.

    lhs = {a1,{a2,a3}} - {{a1,a2},a3} - {a2,{a1,a3}};
    rhs = -d iota(v1 ^ v2 ^ v3) omega.  The two agree exactly, which is the
    statement that the bracket fails Jacobi only by an exact term.
    """
    lhs = (
        ham_bracket(structure, a1, ham_bracket(structure, a2, a3)).alpha
        - ham_bracket(structure, ham_bracket(structure, a1, a2), a3).alpha
        - ham_bracket(structure, a2, ham_bracket(structure, a1, a3)).alpha
    )
    tri = wedge(wedge(a1.vf, a2.vf), a3.vf)
    rhs = -exterior_derivative(interior_product(tri, structure.omega))
    return lhs, rhs


def d_contraction_identity(structure: PlecticStructure, vfs) -> tuple[Form, Form]:
    """Both sides of the contraction-derivative expansion for m >= 2 fields.

    lhs = d iota(v1 ^ ... ^ vm) omega;
    rhs = (-1)**m * sum_{i<j} (-1)**(i+j)
          iota([v_i, v_j] ^ v1 ^ ..(no i, no j).. ^ vm) omega.
    Holds whenever every v_i preserves omega, in particular for Hamiltonian
    fields.
    """
    vfs = list(vfs)
    k = len(vfs)
    if k < 2:
        raise InvalidInput(f"need at least two vector fields, got {k}")
    total_wedge = vfs[0]
    for v in vfs[1:]:
        total_wedge = wedge(total_wedge, v)
    lhs = exterior_derivative(interior_product(total_wedge, structure.omega))
    rhs = Form.zero(structure.chart_dim, lhs.degree)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            head = vf_bracket(vfs[i - 1], vfs[j - 1])
            rest = head
            for t, v in enumerate(vfs, start=1):
                if t != i and t != j:
                    rest = wedge(rest, v)
            term = interior_product(rest, structure.omega)
            if (i + j) % 2:
                term = -term
            rhs = rhs + term
    if k % 2:
        rhs = -rhs
    return lhs, rhs
