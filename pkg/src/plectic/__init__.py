"""Exact higher symplectic geometry on coordinate charts.

Closed nondegenerate (n+1)-forms, Hamiltonian (n-1)-forms and their
semi-bracket, the homotopy Lie bracket family l_k, and the companion dg
Leibniz algebra, all over exact rational-function arithmetic.
"""

from .cartan import (
    NotClosed,
    exterior_derivative,
    interior_product,
    lie_derivative,
    poincare_primitive,
    schouten_bracket,
    vf_bracket,
)
from .catalog import (
    by_key,
    make_cartan3,
    make_hyperkahler_flat,
    make_multiphase,
    make_symplectic,
    make_volume,
)
from .errors import (
    ChartMismatch,
    DegeneracyWarning,
    DegenerateError,
    DegreeMismatchError,
    DegreeMixError,
    FormSyntaxError,
    InvalidInput,
    InvalidPermutation,
    NotClosedError,
    ValidationError,
)
from .exterior import Form, Multivector, VectorField, form_equal, wedge
from .homotopy import (
    GradedElement,
    JacobiReport,
    LeibnizReport,
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
from .plectic import (
    HamiltonianForm,
    NotHamiltonian,
    PlecticStructure,
    d_contraction_identity,
    ham_bracket,
    hamiltonian_vf,
    jacobi_defect,
    structure_lie_derivative,
    validate_plectic,
)
from .scalarfield import (
    NonUniqueSolution,
    NoSolution,
    Poly,
    Rational,
    RationalFn,
    UniqueSolution,
    poly_gcd,
    poly_partial,
    ratfn_normalize,
    solve_linear,
)

__version__ = "0.1.0"
