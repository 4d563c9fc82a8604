"""Cartan calculus: d, interior product, Lie derivative, Schouten bracket.

Sign conventions, fixed once for the whole package:

* ``iota(v1 ^ ... ^ vk) a``  contracts v1 innermost:  iota_vk ... iota_v1 a.
* ``lie(v, a) = d(iota(v) a) - (-1)**deg(v) * iota(v)(d a)``, so for vector
  fields this is the usual  d iota + iota d.
* The Schouten bracket of decomposables is the double sum
  ``sum_{i,j} (-1)**(i+j) [u_i, v_j] ^ u_1 ^ ..(no i).. ^ v_1 ^ ..(no j)..``
  with ``[f del_a, g del_b] = f (del_a g) del_b - g (del_b f) del_a``.

Any residual sign freedom is pinned by the commutator identity
``iota([u,v]) = (-1)**((deg u - 1) deg v) lie(u) iota(v) - iota(v) lie(u)``,
which the test suite checks exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ChartMismatch, InvalidInput
from .exterior import Form, Multivector, VectorField, _as_vector_field, merge_indices, wedge
from .scalarfield import Poly, RationalFn

__all__ = [
    "exterior_derivative",
    "interior_product",
    "lie_derivative",
    "vf_bracket",
    "schouten_bracket",
    "poincare_primitive",
    "NotClosed",
]


def exterior_derivative(a: Form) -> Form:
    """d a; degree goes up by one, d(f dx_I) = sum_j (df/dx_j) dx_j ^ dx_I."""
    if not isinstance(a, Form) or a.kind != "form":
        raise TypeError("exterior_derivative expects a Form")
    m = a.chart_dim
    out: dict[tuple[int, ...], RationalFn] = {}
    for idx, c in a.coeffs.items():
        for j in range(1, m + 1):
            dc = c.partial(j)
            if dc.is_zero:
                continue
            sign, merged = merge_indices((j,), idx)
            if sign == 0:
                continue
            if sign < 0:
                dc = -dc
            s = out.get(merged)
            s = dc if s is None else s + dc
            if s.is_zero:
                out.pop(merged, None)
            else:
                out[merged] = s
    return a._rebuild(a.degree + 1, out)


def _contract_basis(vec_idx: tuple[int, ...], form_idx: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Contract del_{i1} ^ ... ^ del_{ik} into dx_J, innermost first.

    Single step: iota_{del_i} dx_{j1..jk} = (-1)**(r-1) dx_{J minus j_r} when
    i = j_r, else 0.  Returns (sign, remaining index) with sign 0 for a kill.
    """
    sign = 1
    rest = list(form_idx)
    for i in vec_idx:
        try:
            r = rest.index(i)
        except ValueError:
            return 0, ()
        if r % 2:
            sign = -sign
        del rest[r]
    return sign, tuple(rest)


def interior_product(v: Multivector, a: Form) -> Form:
    """iota(v) a, extended bilinearly from basis terms.

    A degree-0 multivector acts by plain multiplication.  When deg v exceeds
    deg a the result is zero.
    """
    if not isinstance(v, Multivector) or v.kind != "vector":
        raise TypeError("interior_product expects a Multivector first")
    if not isinstance(a, Form) or a.kind != "form":
        raise TypeError("interior_product expects a Form second")
    if v.chart_dim != a.chart_dim:
        raise ChartMismatch(f"chart dimensions differ: {v.chart_dim} vs {a.chart_dim}")
    out: dict[tuple[int, ...], RationalFn] = {}
    for vi, cv in v.coeffs.items():
        for fi, cf in a.coeffs.items():
            sign, rest = _contract_basis(vi, fi)
            if sign == 0:
                continue
            c = cv * cf
            if sign < 0:
                c = -c
            s = out.get(rest)
            s = c if s is None else s + c
            if s.is_zero:
                out.pop(rest, None)
            else:
                out[rest] = s
    return Form(a.chart_dim, a.degree - v.degree, out) if a.degree >= v.degree else Form.zero(a.chart_dim, 0)


def lie_derivative(v: Multivector, a: Form) -> Form:
    """lie(v, a) = d(iota(v) a) - (-1)**deg(v) iota(v)(d a).

    iota(v) is an operator of degree -deg(v); for a vector field this is the
    usual Cartan homotopy formula.
    """
    first = exterior_derivative(interior_product(v, a))
    second = interior_product(v, exterior_derivative(a))
    if v.degree % 2:
        return first + second
    return first - second


def vf_bracket(u: Multivector, v: Multivector) -> VectorField:
    """Lie bracket of vector fields, componentwise u(v^j) - v(u^j)."""
    u = _as_vector_field(u)
    v = _as_vector_field(v)
    if u.chart_dim != v.chart_dim:
        raise ChartMismatch(f"chart dimensions differ: {u.chart_dim} vs {v.chart_dim}")
    out: dict[tuple[int, ...], RationalFn] = {}
    for (j,), cj in v.coeffs.items():
        for (i,), ci in u.coeffs.items():
            d = ci * cj.partial(i)
            if not d.is_zero:
                s = out.get((j,))
                out[(j,)] = d if s is None else s + d
    for (j,), cj in u.coeffs.items():
        for (i,), ci in v.coeffs.items():
            d = ci * cj.partial(i)
            if not d.is_zero:
                s = out.get((j,))
                s = -d if s is None else s - d
                out[(j,)] = s
    out = {k: c for k, c in out.items() if not c.is_zero}
    w = VectorField.__new__(VectorField)
    w.chart_dim = u.chart_dim
    w.degree = 1
    w.coeffs = out
    return w


def _single_bracket(f: RationalFn, a: int, g: RationalFn, b: int, m: int) -> Multivector:
    """[f del_a, g del_b] as a (possibly two-term) vector field."""
    out: dict[tuple[int, ...], RationalFn] = {}
    c1 = f * g.partial(a)
    if not c1.is_zero:
        out[(b,)] = c1
    c2 = g * f.partial(b)
    if not c2.is_zero:
        s = out.get((a,))
        s = -c2 if s is None else s - c2
        if s.is_zero:
            out.pop((a,), None)
        else:
            out[(a,)] = s
    return Multivector(m, 1, out)


def _basis_wedge(m: int, indices: list[int]) -> Multivector:
    """Wedge of basis fields del_{i} in the given order; zero on repeats."""
    sign = 1
    seq = list(indices)
    # insertion sort, flipping sign per swap
    for t in range(1, len(seq)):
        k = t
        while k > 0 and seq[k - 1] > seq[k]:
            seq[k - 1], seq[k] = seq[k], seq[k - 1]
            sign = -sign
            k -= 1
    for t in range(len(seq) - 1):
        if seq[t] == seq[t + 1]:
            return Multivector.zero(m, len(seq))
    return Multivector.basis(m, tuple(seq), sign)


def schouten_bracket(u: Multivector, v: Multivector) -> Multivector:
    """Schouten bracket of multivectors of degrees p, q >= 1; result degree p+q-1.

    Each monomial f del_{i1} ^ ... ^ del_{ip} is treated as the decomposable
    (f del_{i1}) ^ del_{i2} ^ ... ^ del_{ip} and the double-sum formula is
    applied termwise.
    """
    if u.kind != "vector" or v.kind != "vector":
        raise TypeError("schouten_bracket expects multivectors")
    if u.chart_dim != v.chart_dim:
        raise ChartMismatch(f"chart dimensions differ: {u.chart_dim} vs {v.chart_dim}")
    p, q = u.degree, v.degree
    if p < 1 or q < 1:
        raise InvalidInput(f"schouten_bracket needs degrees >= 1, got {p} and {q}")
    m = u.chart_dim
    one = RationalFn.one(m)
    total = Multivector.zero(m, p + q - 1)
    for iu, cu in u.coeffs.items():
        for iv, cv in v.coeffs.items():
            ufac = [(cu, iu[0])] + [(one, k) for k in iu[1:]]
            vfac = [(cv, iv[0])] + [(one, k) for k in iv[1:]]
            for a, (fa, ia) in enumerate(ufac, start=1):
                for b, (gb, jb) in enumerate(vfac, start=1):
                    head = _single_bracket(fa, ia, gb, jb, m)
                    if head.is_zero:
                        continue
                    rest_coeff = one
                    rest_idx: list[int] = []
                    for t, (c, k) in enumerate(ufac, start=1):
                        if t != a:
                            rest_coeff = rest_coeff * c
                            rest_idx.append(k)
                    for t, (c, k) in enumerate(vfac, start=1):
                        if t != b:
                            rest_coeff = rest_coeff * c
                            rest_idx.append(k)
                    term = wedge(head, _basis_wedge(m, rest_idx)).scale(rest_coeff)
                    if (a + b) % 2:
                        term = -term
                    total = total + term
    return total


@dataclass(frozen=True)
class NotClosed:
    """Returned when a primitive was requested for a non-closed form."""

    residual: Form


def poincare_primitive(a: Form) -> Form | NotClosed:
    """A form b with db = a, for closed a of degree >= 1 on a star-shaped chart.

    Radial homotopy: for a monomial coefficient of total degree D on a basis
    k-form dx_I, the primitive contributes
    ``sum_r (-1)**(r-1) x_{i_r} * mono / (D + k) * dx_{I minus i_r}``.
    Exact on polynomial coefficients; rejects genuine rational functions
    because their radial integrals leave the field.
    """
    if a.degree < 1:
        raise InvalidInput("poincare_primitive needs degree >= 1")
    for idx, c in a.coeffs.items():
        if not c.is_polynomial:
            raise InvalidInput(f"coefficient of dx{list(idx)} is not polynomial: {c}")
    da = exterior_derivative(a)
    if not da.is_zero:
        return NotClosed(residual=da)
    m = a.chart_dim
    k = a.degree
    out: dict[tuple[int, ...], RationalFn] = {}
    for idx, c in a.coeffs.items():
        for expo, coef in c.num.terms.items():
            scale = coef / (sum(expo) + k)
            for r, i_r in enumerate(idx):
                lifted = tuple(e + 1 if t == i_r - 1 else e for t, e in enumerate(expo))
                rest = idx[:r] + idx[r + 1 :]
                c_term = RationalFn(Poly.monomial(m, lifted, scale if r % 2 == 0 else -scale))
                s = out.get(rest)
                s = c_term if s is None else s + c_term
                if s.is_zero:
                    out.pop(rest, None)
                else:
                    out[rest] = s
    return Form(m, k - 1, out)
