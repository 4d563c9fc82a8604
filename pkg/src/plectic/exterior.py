"""Exterior algebra over a coordinate chart.

Differential forms and multivector fields share one sparse representation:
a map from strictly increasing index tuples to rational-function
coefficients.  The two kinds never mix; wedging a form with a multivector
is a type error.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ChartMismatch, DegreeMixError
from .scalarfield import Poly, RationalFn

__all__ = [
    "Form",
    "Multivector",
    "VectorField",
    "wedge",
    "form_equal",
    "merge_indices",
    "MultiIndex",
]

# A multi-index is a strictly increasing tuple of 1-based coordinate indices.
MultiIndex = tuple[int, ...]


def merge_indices(i: MultiIndex, j: MultiIndex) -> tuple[int, MultiIndex]:
    """Merge two strictly increasing tuples, counting crossings.

    Returns (sign, merged) where sign is (-1) to the number of transpositions
    needed to sort the concatenation, or (0, ()) when an index repeats.
    """
    sign = 1
    out: list[int] = []
    a, b = 0, 0
    while a < len(i) and b < len(j):
        if i[a] == j[b]:
            return 0, ()
        if i[a] < j[b]:
            out.append(i[a])
            a += 1
        else:
            # j[b] jumps over every remaining entry of i.
            if (len(i) - a) % 2:
                sign = -sign
            out.append(j[b])
            b += 1
    out.extend(i[a:])
    out.extend(j[b:])
    return sign, tuple(out)


def _coerce_scalar(c, chart_dim: int) -> RationalFn:
    if isinstance(c, RationalFn):
        return c
    if isinstance(c, Poly):
        return RationalFn(c)
    if isinstance(c, (int, Fraction)):
        return RationalFn.from_const(chart_dim, c)
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


class _Graded:
    """Shared sparse storage for forms and multivectors."""

    __slots__ = ("chart_dim", "degree", "coeffs")
    kind: str = ""

    def __init__(self, chart_dim: int, degree: int, coeffs=()):
        if chart_dim < 1:
            raise ValueError("chart dimension must be >= 1")
        if degree < 0:
            raise ValueError("degree must be >= 0")
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        cd: dict[MultiIndex, RationalFn] = {}
        for idx, c in items:
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx!r} does not have degree {degree}")
            if any(not 1 <= k <= chart_dim for k in idx):
                raise IndexError(f"index {idx!r} outside chart 1..{chart_dim}")
            if any(idx[t] >= idx[t + 1] for t in range(len(idx) - 1)):
                raise ValueError(f"index {idx!r} is not strictly increasing")
            c = _coerce_scalar(c, chart_dim)
            if c.chart_dim != chart_dim:
                raise ChartMismatch(f"coefficient lives on a {c.chart_dim}-chart, element on {chart_dim}")
            if idx in cd:
                c = cd[idx] + c
            if c.is_zero:
                cd.pop(idx, None)
            else:
                cd[idx] = c
        self.chart_dim = chart_dim
        self.degree = degree
        self.coeffs = cd

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, chart_dim: int, degree: int):
        return cls(chart_dim, degree, ())

    @classmethod
    def basis(cls, chart_dim: int, idx, coeff=1):
        idx = tuple(idx)
        return cls(chart_dim, len(idx), [(idx, coeff)])

    @classmethod
    def function(cls, chart_dim: int, value):
        """Degree-0 element wrapping a scalar."""
        return cls(chart_dim, 0, [((), value)])

    # -- predicates and access ---------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, idx) -> RationalFn:
        return self.coeffs.get(tuple(idx), RationalFn.zero(self.chart_dim))

    def terms(self):
        """Pairs (multi-index, coefficient) in lexicographic index order."""
        for idx in sorted(self.coeffs):
            yield idx, self.coeffs[idx]

    def scalar_value(self) -> RationalFn:
        """The coefficient of a degree-0 element."""
        if self.degree != 0:
            raise DegreeMixError(f"degree-{self.degree} element is not a scalar")
        return self.coeff(())

    # -- linear structure --------------------------------------------------

    def _check_compatible(self, other: "_Graded") -> None:
        if self.kind != other.kind:
            raise ChartMismatch(f"cannot combine a {self.kind} with a {other.kind}")
        if self.chart_dim != other.chart_dim:
            raise ChartMismatch(f"chart dimensions differ: {self.chart_dim} vs {other.chart_dim}")

    def __add__(self, other):
        if not isinstance(other, _Graded):
            return NotImplemented
        self._check_compatible(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise DegreeMixError(f"cannot add degree {self.degree} to degree {other.degree}")
        cd = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            s = cd.get(idx)
            s = c if s is None else s + c
            if s.is_zero:
                cd.pop(idx, None)
            else:
                cd[idx] = s
        return self._rebuild(self.degree, cd)

    def __sub__(self, other):
        if not isinstance(other, _Graded):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return self._rebuild(self.degree, {i: -c for i, c in self.coeffs.items()})

    def scale(self, c):
        c = _coerce_scalar(c, self.chart_dim)
        if c.is_zero:
            return self._rebuild(self.degree, {})
        return self._rebuild(self.degree, {i: v * c for i, v in self.coeffs.items()})

    def __mul__(self, c):
        if isinstance(c, _Graded):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def _rebuild(self, degree: int, coeffs: dict):
        cls = Form if self.kind == "form" else Multivector
        out = cls.__new__(cls)
        out.chart_dim = self.chart_dim
        out.degree = degree
        out.coeffs = coeffs
        return out

    def __eq__(self, other):
        if not isinstance(other, _Graded):
            return NotImplemented
        if self.kind != other.kind or self.chart_dim != other.chart_dim:
            return False
        if self.is_zero and other.is_zero:
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.kind, self.chart_dim, self.degree, frozenset(self.coeffs.items())))

    # -- printing ----------------------------------------------------------

    _symbol = "?"

    def __str__(self) -> str:
        try:
            from .frontend.render import render_form
        except ImportError:  # keep repr usable while bootstrapping
            body = " + ".join(f"{c}*{self._symbol}{list(i)}" for i, c in self.terms())
            return body or "0"
        return render_form(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.chart_dim}d, deg {self.degree}: {self})"


class Form(_Graded):
    """Differential form with rational-function coefficients.

    A degree-0 form is just a scalar function on the chart.
    """

    kind = "form"
    _symbol = "dx"


class Multivector(_Graded):
    """Alternating multivector field; degree-1 elements are vector fields."""

    kind = "vector"
    _symbol = "e"


class VectorField(Multivector):
    """A multivector of degree exactly 1."""

    def __init__(self, chart_dim: int, coeffs=()):
        super().__init__(chart_dim, 1, coeffs)

    @classmethod
    def zero_field(cls, chart_dim: int) -> "VectorField":
        return cls(chart_dim, ())

    @classmethod
    def basis_field(cls, chart_dim: int, i: int, coeff=1) -> "VectorField":
        return cls(chart_dim, [((i,), coeff)])

    @classmethod
    def from_components(cls, components) -> "VectorField":
        """Build from a full component list [c1..cm] (index i gets c_i)."""
        components = list(components)
        m = len(components)
        return cls(m, [((i,), c) for i, c in enumerate(components, start=1)])

    def component(self, i: int) -> RationalFn:
        return self.coeff((i,))

    def components(self) -> list[RationalFn]:
        return [self.component(i) for i in range(1, self.chart_dim + 1)]

    def apply(self, f: RationalFn) -> RationalFn:
        """Directional derivative of a scalar: sum_i c_i * df/dx_i."""
        out = RationalFn.zero(self.chart_dim)
        for (i,), c in self.coeffs.items():
            out = out + c * f.partial(i)
        return out


def _as_vector_field(v: Multivector) -> VectorField:
    if isinstance(v, VectorField):
        return v
    if v.degree != 1:
        raise DegreeMixError(f"expected a vector field, got degree {v.degree}")
    out = VectorField.__new__(VectorField)
    out.chart_dim = v.chart_dim
    out.degree = 1
    out.coeffs = dict(v.coeffs)
    return out


def wedge(a: _Graded, b: _Graded) -> _Graded:
    """Wedge product of two elements of the same kind.

    Basis products pick up the sign of the merge that sorts the combined
    index tuple; repeated indices kill the term.
    """
    if not isinstance(a, _Graded) or not isinstance(b, _Graded):
        raise TypeError("wedge expects forms or multivectors")
    a._check_compatible(b)
    out: dict[MultiIndex, RationalFn] = {}
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            sign, merged = merge_indices(ia, ib)
            if sign == 0:
                continue
            c = ca * cb
            if sign < 0:
                c = -c
            s = out.get(merged)
            s = c if s is None else s + c
            if s.is_zero:
                out.pop(merged, None)
            else:
                out[merged] = s
    return a._rebuild(a.degree + b.degree, out)


def form_equal(a: _Graded, b: _Graded) -> bool:
    """Structural equality of canonical representations (zero equals zero in any degree)."""
    if a.kind != b.kind:
        raise ChartMismatch(f"cannot compare a {a.kind} with a {b.kind}")
    if a.chart_dim != b.chart_dim:
        raise ChartMismatch(f"chart dimensions differ: {a.chart_dim} vs {b.chart_dim}")
    return a == b
