"""Exact scalar arithmetic on a coordinate chart.

Provides arbitrary-precision rationals, sparse multivariate polynomials over Q
in chart coordinates x1..xm, the fraction field of rational functions, and
Gaussian elimination over that field.  Everything is exact; nothing here ever
rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import ChartMismatch

# Rationals are stdlib Fractions: always normalized, gcd(num, den) = 1, den > 0.
Rational = Fraction

__all__ = [
    "Rational",
    "Poly",
    "RationalFn",
    "poly_partial",
    "poly_gcd",
    "poly_divexact",
    "ratfn_normalize",
    "UniqueSolution",
    "NoSolution",
    "NonUniqueSolution",
    "solve_linear",
    "row_reduce",
    "matrix_rank",
    "kernel_vector",
]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an int or Fraction, got {type(c).__name__}")


def _grlex_key(expo: tuple[int, ...]) -> tuple:
    # Graded lexicographic: total degree first, then lex with x1 heaviest.
    return (sum(expo), expo)


class Poly:
    """Sparse polynomial in x1..xm with rational coefficients.

    ``terms`` maps exponent tuples of length ``chart_dim`` to nonzero
    Fractions.  The zero polynomial has an empty map.  Leading terms are
    taken under the graded lexicographic order (total degree first, then
    lex with x1 > x2 > ...), which is the single monomial order used
    everywhere in this package.
    """

    __slots__ = ("chart_dim", "terms")

    def __init__(self, chart_dim: int, terms=()):
        if chart_dim < 0:
            raise ValueError("chart dimension must be >= 0")
        items = terms.items() if isinstance(terms, dict) else terms
        td: dict[tuple[int, ...], Fraction] = {}
        for expo, c in items:
            expo = tuple(expo)
            if len(expo) != chart_dim:
                raise ValueError(f"exponent vector {expo!r} does not fit chart dimension {chart_dim}")
            if any((not isinstance(e, int)) or e < 0 for e in expo):
                raise ValueError(f"exponents must be nonnegative ints, got {expo!r}")
            c = _as_fraction(c)
            if expo in td:
                c = td[expo] + c
            if c:
                td[expo] = c
            else:
                td.pop(expo, None)
        self.chart_dim = chart_dim
        self.terms = td

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, chart_dim: int) -> "Poly":
        return cls(chart_dim, ())

    @classmethod
    def constant(cls, chart_dim: int, c) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return cls(chart_dim, ())
        return cls(chart_dim, [((0,) * chart_dim, c)])

    @classmethod
    def one(cls, chart_dim: int) -> "Poly":
        return cls.constant(chart_dim, 1)

    @classmethod
    def coordinate(cls, chart_dim: int, i: int) -> "Poly":
        """The coordinate function x_i, 1-based."""
        if not 1 <= i <= chart_dim:
            raise IndexError(f"coordinate index {i} outside 1..{chart_dim}")
        expo = tuple(1 if j == i else 0 for j in range(1, chart_dim + 1))
        return cls(chart_dim, [(expo, Fraction(1))])

    @classmethod
    def monomial(cls, chart_dim: int, expo, c=1) -> "Poly":
        return cls(chart_dim, [(tuple(expo), _as_fraction(c))])

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    @property
    def is_one(self) -> bool:
        return self.terms == {(0,) * self.chart_dim: Fraction(1)}

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return max(sum(e) for e in self.terms)

    # -- ring operations ---------------------------------------------------

    def _check_chart(self, other: "Poly") -> None:
        if self.chart_dim != other.chart_dim:
            raise ChartMismatch(f"chart dimensions differ: {self.chart_dim} vs {other.chart_dim}")

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.chart_dim, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        td = dict(self.terms)
        for expo, c in other.terms.items():
            s = td.get(expo, Fraction(0)) + c
            if s:
                td[expo] = s
            else:
                td.pop(expo, None)
        out = Poly.__new__(Poly)
        out.chart_dim = self.chart_dim
        out.terms = td
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly.__new__(Poly)
        out.chart_dim = self.chart_dim
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        td: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                expo = tuple(x + y for x, y in zip(ea, eb))
                s = td.get(expo, Fraction(0)) + ca * cb
                if s:
                    td[expo] = s
                else:
                    td.pop(expo, None)
        out = Poly.__new__(Poly)
        out.chart_dim = self.chart_dim
        out.terms = td
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative ints")
        out = Poly.one(self.chart_dim)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.chart_dim, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.chart_dim == other.chart_dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart_dim, frozenset(self.terms.items())))

    # -- calculus ----------------------------------------------------------

    def partial(self, i: int) -> "Poly":
        """Partial derivative with respect to x_i, 1-based."""
        if not 1 <= i <= self.chart_dim:
            raise IndexError(f"coordinate index {i} outside 1..{self.chart_dim}")
        td = {}
        for expo, c in self.terms.items():
            e = expo[i - 1]
            if e == 0:
                continue
            dexpo = expo[: i - 1] + (e - 1,) + expo[i:]
            td[dexpo] = td.get(dexpo, Fraction(0)) + c * e
        return Poly(self.chart_dim, td)

    def evaluate(self, point) -> Fraction:
        point = [_as_fraction(v) for v in point]
        if len(point) != self.chart_dim:
            raise ValueError(f"point has {len(point)} coordinates, chart has {self.chart_dim}")
        total = Fraction(0)
        for expo, c in self.terms.items():
            v = c
            for x, e in zip(point, expo):
                if e:
                    v *= x**e
            total += v
        return total

    # -- monomial order ----------------------------------------------------

    def leading_exponent(self) -> tuple[int, ...]:
        if self.is_zero:
            raise ValueError("the zero polynomial has no leading term")
        return max(self.terms, key=_grlex_key)

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_exponent()]

    def monic(self) -> "Poly":
        """Scale so the graded-lex leading coefficient is 1."""
        if self.is_zero:
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self * (1 / lc)

    # -- printing ----------------------------------------------------------

    def _monomial_str(self, expo, c, lead=False) -> str:
        parts = []
        vars_part = [f"x{i + 1}" if e == 1 else f"x{i + 1}**{e}" for i, e in enumerate(expo) if e]
        a = abs(c)
        if a != 1 or not vars_part:
            parts.append(str(a))
        parts.extend(vars_part)
        body = "*".join(parts)
        if c < 0:
            return f"-{body}" if lead else f"- {body}"
        return body if lead else f"+ {body}"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        keys = sorted(self.terms, key=_grlex_key, reverse=True)
        out = [self._monomial_str(keys[0], self.terms[keys[0]], lead=True)]
        out.extend(self._monomial_str(e, self.terms[e]) for e in keys[1:])
        return " ".join(out)

    def __repr__(self) -> str:
        return f"Poly({self.chart_dim}, {self})"


def poly_partial(p: Poly, i: int) -> Poly:
    """Partial derivative of p with respect to x_i (1-based)."""
    return p.partial(i)


# -- gcd by content/primitive-part recursion -------------------------------


def _top_variable(p: Poly) -> int:
    """Highest 1-based coordinate index occurring in p, or 0 if none."""
    top = 0
    for expo in p.terms:
        for i in range(p.chart_dim - 1, top - 1, -1):
            if expo[i]:
                top = max(top, i + 1)
                break
    return top


def _univariate(p: Poly, v: int) -> dict[int, Poly]:
    """View p as a polynomial in x_v with Poly coefficients free of x_v."""
    coeffs: dict[int, Poly] = {}
    for expo, c in p.terms.items():
        d = expo[v - 1]
        rest = expo[: v - 1] + (0,) + expo[v:]
        cur = coeffs.get(d)
        add = Poly.monomial(p.chart_dim, rest, c)
        coeffs[d] = add if cur is None else cur + add
    return {d: q for d, q in coeffs.items() if not q.is_zero}

def _from_univariate(chart_dim: int, v: int, coeffs: dict[int, Poly]) -> Poly:
    td = []
    for d, q in coeffs.items():
        for expo, c in q.terms.items():
            td.append((expo[: v - 1] + (d,) + expo[v:], c))
    return Poly(chart_dim, td)


def _shift(p: Poly, v: int, d: int) -> Poly:
    """Multiply p by x_v ** d."""
    return Poly(p.chart_dim, [(e[: v - 1] + (e[v - 1] + d,) + e[v:], c) for e, c in p.terms.items()])


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b; raises ValueError when b does not divide a."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero:
        return a
    if b.is_constant:
        return a * (1 / b.constant_value())
    q_terms: dict[tuple[int, ...], Fraction] = {}
    lead_b = b.leading_exponent()
    lc_b = b.terms[lead_b]
    r = a
    while not r.is_zero:
        lead_r = r.leading_exponent()
        expo = tuple(x - y for x, y in zip(lead_r, lead_b))
        if any(e < 0 for e in expo):
            raise ValueError("inexact polynomial division")
        c = r.terms[lead_r] / lc_b
        q_terms[expo] = c
        r = r - Poly.monomial(a.chart_dim, expo, c) * b
    return Poly(a.chart_dim, q_terms)


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    """Pseudo-remainder of a by b viewed as univariate in x_v (deg_v a >= deg_v b)."""
    ua, ub = _univariate(a, v), _univariate(b, v)
    db = max(ub)
    lc_b = ub[db]
    r = a
    while not r.is_zero:
        ur = _univariate(r, v)
        dr = max(ur)
        if dr < db:
            break
        lc_r = ur[dr]
        r = lc_b * r - _shift(lc_r, v, dr - db) * b
    return r


def _content_pp(p: Poly, v: int) -> tuple[Poly, Poly]:
    coeffs = _univariate(p, v)
    content = reduce(poly_gcd, coeffs.values())
    return content, poly_divexact(p, content)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor, monic under graded lex.

    Recursion on the highest coordinate present: split off the content with
    respect to that variable, then run a primitive pseudo-remainder sequence
    on the primitive parts.
    """
    if a.chart_dim != b.chart_dim:
        raise ChartMismatch(f"chart dimensions differ: {a.chart_dim} vs {b.chart_dim}")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    if a.is_constant or b.is_constant:
        return Poly.one(a.chart_dim)
    v = max(_top_variable(a), _top_variable(b))
    ca, pa = _content_pp(a, v)
    cb, pb = _content_pp(b, v)
    cont = poly_gcd(ca, cb)
    big, small = pa, pb
    if max(_univariate(big, v)) < max(_univariate(small, v)):
        big, small = small, big
    while not small.is_zero:
        r = _prem(big, small, v)
        if not r.is_zero:
            r = _content_pp(r, v)[1]
        big, small = small, r
    return (cont * big).monic()


# -- rational functions ----------------------------------------------------


class RationalFn:
    """Element of the fraction field Q(x1..xm), kept canonical.

    Invariants: den != 0; gcd(num, den) is a unit; den is monic under the
    graded lex order; the zero element is 0/1.  Structural equality of
    canonical representatives is field equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _canonical: bool = False):
        if den is None:
            den = Poly.one(num.chart_dim)
        if _canonical:
            self.num, self.den = num, den
            return
        n, d = _ratfn_canonical(num, den)
        self.num, self.den = n, d

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_const(cls, chart_dim: int, c) -> "RationalFn":
        c = _as_fraction(c)
        return cls(Poly.constant(chart_dim, c), Poly.one(chart_dim), _canonical=True)

    @classmethod
    def zero(cls, chart_dim: int) -> "RationalFn":
        return cls.from_const(chart_dim, 0)

    @classmethod
    def one(cls, chart_dim: int) -> "RationalFn":
        return cls.from_const(chart_dim, 1)

    @classmethod
    def coordinate(cls, chart_dim: int, i: int) -> "RationalFn":
        return cls(Poly.coordinate(chart_dim, i), None, _canonical=True)

    # -- predicates --------------------------------------------------------

    @property
    def chart_dim(self) -> int:
        return self.num.chart_dim

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num.is_one and self.den.is_one

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_one

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_one

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    # -- field operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, Poly):
            return RationalFn(other)
        if isinstance(other, (int, Fraction)):
            return RationalFn.from_const(self.chart_dim, other)
        return None

    def _check_chart(self, other: "RationalFn") -> None:
        if self.chart_dim != other.chart_dim:
            raise ChartMismatch(f"chart dimensions differ: {self.chart_dim} vs {other.chart_dim}")

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        if self.den.is_one and other.den.is_one:
            return RationalFn(self.num + other.num, None, _canonical=True)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        if self.den.is_one and other.den.is_one:
            return RationalFn(self.num * other.num, None, _canonical=True)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_chart(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def inverse(self) -> "RationalFn":
        if self.is_zero:
            raise ZeroDivisionError("the zero rational function has no inverse")
        return RationalFn(self.den, self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = self._coerce(other)
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus ----------------------------------------------------------

    def partial(self, i: int) -> "RationalFn":
        """Quotient rule: (n/d)' = (n'd - nd') / d**2."""
        if self.den.is_one:
            return RationalFn(self.num.partial(i), None, _canonical=True)
        n, d = self.num, self.den
        return RationalFn(n.partial(i) * d - n * d.partial(i), d * d)

    def evaluate(self, point) -> Fraction:
        dv = self.den.evaluate(point)
        if dv == 0:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at {point}")
        return self.num.evaluate(point) / dv

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if self.den.is_one:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFn({self})"


def _ratfn_canonical(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.chart_dim != den.chart_dim:
        raise ChartMismatch(f"chart dimensions differ: {num.chart_dim} vs {den.chart_dim}")
    if den.is_zero:
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero:
        return num, Poly.one(num.chart_dim)
    if den.is_constant:
        return num * (1 / den.constant_value()), Poly.one(num.chart_dim)
    g = poly_gcd(num, den)
    if not g.is_one:
        num, den = poly_divexact(num, g), poly_divexact(den, g)
        if den.is_constant:
            return num * (1 / den.constant_value()), Poly.one(num.chart_dim)
    lc = den.leading_coeff()
    if lc != 1:
        inv = 1 / lc
        num, den = num * inv, den * inv
    return num, den


def ratfn_normalize(num: Poly, den: Poly) -> RationalFn:
    """Canonical representative of num/den: common gcd removed, monic denominator."""
    return RationalFn(num, den)


# -- linear algebra over the fraction field --------------------------------


@dataclass(frozen=True)
class UniqueSolution:
    x: tuple[RationalFn, ...]


@dataclass(frozen=True)
class NoSolution:
    pass


@dataclass(frozen=True)
class NonUniqueSolution:
    """Consistent but underdetermined; ``kernel`` is a nonzero homogeneous solution."""

    kernel: tuple[RationalFn, ...]


def _coerce_entry(v, chart_dim: int) -> RationalFn:
    if isinstance(v, RationalFn):
        return v
    if isinstance(v, Poly):
        return RationalFn(v)
    if isinstance(v, (int, Fraction)):
        return RationalFn.from_const(chart_dim, v)
    raise TypeError(f"cannot use {type(v).__name__} as a matrix entry")


def row_reduce(rows: list[list[RationalFn]]) -> tuple[list[list[RationalFn]], list[int]]:
    """Reduced row echelon form with the first-nonzero pivot rule.

    Scans columns left to right, picks the first row with a nonzero entry,
    normalizes it to a monic pivot and clears the column.  Returns the
    reduced rows and the pivot column indices.
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots: list[int] = []
    at = 0
    for col in range(ncols):
        sel = None
        for r in range(at, nrows):
            if not rows[r][col].is_zero:
                sel = r
                break
        if sel is None:
            continue
        rows[at], rows[sel] = rows[sel], rows[at]
        inv = rows[at][col].inverse()
        rows[at] = [e * inv for e in rows[at]]
        for r in range(nrows):
            if r != at and not rows[r][col].is_zero:
                f = rows[r][col]
                rows[r] = [e - f * p for e, p in zip(rows[r], rows[at])]
        pivots.append(col)
        at += 1
        if at == nrows:
            break
    return rows, pivots


def solve_linear(a, b) -> UniqueSolution | NoSolution | NonUniqueSolution:
    """Solve a x = b exactly over the rational-function field.

    ``a`` is a list of rows, ``b`` the right-hand column; entries may be
    RationalFn, Poly, Fraction or int.  Returns a tagged variant.
    """
    nrows = len(a)
    if nrows == 0:
        raise ValueError("empty system")
    ncols = len(a[0])
    if any(len(r) != ncols for r in a):
        raise ValueError("ragged matrix")
    if len(b) != nrows:
        raise ValueError(f"rhs has {len(b)} entries for {nrows} rows")
    dim = None
    for r in a:
        for v in r:
            if isinstance(v, (RationalFn, Poly)):
                dim = v.chart_dim
                break
        if dim is not None:
            break
    if dim is None:
        for v in b:
            if isinstance(v, (RationalFn, Poly)):
                dim = v.chart_dim
                break
    if dim is None:
        dim = 0
    aug = [[_coerce_entry(v, dim) for v in row] + [_coerce_entry(rhs, dim)] for row, rhs in zip(a, b)]
    red, pivots = row_reduce(aug)
    if ncols in pivots:
        # The pivot landed in the rhs column: some row reads 0 = 1.
        return NoSolution()
    for r in range(len(pivots), nrows):
        if not red[r][ncols].is_zero:
            return NoSolution()
    zero = RationalFn.zero(dim)
    if len(pivots) < ncols:
        free = next(c for c in range(ncols) if c not in pivots)
        kernel = [zero] * ncols
        kernel[free] = RationalFn.one(dim)
        for r, p in enumerate(pivots):
            kernel[p] = -red[r][free]
        return NonUniqueSolution(kernel=tuple(kernel))
    x = [zero] * ncols
    for r, p in enumerate(pivots):
        x[p] = red[r][ncols]
    return UniqueSolution(x=tuple(x))


def matrix_rank(a) -> int:
    if not a:
        return 0
    dim = 0
    for r in a:
        for v in r:
            if isinstance(v, (RationalFn, Poly)):
                dim = v.chart_dim
                break
    rows = [[_coerce_entry(v, dim) for v in row] for row in a]
    return len(row_reduce(rows)[1])


def kernel_vector(a) -> tuple[RationalFn, ...] | None:
    """A nonzero vector in the nullspace of ``a``, or None if the map is injective."""
    if not a:
        return None
    ncols = len(a[0])
    dim = 0
    for r in a:
        for v in r:
            if isinstance(v, (RationalFn, Poly)):
                dim = v.chart_dim
                break
    rows = [[_coerce_entry(v, dim) for v in row] for row in a]
    red, pivots = row_reduce(rows)
    if len(pivots) == ncols:
        return None
    free = next(c for c in range(ncols) if c not in pivots)
    zero = RationalFn.zero(dim)
    kernel = [zero] * ncols
    kernel[free] = RationalFn.one(dim)
    for r, p in enumerate(pivots):
        kernel[p] = -red[r][free]
    return tuple(kernel)
