"""Canonical text rendering of forms and multivectors.

The output is always re-parseable: ``parse_form(render_form(f), f.chart_dim,
kind) == f`` exactly.  Terms are ordered by multi-index (lexicographic),
monomials inside coefficients by graded lex, so equal elements render to
identical strings.
"""

from __future__ import annotations

from fractions import Fraction

from ..scalarfield import RationalFn

__all__ = ["render_form", "render_scalar"]


def _monomial_body(expo, coeff: Fraction) -> str:
    """A positive-coefficient monomial like '3/2*x1**2*x2', or '1'."""
    parts = []
    vars_part = [f"x{i + 1}" if e == 1 else f"x{i + 1}**{e}" for i, e in enumerate(expo) if e]
    if coeff != 1 or not vars_part:
        parts.append(str(coeff))
    parts.extend(vars_part)
    return "*".join(parts)


def render_scalar(c: RationalFn) -> str:
    """Grammar-compatible canonical string for a scalar coefficient."""
    return str(c)


def _term_pieces(c: RationalFn, chain: str) -> tuple[int, str]:
    """Split a coefficient into (sign, unsigned body) in front of a basis chain."""
    if c.is_polynomial and len(c.num.terms) == 1:
        expo, k = next(iter(c.num.terms.items()))
        body = _monomial_body(expo, abs(k))
        if body == "1":
            return (1 if k > 0 else -1), chain
        return (1 if k > 0 else -1), f"{body}*{chain}"
    return 1, f"({c})*{chain}"


def render_form(f) -> str:
    """Canonical string; '0' for zero, scalar string for degree 0."""
    if f.is_zero:
        return "0"
    if f.degree == 0:
        return render_scalar(f.scalar_value())
    sym = "dx" if f.kind == "form" else "e"
    pieces = []
    for idx, c in f.terms():
        chain = "^".join(f"{sym}{i}" for i in idx)
        pieces.append(_term_pieces(c, chain))
    sign, body = pieces[0]
    out = [f"-{body}" if sign < 0 else body]
    for sign, body in pieces[1:]:
        out.append(f" - {body}" if sign < 0 else f" + {body}")
    return "".join(out)
