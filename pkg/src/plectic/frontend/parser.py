"""Expression language for forms and multivectors.

Grammar (whitespace insensitive):

    expr := ['-'] term (('+' | '-') term)*
    term := atom (('*' | '/' | '^') atom)*
    atom := NUMBER | x<i> | x<i>**<e> | dx<i> | e<i> | 'd(' expr ')' | '(' expr ')'

'^' is the wedge and only joins graded operands; '*' and '/' combine
scalars with anything.  Power '**' applies to coordinates only, keeping it
distinct from the wedge.  A pure-scalar expression parses to a degree-0
element of the requested kind.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..cartan import exterior_derivative
from ..errors import DegreeMixError, FormSyntaxError
from ..exterior import Form, Multivector, wedge
from ..scalarfield import Poly, RationalFn

__all__ = ["parse_form", "parse_expr", "FormExpr"]


# -- abstract syntax -------------------------------------------------------


@dataclass(frozen=True)
class FormExpr:
    """Base node; ``offset`` is the byte position in the source text."""

    offset: int


@dataclass(frozen=True)
class Literal(FormExpr):
    value: Fraction


@dataclass(frozen=True)
class CoordPow(FormExpr):
    index: int
    power: int


@dataclass(frozen=True)
class BasisOne(FormExpr):
    index: int


@dataclass(frozen=True)
class BasisVec(FormExpr):
    index: int


@dataclass(frozen=True)
class DApply(FormExpr):
    inner: FormExpr


@dataclass(frozen=True)
class Neg(FormExpr):
    inner: FormExpr


@dataclass(frozen=True)
class BinOp(FormExpr):
    op: str
    left: FormExpr
    right: FormExpr


# -- lexer -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<pow>\*\*)
      | (?P<dx>dx(?P<dxi>\d+))
      | (?P<d>d(?=\())
      | (?P<e>e(?P<ei>\d+))
      | (?P<x>x(?P<xi>\d+))
      | (?P<num>\d+)
      | (?P<plus>\+)
      | (?P<minus>-)
      | (?P<star>\*)
      | (?P<slash>/)
      | (?P<caret>\^)
      | (?P<lp>\()
      | (?P<rp>\))
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo is None:
            raise FormSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = mo.lastgroup
        # named subgroups (dxi etc.) can shadow lastgroup; find the real kind
        for name in ("ws", "pow", "dx", "d", "e", "x", "num", "plus", "minus", "star", "slash", "caret", "lp", "rp"):
            if mo.group(name) is not None:
                kind = name
                break
        if kind != "ws":
            out.append((kind, mo.group(kind), pos))
        pos = mo.end()
    return out


# -- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def _peek(self) -> str | None:
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def _next(self) -> tuple[str, str, int]:
        if self.pos >= len(self.toks):
            raise FormSyntaxError("unexpected end of expression", len(self.text))
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def _expect(self, kind: str) -> tuple[str, str, int]:
        tok = self._next()
        if tok[0] != kind:
            raise FormSyntaxError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> FormExpr:
        node = self.expr()
        if self.pos < len(self.toks):
            tok = self.toks[self.pos]
            raise FormSyntaxError(f"unexpected {tok[1]!r} after expression", tok[2])
        return node

    def expr(self) -> FormExpr:
        if self._peek() == "minus":
            _, _, off = self._next()
            node: FormExpr = Neg(off, self.term())
        else:
            node = self.term()
        while self._peek() in ("plus", "minus"):
            op, _, off = self._next()
            rhs = self.term()
            node = BinOp(off, "+" if op == "plus" else "-", node, rhs)
        return node

    def term(self) -> FormExpr:
        node = self.atom()
        while self._peek() in ("star", "slash", "caret"):
            kind, text, off = self._next()
            rhs = self.atom()
            node = BinOp(off, {"star": "*", "slash": "/", "caret": "^"}[kind], node, rhs)
        return node

    def atom(self) -> FormExpr:
        kind, text, off = self._next()
        if kind == "num":
            return Literal(off, Fraction(int(text)))
        if kind == "x":
            index = int(text[1:])
            power = 1
            if self._peek() == "pow":
                self._next()
                ptok = self._expect("num")
                power = int(ptok[1])
            return CoordPow(off, index, power)
        if kind == "dx":
            return BasisOne(off, int(text[2:]))
        if kind == "e":
            return BasisVec(off, int(text[1:]))
        if kind == "d":
            self._expect("lp")
            inner = self.expr()
            self._expect("rp")
            return DApply(off, inner)
        if kind == "lp":
            inner = self.expr()
            self._expect("rp")
            return inner
        raise FormSyntaxError(f"unexpected {text!r}", off)


def parse_expr(text: str) -> FormExpr:
    """Parse to an AST without evaluating; raises FormSyntaxError."""
    return _Parser(text).parse()


# -- evaluation ------------------------------------------------------------


def _check_index(i: int, m: int, what: str) -> None:
    if not 1 <= i <= m:
        raise IndexError(f"{what}{i} outside chart 1..{m}")


def _as_scalar(v):
    """Collapse a degree-0 graded value to its scalar; pass scalars through."""
    if isinstance(v, RationalFn):
        return v
    if v.degree == 0:
        return v.scalar_value()
    return None


def _eval(node: FormExpr, m: int, kind: str):
    if isinstance(node, Literal):
        return RationalFn.from_const(m, node.value)
    if isinstance(node, CoordPow):
        _check_index(node.index, m, "x")
        return RationalFn(Poly.coordinate(m, node.index) ** node.power)
    if isinstance(node, BasisOne):
        if kind != "form":
            raise FormSyntaxError("basis one-form in a multivector expression", node.offset)
        _check_index(node.index, m, "dx")
        return Form.basis(m, (node.index,))
    if isinstance(node, BasisVec):
        if kind != "multivector":
            raise FormSyntaxError("basis vector in a form expression", node.offset)
        _check_index(node.index, m, "e")
        return Multivector.basis(m, (node.index,))
    if isinstance(node, DApply):
        if kind != "form":
            raise FormSyntaxError("d(...) is only defined on forms", node.offset)
        inner = _eval(node.inner, m, kind)
        if isinstance(inner, RationalFn):
            inner = Form.function(m, inner)
        return exterior_derivative(inner)
    if isinstance(node, Neg):
        return -_eval(node.inner, m, kind)
    if isinstance(node, BinOp):
        lhs = _eval(node.left, m, kind)
        rhs = _eval(node.right, m, kind)
        return _combine(node.op, lhs, rhs, m, kind)
    raise TypeError(f"unknown node {node!r}")


def _combine(op: str, lhs, rhs, m: int, kind: str):
    if op in ("+", "-"):
        ls, rs = _as_scalar(lhs), _as_scalar(rhs)
        if ls is not None and rs is not None:
            return ls + rs if op == "+" else ls - rs
        if ls is None and rs is None:
            return lhs + rhs if op == "+" else lhs - rhs
        # one side is a scalar, the other has positive degree
        graded = lhs if ls is None else rhs
        raise DegreeMixError(f"cannot add a scalar to a degree-{graded.degree} element")
    if op == "*":
        ls, rs = _as_scalar(lhs), _as_scalar(rhs)
        if ls is not None and rs is not None:
            return ls * rs
        if ls is not None:
            return rhs.scale(ls)
        if rs is not None:
            return lhs.scale(rs)
        raise DegreeMixError("'*' needs a scalar factor; use '^' to wedge graded elements")
    if op == "/":
        rs = _as_scalar(rhs)
        if rs is None:
            raise DegreeMixError("cannot divide by a graded element")
        if rs.is_zero:
            raise ZeroDivisionError("division by zero in expression")
        ls = _as_scalar(lhs)
        if ls is not None:
            return ls / rs
        return lhs.scale(rs.inverse())
    if op == "^":
        if _as_scalar(lhs) is not None or _as_scalar(rhs) is not None:
            raise DegreeMixError("wedge expects graded operands; use '*' for scalars")
        return wedge(lhs, rhs)
    raise ValueError(f"unknown operator {op!r}")


def parse_form(text: str, chart_dim: int, kind: str = "form"):
    """Parse and evaluate an expression on an m-chart.

    ``kind`` selects the algebra: "form" admits dx<i> and d(...), while
    "multivector" admits e<i>.  Raises FormSyntaxError (with byte offset),
    DegreeMixError, or IndexError.
    """
    if kind not in ("form", "multivector"):
        raise ValueError(f"kind must be 'form' or 'multivector', got {kind!r}")
    value = _eval(parse_expr(text), chart_dim, kind)
    if isinstance(value, RationalFn):
        cls = Form if kind == "form" else Multivector
        if value.is_zero:
            return cls.zero(chart_dim, 0)
        return cls.function(chart_dim, value)
    return value
