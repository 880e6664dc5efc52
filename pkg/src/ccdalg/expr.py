"""Coefficient expressions such as ``(a+1)``, ``2/3`` or ``a^2 - 1``.

Grammar (implicit multiplication is not allowed)::

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' uint)?
    atom     := rational | ident | '(' expr ')'
    rational := int ('/' posint)?        # int may carry a leading '-'

Printing is canonical: ``parse(show(parse(t))) == parse(t)``.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from ccdalg.errors import CoeffSyntaxError, UnknownParameterError
from ccdalg.fields import Element, Field
from ccdalg.poly import ParamPoly, ParamRing


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    """``terms[0] ± terms[1] ± …``; ``signs[i]`` is ``'+'`` or ``'-'`` (``signs[0]`` is ``'+'``)."""

    signs: tuple[str, ...]
    terms: tuple["CoeffExpr", ...]


@dataclass(frozen=True)
class Mul:
    factors: tuple["CoeffExpr", ...]


@dataclass(frozen=True)
class Pow:
    base: "CoeffExpr"
    exponent: int


CoeffExpr = Union[Num, Var, Add, Mul, Pow]


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> CoeffSyntaxError:
        return CoeffSyntaxError(message, self.text, len(self.text[: self.pos].encode("utf-8")))

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def digits(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start : self.pos]

    def parse(self) -> CoeffExpr:
        node = self.expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return node

    def expr(self) -> CoeffExpr:
        signs, terms = ["+"], [self.term()]
        while self.peek() in ("+", "-"):
            signs.append(self.text[self.pos])
            self.pos += 1
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Add(tuple(signs), tuple(terms))

    def term(self) -> CoeffExpr:
        factors = [self.factor()]
        while self.peek() == "*":
            self.pos += 1
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self) -> CoeffExpr:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            exponent = self.digits()
            if not exponent:
                raise self.error("expected a non-negative integer exponent")
            return Pow(base, int(exponent))
        return base

    def atom(self) -> CoeffExpr:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            node = self.expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return node
        if ch == "-" or ch.isdigit():
            return self.rational()
        if ch and _is_ident_start(ch):
            start = self.pos
            while self.pos < len(self.text) and _is_ident_char(self.text[self.pos]):
                self.pos += 1
            return Var(self.text[start : self.pos])
        raise self.error("expected a number, a parameter or '('" if ch else "unexpected end of input")

    def rational(self) -> Num:
        negative = False
        if self.text[self.pos] == "-":
            negative = True
            self.pos += 1
        numerator = self.digits()
        if not numerator:
            raise self.error("expected digits")
        value = Fraction(int(numerator))
        if self.peek() == "/":
            self.pos += 1
            self.skip()
            denominator = self.digits()
            if not denominator or int(denominator) == 0:
                raise self.error("expected a positive integer denominator")
            value /= int(denominator)
        return Num(-value if negative else value)


def parse_coeff(text: str) -> CoeffExpr:
    """Parse a coefficient expression.

    Raises:
        CoeffSyntaxError: With the byte offset of the first offending character.
    """
    return _Parser(text).parse()


def show(node: CoeffExpr) -> str:
    """Canonical text of an expression."""
    if isinstance(node, Num):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Add):
        out = _show_child(node.terms[0], Add)
        for sign, term in zip(node.signs[1:], node.terms[1:]):
            out += f" {sign} {_show_child(term, Add)}"
        return out
    if isinstance(node, Mul):
        return " * ".join(_show_child(f, Mul) for f in node.factors)
    base = node.base
    simple = isinstance(base, Var) or (isinstance(base, Num) and base.value.denominator == 1 and base.value >= 0)
    return f"{show(base) if simple else '(' + show(base) + ')'}^{node.exponent}"


def _show_child(node: CoeffExpr, parent: type) -> str:
    # nested nodes of the same or lower precedence keep their parentheses
    if isinstance(node, Add) or (parent is Mul and isinstance(node, Mul)):
        return f"({show(node)})"
    return show(node)


def variables(node: CoeffExpr) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Pow):
        return variables(node.base)
    children = node.terms if isinstance(node, Add) else node.factors
    return set().union(*(variables(c) for c in children))


def evaluate(node: CoeffExpr, field: Field, assignment: Mapping[str, Element] | None = None) -> Element:
    """Evaluate an expression in ``field``.

    Raises:
        UnknownParameterError: If a parameter has no value.
    """
    assignment = assignment or {}
    if isinstance(node, Num):
        return field.from_rational(node.value.numerator, node.value.denominator)
    if isinstance(node, Var):
        if node.name not in assignment:
            raise UnknownParameterError(f"no value bound for parameter {node.name!r}")
        return field(assignment[node.name])
    if isinstance(node, Pow):
        return evaluate(node.base, field, assignment) ** node.exponent
    if isinstance(node, Mul):
        out = field.one
        for f in node.factors:
            out = out * evaluate(f, field, assignment)
        return out
    out = field.zero
    for sign, term in zip(node.signs, node.terms):
        value = evaluate(term, field, assignment)
        out = out + value if sign == "+" else out - value
    return out


def to_poly(node: CoeffExpr, ring: ParamRing) -> ParamPoly:
    """Convert an expression to a polynomial of ``ring``.

    Raises:
        UnknownParameterError: If the expression uses a name outside ``ring``.
    """
    if isinstance(node, Num):
        return ring.from_rational(node.value.numerator, node.value.denominator)
    if isinstance(node, Var):
        return ring.gen(node.name)
    if isinstance(node, Pow):
        return to_poly(node.base, ring) ** node.exponent
    if isinstance(node, Mul):
        out = ring.one
        for f in node.factors:
            out = out * to_poly(f, ring)
        return out
    out = ring.zero
    for sign, term in zip(node.signs, node.terms):
        value = to_poly(term, ring)
        out = out + value if sign == "+" else out - value
    return out


def substitute(node: CoeffExpr, mapping: Mapping[str, CoeffExpr]) -> CoeffExpr:
    """Replace parameters by expressions, e.g. ``b ↦ -1*b``."""
    if isinstance(node, Var):
        return mapping.get(node.name, node)
    if isinstance(node, Num):
        return node
    if isinstance(node, Pow):
        return Pow(substitute(node.base, mapping), node.exponent)
    if isinstance(node, Mul):
        return Mul(tuple(substitute(f, mapping) for f in node.factors))
    return Add(node.signs, tuple(substitute(t, mapping) for t in node.terms))
