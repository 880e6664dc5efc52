"""Polynomials in named parameters (α, β, …) with rational coefficients.

A parametric algebra keeps its structure constants as elements of
``QQ[a, b, …]``, a sympy polynomial ring. The zero polynomial is the empty term
dict, so canonical comparison is exact.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Mapping

from sympy.polys.domains import QQ

from ccdalg.errors import FieldMismatchError, UnevaluatedParametersError, UnknownParameterError
from ccdalg.fields import Element, Field

ParamPoly = Any


class ParamRing:
    """The ring ``QQ[params]`` with the interface :class:`~ccdalg.fields.Field` offers.

    Algebras, cocycles and maps can be built over a ``ParamRing`` instead of a
    field; only operations that never divide are available on them.
    """

    characteristic = 0
    is_finite = False

    def __init__(self, names: tuple[str, ...]):
        self.names = names
        self.domain = QQ.poly_ring(*names)
        self.ring = self.domain.ring
        self.descriptor = f"q[{','.join(names)}]"

    def __repr__(self) -> str:
        return f"ParamRing({self.names!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParamRing) and other.names == self.names

    def __hash__(self) -> int:
        return hash(self.names)

    @property
    def zero(self) -> ParamPoly:
        return self.ring.zero

    @property
    def one(self) -> ParamPoly:
        return self.ring.one

    def gen(self, name: str) -> ParamPoly:
        try:
            return self.ring.gens[self.names.index(name)]
        except ValueError:
            raise UnknownParameterError(f"unknown parameter {name!r}, expected one of {self.names}")

    def is_zero(self, a: ParamPoly) -> bool:
        return not a

    def from_rational(self, num: int, den: int = 1) -> ParamPoly:
        return self.ring.ground_new(QQ(num, den))

    def from_qq(self, a: Element) -> ParamPoly:
        return self.ring.ground_new(a)

    def __call__(self, value: Any) -> ParamPoly:
        if isinstance(value, int) and not isinstance(value, bool):
            return self.from_rational(value)
        if isinstance(value, Fraction):
            return self.from_rational(value.numerator, value.denominator)
        if isinstance(value, str):
            f = Fraction(value.strip())
            return self.from_rational(f.numerator, f.denominator)
        if self.domain.of_type(value) and value.ring == self.ring:
            return value
        raise FieldMismatchError(f"{value!r} is not an element of {self.descriptor}")

    def owns(self, a: Any) -> bool:
        return self.domain.of_type(a) and a.ring == self.ring

    def key(self, a: ParamPoly) -> tuple:
        return tuple(
            sorted((monom, (int(c.numerator), int(c.denominator))) for monom, c in a.iterterms())
        )

    def to_str(self, a: ParamPoly) -> str:
        return str(a.as_expr()).replace(" ", "").replace("**", "^")


@lru_cache(maxsize=None)
def param_ring(names: tuple[str, ...]) -> ParamRing:
    return ParamRing(tuple(names))


def evaluate(ring: ParamRing, poly: ParamPoly, assignment: Mapping[str, Element], field: Field) -> Element:
    """Evaluate ``poly`` at a full parameter assignment into ``field``.

    Args:
        ring: The ring ``poly`` lives in.
        poly: The polynomial.
        assignment: Field element (or Python number) for every parameter of ``ring``.
        field: Target field.

    Raises:
        UnevaluatedParametersError: If a parameter has no value.
    """
    missing = [n for n in ring.names if n not in assignment]
    if missing:
        raise UnevaluatedParametersError(f"no value for parameter(s) {', '.join(missing)}")
    values = [field(assignment[n]) for n in ring.names]
    total = field.zero
    for monom, coeff in poly.iterterms():
        term = field.from_qq(coeff)
        for v, e in zip(values, monom):
            if e:
                term = term * v**e
        total = total + term
    return total

