"""Exact fields used by ccdalg.

Three kinds of fields are supported, all backed by sympy domains:

* ``q``: the rationals (``QQ``), arbitrary precision, lowest terms.
* ``gf:<p>``: the prime field GF(p), residues kept in ``[0, p)``.
* ``qw``: the rationals extended by a primitive cube root of unity ω, with
  minimal polynomial ``ω² + ω + 1``; elements are ``a + bω``.

No floating point is ever involved.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterator

from sympy import Rational, sqrt
from sympy.ntheory import isprime
from sympy.polys.domains import GF, QQ

from ccdalg.errors import FieldError, FieldMismatchError

Element = Any

_MAX_PRIME = 2**31


class Field:
    """An exact field together with the conversions ccdalg needs.

    Instances are interned by :func:`rationals`, :func:`prime_field` and
    :func:`eisenstein`, and compare equal by descriptor.
    """

    def __init__(self, descriptor: str, domain: Any, characteristic: int):
        self.descriptor = descriptor
        self.domain = domain
        self.characteristic = characteristic

    def __repr__(self) -> str:
        return f"Field({self.descriptor!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.descriptor == self.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)

    @property
    def zero(self) -> Element:
        return self.domain.zero

    @property
    def one(self) -> Element:
        return self.domain.one

    @property
    def is_finite(self) -> bool:
        return self.characteristic > 0

    def is_zero(self, a: Element) -> bool:
        return self.domain.is_zero(a)

    def from_rational(self, num: int, den: int = 1) -> Element:
        """Map the rational ``num/den`` into this field.

        Raises:
            FieldError: If ``den`` vanishes in the field.
        """
        if den == 0:
            raise FieldError(f"zero denominator in {num}/{den}")
        if self.characteristic:
            p = self.characteristic
            if den % p == 0:
                raise FieldError(f"denominator {den} is not invertible mod {p}")
            return self.domain((num * pow(den, -1, p)) % p)
        value = QQ(num, den)
        if self.descriptor == "q":
            return value
        return self.domain([value])

    def from_qq(self, a: Element) -> Element:
        """Map a sympy ``QQ`` element into this field."""
        return self.from_rational(int(a.numerator), int(a.denominator))

    def __call__(self, value: Any) -> Element:
        """Coerce a Python number, numeric string or element of this field.

        Raises:
            FieldMismatchError: If ``value`` is an element of another domain.
        """
        if isinstance(value, bool):
            raise FieldMismatchError(f"cannot coerce bool {value!r} into {self}")
        if isinstance(value, int):
            return self.from_rational(value)
        if isinstance(value, Fraction):
            return self.from_rational(value.numerator, value.denominator)
        if isinstance(value, str):
            f = Fraction(value.strip())
            return self.from_rational(f.numerator, f.denominator)
        if self.owns(value):
            return value
        raise FieldMismatchError(f"{value!r} is not an element of {self}")

    def owns(self, a: Element) -> bool:
        """Return whether ``a`` is an element of this very field."""
        if not self.domain.of_type(a):
            return False
        if self.characteristic:
            mod = getattr(a, "mod", None)
            if mod is None and hasattr(a, "modulus"):
                mod = a.modulus()
            return mod is None or int(mod) == self.characteristic
        return True

    def key(self, a: Element) -> tuple:
        """Hashable canonical form of ``a``."""
        if self.characteristic:
            return (self.domain.to_int(a) % self.characteristic,)
        if self.descriptor == "q":
            return (int(a.numerator), int(a.denominator))
        return tuple((int(c.numerator), int(c.denominator)) for c in a.to_list())

    def to_str(self, a: Element) -> str:
        if self.characteristic:
            return str(self.domain.to_int(a) % self.characteristic)
        if self.descriptor == "q":
            num, den = int(a.numerator), int(a.denominator)
            return str(num) if den == 1 else f"{num}/{den}"
        return str(self.domain.to_sympy(a)).replace(" ", "")

    def to_fraction(self, a: Element) -> Fraction:
        if self.descriptor != "q":
            raise FieldError(f"{self} elements are not rationals")
        return Fraction(int(a.numerator), int(a.denominator))

    def elements(self) -> Iterator[Element]:
        """Iterate over all elements of a finite field, ``0, 1, …, p-1``."""
        if not self.characteristic:
            raise FieldError(f"{self} is infinite")
        for i in range(self.characteristic):
            yield self.domain(i)

    @property
    def omega(self) -> Element:
        """A primitive cube root of unity, when the field has one.

        Over GF(p) with ``p ≡ 1 (mod 3)`` the smallest such residue is returned.

        Raises:
            FieldError: If the field has no primitive cube root of unity.
        """
        if self.descriptor == "qw":
            return self.domain.from_sympy(Rational(-1, 2) + sqrt(-3) / 2)
        if self.characteristic and self.characteristic % 3 == 1:
            p = self.characteristic
            for g in range(2, p):
                if pow(g, 3, p) == 1:
                    return self.domain(g)
        raise FieldError(f"{self} has no primitive cube root of unity")


@lru_cache(maxsize=None)
def rationals() -> Field:
    return Field("q", QQ, 0)


@lru_cache(maxsize=None)
def prime_field(p: int) -> Field:
    """GF(p) for a prime ``p < 2**31``."""
    if not (2 <= p < _MAX_PRIME and isprime(p)):
        raise FieldError(f"GF({p}) needs a prime below 2**31")
    return Field(f"gf:{p}", GF(p, symmetric=False), p)


@lru_cache(maxsize=None)
def eisenstein() -> Field:
    """The field ℚ(ω), ω a primitive cube root of unity."""
    return Field("qw", QQ.algebraic_field(Rational(-1, 2) + sqrt(-3) / 2), 0)


def parse_field(descriptor: str) -> Field:
    """Parse a field selector: ``q``, ``qw`` or ``gf:<p>``.

    Raises:
        FieldError: If the selector is not recognised.
    """
    text = descriptor.strip().lower()
    if text in ("q", "qq"):
        return rationals()
    if text in ("qw", "q(w)", "eisenstein"):
        return eisenstein()
    if text.startswith("gf:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise FieldError(f"invalid prime in field selector {descriptor!r}")
        return prime_field(p)
    raise FieldError(f"unknown field selector {descriptor!r}, expected q, qw or gf:<p>")
