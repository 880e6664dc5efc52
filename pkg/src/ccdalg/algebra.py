"""Commutative algebras given by structure constants.

An :class:`Algebra` stores ``e_i e_j = Σ_k c_{ij}^k e_k`` for ``i ≤ j`` only, so
commutativity holds by construction. Coefficients live either in an exact
:class:`~ccdalg.fields.Field` or, for parametric families, in a
:class:`~ccdalg.poly.ParamRing`.

Indices are 0-based in code and 1-based in every text or JSON rendering.
"""

import logging
import re
from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import Mapping, Sequence, Union

from ccdalg.errors import (
    DimensionMismatchError,
    FieldMismatchError,
    SingularMapError,
    UnevaluatedParametersError,
)
from ccdalg.expr import parse_coeff, to_poly, evaluate as evaluate_expr
from ccdalg.fields import Element, Field, rationals
from ccdalg.linalg import Matrix, SubspaceBasis, Vector, kernel
from ccdalg.poly import ParamRing, evaluate as evaluate_poly, param_ring

logger = logging.getLogger(__name__)

Ring = Union[Field, ParamRing]
Terms = tuple[tuple[int, Element], ...]


@dataclass(frozen=True, eq=False)
class Algebra:
    """A finite-dimensional commutative algebra.

    Attributes:
        dim: Dimension ``n``.
        ring: Coefficient field, or parameter ring for a parametric family.
        sc: Sorted ``((i, j), ((k, c), …))`` entries with ``i ≤ j`` and ``c ≠ 0``.
        name: Display name, ignored by equality.
    """

    dim: int
    ring: Ring
    sc: tuple[tuple[tuple[int, int], Terms], ...]
    name: str = dataclass_field(default="")

    @classmethod
    def from_products(
        cls,
        dim: int,
        ring: Ring,
        products: Mapping[tuple[int, int], Mapping[int, Element] | Sequence[tuple[int, Element]]],
        name: str = "",
    ) -> "Algebra":
        """Build an algebra from 0-based products ``{(i, j): {k: c}}``.

        ``(i, j)`` and ``(j, i)`` may both be given; their terms are added.

        Raises:
            DimensionMismatchError: If an index is outside ``[0, dim)``.
        """
        merged: dict[tuple[int, int], dict[int, Element]] = {}
        for (i, j), terms in products.items():
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                for idx in (i, j, k):
                    if not 0 <= idx < dim:
                        raise DimensionMismatchError(f"index e{idx + 1} outside dimension {dim}")
                key = (min(i, j), max(i, j))
                slot = merged.setdefault(key, {})
                slot[k] = slot.get(k, ring.zero) + ring(c)
        sc = []
        for key in sorted(merged):
            terms = tuple((k, c) for k, c in sorted(merged[key].items()) if not ring.is_zero(c))
            if terms:
                sc.append((key, terms))
        return cls(dim, ring, tuple(sc), name)

    @property
    def params(self) -> tuple[str, ...]:
        return self.ring.names if isinstance(self.ring, ParamRing) else ()

    @property
    def is_parametric(self) -> bool:
        return isinstance(self.ring, ParamRing)

    @property
    def field(self) -> Field:
        """The coefficient field.

        Raises:
            UnevaluatedParametersError: For a parametric family.
        """
        if isinstance(self.ring, ParamRing):
            raise UnevaluatedParametersError(
                f"{self.name or 'algebra'} has unevaluated parameters {', '.join(self.ring.names)}"
            )
        return self.ring

    @cached_property
    def table(self) -> tuple[tuple[Terms, ...], ...]:
        """Full ``n × n`` table of sparse product terms, symmetric."""
        rows = [[() for _ in range(self.dim)] for _ in range(self.dim)]
        for (i, j), terms in self.sc:
            rows[i][j] = terms
            rows[j][i] = terms
        return tuple(tuple(r) for r in rows)

    def product_vector(self, i: int, j: int) -> Vector:
        """``e_i e_j`` as a dense vector."""
        out = [self.ring.zero] * self.dim
        for k, c in self.table[i][j]:
            out[k] = c
        return tuple(out)

    def structure_constant(self, i: int, j: int, k: int) -> Element:
        for kk, c in self.table[i][j]:
            if kk == k:
                return c
        return self.ring.zero

    def key(self) -> tuple:
        return (
            self.dim,
            self.ring.descriptor,
            tuple((ij, tuple((k, self.ring.key(c)) for k, c in terms)) for ij, terms in self.sc),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        label = self.name or "Algebra"
        return f"<{label} dim={self.dim} over {self.ring.descriptor}: {product_table(self)}>"

    def renamed(self, name: str) -> "Algebra":
        return Algebra(self.dim, self.ring, self.sc, name)

    def specialize(self, assignment: Mapping[str, object], field: Field | None = None) -> "Algebra":
        """Evaluate every parameter and move the constants into ``field``.

        A numeric algebra over ``QQ`` may also be moved into another field this
        way (with an empty assignment).

        Raises:
            UnevaluatedParametersError: If the assignment misses a parameter.
            FieldError: If a rational constant has a denominator divisible by p.
        """
        target = field or rationals()
        if isinstance(self.ring, ParamRing):
            ring = self.ring

            def convert(c: Element) -> Element:
                return evaluate_poly(ring, c, assignment, target)

        elif self.ring == target:
            return self
        elif self.ring == rationals():
            convert = target.from_qq
        else:
            raise FieldMismatchError(f"cannot move {self.ring} constants into {target}")
        products = {ij: [(k, convert(c)) for k, c in terms] for ij, terms in self.sc}
        return Algebra.from_products(self.dim, target, products, self.name)


def _check_vector(algebra: Algebra, v: Sequence[Element]) -> None:
    if len(v) != algebra.dim:
        raise DimensionMismatchError(f"vector of length {len(v)} for a {algebra.dim}-dimensional algebra")


def mul(algebra: Algebra, x: Sequence[Element], y: Sequence[Element]) -> Vector:
    """Unchecked product; also valid over a parameter ring."""
    ring = algebra.ring
    out = [ring.zero] * algebra.dim
    table = algebra.table
    for i, xi in enumerate(x):
        if ring.is_zero(xi):
            continue
        row = table[i]
        for j, yj in enumerate(y):
            terms = row[j]
            if not terms or ring.is_zero(yj):
                continue
            f = xi * yj
            for k, c in terms:
                out[k] = out[k] + f * c
    return tuple(out)


def multiply(algebra: Algebra, x: Sequence[Element], y: Sequence[Element]) -> Vector:
    """The product ``x·y``.

    Raises:
        DimensionMismatchError: If a vector has the wrong length.
        UnevaluatedParametersError: If the algebra is a parametric family.
    """
    algebra.field  # raises for parametric families
    _check_vector(algebra, x)
    _check_vector(algebra, y)
    return mul(algebra, x, y)


def associator(algebra: Algebra, x: Sequence[Element], y: Sequence[Element], z: Sequence[Element]) -> Vector:
    """``(x, y, z) = (xy)z - x(yz)``."""
    left = multiply(algebra, multiply(algebra, x, y), z)
    right = multiply(algebra, x, multiply(algebra, y, z))
    return tuple(a - b for a, b in zip(left, right))


def g_form(algebra: Algebra, x, y, z, t) -> Vector:
    """``G_x(y, z, t) = (yz, x, t) + (yt, x, z) + (zt, x, y)``.

    Trilinear in ``y, z, t`` and symmetric under any transposition of them.
    """
    parts = (
        associator(algebra, multiply(algebra, y, z), x, t),
        associator(algebra, multiply(algebra, y, t), x, z),
        associator(algebra, multiply(algebra, z, t), x, y),
    )
    return tuple(a + b + c for a, b, c in zip(*parts))


def basis_vector(algebra: Algebra, i: int) -> Vector:
    ring = algebra.ring
    return tuple(ring.one if k == i else ring.zero for k in range(algebra.dim))


def change_of_basis(algebra: Algebra, p: Matrix) -> Algebra:
    """Rewrite the structure constants in the basis given by the columns of ``p``.

    The new basis is ``E_j = Σ_i p[i, j] e_i``; ``p`` is then an isomorphism
    from the returned algebra onto ``algebra``. Parametric families accept a
    map over ``QQ`` and are transported symbolically.

    Raises:
        SingularMapError: If ``p`` is not invertible.
        FieldMismatchError: If ``p`` lives over an incompatible field.
    """
    n = algebra.dim
    if p.shape != (n, n):
        raise DimensionMismatchError(f"basis change of shape {p.shape} for dimension {n}")
    ring = algebra.ring
    if isinstance(ring, ParamRing):
        if p.field != rationals():
            raise FieldMismatchError(f"parametric algebras take maps over QQ, got {p.field}")
        lift = ring.from_qq
    elif p.field == ring:
        lift = None
    else:
        raise FieldMismatchError(f"map over {p.field} for an algebra over {ring}")
    try:
        inverse = p.inverse()
    except SingularMapError:
        raise SingularMapError(f"basis change for {algebra.name or 'algebra'} is singular")
    if lift is not None:
        cols = [tuple(lift(x) for x in col) for col in p.columns()]
        inv_rows = [tuple(lift(x) for x in row) for row in inverse.rows]
    else:
        cols = p.columns()
        inv_rows = list(inverse.rows)
    products: dict[tuple[int, int], dict[int, Element]] = {}
    for i in range(n):
        for j in range(i, n):
            image = mul(algebra, cols[i], cols[j])
            coords = {k: sum((a * b for a, b in zip(inv_rows[k], image)), ring.zero) for k in range(n)}
            products[(i, j)] = coords
    return Algebra.from_products(n, ring, products, algebra.name)


def direct_sum_zero(algebra: Algebra, m: int) -> Algebra:
    """``algebra ⊕`` an ``m``-dimensional zero ideal, appended as the last coordinates."""
    return Algebra(algebra.dim + m, algebra.ring, algebra.sc, algebra.name)


def annihilator(algebra: Algebra) -> SubspaceBasis:
    """``Ann(A) = {x : xA = 0}``, the kernel of the stacked maps ``x ↦ x e_i``."""
    field, n = algebra.field, algebra.dim
    rows = []
    for i in range(n):
        for k in range(n):
            rows.append(tuple(algebra.structure_constant(j, i, k) for j in range(n)))
    if not rows:
        return SubspaceBasis.full(field, n)
    return kernel(Matrix(field, tuple(rows), n))


def product_space(algebra: Algebra, u: SubspaceBasis, v: SubspaceBasis) -> SubspaceBasis:
    """The span of all products ``x·y`` with ``x ∈ u`` and ``y ∈ v``."""
    field = algebra.field
    vectors = [mul(algebra, a, b) for a in u.vectors for b in v.vectors]
    return SubspaceBasis.span(field, algebra.dim, vectors)


def power_filtration(algebra: Algebra) -> list[SubspaceBasis]:
    """The chain ``A¹ ⊇ A² ⊇ …`` with ``A^k = Σ_{i+j=k} A^i A^j``.

    The chain ends with the zero space for a nilpotent algebra. Otherwise it
    ends at the first term after which it is constant, detected as
    ``A^m = A^{2m}`` (then every later term equals it as well).
    """
    field, n = algebra.field, algebra.dim
    chain = [SubspaceBasis.full(field, n)]
    while chain[-1].dim:
        k = len(chain) + 1
        total = SubspaceBasis.zero(field, n)
        for i in range(1, k // 2 + 1):
            total = total.sum(product_space(algebra, chain[i - 1], chain[k - i - 1]))
        chain.append(total)
        m = k // 2
        if total.dim and total == chain[m - 1]:
            while len(chain) > 1 and chain[-2] == total:
                chain.pop()
            break
    return chain


def nilpotency_index(algebra: Algebra) -> int | None:
    """Smallest ``k`` with ``A^k = 0``, or ``None`` if the algebra is not nilpotent."""
    chain = power_filtration(algebra)
    return len(chain) if not chain[-1].dim else None


def is_nilpotent(algebra: Algebra) -> bool:
    return nilpotency_index(algebra) is not None


def left_multiplication(algebra: Algebra, x: Sequence[Element]) -> Matrix:
    """Matrix of ``L_x : y ↦ x·y`` (columns are the images of the basis)."""
    cols = [mul(algebra, x, basis_vector(algebra, j)) for j in range(algebra.dim)]
    return Matrix.from_columns(algebra.field, cols, algebra.dim)


_TERM = re.compile(r"^(?P<coeff>.*?)\*?\s*e(?P<k>\d+)$")


def _split_terms(text: str) -> list[tuple[str, str]]:
    """Split ``"e4 + (a+1)*e5 - 2e3"`` at top-level signs into ``(sign, term)``."""
    out, depth, start, sign = [], 0, 0, "+"
    text = text.strip()
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start and text[i - 1] not in "*/^(":
            chunk = text[start:i].strip()
            if chunk:
                out.append((sign, chunk))
                sign, start = ch, i + 1
    chunk = text[start:].strip()
    if chunk:
        out.append((sign, chunk))
    return out


def algebra_from_table(
    text: str, params: Sequence[str] = (), field: Field | None = None, dim: int | None = None, name: str = ""
) -> Algebra:
    """Build an algebra from a compact table such as ``"e1e1=e2, e1e3=(a+1)e5"``.

    Products are separated by commas or semicolons; unlisted products are zero.
    With ``params`` the algebra is built over the parameter ring.

    Raises:
        CoeffSyntaxError: If a coefficient cannot be parsed.
        DimensionMismatchError: If an index exceeds ``dim``.
    """
    ring: Ring = param_ring(tuple(params)) if params else (field or rationals())
    products: dict[tuple[int, int], dict[int, Element]] = {}
    highest = 0
    for item in re.split(r"[,;]", text):
        item = item.strip()
        if not item:
            continue
        lhs, _, rhs = item.partition("=")
        match = re.fullmatch(r"\s*e(\d+)\s*\*?\s*e(\d+)\s*", lhs)
        if not match or not rhs.strip():
            raise ValueError(f"cannot read product {item!r}, expected e<i>e<j>=<combination>")
        i, j = int(match.group(1)) - 1, int(match.group(2)) - 1
        highest = max(highest, i + 1, j + 1)
        slot = products.setdefault((i, j), {})
        if rhs.strip() == "0":
            continue
        for sign, term in _split_terms(rhs):
            m = _TERM.match(term)
            if not m:
                raise ValueError(f"cannot read term {term!r} in {item!r}")
            k = int(m.group("k")) - 1
            highest = max(highest, k + 1)
            coeff_text = {"": "1", "+": "1", "-": "-1"}.get(m.group("coeff").strip(), m.group("coeff").strip())
            node = parse_coeff(coeff_text)
            value = to_poly(node, ring) if isinstance(ring, ParamRing) else evaluate_expr(node, ring)
            if sign == "-":
                value = -value
            slot[k] = slot.get(k, ring.zero) + value
    return Algebra.from_products(dim if dim is not None else highest, ring, products, name)


def _coeff_prefix(ring: Ring, c: Element) -> str:
    text = ring.to_str(c)
    if text == "1":
        return ""
    if text == "-1":
        return "-"
    if re.fullmatch(r"-?\d+(/\d+)?", text):
        return text
    return f"({text})*"


def product_table(algebra: Algebra) -> str:
    """Canonical compact rendering, readable by :func:`algebra_from_table`."""
    items = []
    for (i, j), terms in algebra.sc:
        rhs = ""
        for k, c in terms:
            term = f"{_coeff_prefix(algebra.ring, c)}e{k + 1}"
            rhs += term if not rhs else (f" - {term[1:]}" if term.startswith("-") else f" + {term}")
        items.append(f"e{i + 1}e{j + 1}={rhs}")
    return ", ".join(items) if items else "0"


class BasisProducts:
    """Cached basis products ``e_i e_j``, ``(e_i e_j) e_k`` and ``((e_i e_j) e_k) e_l``."""

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self.field = algebra.field
        n = algebra.dim
        self.n = n
        self.p2 = [[algebra.product_vector(i, j) for j in range(n)] for i in range(n)]
        self.p3 = [[[self.rmul(self.p2[i][j], k) for k in range(n)] for j in range(n)] for i in range(n)]
        self._p4: dict[tuple[int, int, int, int], Vector] = {}

    def rmul(self, v: Sequence[Element], k: int) -> Vector:
        """``v · e_k``."""
        field, table = self.field, self.algebra.table
        out = [field.zero] * self.n
        for m, vm in enumerate(v):
            if field.is_zero(vm):
                continue
            for kk, c in table[m][k]:
                out[kk] = out[kk] + vm * c
        return tuple(out)

    def t(self, i: int, j: int, k: int, l: int) -> Vector:
        """``((e_i e_j) e_k) e_l``."""
        key = (i, j, k, l)
        value = self._p4.get(key)
        if value is None:
            value = self._p4[key] = self.rmul(self.p3[i][j][k], l)
        return value
