"""Second cohomology of commutative algebras with trivial coefficients.

A symmetric bilinear form ``θ = Σ_{i≤j} c_ij Δ_ij`` is stored as its vector of
``Δ``-coordinates in lexicographic order of ``(i, j)``, ``i ≤ j``. A cocycle
with values in an ``s``-dimensional space is a tuple of ``s`` such forms.

``Z²`` is computed as the kernel of the linear conditions obtained from the
cocycle identity on all basis 4-tuples; ``B²`` is spanned by the forms
``(x, y) ↦ f(xy)``.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

from pydantic import BaseModel

from ccdalg.algebra import Algebra, BasisProducts, Ring, annihilator
from ccdalg.errors import DimensionMismatchError, FieldMismatchError
from ccdalg.fields import Element, Field
from ccdalg.identities import satisfies_jordan
from ccdalg.linalg import Matrix, SubspaceBasis, Vector, kernel, solve, unit_vector

logger = logging.getLogger(__name__)

Variety = Literal["ccd", "jordan", "symmetric_all"]
VARIETIES: tuple[str, ...] = ("ccd", "jordan", "symmetric_all")


def delta_pairs(n: int) -> list[tuple[int, int]]:
    """The ``Δ``-coordinate order: ``(0,0), (0,1), …, (0,n-1), (1,1), …``."""
    return [(i, j) for i in range(n) for j in range(i, n)]


def delta_index(n: int, i: int, j: int) -> int:
    i, j = min(i, j), max(i, j)
    return i * n - i * (i - 1) // 2 + (j - i)


def delta_label(i: int, j: int) -> str:
    """``Δ12`` style label for 0-based ``(i, j)``."""
    i, j = min(i, j), max(i, j)
    return f"Δ{i + 1}{j + 1}" if max(i, j) < 9 else f"Δ{i + 1},{j + 1}"


@dataclass(frozen=True)
class BilinearForm:
    """A symmetric bilinear form ``Σ c_ij Δ_ij`` on an ``n``-dimensional algebra.

    ``coeffs[delta_index(n, i, j)]`` is ``θ(e_i, e_j) = θ(e_j, e_i)``.
    """

    ring: Ring
    dim: int
    coeffs: Vector

    @classmethod
    def from_pairs(cls, ring: Ring, dim: int, pairs: Mapping[tuple[int, int], object]) -> "BilinearForm":
        """Build a form from 0-based ``{(i, j): c}``; repeated pairs add up."""
        coeffs = [ring.zero] * (dim * (dim + 1) // 2)
        for (i, j), c in pairs.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatchError(f"{delta_label(i, j)} outside dimension {dim}")
            k = delta_index(dim, i, j)
            coeffs[k] = coeffs[k] + ring(c)
        return cls(ring, dim, tuple(coeffs))

    @classmethod
    def zero(cls, ring: Ring, dim: int) -> "BilinearForm":
        return cls(ring, dim, (ring.zero,) * (dim * (dim + 1) // 2))

    def entry(self, i: int, j: int) -> Element:
        return self.coeffs[delta_index(self.dim, i, j)]

    def value(self, u: Sequence[Element], v: Sequence[Element]) -> Element:
        """``θ(u, v)``."""
        total = self.ring.zero
        for l, ul in enumerate(u):
            if self.ring.is_zero(ul):
                continue
            for m, vm in enumerate(v):
                if not self.ring.is_zero(vm):
                    total = total + ul * vm * self.entry(l, m)
        return total

    def gram(self) -> Matrix:
        n = self.dim
        return Matrix(self.ring, tuple(tuple(self.entry(i, j) for j in range(n)) for i in range(n)), n)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(c) for c in self.coeffs)

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm(self.ring, self.dim, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scaled(self, c: Element) -> "BilinearForm":
        return BilinearForm(self.ring, self.dim, tuple(c * a for a in self.coeffs))

    def label(self) -> str:
        """Render as ``Δ13 + 2Δ22``; the zero form renders as ``0``."""
        parts = []
        for (i, j), c in zip(delta_pairs(self.dim), self.coeffs):
            if self.ring.is_zero(c):
                continue
            text = self.ring.to_str(c)
            coeff = "" if text == "1" else "-" if text == "-1" else text if text.lstrip("-").isdigit() else f"({text})"
            parts.append(f"{coeff}{delta_label(i, j)}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def key(self) -> tuple:
        return (self.dim, tuple(self.ring.key(c) for c in self.coeffs))


@dataclass(frozen=True)
class Cocycle:
    """A bilinear map ``θ = Σ θ_k e_{n+k}`` given by its components."""

    components: tuple[BilinearForm, ...]

    @property
    def dim(self) -> int:
        return self.components[0].dim if self.components else 0

    @property
    def s(self) -> int:
        return len(self.components)

    def value(self, u: Sequence[Element], v: Sequence[Element]) -> tuple[Element, ...]:
        return tuple(f.value(u, v) for f in self.components)

    def label(self) -> str:
        return "(" + ", ".join(f.label() for f in self.components) + ")"


@dataclass(frozen=True)
class CohomologyBasis:
    """``Z²``, ``B²`` and a canonical complement representing ``H² = Z²/B²``.

    Attributes:
        variety: The cocycle identity ``z2`` was computed for.
        z2: The cocycle space.
        b2: The coboundary space.
        h2: Canonical complement of ``b2`` in ``z2``: the cocycles whose
            coordinates at the pivots of ``b2`` vanish.
        h2_jordan: Representatives in ``h2`` of the classes of ``Z²_J``.
    """

    variety: str
    z2: SubspaceBasis
    b2: SubspaceBasis
    h2: SubspaceBasis
    h2_jordan: SubspaceBasis

    @property
    def dim_h2(self) -> int:
        return self.h2.dim

    @property
    def dim_h2_jordan(self) -> int:
        return self.h2_jordan.dim

    def forms(self) -> list[BilinearForm]:
        """The ``h2`` basis as forms."""
        n = _dim_from_pairs(self.z2.ambient_dim)
        return [BilinearForm(self.z2.field, n, v) for v in self.h2.vectors]


def _dim_from_pairs(count: int) -> int:
    n = 0
    while n * (n + 1) // 2 < count:
        n += 1
    return n


class _RowBuilder:
    def __init__(self, field: Field, n: int):
        self.field, self.n = field, n
        self.row = [field.zero] * (n * (n + 1) // 2)

    def add(self, sign: int, u: Sequence[Element], v: Sequence[Element]) -> None:
        """Accumulate ``sign · θ(u, v)`` as a linear function of the ``Δ``-coordinates."""
        field, n = self.field, self.n
        s = field(sign)
        for l, ul in enumerate(u):
            if field.is_zero(ul):
                continue
            for m, vm in enumerate(v):
                if not field.is_zero(vm):
                    k = delta_index(n, l, m)
                    self.row[k] = self.row[k] + s * ul * vm


def _system(algebra: Algebra, variety: str) -> list[Vector]:
    field, n = algebra.field, algebra.dim
    prod = BasisProducts(algebra)
    e = [unit_vector(field, n, i) for i in range(n)]
    rows: dict[tuple, Vector] = {}
    for x, y, a, b in itertools.product(range(n), repeat=4):
        builder = _RowBuilder(field, n)
        if variety == "ccd":
            # θ((xy)a,b) + θ((xb)a,y) + θ(x,(yb)a) = θ((xy)b,a) + θ((xa)b,y) + θ(x,(ya)b)
            builder.add(1, prod.p3[x][y][a], e[b])
            builder.add(1, prod.p3[x][b][a], e[y])
            builder.add(1, e[x], prod.p3[y][b][a])
            builder.add(-1, prod.p3[x][y][b], e[a])
            builder.add(-1, prod.p3[x][a][b], e[y])
            builder.add(-1, e[x], prod.p3[y][a][b])
        else:
            # θ(xy,zt) + θ(xz,yt) + θ(xt,yz) = θ((xz)y,t) + θ((zt)y,x) + θ((tx)y,z), with (z, t) = (a, b)
            p2 = prod.p2
            builder.add(1, p2[x][y], p2[a][b])
            builder.add(1, p2[x][a], p2[y][b])
            builder.add(1, p2[x][b], p2[y][a])
            builder.add(-1, prod.p3[x][a][y], e[b])
            builder.add(-1, prod.p3[a][b][y], e[x])
            builder.add(-1, prod.p3[b][x][y], e[a])
        row = tuple(builder.row)
        if any(not field.is_zero(c) for c in row):
            rows.setdefault(tuple(field.key(c) for c in row), row)
    return list(rows.values())


def cocycle_space(algebra: Algebra, variety: str = "ccd") -> SubspaceBasis:
    """``Z²`` of ``algebra`` for the given variety, in ``Δ``-coordinates.

    Args:
        algebra: A numeric algebra.
        variety: ``ccd``, ``jordan`` or ``symmetric_all`` (every symmetric form).

    Raises:
        ValueError: For an unknown variety.
    """
    if variety not in VARIETIES:
        raise ValueError(f"unknown variety {variety!r}, expected one of {', '.join(VARIETIES)}")
    field, n = algebra.field, algebra.dim
    size = n * (n + 1) // 2
    if variety == "symmetric_all":
        return SubspaceBasis.full(field, size)
    rows = _system(algebra, variety)
    logger.debug(f"Z²_{variety} of {algebra.name or 'algebra'}: {len(rows)} distinct conditions")
    if not rows:
        return SubspaceBasis.full(field, size)
    return kernel(Matrix(field, tuple(rows), size))


def coboundary_forms(algebra: Algebra) -> list[BilinearForm]:
    """The forms ``δe_k^*(x, y) = (xy)_k``, one per coordinate ``k``."""
    n = algebra.dim
    out = []
    for k in range(n):
        pairs = {(i, j): algebra.structure_constant(i, j, k) for i, j in delta_pairs(n)}
        out.append(BilinearForm.from_pairs(algebra.ring, n, pairs))
    return out


def coboundary_space(algebra: Algebra) -> SubspaceBasis:
    """``B²``, of dimension ``dim A²``."""
    field, n = algebra.field, algebra.dim
    return SubspaceBasis.span(field, n * (n + 1) // 2, [f.coeffs for f in coboundary_forms(algebra)])


def cohomology_basis(algebra: Algebra, variety: str = "ccd") -> CohomologyBasis:
    """Compute ``Z²``, ``B²`` and canonical ``H²`` representatives.

    ``h2_jordan`` holds the reductions modulo ``B²`` of ``Z²_J ∩ Z²``, which for
    a Jordan algebra is ``Z²_J/B²``. A non-Jordan algebra has no Jordan central
    extensions, so its ``h2_jordan`` is zero.
    """
    z2 = cocycle_space(algebra, variety)
    b2 = coboundary_space(algebra)
    size = z2.ambient_dim
    field = algebra.field
    pivot_rows = [tuple(field.one if k == p else field.zero for k in range(size)) for p in b2.pivots]
    if pivot_rows:
        off_pivots = kernel(Matrix(field, tuple(pivot_rows), size))
        h2 = z2.intersection(off_pivots)
    else:
        h2 = z2
    if satisfies_jordan(algebra):
        jordan = z2 if variety == "jordan" else z2.intersection(cocycle_space(algebra, "jordan"))
        h2_jordan = SubspaceBasis.span(field, size, [b2.reduce(v) for v in jordan.vectors])
    else:
        h2_jordan = SubspaceBasis.zero(field, size)
    logger.info(
        f"{algebra.name or 'algebra'}: dim Z²_{variety} = {z2.dim}, dim B² = {b2.dim}, "
        f"dim H² = {h2.dim}, dim H²_J = {h2_jordan.dim}"
    )
    return CohomologyBasis(variety, z2, b2, h2, h2_jordan)


def _check_form(algebra: Algebra, form: BilinearForm) -> None:
    if form.dim != algebra.dim:
        raise DimensionMismatchError(f"form on dimension {form.dim} for a {algebra.dim}-dimensional algebra")
    if form.ring != algebra.ring:
        raise FieldMismatchError(f"form over {form.ring} for an algebra over {algebra.ring}")


def cocycle_annihilator(algebra: Algebra, theta: Cocycle) -> SubspaceBasis:
    """``Ann(θ) = {x : θ(x, A) = 0}``, the intersection of the radicals of the components."""
    field, n = algebra.field, algebra.dim
    rows: list[Vector] = []
    for form in theta.components:
        _check_form(algebra, form)
        rows.extend(form.gram().rows)
    if not rows:
        return SubspaceBasis.full(field, n)
    return kernel(Matrix(field, tuple(rows), n))


def is_cocycle(
    algebra: Algebra, theta: BilinearForm | Cocycle, variety: str = "ccd", z2: SubspaceBasis | None = None
) -> bool:
    """Whether every component of ``theta`` lies in ``Z²`` of the variety."""
    forms = theta.components if isinstance(theta, Cocycle) else (theta,)
    space = z2 or cocycle_space(algebra, variety)
    for form in forms:
        _check_form(algebra, form)
    return all(space.contains(f.coeffs) for f in forms)


@dataclass(frozen=True)
class TsMembership:
    """Outcome of the ``T_s`` test for the subspace spanned by a cocycle's components.

    Attributes:
        in_ts: Components are cocycles, independent modulo ``B²`` and
            ``Ann(θ) ∩ Ann(A) = 0``.
        jordan_split: ``"R"`` if every component lies in ``Z²_J + B²``, else ``"U"``.
        independent: Components are linearly independent modulo ``B²``.
        joint_annihilator_dim: ``dim(Ann(θ) ∩ Ann(A))``.
    """

    in_ts: bool
    jordan_split: str
    independent: bool
    joint_annihilator_dim: int
    cocycles: bool = True


def membership_ts(algebra: Algebra, theta: Cocycle, basis: CohomologyBasis | None = None) -> TsMembership:
    """Test whether ``⟨θ_1, …, θ_s⟩`` is a point of ``T_s(A)`` and classify it as ``R_s``/``U_s``."""
    basis = basis or cohomology_basis(algebra, "ccd")
    field = algebra.field
    cocycles = is_cocycle(algebra, theta, z2=basis.z2)
    spanned = SubspaceBasis.span(field, basis.z2.ambient_dim, [f.coeffs for f in theta.components])
    independent = spanned.dim == theta.s and spanned.intersection(basis.b2).dim == 0
    joint = cocycle_annihilator(algebra, theta).intersection(annihilator(algebra))
    jordan_classes = basis.h2_jordan.sum(basis.b2)
    jordan = all(jordan_classes.contains(f.coeffs) for f in theta.components)
    in_ts = cocycles and independent and joint.dim == 0
    return TsMembership(in_ts, "R" if jordan else "U", independent, joint.dim, cocycles)


def nabla_coordinates(
    basis: CohomologyBasis, nablas: Sequence[BilinearForm], theta: BilinearForm
) -> tuple[Element, ...] | None:
    """Solve ``θ = Σ α_i ∇_i + b`` with ``b ∈ B²``.

    Returns:
        The ``α`` vector, or ``None`` if ``θ`` is not in ``span(∇) + B²``.
    """
    field = basis.b2.field
    columns = [f.coeffs for f in nablas] + list(basis.b2.vectors)
    size = basis.b2.ambient_dim
    if not columns:
        return () if all(field.is_zero(c) for c in theta.coeffs) else None
    m = Matrix.from_columns(field, columns, size)
    x = solve(m, theta.coeffs)
    return None if x is None else tuple(x[: len(nablas)])


@dataclass(frozen=True)
class TrivialExtensionCheck:
    """Comparison of ``Z²_CCD`` with a listed span; ``contained`` means every cocycle is listed."""

    z2_dim: int
    listed_dim: int
    contained: bool
    equal: bool


def trivial_extension_check(algebra: Algebra, listed: Sequence[BilinearForm]) -> TrivialExtensionCheck:
    """Compare ``Z²_CCD`` with the span of a listed family of cocycles."""
    z2 = cocycle_space(algebra, "ccd")
    span = SubspaceBasis.span(algebra.field, z2.ambient_dim, [f.coeffs for f in listed])
    return TrivialExtensionCheck(z2.dim, span.dim, span.contains_subspace(z2), z2 == span)


class CohomologySummary(BaseModel):
    """``H²`` of one algebra as printed by ``ccdalg cohomology``."""

    algebra: str
    variety: str
    z2: int
    b2: int
    h2: int
    h2_jordan: int
    basis: list[str]
    jordan_basis: list[str]


def cohomology_summary(algebra: Algebra, variety: str = "ccd") -> CohomologySummary:
    basis = cohomology_basis(algebra, variety)
    n = algebra.dim
    return CohomologySummary(
        algebra=algebra.name,
        variety=variety,
        z2=basis.z2.dim,
        b2=basis.b2.dim,
        h2=basis.dim_h2,
        h2_jordan=basis.dim_h2_jordan,
        basis=[f.label() for f in basis.forms()],
        jordan_basis=[BilinearForm(algebra.field, n, v).label() for v in basis.h2_jordan.vectors],
    )
