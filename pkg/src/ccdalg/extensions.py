"""Central extensions ``A_θ = A ⊕ V`` and their inverse, the annihilator split."""

import logging
from dataclasses import dataclass

from pydantic import BaseModel

from ccdalg.algebra import Algebra, annihilator, change_of_basis, product_table
from ccdalg.cohomology import BilinearForm, Cocycle, cocycle_annihilator, cohomology_basis, membership_ts
from ccdalg.errors import DimensionMismatchError, FieldMismatchError, NoAnnihilatorError
from ccdalg.expr import evaluate as evaluate_expr, parse_coeff
from ccdalg.identities import check_identity
from ccdalg.linalg import Matrix, SubspaceBasis, unit_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtensionSpec:
    """A base algebra and a cocycle; new basis vectors are appended after the base ones."""

    base: Algebra
    cocycle: Cocycle
    name: str = ""

    def __post_init__(self):
        for form in self.cocycle.components:
            if form.dim != self.base.dim:
                raise DimensionMismatchError(
                    f"cocycle component on dimension {form.dim} for a {self.base.dim}-dimensional base"
                )
            if form.ring != self.base.ring:
                raise FieldMismatchError(f"cocycle over {form.ring} for a base over {self.base.ring}")


def central_extension(spec: ExtensionSpec) -> Algebra:
    """The algebra on ``A ⊕ V`` with ``(x + v)(y + w) = xy + θ(x, y)``."""
    base, n = spec.base, spec.base.dim
    products: dict[tuple[int, int], dict[int, object]] = {}
    for (i, j), terms in base.sc:
        products[(i, j)] = dict(terms)
    for k, form in enumerate(spec.cocycle.components):
        for i in range(n):
            for j in range(i, n):
                c = form.entry(i, j)
                if not base.ring.is_zero(c):
                    products.setdefault((i, j), {})[n + k] = c
    return Algebra.from_products(n + spec.cocycle.s, base.ring, products, spec.name or base.name)


def verify_ann_decomposition(spec: ExtensionSpec) -> bool:
    """Check ``Ann(A_θ) = (Ann(θ) ∩ Ann(A)) ⊕ V`` inside ``A_θ``."""
    extended = central_extension(spec)
    field, n, s = extended.field, spec.base.dim, spec.cocycle.s
    joint = cocycle_annihilator(spec.base, spec.cocycle).intersection(annihilator(spec.base))
    lifted = [tuple(v) + (field.zero,) * s for v in joint.vectors]
    kernel_part = [unit_vector(field, n + s, n + k) for k in range(s)]
    expected = SubspaceBasis.span(field, n + s, lifted + kernel_part)
    return annihilator(extended) == expected


@dataclass(frozen=True)
class AnnihilatorSplit:
    """Result of :func:`split_annihilator`.

    Attributes:
        quotient: The algebra ``A'`` on the complement of ``Ann(A)``.
        theta: The cocycle with ``A ≅ A'_θ``.
        basis: Columns are the new basis of ``A``: the complement coordinates
            in input order followed by the rref basis of ``Ann(A)``, so
            ``change_of_basis(A, basis) == central_extension(quotient, theta)``.
    """

    quotient: Algebra
    theta: Cocycle
    basis: Matrix


def split_annihilator(algebra: Algebra) -> AnnihilatorSplit:
    """Write ``A`` as a central extension of ``A/Ann(A)``.

    The complement of ``Ann(A)`` is spanned by the basis vectors at the
    non-pivot coordinates of its reduced echelon basis.

    Raises:
        NoAnnihilatorError: If ``Ann(A) = 0``.
    """
    field, n = algebra.field, algebra.dim
    ann = annihilator(algebra)
    if not ann.dim:
        raise NoAnnihilatorError(f"{algebra.name or 'algebra'} has zero annihilator")
    complement = ann.non_pivots()
    columns = [unit_vector(field, n, c) for c in complement] + list(ann.vectors)
    basis = Matrix.from_columns(field, columns, n)
    rebased = change_of_basis(algebra, basis)
    q, s = len(complement), ann.dim
    quotient_products: dict[tuple[int, int], dict[int, object]] = {}
    pairs: list[dict[tuple[int, int], object]] = [{} for _ in range(s)]
    for (i, j), terms in rebased.sc:
        for k, c in terms:
            if k < q:
                quotient_products.setdefault((i, j), {})[k] = c
            else:
                pairs[k - q][(i, j)] = c
    quotient = Algebra.from_products(q, field, quotient_products, f"{algebra.name}/Ann" if algebra.name else "")
    theta = Cocycle(tuple(BilinearForm.from_pairs(field, q, p) for p in pairs))
    logger.debug(f"split {algebra.name or 'algebra'} as a {s}-dimensional extension of {product_table(quotient)}")
    return AnnihilatorSplit(quotient, theta, basis)


class ExtensionReport(BaseModel):
    """Summary of a central extension, as printed by ``ccdalg extend``."""

    dim: int
    table: str
    cocycle: str
    cocycle_in_z2: bool
    ccd: bool
    jordan: bool
    ann_decomposition: bool
    in_ts: bool
    jordan_split: str


def extension_report(spec: ExtensionSpec) -> ExtensionReport:
    extended = central_extension(spec)
    basis = cohomology_basis(spec.base, "ccd")
    membership = membership_ts(spec.base, spec.cocycle, basis)
    return ExtensionReport(
        dim=extended.dim,
        table=product_table(extended),
        cocycle=spec.cocycle.label(),
        cocycle_in_z2=membership.cocycles,
        ccd=check_identity(extended, "ccd").holds,
        jordan=check_identity(extended, "jordan_linearized").holds,
        ann_decomposition=verify_ann_decomposition(spec),
        in_ts=membership.in_ts,
        jordan_split=membership.jordan_split,
    )


def parse_cocycle(text: str, base: Algebra, s: int | None = None) -> Cocycle:
    """Read a cocycle written as ``"i,j,coeff;…"``, components separated by ``|``.

    Indices are 1-based; the coefficients are evaluated in the base field.

    Raises:
        DimensionMismatchError: If an index is out of range or ``s`` does not
            match the number of components.
        ValueError: If a term is not of the form ``i,j,coeff``.
    """
    field, n = base.field, base.dim
    components = []
    for part in text.split("|"):
        pairs: dict[tuple[int, int], object] = {}
        for term in part.split(";"):
            term = term.strip()
            if not term:
                continue
            pieces = [p.strip() for p in term.split(",")]
            if len(pieces) != 3:
                raise ValueError(f"cannot read cocycle term {term!r}, expected i,j,coeff")
            i, j = int(pieces[0]), int(pieces[1])
            if not (1 <= i <= n and 1 <= j <= n):
                raise DimensionMismatchError(f"Δ{i}{j} outside dimension {n}")
            key = (min(i, j) - 1, max(i, j) - 1)
            pairs[key] = pairs.get(key, field.zero) + evaluate_expr(parse_coeff(pieces[2]), field)
        components.append(BilinearForm.from_pairs(field, n, pairs))
    if s is not None and s != len(components):
        raise DimensionMismatchError(f"cocycle has {len(components)} components, --ext-dim is {s}")
    return Cocycle(tuple(components))
