"""Basis-independent invariants used to tell algebras apart."""

import logging

from pydantic import BaseModel, ConfigDict

from ccdalg.algebra import Algebra, annihilator, left_multiplication, power_filtration
from ccdalg.fields import Field, rationals
from ccdalg.identities import check_identity
from ccdalg.linalg import Matrix, SubspaceBasis, kernel

logger = logging.getLogger(__name__)


class Fingerprint(BaseModel):
    """Invariants of an algebra; isomorphic algebras have equal fingerprints.

    ``generic_rank`` is the largest rank of a multiplication operator ``L_x``
    and ``generic_square_rank`` the largest rank of ``L_x`` for ``x ∈ A²``.
    Both are computed over a rational function field and are only available
    over ``QQ``. Identity flags are ``None`` where identity checks are not
    offered (characteristic 2 and 3).
    """

    model_config = ConfigDict(frozen=True)

    filtration: tuple[int, ...]
    ann_dim: int
    square_dim: int
    ann_square_dim: int
    square_annihilator_dim: int
    generic_rank: int | None
    generic_square_rank: int | None
    jordan: bool | None
    ccd: bool | None


def _generic_rank(field: Field, operators: list[Matrix], n: int) -> int:
    """Rank of ``Σ t_i operators[i]`` over ``field(t_0, …)``."""
    if not operators:
        return 0
    functions = field.domain.frac_field(*(f"t{i}" for i in range(len(operators))))
    ground = functions.field.ground_new
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            entry = functions.zero
            for gen, op in zip(functions.gens, operators):
                if not field.is_zero(op[r, c]):
                    entry = entry + gen * ground(op[r, c])
            row.append(entry)
        rows.append(tuple(row))
    generic = Field(f"{field.descriptor}(t)", functions, 0)
    return Matrix(generic, tuple(rows), n).rank()


def _square_annihilator(algebra: Algebra, square: SubspaceBasis) -> SubspaceBasis:
    """``{x : x·A² = 0}``."""
    field, n = algebra.field, algebra.dim
    rows = []
    for v in square.vectors:
        rows.extend(left_multiplication(algebra, v).rows)
    if not rows:
        return SubspaceBasis.full(field, n)
    return kernel(Matrix(field, tuple(rows), n))


def fingerprint(algebra: Algebra, *, with_identities: bool = True) -> Fingerprint:
    """Compute the invariant tuple of a numeric algebra.

    Args:
        algebra: An algebra with evaluated parameters.
        with_identities: Also record the Jordan and CCD flags.
    """
    field, n = algebra.field, algebra.dim
    chain = power_filtration(algebra)
    square = chain[1] if len(chain) > 1 else chain[0]
    ann = annihilator(algebra)
    generic_rank = generic_square_rank = None
    if field == rationals():
        basis_ops = [left_multiplication(algebra, e) for e in SubspaceBasis.full(field, n).vectors]
        generic_rank = _generic_rank(field, basis_ops, n)
        square_ops = [left_multiplication(algebra, v) for v in square.vectors]
        generic_square_rank = _generic_rank(field, square_ops, n)
    jordan = ccd = None
    if with_identities and (not field.characteristic or field.characteristic >= 5):
        jordan = check_identity(algebra, "jordan_linearized").holds
        ccd = check_identity(algebra, "ccd").holds
    result = Fingerprint(
        filtration=tuple(s.dim for s in chain),
        ann_dim=ann.dim,
        square_dim=square.dim,
        ann_square_dim=ann.intersection(square).dim,
        square_annihilator_dim=_square_annihilator(algebra, square).dim,
        generic_rank=generic_rank,
        generic_square_rank=generic_square_rank,
        jordan=jordan,
        ccd=ccd,
    )
    logger.debug(f"fingerprint of {algebra.name or 'algebra'}: {result}")
    return result
