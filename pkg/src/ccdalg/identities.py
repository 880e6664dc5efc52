"""Polynomial identities checked on structure constants.

Multilinear identities are decided exactly on basis tuples. The almost-Jordan
identity is cubic in ``x``; it is checked through its full linearization plus
the original identity on the grid of coefficient vectors in ``{0, 1, -1, 2}``,
exhaustive up to dimension 4 and subsampled above.

Witnesses are 1-based basis index tuples, searched in lexicographic order.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Literal

from ccdalg.algebra import Algebra, BasisProducts, mul, basis_vector, g_form
from ccdalg.errors import FieldError
from ccdalg.fields import Field
from ccdalg.linalg import Vector, is_zero_vector

logger = logging.getLogger(__name__)

IdentityName = Literal["commutative", "ccd", "almost_jordan", "jordan_linearized", "g_symmetric"]
IDENTITIES: tuple[str, ...] = ("commutative", "ccd", "almost_jordan", "jordan_linearized", "g_symmetric")

_GRID_COEFFS = (0, 1, -1, 2)
_FULL_GRID_DIM = 4


@dataclass(frozen=True)
class IdentityResult:
    """Outcome of one identity check.

    Attributes:
        identity: Which identity was checked.
        holds: Whether it holds.
        witness: First falsifying basis tuple (1-based), or a ``("grid", y, coeffs)``
            triple for the sampled almost-Jordan check.
        heuristic: True when the check ran over a finite field.
    """

    identity: str
    holds: bool
    witness: tuple | None = None
    heuristic: bool = False


def _combo(field: Field, terms: list[tuple[int, Vector]], n: int) -> Vector:
    out = [field.zero] * n
    for c, v in terms:
        if c == 0:
            continue
        coeff = field(c)
        for k, x in enumerate(v):
            if not field.is_zero(x):
                out[k] = out[k] + coeff * x
    return tuple(out)


def _check_ccd(prod: BasisProducts) -> tuple | None:
    n, t = prod.n, prod.t
    for x, y, a, b in itertools.product(range(n), repeat=4):
        terms = [
            (1, t(x, y, a, b)),
            (1, t(x, b, a, y)),
            (1, t(y, b, a, x)),
            (-1, t(x, y, b, a)),
            (-1, t(x, a, b, y)),
            (-1, t(y, a, b, x)),
        ]
        if not is_zero_vector(prod.field, _combo(prod.field, terms, n)):
            return (x + 1, y + 1, a + 1, b + 1)
    return None


def _check_jordan_linearized(prod: BasisProducts) -> tuple | None:
    n, t, p2 = prod.n, prod.t, prod.p2
    algebra = prod.algebra
    for x, y, z, w in itertools.product(range(n), repeat=4):
        terms = [
            (1, mul(algebra, p2[x][y], p2[z][w])),
            (1, mul(algebra, p2[x][z], p2[y][w])),
            (1, mul(algebra, p2[x][w], p2[y][z])),
            (-1, t(x, z, y, w)),
            (-1, t(z, w, y, x)),
            (-1, t(w, x, y, z)),
        ]
        if not is_zero_vector(prod.field, _combo(prod.field, terms, n)):
            return (x + 1, y + 1, z + 1, w + 1)
    return None


def _check_almost_jordan_linearized(prod: BasisProducts) -> tuple | None:
    # Σ over orderings of (a, b, c) of 2((ya)b)c + y((ab)c) - 3(y(ab))c
    n, t = prod.n, prod.t
    for y in range(n):
        for a, b, c in itertools.combinations_with_replacement(range(n), 3):
            terms = []
            for p, q, r in itertools.permutations((a, b, c)):
                terms += [(2, t(y, p, q, r)), (1, t(p, q, r, y)), (-3, t(p, q, y, r))]
            total = _combo(prod.field, terms, n)
            if not is_zero_vector(prod.field, total):
                return (y + 1, a + 1, b + 1, c + 1)
    return None


def _grid_points(n: int, limit: int, seed: int) -> list[tuple[int, ...]]:
    """All coefficient vectors up to dimension 4, else ``limit`` of them drawn with ``seed``."""
    total = len(_GRID_COEFFS) ** n
    if n <= _FULL_GRID_DIM or total <= limit:
        return list(itertools.product(_GRID_COEFFS, repeat=n))
    indices = sorted(random.Random(seed).sample(range(total), limit))
    points = []
    for index in indices:
        digits = []
        for _ in range(n):
            index, d = divmod(index, len(_GRID_COEFFS))
            digits.append(_GRID_COEFFS[d])
        points.append(tuple(reversed(digits)))
    return points


def _check_almost_jordan_grid(algebra: Algebra, limit: int, seed: int) -> tuple | None:
    """``2((yx)x)x + y x³ = 3(y x²)x`` with ``y`` a basis vector and ``x`` on the grid."""
    field, n = algebra.field, algebra.dim
    two, three = field(2), field(3)
    for coeffs in _grid_points(n, limit, seed):
        x = tuple(field(c) for c in coeffs)
        x2 = mul(algebra, x, x)
        x3 = mul(algebra, x2, x)
        for y_index in range(n):
            y = basis_vector(algebra, y_index)
            left = mul(algebra, mul(algebra, mul(algebra, y, x), x), x)
            lhs = tuple(two * a + b for a, b in zip(left, mul(algebra, y, x3)))
            rhs = mul(algebra, mul(algebra, y, x2), x)
            if any(not field.is_zero(a - three * b) for a, b in zip(lhs, rhs)):
                return ("grid", y_index + 1, coeffs)
    return None


def _check_g_symmetric(algebra: Algebra) -> tuple | None:
    n = algebra.dim
    basis = [basis_vector(algebra, i) for i in range(n)]
    for x, y, z, w in itertools.product(range(n), repeat=4):
        if x >= y:
            continue
        left = g_form(algebra, basis[y], basis[x], basis[z], basis[w])
        right = g_form(algebra, basis[x], basis[y], basis[z], basis[w])
        if left != right:
            return (x + 1, y + 1, z + 1, w + 1)
    return None


def check_identity(algebra: Algebra, which: str, *, grid_limit: int = 64, seed: int = 0) -> IdentityResult:
    """Check one identity on an algebra with numeric structure constants.

    Args:
        algebra: The algebra; parametric families must be specialized first.
        which: One of :data:`IDENTITIES`.
        grid_limit: Grid points of the cubic almost-Jordan check above dimension 4;
            up to dimension 4 the whole grid of coefficients in ``{0, 1, -1, 2}`` is used.
        seed: Seed used to subsample the grid.

    Returns:
        The result with the first witness in lexicographic order, if any.

    Raises:
        ValueError: If ``which`` is not a known identity.
        FieldError: Over GF(2) and GF(3), where linearization loses information.
        UnevaluatedParametersError: For a parametric family.
    """
    if which not in IDENTITIES:
        raise ValueError(f"unknown identity {which!r}, expected one of {', '.join(IDENTITIES)}")
    field = algebra.field
    heuristic = False
    if field.characteristic:
        if field.characteristic < 5:
            raise FieldError(f"identity checks need characteristic 0 or at least 5, got {field}")
        heuristic = True
        logger.warning(f"checking {which} over {field}; the result is heuristic")

    if which == "commutative":
        # only i <= j is stored, so the table is symmetric by construction
        witness = None
    elif which == "ccd":
        witness = _check_ccd(BasisProducts(algebra))
    elif which == "jordan_linearized":
        witness = _check_jordan_linearized(BasisProducts(algebra))
    elif which == "almost_jordan":
        witness = _check_almost_jordan_linearized(BasisProducts(algebra))
        if witness is None:
            witness = _check_almost_jordan_grid(algebra, grid_limit, seed)
    else:
        witness = _check_g_symmetric(algebra)

    logger.debug(f"{algebra.name or 'algebra'}: {which} {'holds' if witness is None else f'fails at {witness}'}")
    return IdentityResult(which, witness is None, witness, heuristic)


def satisfies_jordan(algebra: Algebra) -> bool:
    """The linearized Jordan identity on basis tuples, in any characteristic.

    Unlike :func:`check_identity` this never refuses GF(2) or GF(3); there the
    flag only records the linearized identity.
    """
    return _check_jordan_linearized(BasisProducts(algebra)) is None
