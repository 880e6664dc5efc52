"""Homomorphisms fixed by the images of generators.

A nilpotent algebra is generated by any complement of ``A²``. A
:class:`GeneratorProgram` records how a basis of the algebra is reached from
the basis vectors spanning such a complement by repeated products, so that a
homomorphism out of the algebra is determined by where those vectors go.
Enumerating automorphisms and searching for isomorphisms both reduce to
enumerating generator images.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

from ccdalg.algebra import Algebra, mul, product_space
from ccdalg.errors import DimensionMismatchError, FieldMismatchError
from ccdalg.fields import Element, Field
from ccdalg.linalg import Matrix, SubspaceBasis, Vector, unit_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorProgram:
    """A spanning sequence of vectors built from generators by products.

    Attributes:
        algebra: The source algebra.
        vectors: Basis of the algebra; entry ``k`` is either a free vector or
            the product of two earlier entries.
        recipe: ``None`` for a free vector, else the pair of earlier positions.
        generators: Number of free vectors spanning a complement of ``A²``;
            they come first. Any further free vectors only occur when the
            algebra is not nilpotent.
        basis_inverse: Inverse of the matrix whose columns are ``vectors``.
    """

    algebra: Algebra
    vectors: tuple[Vector, ...]
    recipe: tuple[tuple[int, int] | None, ...]
    generators: int
    basis_inverse: Matrix

    @property
    def free(self) -> int:
        return sum(1 for r in self.recipe if r is None)

    def extend(self, target: Algebra, images: Sequence[Sequence[Element]]) -> Matrix:
        """The linear map sending the free vectors to ``images`` and respecting the recipe.

        The result is a homomorphism exactly when it respects every basis product,
        which :func:`is_homomorphism` decides.
        """
        if len(images) != self.free:
            raise DimensionMismatchError(f"expected {self.free} generator images, got {len(images)}")
        out: list[Vector] = []
        pending = iter(images)
        for step in self.recipe:
            if step is None:
                out.append(tuple(next(pending)))
            else:
                a, b = step
                out.append(mul(target, out[a], out[b]))
        return Matrix.from_columns(target.field, out, target.dim) @ self.basis_inverse


def generator_program(algebra: Algebra) -> GeneratorProgram:
    """Build the program of ``algebra``, generators first in coordinate order."""
    field, n = algebra.field, algebra.dim
    vectors = [unit_vector(field, n, c) for c in square(algebra).non_pivots()]
    recipe: list[tuple[int, int] | None] = [None] * len(vectors)
    generators = len(vectors)
    span = SubspaceBasis.span(field, n, vectors)
    while span.dim < n:
        grown = False
        for a, b in itertools.combinations_with_replacement(range(len(vectors)), 2):
            v = mul(algebra, vectors[a], vectors[b])
            if not span.contains(v):
                vectors.append(v)
                recipe.append((a, b))
                span = span.sum(SubspaceBasis.span(field, n, [v]))
                grown = True
                break
        if not grown:
            # not generated by a complement of A²: add the first missing coordinate
            c = next(c for c in range(n) if not span.contains(unit_vector(field, n, c)))
            vectors.append(unit_vector(field, n, c))
            recipe.append(None)
            span = span.sum(SubspaceBasis.span(field, n, [vectors[-1]]))
    inverse = Matrix.from_columns(field, vectors, n).inverse()
    return GeneratorProgram(algebra, tuple(vectors), tuple(recipe), generators, inverse)


def is_homomorphism(source: Algebra, target: Algebra, m: Matrix) -> bool:
    """Whether ``m(e_i e_j) = m(e_i) m(e_j)`` for all basis pairs ``i ≤ j``."""
    if m.shape != (target.dim, source.dim):
        raise DimensionMismatchError(f"map of shape {m.shape} from dimension {source.dim} to {target.dim}")
    cols = m.columns()
    for i in range(source.dim):
        for j in range(i, source.dim):
            if m.apply(source.product_vector(i, j)) != mul(target, cols[i], cols[j]):
                return False
    return True


def check_same_field(a: Algebra, b: Algebra) -> Field:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"algebras of dimensions {a.dim} and {b.dim}")
    if a.field != b.field:
        raise FieldMismatchError(f"algebras over {a.field} and {b.field}")
    return a.field


def independent_images(
    field: Field, n: int, modulo: SubspaceBasis, count: int, pool: Sequence[Vector] | None = None
) -> Iterator[tuple[Vector, ...]]:
    """Tuples of ``count`` vectors from ``pool`` that are independent modulo ``modulo``.

    ``pool`` defaults to every vector of ``field^n``.
    """
    candidates = list(pool) if pool is not None else list(itertools.product(field.elements(), repeat=n))

    def extend(prefix: list[Vector], span: SubspaceBasis) -> Iterator[tuple[Vector, ...]]:
        if len(prefix) == count:
            yield tuple(prefix)
            return
        for v in candidates:
            if not span.contains(v):
                yield from extend(prefix + [tuple(v)], span.sum(SubspaceBasis.span(field, n, [v])))

    yield from extend([], modulo)


def square(algebra: Algebra) -> SubspaceBasis:
    full = SubspaceBasis.full(algebra.field, algebra.dim)
    return product_space(algebra, full, full)


def candidate_count(program: GeneratorProgram, target: Algebra) -> int:
    """Size of the assignment space :func:`free_assignments` walks over the whole of ``target``."""
    p, n = target.field.characteristic, target.dim
    square_dim = square(target).dim
    total = 1
    for k in range(program.generators):
        total *= max(p**n - p ** (square_dim + k), 0)
    return total * (p**n) ** (program.free - program.generators)


def homomorphisms_from(
    program: GeneratorProgram, target: Algebra, assignments: Iterator[Sequence[Vector]]
) -> Iterator[Matrix]:
    """Invertible homomorphisms obtained from generator assignments, in assignment order."""
    source = program.algebra
    for images in assignments:
        m = program.extend(target, images)
        if not m.is_invertible():
            continue
        if is_homomorphism(source, target, m):
            yield m


def free_assignments(
    program: GeneratorProgram, target: Algebra, pool: Sequence[Vector] | None = None
) -> Iterator[tuple[Vector, ...]]:
    """Every assignment of the free vectors whose generator part is independent modulo ``target²``."""
    field, n = target.field, target.dim
    extra = program.free - program.generators
    everything = list(itertools.product(field.elements(), repeat=n)) if extra else []
    for head in independent_images(field, n, square(target), program.generators, pool):
        for tail in itertools.product(everything, repeat=extra):
            yield head + tuple(tuple(v) for v in tail)

