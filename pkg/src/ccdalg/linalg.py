"""Dense exact linear algebra over :class:`~ccdalg.fields.Field`.

Vectors are plain tuples of field elements. Matrices and subspaces are immutable;
a subspace is always stored by its reduced row-echelon basis, which makes equality
of subspaces a syntactic comparison.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence

from ccdalg.errors import DimensionMismatchError, FieldMismatchError, SingularMapError
from ccdalg.fields import Element, Field

Vector = tuple


def zero_vector(field: Field, n: int) -> Vector:
    return (field.zero,) * n


def unit_vector(field: Field, n: int, i: int) -> Vector:
    """The ``i``-th (0-based) standard basis vector of length ``n``."""
    return tuple(field.one if k == i else field.zero for k in range(n))


def is_zero_vector(field: Field, v: Sequence[Element]) -> bool:
    return all(field.is_zero(x) for x in v)


def add(u: Sequence[Element], v: Sequence[Element]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Element], v: Sequence[Element]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c: Element, v: Sequence[Element]) -> Vector:
    return tuple(c * a for a in v)


def combine(field: Field, coeffs: Sequence[Element], vectors: Sequence[Sequence[Element]], n: int) -> Vector:
    """Return ``Σ coeffs[i] * vectors[i]`` as a vector of length ``n``."""
    out = [field.zero] * n
    for c, v in zip(coeffs, vectors):
        if field.is_zero(c):
            continue
        for k, x in enumerate(v):
            if not field.is_zero(x):
                out[k] += c * x
    return tuple(out)


def _rref(field: Field, rows: Iterable[Sequence[Element]], ncols: int) -> tuple[list[list[Element]], list[int]]:
    """Gauss-Jordan elimination; returns the nonzero rref rows and pivot columns."""
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        pivot = next((i for i in range(r, len(work)) if not field.is_zero(work[i][c])), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = field.one / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and not field.is_zero(work[i][c]):
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work[:r], pivots


@dataclass(frozen=True)
class Matrix:
    """A dense matrix over a single exact field.

    Attributes:
        field: The field all entries belong to.
        rows: Entries as a tuple of row tuples.
        ncols: Column count (kept explicitly so that 0-row matrices have a shape).
    """

    field: Field
    rows: tuple[Vector, ...]
    ncols: int

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence], ncols: int | None = None) -> "Matrix":
        """Build a matrix, coercing Python numbers and checking field membership.

        Raises:
            FieldMismatchError: If an entry belongs to another field.
            DimensionMismatchError: If the rows are ragged.
        """
        converted = tuple(tuple(field(x) for x in row) for row in rows)
        width = ncols if ncols is not None else (len(converted[0]) if converted else 0)
        for row in converted:
            if len(row) != width:
                raise DimensionMismatchError(f"ragged matrix: row of length {len(row)}, expected {width}")
        return cls(field, converted, width)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        height = nrows if nrows is not None else (len(columns[0]) if columns else 0)
        return cls.from_rows(field, [[col[i] for col in columns] for i in range(height)], len(columns))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, tuple(unit_vector(field, n, i) for i in range(n)), n)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, tuple(zero_vector(field, ncols) for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, index: tuple[int, int]) -> Element:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(self.columns()), self.nrows)

    def _check_field(self, other: "Matrix") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"matrices over {self.field} and {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.ncols != other.nrows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        rows = tuple(
            tuple(sum((a * b for a, b in zip(row, col)), self.field.zero) for col in cols) for row in self.rows
        )
        return Matrix(self.field, rows, other.ncols)

    def apply(self, v: Sequence[Element]) -> Vector:
        """Matrix-vector product ``M·v``."""
        if len(v) != self.ncols:
            raise DimensionMismatchError(f"vector of length {len(v)} for a {self.shape} matrix")
        return tuple(sum((a * b for a, b in zip(row, v)), self.field.zero) for row in self.rows)

    def rank(self) -> int:
        return len(_rref(self.field, self.rows, self.ncols)[1])

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.ncols

    def inverse(self) -> "Matrix":
        """Gauss-Jordan inverse.

        Raises:
            SingularMapError: If the matrix is not square or not invertible.
        """
        n = self.nrows
        if n != self.ncols:
            raise SingularMapError(f"non-square {self.shape} matrix has no inverse")
        augmented = [list(row) + list(unit_vector(self.field, n, i)) for i, row in enumerate(self.rows)]
        reduced, pivots = _rref(self.field, augmented, 2 * n)
        if pivots[:n] != list(range(n)) or len(reduced) < n:
            raise SingularMapError("matrix is singular")
        return Matrix(self.field, tuple(tuple(row[n:]) for row in reduced), n)

    def map_entries(self, field: Field, fn) -> "Matrix":
        return Matrix(field, tuple(tuple(fn(x) for x in row) for row in self.rows), self.ncols)

    def key(self) -> tuple:
        return tuple(tuple(self.field.key(x) for x in row) for row in self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.field, self.key()))

    def to_strings(self) -> list[list[str]]:
        return [[self.field.to_str(x) for x in row] for row in self.rows]


def echelonize(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form of ``m`` and its rank.

    Zero rows are kept at the bottom so the shape is preserved.

    Args:
        m: Any matrix.

    Returns:
        The pair ``(rref(m), rank(m))``.
    """
    reduced, pivots = _rref(m.field, m.rows, m.ncols)
    padding = [zero_vector(m.field, m.ncols)] * (m.nrows - len(reduced))
    rows = tuple(tuple(r) for r in reduced) + tuple(padding)
    return Matrix(m.field, rows, m.ncols), len(pivots)


@dataclass(frozen=True)
class SubspaceBasis:
    """A linear subspace stored by its reduced row-echelon basis.

    Attributes:
        field: The ground field.
        ambient_dim: Dimension of the ambient space.
        basis: The rref basis; rows are independent and pivots increase.
        pivots: Pivot column of each basis row.
    """

    field: Field
    ambient_dim: int
    basis: Matrix
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence[Element]]) -> "SubspaceBasis":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        reduced, pivots = _rref(field, vectors, ambient_dim)
        basis = Matrix(field, tuple(tuple(r) for r in reduced), ambient_dim)
        return cls(field, ambient_dim, basis, tuple(pivots))

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        return cls.span(field, ambient_dim, [])

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        return cls.span(field, ambient_dim, Matrix.identity(field, ambient_dim).rows)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def vectors(self) -> tuple[Vector, ...]:
        return self.basis.rows

    def non_pivots(self) -> tuple[int, ...]:
        """Coordinates that are not pivots, in increasing order."""
        return tuple(c for c in range(self.ambient_dim) if c not in self.pivots)

    def _check(self, other: "SubspaceBasis") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"subspaces over {self.field} and {other.field}")
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError(
                f"subspaces of ambient dimensions {self.ambient_dim} and {other.ambient_dim}"
            )

    def reduce(self, v: Sequence[Element]) -> Vector:
        """Eliminate the pivot coordinates of ``v`` using the basis rows.

        The result is zero iff ``v`` lies in the subspace, and it is the same for
        all vectors of one coset.
        """
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        out = list(v)
        for row, c in zip(self.vectors, self.pivots):
            f = out[c]
            if not self.field.is_zero(f):
                out = [x - f * y for x, y in zip(out, row)]
        return tuple(out)

    def contains(self, v: Sequence[Element]) -> bool:
        return is_zero_vector(self.field, self.reduce(v))

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.vectors)

    def coordinates(self, v: Sequence[Element]) -> Vector | None:
        """Coordinates of ``v`` in the rref basis, or ``None`` if ``v`` is outside."""
        if not self.contains(v):
            return None
        return tuple(v[c] for c in self.pivots)

    def sum(self, other: "SubspaceBasis") -> "SubspaceBasis":
        self._check(other)
        return SubspaceBasis.span(self.field, self.ambient_dim, self.vectors + other.vectors)

    def intersection(self, other: "SubspaceBasis") -> "SubspaceBasis":
        self._check(other)
        if not self.dim or not other.dim:
            return SubspaceBasis.zero(self.field, self.ambient_dim)
        stacked = Matrix(self.field, self.vectors + other.vectors, self.ambient_dim)
        relations = kernel(stacked.transpose())
        vectors = [combine(self.field, rel[: self.dim], self.vectors, self.ambient_dim) for rel in relations.vectors]
        return SubspaceBasis.span(self.field, self.ambient_dim, vectors)

    def key(self) -> tuple:
        return (self.ambient_dim, self.basis.key())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.field == other.field and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.field, self.key()))


def kernel(m: Matrix) -> SubspaceBasis:
    """Basis of ``{v : m·v = 0}``; its dimension is ``cols(m) - rank(m)``."""
    field, n = m.field, m.ncols
    reduced, pivots = _rref(field, m.rows, n)
    vectors = []
    for free in (c for c in range(n) if c not in pivots):
        v = [field.zero] * n
        v[free] = field.one
        for row, c in zip(reduced, pivots):
            v[c] = -row[free]
        vectors.append(v)
    return SubspaceBasis.span(field, n, vectors)


def solve(m: Matrix, b: Sequence[Element]) -> Vector | None:
    """One solution ``x`` of ``m·x = b``, or ``None`` if the system is inconsistent."""
    field, n = m.field, m.ncols
    if len(b) != m.nrows:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for {m.shape} matrix")
    augmented = [list(row) + [rhs] for row, rhs in zip(m.rows, b)]
    reduced, pivots = _rref(field, augmented, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [field.zero] * n
    for row, c in zip(reduced, pivots):
        x[c] = row[n]
    return tuple(x)
