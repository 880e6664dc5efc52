"""Automorphisms, their action on cocycles, and orbits on Grassmannians of ``H²``.

``Aut(A)`` acts on a cocycle by ``(φθ)(x, y) = θ(φx, φy)``; on Gram matrices this
is ``φᵀ G φ``. Orbits of ``s``-dimensional subspaces of ``H²`` inside ``T_s``
correspond to isomorphism classes of ``s``-dimensional central extensions.
Over small prime fields the whole picture is computed exhaustively.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from pydantic import BaseModel

from ccdalg.algebra import Algebra
from ccdalg.cohomology import BilinearForm, Cocycle, CohomologyBasis, cohomology_basis, delta_pairs, membership_ts
from ccdalg.errors import DimensionMismatchError, FieldMismatchError, GuardExceededError, NotAnAutomorphismError
from ccdalg.expr import CoeffExpr, Var, evaluate as evaluate_expr, show
from ccdalg.extensions import ExtensionSpec, central_extension
from ccdalg.fields import Element, Field, rationals
from ccdalg.invariants import Fingerprint, fingerprint
from ccdalg.linalg import Matrix, SubspaceBasis, combine
from ccdalg.maps import candidate_count, free_assignments, generator_program, homomorphisms_from, is_homomorphism

logger = logging.getLogger(__name__)

# largest dimension enumerated exhaustively, per prime
AUTOMORPHISM_GUARDS: dict[int, int] = {2: 4, 3: 4, 5: 3, 7: 3}

_SAMPLE_VALUES = tuple(range(-4, 5))
_NONZERO_VALUES = (-3, -2, -1, 1, 2, 3)


def is_automorphism(algebra: Algebra, phi: Matrix) -> bool:
    """Whether ``phi`` is invertible and ``φ(e_i e_j) = φ(e_i) φ(e_j)`` for all ``i ≤ j``.

    Raises:
        DimensionMismatchError: If ``phi`` is not ``n × n``.
        FieldMismatchError: If ``phi`` lives over another field.
    """
    n = algebra.dim
    if phi.shape != (n, n):
        raise DimensionMismatchError(f"map of shape {phi.shape} for a {n}-dimensional algebra")
    if phi.field != algebra.field:
        raise FieldMismatchError(f"map over {phi.field} for an algebra over {algebra.field}")
    return phi.is_invertible() and is_homomorphism(algebra, algebra, phi)


def _pull_back(phi: Matrix, form: BilinearForm) -> BilinearForm:
    gram = phi.transpose() @ form.gram() @ phi
    return BilinearForm.from_pairs(form.ring, form.dim, {(i, j): gram[i, j] for i, j in delta_pairs(form.dim)})


def act_on_cocycle(algebra: Algebra, phi: Matrix, theta: Cocycle | BilinearForm) -> Cocycle | BilinearForm:
    """The cocycle ``(φθ)(x, y) = θ(φx, φy)``, componentwise.

    Raises:
        NotAnAutomorphismError: If ``phi`` is not an automorphism of ``algebra``.
    """
    if not is_automorphism(algebra, phi):
        raise NotAnAutomorphismError(f"map is not an automorphism of {algebra.name or 'the algebra'}")
    if isinstance(theta, BilinearForm):
        return _pull_back(phi, theta)
    return Cocycle(tuple(_pull_back(phi, f) for f in theta.components))


@dataclass(frozen=True)
class MatrixGenerator:
    """One symbolic generator of a constrained automorphism family."""

    variables: tuple[str, ...]
    matrix: tuple[tuple[CoeffExpr, ...], ...]


@dataclass(frozen=True)
class AutomorphismFamily:
    """A parametrized automorphism matrix ``φ`` stated for a base algebra.

    Attributes:
        name: Family name, e.g. ``C3s_03.phi2``.
        algebra: Catalog name of the base algebra.
        variables: Free matrix variables. For a constrained family these are
            read back from the sampled matrices.
        matrix: Symbolic entries; column ``j`` is the image of ``e_j``.
        derived: Variables defined by expressions in the free ones, such as
            ``x = m^2`` for a family with ``r² = x³``.
        constraints: Expressions that vanish on the family.
        generators: For a constrained family, symbolic automorphisms whose
            random products sample it.
        word_length: Number of generators multiplied per sample.
        expect_automorphism: False for a matrix recorded as printed that is
            known not to be an automorphism.
        notes: Free text, e.g. how a printed matrix was read.
    """

    name: str
    algebra: str
    variables: tuple[str, ...]
    matrix: tuple[tuple[CoeffExpr, ...], ...]
    derived: tuple[tuple[str, CoeffExpr], ...] = ()
    constraints: tuple[CoeffExpr, ...] = ()
    generators: tuple[MatrixGenerator, ...] = ()
    word_length: int = 4
    expect_automorphism: bool = True
    notes: str = ""

    @property
    def constrained(self) -> bool:
        return bool(self.generators)


@dataclass(frozen=True)
class FamilySample:
    matrix: Matrix
    assignment: dict[str, Element]


def _evaluate_matrix(entries: Sequence[Sequence[CoeffExpr]], values: Mapping[str, object], field: Field) -> Matrix:
    rows = tuple(tuple(evaluate_expr(e, field, values) for e in row) for row in entries)
    return Matrix(field, rows, len(entries[0]) if entries else 0)


def family_matrix(
    family: AutomorphismFamily, assignment: Mapping[str, object], field: Field | None = None
) -> Matrix:
    """Evaluate the family at a full assignment of its variables (and any algebra parameters)."""
    field = field or rationals()
    values = dict(assignment)
    for name, node in family.derived:
        values[name] = evaluate_expr(node, field, values)
    return _evaluate_matrix(family.matrix, values, field)


def sample_family(
    family: AutomorphismFamily,
    rng: random.Random,
    field: Field | None = None,
    bindings: Mapping[str, object] | None = None,
) -> FamilySample:
    """One sample of the family: random small integers for free families, a generator word otherwise."""
    field = field or rationals()
    if family.constrained:
        return sample_constrained_automorphisms(family, rng, 1, field)[0]
    values: dict[str, Element] = {k: field(v) for k, v in (bindings or {}).items()}
    for name in family.variables:
        values[name] = field(rng.choice(_SAMPLE_VALUES))
    for name, node in family.derived:
        values[name] = evaluate_expr(node, field, values)
    return FamilySample(_evaluate_matrix(family.matrix, values, field), values)


def _read_variables(family: AutomorphismFamily, m: Matrix) -> dict[str, Element]:
    """Read each variable off a position where the family matrix holds it bare."""
    values = {}
    for name in family.variables:
        spot = next(
            ((r, c) for r, row in enumerate(family.matrix) for c, e in enumerate(row) if e == Var(name)), None
        )
        if spot is None:
            raise ValueError(f"{family.name}: variable {name!r} does not appear as a bare matrix entry")
        values[name] = m[spot]
    return values


def sample_constrained_automorphisms(
    family: AutomorphismFamily, rng: random.Random, count: int, field: Field | None = None
) -> list[FamilySample]:
    """Points of a constrained family, as random words in its generators.

    Each word multiplies ``word_length`` generators evaluated at random nonzero
    integers; the family variables are then read off the product.

    Raises:
        ValueError: If the family has no generators.
    """
    field = field or rationals()
    if not family.generators:
        raise ValueError(f"{family.name} is not a constrained family")
    n = len(family.matrix)
    samples = []
    for _ in range(count):
        word = Matrix.identity(field, n)
        for _ in range(family.word_length):
            generator = rng.choice(family.generators)
            values = {v: rng.choice(_NONZERO_VALUES) for v in generator.variables}
            word = word @ _evaluate_matrix(generator.matrix, values, field)
        samples.append(FamilySample(word, _read_variables(family, word)))
    return samples


class FamilyCheck(BaseModel):
    """Outcome of :func:`verify_automorphism_family`."""

    family: str
    samples: int
    skipped: int
    passed: bool
    witness: dict[str, str] | None = None


def verify_automorphism_family(
    algebra: Algebra,
    family: AutomorphismFamily,
    *,
    samples: int = 20,
    seed: int = 0,
    bindings: Mapping[str, object] | None = None,
) -> FamilyCheck:
    """Check a stated automorphism family at sampled points.

    Singular samples are skipped and redrawn. A constrained sample must also
    satisfy the constraints and match the symbolic matrix at the values read
    off it. For a family recorded with ``expect_automorphism=False`` the check
    passes once a sample that is not an automorphism is found.

    Args:
        algebra: The numeric base algebra, specialized with ``bindings``.
        family: The family.
        samples: Number of non-singular samples.
        seed: Seed of the sampler.
        bindings: Values of algebra parameters appearing in the matrix.
    """
    field = algebra.field
    rng = random.Random(seed)
    checked = skipped = 0
    witness = None
    while checked < samples and skipped < 10 * samples:
        sample = sample_family(family, rng, field, bindings)
        if not sample.matrix.is_invertible():
            skipped += 1
            logger.warning(f"{family.name}: singular sample skipped")
            continue
        checked += 1
        ok = is_automorphism(algebra, sample.matrix)
        if family.constrained:
            values = {**{k: field(v) for k, v in (bindings or {}).items()}, **sample.assignment}
            ok = ok and all(field.is_zero(evaluate_expr(c, field, values)) for c in family.constraints)
            ok = ok and family_matrix(family, values, field) == sample.matrix
        if not ok:
            witness = {k: field.to_str(v) for k, v in sample.assignment.items()}
            break
    if family.expect_automorphism:
        passed = witness is None and checked == samples
    else:
        passed = witness is not None
    logger.debug(f"{family.name}: {checked} samples, {skipped} skipped, {'pass' if passed else 'FAIL'}")
    return FamilyCheck(family=family.name, samples=checked, skipped=skipped, passed=passed, witness=witness)


@dataclass(frozen=True)
class StatedAction:
    """One stated action formula ``α*_k``.

    Attributes:
        name: Label of the coefficient, e.g. ``a1``.
        position: Where ``α*_k`` sits in ``φᵀ M φ``, an expression in the Gram
            entries ``m11 … mnn`` (1-based), e.g. ``m23 - m11``.
        formula: The stated polynomial in the matrix variables and ``a1, a2, …``.
    """

    name: str
    position: CoeffExpr
    formula: CoeffExpr


@dataclass(frozen=True)
class ActionTable:
    """A stated action of ``Aut(A)`` on ``θ = Σ α_i ∇_i``.

    Attributes:
        name: Table name.
        algebra: Catalog name of the base algebra.
        family: Name of the automorphism family ``φ``.
        nablas: The forms ``∇_i``, over ``QQ``.
        alphas: Names of the coefficients of the ``∇_i``, in order.
        fixed: Coefficients held at a fixed value, e.g. ``(("a9", "1"),)``.
        stated: The stated formulas.
    """

    name: str
    algebra: str
    family: str
    nablas: tuple[BilinearForm, ...]
    alphas: tuple[str, ...]
    fixed: tuple[tuple[str, str], ...]
    stated: tuple[StatedAction, ...]


class ActionCheck(BaseModel):
    """Outcome of :func:`verify_action_formulas`."""

    table: str
    points: int
    skipped: int
    passed: bool
    failures: list[str]
    witness: dict[str, str] | None = None


def verify_action_formulas(
    algebra: Algebra,
    table: ActionTable,
    family: AutomorphismFamily,
    *,
    points: int = 120,
    seed: int = 0,
) -> ActionCheck:
    """Compare ``φᵀ M φ`` with the stated ``α*`` polynomials on sampled points.

    Matrix variables and the free ``α`` are drawn from small integers (the
    constrained families through their generators). Singular samples are
    skipped and redrawn with a warning.
    """
    field = algebra.field
    n = algebra.dim
    rng = random.Random(seed)
    fixed = {name: field(value) for name, value in table.fixed}
    failures: dict[str, dict[str, str]] = {}
    checked = skipped = 0
    while checked < points and skipped < 10 * points:
        sample = sample_family(family, rng, field)
        if not sample.matrix.is_invertible():
            skipped += 1
            logger.warning(f"{table.name}: singular sample skipped")
            continue
        alphas = {name: fixed.get(name, field(rng.choice(_SAMPLE_VALUES))) for name in table.alphas}
        theta = BilinearForm.zero(field, n)
        for name, nabla in zip(table.alphas, table.nablas):
            theta = theta + nabla.scaled(alphas[name])
        image = act_on_cocycle(algebra, sample.matrix, theta)
        gram = {f"m{i + 1}{j + 1}": image.entry(i, j) for i in range(n) for j in range(n)}
        values = {**sample.assignment, **alphas}
        for stated in table.stated:
            lhs = evaluate_expr(stated.position, field, gram)
            rhs = evaluate_expr(stated.formula, field, values)
            if not field.is_zero(lhs - rhs) and stated.name not in failures:
                failures[stated.name] = {k: field.to_str(v) for k, v in values.items()}
        checked += 1
    passed = not failures and checked == points
    witness = next(iter(failures.values()), None)
    logger.debug(f"{table.name}: {checked} points, {skipped} skipped, failures {sorted(failures)}")
    return ActionCheck(
        table=table.name, points=checked, skipped=skipped, passed=passed, failures=sorted(failures), witness=witness
    )


def corrupt_formula(table: ActionTable, name: str, formula: CoeffExpr) -> ActionTable:
    """A copy of ``table`` with the formula of ``name`` replaced."""
    stated = tuple(StatedAction(s.name, s.position, formula) if s.name == name else s for s in table.stated)
    return ActionTable(table.name, table.algebra, table.family, table.nablas, table.alphas, table.fixed, stated)


def enumerate_automorphisms(algebra: Algebra, *, limit: int | None = None) -> list[Matrix]:
    """All automorphisms of an algebra over a small prime field.

    Every automorphism is fixed by the images of the generators, which must stay
    independent modulo ``A²``; candidates are enumerated that way and checked.

    Args:
        algebra: A numeric algebra over GF(p).
        limit: Optional cap on the number of candidate generator assignments.

    Raises:
        GuardExceededError: Beyond dimension 4 over GF(2) and GF(3), dimension 3
            over GF(5) and GF(7), over other fields, or beyond ``limit``.
    """
    field, n = algebra.field, algebra.dim
    bound = AUTOMORPHISM_GUARDS.get(field.characteristic)
    if bound is None or n > bound:
        raise GuardExceededError(f"automorphism enumeration of dimension {n} over {field} is not supported")
    program = generator_program(algebra)
    count = candidate_count(program, algebra)
    if limit is not None and count > limit:
        raise GuardExceededError(f"{count} candidate generator assignments exceed the limit {limit}")
    found = list(homomorphisms_from(program, algebra, free_assignments(program, algebra)))
    logger.info(f"|Aut({algebra.name or 'A'})| = {len(found)} over {field}, from {count} candidates")
    return found


def gaussian_binomial(m: int, s: int, q: int) -> int:
    """Number of ``s``-dimensional subspaces of ``GF(q)^m``."""
    if s < 0 or s > m:
        return 0
    num = den = 1
    for i in range(s):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def grassmannian(m: int, s: int, field: Field) -> list[SubspaceBasis]:
    """All ``s``-dimensional subspaces of ``field^m`` in reduced echelon form.

    Subspaces are listed by pivot pattern in lexicographic order; within a
    pattern the free entries (right of each pivot, outside pivot columns) run
    over all field elements.
    """
    elements = list(field.elements())
    out = []
    for pivots in itertools.combinations(range(m), s):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, m) if c not in pivots]
        for values in itertools.product(elements, repeat=len(free)):
            rows = [[field.zero] * m for _ in range(s)]
            for r, p in enumerate(pivots):
                rows[r][p] = field.one
            for (r, c), v in zip(free, values):
                rows[r][c] = v
            basis = Matrix(field, tuple(tuple(row) for row in rows), m)
            out.append(SubspaceBasis(field, m, basis, pivots))
    return out


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in items}
        self.size = {x: 1 for x in items}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        self.size[x] += self.size[y]
        del self.rank[y]

    def reps(self):
        return set(self.rank)

    def __len__(self):
        return len(self.rank)


def induced_action(algebra: Algebra, basis: CohomologyBasis, phi: Matrix) -> list[tuple[Element, ...]]:
    """Images of the ``h2`` basis under ``φ``, in ``h2`` coordinates (one tuple per basis vector)."""
    images = []
    for form in basis.forms():
        pulled = _pull_back(phi, form)
        coords = basis.h2.coordinates(basis.b2.reduce(pulled.coeffs))
        if coords is None:
            raise NotAnAutomorphismError("the action does not preserve the cocycle space")
        images.append(coords)
    return images


def _image(field: Field, action: Sequence[Sequence[Element]], point: SubspaceBasis) -> SubspaceBasis:
    d = point.ambient_dim
    vectors = [combine(field, w, action, d) for w in point.vectors]
    return SubspaceBasis.span(field, d, vectors)


def subspace_cocycle(basis: CohomologyBasis, point: SubspaceBasis) -> Cocycle:
    """The cocycle whose components are the ``h2`` combinations given by the rows of ``point``."""
    forms = basis.forms()
    field = basis.h2.field
    size = basis.h2.ambient_dim
    n = forms[0].dim if forms else 0
    components = []
    for w in point.vectors:
        coeffs = combine(field, w, [f.coeffs for f in forms], size)
        components.append(BilinearForm(field, n, coeffs))
    return Cocycle(tuple(components))


class OrbitSummary(BaseModel):
    """One orbit as reported by ``ccdalg orbits``."""

    representative: list[str]
    size: int
    stabilizer: int
    tag: str
    fingerprint: Fingerprint


@dataclass(frozen=True)
class Orbit:
    """An ``Aut(A)``-orbit on ``T_s``.

    Attributes:
        representative: Smallest member by canonical key, in ``h2`` coordinates.
        cocycle: The cocycle of the representative.
        members: All members, sorted by canonical key.
        stabilizer: Number of automorphisms fixing the representative.
        tag: ``R`` if the classes come from Jordan cocycles, else ``U``.
        fingerprint: Invariants of the extension by the representative.
    """

    representative: SubspaceBasis
    cocycle: Cocycle
    members: tuple[SubspaceBasis, ...]
    stabilizer: int
    tag: str
    fingerprint: Fingerprint

    @property
    def size(self) -> int:
        return len(self.members)

    def summary(self) -> OrbitSummary:
        return OrbitSummary(
            representative=[f.label() for f in self.cocycle.components],
            size=self.size,
            stabilizer=self.stabilizer,
            tag=self.tag,
            fingerprint=self.fingerprint,
        )


@dataclass(frozen=True)
class OrbitCensus:
    """All orbits of ``Aut(A)`` on ``T_s(A)`` over a finite field."""

    algebra: Algebra
    s: int
    basis: CohomologyBasis
    automorphisms: int
    points: int
    ts_points: int
    orbits: tuple[Orbit, ...]

    @property
    def consistent(self) -> bool:
        """Orbit-stabilizer: ``|orbit| · |stabilizer| = |Aut|`` for every orbit."""
        return all(o.size * o.stabilizer == self.automorphisms for o in self.orbits)


def orbit_partition(
    algebra: Algebra, s: int, *, automorphisms: Sequence[Matrix] | None = None, limit: int | None = None
) -> OrbitCensus:
    """Partition ``T_s(A)`` into ``Aut(A)``-orbits over GF(p).

    Subspaces are hashed by their canonical echelon form and merged with a
    union-find structure under every automorphism.

    Args:
        algebra: A numeric algebra over a small prime field.
        s: Dimension of the extension.
        automorphisms: Precomputed ``Aut(A)``; enumerated when omitted.
        limit: Cap passed to :func:`enumerate_automorphisms`.

    Raises:
        GuardExceededError: If the automorphism enumeration is out of range.
    """
    field = algebra.field
    autos = list(automorphisms) if automorphisms is not None else enumerate_automorphisms(algebra, limit=limit)
    basis = cohomology_basis(algebra, "ccd")
    d = basis.dim_h2
    points = grassmannian(d, s, field)
    ts = [w for w in points if membership_ts(algebra, subspace_cocycle(basis, w), basis).in_ts]
    by_key = {w.key(): w for w in ts}
    actions = [induced_action(algebra, basis, phi) for phi in autos]
    uf = UnionFind(by_key)
    for action in actions:
        for key, w in by_key.items():
            uf.union(key, _image(field, action, w).key())
    groups: dict[tuple, list[tuple]] = {}
    for key in by_key:
        groups.setdefault(uf.find(key), []).append(key)
    orbits = []
    for keys in sorted(sorted(g) for g in groups.values()):
        rep = by_key[keys[0]]
        stabilizer = sum(1 for action in actions if _image(field, action, rep) == rep)
        cocycle = subspace_cocycle(basis, rep)
        membership = membership_ts(algebra, cocycle, basis)
        extension = central_extension(ExtensionSpec(algebra, cocycle))
        orbits.append(
            Orbit(
                representative=rep,
                cocycle=cocycle,
                members=tuple(by_key[k] for k in keys),
                stabilizer=stabilizer,
                tag=membership.jordan_split,
                fingerprint=fingerprint(extension),
            )
        )
    census = OrbitCensus(algebra, s, basis, len(autos), len(points), len(ts), tuple(orbits))
    logger.info(
        f"orbit census of {algebra.name or 'algebra'} over {field}, s={s}: {len(points)} subspaces, "
        f"{len(ts)} in T_s, {len(orbits)} orbits"
    )
    if not census.consistent:
        logger.warning(f"orbit-stabilizer mismatch for {algebra.name or 'algebra'}")
    return census


def describe_family(family: AutomorphismFamily) -> list[list[str]]:
    """The symbolic matrix as text, row by row."""
    return [[show(e) for e in row] for row in family.matrix]
