"""Isomorphism search between algebras of the same dimension.

An isomorphism ``ψ: B → A`` is searched in the form accepted by
:func:`~ccdalg.algebra.change_of_basis`: columns of ``ψ`` are the images of
``B``'s basis written in ``A``, and ``change_of_basis(A, ψ) == B``. Searches
only assign images to the generators of ``B`` and extend them by the
homomorphism property, see :mod:`ccdalg.maps`.

A search over a finite field that finds nothing is evidence, never a proof of
non-isomorphism over the complex numbers.
"""

import itertools
import json
import logging
import math
from pathlib import Path
from typing import Iterator, Literal, Mapping, Sequence

from pydantic import BaseModel

from ccdalg.algebra import Algebra, change_of_basis, power_filtration
from ccdalg.catalog import Catalog, IsoMap, entry_algebra, field_value
from ccdalg.errors import CatalogError, DimensionMismatchError, FieldMismatchError, GuardExceededError, SingularMapError
from ccdalg.fields import Element, Field, parse_field, rationals
from ccdalg.linalg import Matrix, Vector, unit_vector
from ccdalg.maps import (
    candidate_count,
    check_same_field,
    free_assignments,
    generator_program,
    homomorphisms_from,
    square,
)

logger = logging.getLogger(__name__)

SearchMode = Literal["exhaustive_gfp", "guided_gfp", "candidate_map"]

# largest dimension searched exhaustively, per characteristic
EXHAUSTIVE_GUARDS: dict[int, int] = {2: 5, 3: 4}


class IsoResult(BaseModel):
    """Outcome of :func:`iso_search`.

    Attributes:
        found: Whether an isomorphism was found (or the candidate checked out).
        map: The isomorphism as rows of field elements, when found.
        candidates: Generator assignments examined.
        evidence: ``exact`` for a verified candidate, ``search`` for a
            finite-field search, ``invariants`` when the power filtrations
            already differ.
    """

    found: bool
    map: list[list[str]] | None = None
    candidates: int = 0
    evidence: Literal["exact", "search", "invariants"]


def map_matrix(rows: Sequence[Sequence[str]], field: Field) -> Matrix:
    return Matrix.from_rows(field, [[field_value(e, field) for e in row] for row in rows])


def load_map(iso_map: IsoMap, field: Field, base_dir: str | Path = ".") -> Matrix:
    """The matrix of a candidate map, read inline or from its JSON file.

    Raises:
        CatalogError: If the map file cannot be read.
    """
    rows = iso_map.matrix
    if rows is None:
        path = Path(base_dir) / str(iso_map.path)
        try:
            rows = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CatalogError(f"cannot read map file {path}: {exc}")
    return map_matrix(rows, field)


def _filtration_dims(algebra: Algebra) -> tuple[int, ...]:
    return tuple(s.dim for s in power_filtration(algebra))


def _monomial_assignments(target: Algebra, count: int) -> Iterator[tuple[Vector, ...]]:
    """Generator images ``c_k e_σ(k)``: scaled unit vectors at the generator coordinates of ``target``."""
    field, n = target.field, target.dim
    slots = square(target).non_pivots()
    scalars = [c for c in field.elements() if not field.is_zero(c)]
    for perm in itertools.permutations(slots, count):
        for coeffs in itertools.product(scalars, repeat=count):
            yield tuple(tuple(c * x for x in unit_vector(field, n, k)) for c, k in zip(coeffs, perm))


class _Counter:
    """Iterate while counting the items handed out."""

    def __init__(self, items: Iterator[tuple[Vector, ...]]):
        self.items = items
        self.count = 0

    def __iter__(self) -> Iterator[tuple[Vector, ...]]:
        for item in self.items:
            self.count += 1
            yield item


def _check_candidate(a: Algebra, b: Algebra, candidate: Matrix) -> IsoResult:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"algebras of dimensions {a.dim} and {b.dim}")
    if a.ring != b.ring:
        raise FieldMismatchError(f"algebras over {a.ring} and {b.ring}")
    try:
        found = change_of_basis(a, candidate) == b
    except SingularMapError:
        found = False
    return IsoResult(found=found, map=candidate.to_strings() if found else None, candidates=1, evidence="exact")


def iso_search(
    a: Algebra,
    b: Algebra,
    *,
    mode: SearchMode = "exhaustive_gfp",
    candidate: Matrix | None = None,
    limit: int | None = None,
) -> IsoResult:
    """Look for ``ψ`` with ``change_of_basis(a, ψ) == b``.

    Args:
        a: Target algebra.
        b: Source algebra.
        mode: ``candidate_map`` checks ``candidate`` exactly, over ``QQ`` or
            symbolically for parametric algebras; ``exhaustive_gfp`` walks
            every generator assignment over GF(p); ``guided_gfp`` only tries
            permutations of the generator coordinates times nonzero scalars.
        candidate: The map for ``candidate_map``.
        limit: Cap on the number of generator assignments of a search.

    Raises:
        GuardExceededError: If an exhaustive search is above dimension 5 over
            GF(2) or dimension 4 over GF(3), or exceeds ``limit``.
        FieldMismatchError: For a search over an infinite field.
    """
    if mode == "candidate_map":
        if candidate is None:
            raise ValueError("candidate_map mode needs a candidate matrix")
        return _check_candidate(a, b, candidate)
    field = check_same_field(a, b)
    if not field.characteristic:
        raise FieldMismatchError(f"{mode} searches need a prime field, got {field}")
    if _filtration_dims(a) != _filtration_dims(b):
        logger.debug(f"{a.name} and {b.name} have different power filtrations")
        return IsoResult(found=False, evidence="invariants")
    program = generator_program(b)
    if mode == "exhaustive_gfp":
        bound = EXHAUSTIVE_GUARDS.get(field.characteristic)
        if bound is None or a.dim > bound:
            raise GuardExceededError(f"exhaustive search in dimension {a.dim} over {field} is not supported")
        total = candidate_count(program, a)
        assignments = free_assignments(program, a)
    else:
        if program.free != program.generators:
            raise GuardExceededError(f"guided search needs a nilpotent algebra, {b.name or 'B'} is not")
        g = program.generators
        total = math.perm(len(square(a).non_pivots()), g) * (field.characteristic - 1) ** g
        assignments = _monomial_assignments(a, g)
    if limit is not None and total > limit:
        raise GuardExceededError(f"{total} candidate generator assignments exceed the limit {limit}")
    counter = _Counter(assignments)
    found = next(homomorphisms_from(program, a, iter(counter)), None)
    if found is not None and change_of_basis(a, found) != b:
        logger.warning(f"search map for {b.name or 'B'} does not transport {a.name or 'A'}, discarded")
        found = None
    tried = counter.count
    logger.info(f"{mode} over {field}: {'found' if found else 'no'} isomorphism after {tried} of {total} assignments")
    return IsoResult(
        found=found is not None,
        map=found.to_strings() if found is not None else None,
        candidates=tried,
        evidence="search",
    )


class IsoExceptionCheck(BaseModel):
    """One verified instance of a stated isomorphism exception."""

    exception: str
    entry: str
    sample: str
    field: str
    mode: SearchMode
    found: bool
    evidence: Literal["exact", "search", "invariants"]
    map: list[list[str]] | None = None


def _point(values: Mapping[str, str], field: Field) -> dict[str, Element]:
    return {k: field_value(v, field) for k, v in values.items()}


def _label(values: Mapping[str, str]) -> str:
    return ",".join(f"{k}={v}" for k, v in sorted(values.items()))


def verify_iso_exceptions(
    catalog: Catalog, names: Sequence[str] | None = None, *, limit: int | None = None
) -> list[IsoExceptionCheck]:
    """Check the recorded isomorphism exceptions.

    A symbolic exception is checked over the parameter ring with its map over
    ``QQ``. Each specialization is then checked in its own field, with its
    candidate map or by a search whose result is re-checked in that field.
    """
    base_dir = Path(catalog.path).parent
    checks = []
    for exc in catalog.document.iso_exceptions:
        if names is not None and exc.name not in names:
            continue
        entry = catalog.entry(exc.entry)
        if exc.symbolic is not None and exc.symbolic_map is not None:
            a = entry_algebra(entry)
            b = entry_algebra(entry, exc.symbolic)
            result = iso_search(a, b, mode="candidate_map", candidate=load_map(exc.symbolic_map, rationals(), base_dir))
            checks.append(
                IsoExceptionCheck(
                    exception=exc.name,
                    entry=entry.name,
                    sample="symbolic",
                    field="q[" + ",".join(entry.param_names) + "]",
                    mode="candidate_map",
                    found=result.found,
                    evidence=result.evidence,
                    map=result.map,
                )
            )
        for spec in exc.specializations:
            field = parse_field(spec.field)
            family = entry_algebra(entry)
            a = family.specialize(_point(spec.left, field), field)
            b = family.specialize(_point(spec.right, field), field)
            if spec.mode == "candidate_map":
                if spec.map is None:
                    raise CatalogError(f"{exc.name}: candidate_map specialization without a map", entry.name)
                result = iso_search(a, b, mode="candidate_map", candidate=load_map(spec.map, field, base_dir))
            else:
                result = iso_search(a, b, mode=spec.mode, limit=limit)
            logger.debug(f"{exc.name} at {_label(spec.left)} over {field}: found={result.found}")
            checks.append(
                IsoExceptionCheck(
                    exception=exc.name,
                    entry=entry.name,
                    sample=f"{_label(spec.left)} -> {_label(spec.right)}",
                    field=spec.field,
                    mode=spec.mode,
                    found=result.found,
                    evidence=result.evidence,
                    map=result.map,
                )
            )
    return checks
