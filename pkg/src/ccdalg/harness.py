"""Verification harness over the catalog.

Every check produces :class:`ReportItem` records instead of raising, so a
sweep always runs to the end. Items are sorted by entry, sample and check,
which makes the report independent of the number of worker threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from pydantic import BaseModel, ConfigDict, Field as ModelField

from ccdalg.algebra import Algebra, annihilator, change_of_basis, is_nilpotent
from ccdalg.catalog import (
    Catalog,
    CatalogEntry,
    delta_form,
    entry_algebra,
    field_value,
    parameter_samples,
    stated_automorphism_families,
)
from ccdalg.cohomology import BilinearForm, Cocycle, cohomology_basis, trivial_extension_check
from ccdalg.errors import CcdAlgError, DimensionMismatchError, FieldError
from ccdalg.expr import evaluate as evaluate_expr, parse_coeff
from ccdalg.extensions import ExtensionSpec, central_extension, split_annihilator
from ccdalg.fields import Element, Field, rationals
from ccdalg.identities import check_identity
from ccdalg.invariants import Fingerprint, fingerprint
from ccdalg.linalg import SubspaceBasis
from ccdalg.orbits import ActionCheck, FamilyCheck, verify_action_formulas, verify_automorphism_family

logger = logging.getLogger(__name__)


class ReportItem(BaseModel):
    """One check of one entry at one parameter sample; serialized with the key ``pass``."""

    model_config = ConfigDict(populate_by_name=True)

    entry: str
    sample: int
    check: str
    passed: bool = ModelField(alias="pass")
    witness: str | None = None

    def sort_key(self) -> tuple:
        return (self.entry, self.sample, self.check)


def report_failures(items: Sequence[ReportItem]) -> list[ReportItem]:
    return [item for item in items if not item.passed]


def dump_report(items: Sequence[ReportItem]) -> list[dict]:
    """The report as plain dicts with the ``pass`` key."""
    return [item.model_dump(by_alias=True, exclude_none=True) for item in items]


def _point(values: Mapping[str, str], field: Field) -> dict[str, Element]:
    return {k: field_value(v, field) for k, v in values.items()}


def _item(entry: str, sample: int, check: str, passed: bool, witness: str | None = None) -> ReportItem:
    logger.debug(f"{entry}[{sample}] {check}: {'pass' if passed else 'FAIL'}")
    return ReportItem(entry=entry, sample=sample, check=check, passed=passed, witness=None if passed else witness)


def _evaluate(text: str, point: Mapping[str, Element], field: Field) -> Element:
    return evaluate_expr(parse_coeff(text), field, point)


def reconstruct_extension(catalog: Catalog, entry: CatalogEntry, point: Mapping[str, Element], field: Field) -> Algebra:
    """Rebuild an entry from its recorded base and cocycle at a parameter point.

    Raises:
        ValueError: If the entry has no extension record.
        DimensionMismatchError: If a cocycle term targets a coordinate outside
            the new ones.
    """
    record = entry.extension_of
    if record is None:
        raise ValueError(f"{entry.name} has no extension record")
    base_point = {name: _evaluate(text, point, field) for name, text in record.base_params.items()}
    base = entry_algebra(catalog.entry(record.base)).specialize(base_point, field)
    n = base.dim
    pairs: list[dict[tuple[int, int], Element]] = [{} for _ in range(record.s)]
    for i, j, coeff, k in record.cocycle:
        slot = k - n - 1
        if not 0 <= slot < record.s:
            raise DimensionMismatchError(f"cocycle term Δ{i}{j} -> e{k} outside e{n + 1}..e{n + record.s}")
        key = (min(i, j) - 1, max(i, j) - 1)
        pairs[slot][key] = pairs[slot].get(key, field.zero) + _evaluate(coeff, point, field)
    theta = Cocycle(tuple(BilinearForm.from_pairs(field, n, p) for p in pairs))
    return central_extension(ExtensionSpec(base, theta, entry.name))


def split_round_trip(algebra: Algebra) -> bool:
    """``A`` rebased on its annihilator split equals the extension of the quotient."""
    split = split_annihilator(algebra)
    return change_of_basis(algebra, split.basis) == central_extension(ExtensionSpec(split.quotient, split.theta))


def _check_sample(
    catalog: Catalog,
    entry: CatalogEntry,
    index: int,
    values: Mapping[str, str],
    field: Field,
    grid_limit: int,
    seed: int,
) -> list[ReportItem]:
    name = entry.name
    try:
        point = _point(values, field)
        algebra = entry_algebra(entry).specialize(point, field)
    except CcdAlgError as exc:
        return [_item(name, index, "specialize", False, str(exc))]

    def identity(which: str) -> tuple[bool, str | None]:
        result = check_identity(algebra, which, grid_limit=grid_limit, seed=seed)
        return result.holds, None if result.witness is None else str(result.witness)

    items = []
    holds, witness = identity("commutative")
    items.append(_item(name, index, "commutative", holds, witness))
    nilpotent = is_nilpotent(algebra)
    items.append(_item(name, index, "nilpotent", nilpotent == entry.expected.nilpotent, f"nilpotent={nilpotent}"))
    holds, witness = identity("ccd")
    items.append(_item(name, index, "ccd", holds, witness))
    holds, witness = identity("almost_jordan")
    items.append(_item(name, index, "almost_jordan", holds, witness))
    jordan, witness = identity("jordan_linearized")
    items.append(
        _item(name, index, "jordan", jordan == entry.expected.jordan, f"jordan={jordan} at {witness}")
    )
    ann = annihilator(algebra).dim
    items.append(_item(name, index, "annihilator", ann >= 1, f"dim Ann = {ann}"))
    if entry.extension_of is not None:
        try:
            rebuilt = reconstruct_extension(catalog, entry, point, field)
            same = rebuilt == algebra
            witness = None if same else f"rebuilt {rebuilt!r}"
        except CcdAlgError as exc:
            same, witness = False, str(exc)
        items.append(_item(name, index, "extension", same, witness))
    if entry.dim >= 4 and ann >= 1:
        items.append(_item(name, index, "split_round_trip", split_round_trip(algebra), "rebased table differs"))
    return items


def _check_field(field: Field) -> None:
    if field.characteristic and field.characteristic < 5:
        raise FieldError(f"catalog verification needs QQ or GF(p) with p >= 5, got {field}")
    if not field.characteristic and field != rationals():
        raise FieldError(f"catalog verification runs over QQ or GF(p), got {field}")


def verify_catalog(
    catalog: Catalog,
    *,
    field: Field | None = None,
    names: Sequence[str] | None = None,
    workers: int = 1,
    samples: Mapping[str, Sequence[Mapping[str, str]]] | None = None,
    grid_limit: int = 64,
    seed: int = 0,
) -> list[ReportItem]:
    """Run the per-entry checks at every parameter sample.

    Args:
        catalog: The loaded catalog.
        field: ``QQ`` (default) or GF(p) with ``p >= 5``, where the identity
            checks are heuristic.
        names: Restrict to these entries.
        workers: Thread pool size.
        samples: Sample points per entry name, replacing the ones in the file.
        grid_limit: Grid points of the almost-Jordan check on algebras above dimension 4.
        seed: Seed of that grid.

    Raises:
        FieldError: For any other field.
    """
    field = field or rationals()
    _check_field(field)
    entries = [e for e in catalog.entries if names is None or e.name in names]
    jobs = []
    for entry in entries:
        points = (samples or {}).get(entry.name)
        for index, values in enumerate(points if points is not None else parameter_samples(entry)):
            jobs.append((entry, index, dict(values)))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = pool.map(lambda job: _check_sample(catalog, job[0], job[1], job[2], field, grid_limit, seed), jobs)
        items = [item for batch in results for item in batch]
    items.sort(key=ReportItem.sort_key)
    failed = len(report_failures(items))
    logger.info(f"verified {len(entries)} entries at {len(jobs)} samples over {field}: {failed} failing checks")
    return items


@dataclass(frozen=True)
class DistinctionReport:
    """Fingerprints of catalog entries grouped by equality.

    Attributes:
        fingerprints: Fingerprint per label ``NAME`` or ``NAME[k]``.
        groups: Labels sharing a fingerprint, for every group of two or more.
    """

    fingerprints: dict[str, Fingerprint]
    groups: list[list[str]]

    @property
    def separated(self) -> bool:
        return not self.groups


def distinguishing_invariants(a: Fingerprint, b: Fingerprint) -> list[str]:
    """Names of the invariants on which two fingerprints differ."""
    return [name for name in Fingerprint.model_fields if getattr(a, name) != getattr(b, name)]


def distinguish_all(
    catalog: Catalog, names: Sequence[str] | None = None, *, all_samples: bool = False, workers: int = 1
) -> DistinctionReport:
    """Fingerprint every entry over ``QQ`` and list the groups it cannot separate.

    Each entry is taken at its first sample point unless ``all_samples`` is set.
    Equal fingerprints are no evidence of isomorphism.
    """
    field = rationals()
    jobs = []
    for entry in catalog.entries:
        if names is not None and entry.name not in names:
            continue
        points = parameter_samples(entry)
        if not all_samples:
            points = points[:1]
        for index, values in enumerate(points):
            label = entry.name if not entry.params else f"{entry.name}[{index}]"
            jobs.append((label, entry, values))

    def compute(job):
        label, entry, values = job
        return label, fingerprint(entry_algebra(entry).specialize(_point(values, field), field))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        prints = dict(pool.map(compute, jobs))
    by_print: dict[Fingerprint, list[str]] = {}
    for label in sorted(prints):
        by_print.setdefault(prints[label], []).append(label)
    groups = sorted(g for g in by_print.values() if len(g) > 1)
    logger.info(f"fingerprinted {len(prints)} algebras, {len(groups)} unseparated groups")
    return DistinctionReport(prints, groups)


def verify_families(catalog: Catalog, *, samples: int = 20, seed: int = 0) -> list[FamilyCheck]:
    """Sample every stated automorphism family against its algebra."""
    checks = []
    field = rationals()
    for record, family in stated_automorphism_families(catalog):
        bindings = _point(record.bindings, field)
        algebra = catalog.algebra(record.algebra).specialize(bindings, field)
        checks.append(verify_automorphism_family(algebra, family, samples=samples, seed=seed, bindings=bindings))
    return checks


def verify_action_tables(catalog: Catalog, *, points: int = 120, seed: int = 0) -> list[ActionCheck]:
    """Check every stated action table on a grid of sampled automorphisms."""
    checks = []
    for record in catalog.document.action_tables:
        table = catalog.action_table(record.name)
        family = catalog.family(record.family)
        algebra = catalog.specialized(record.algebra)
        checks.append(verify_action_formulas(algebra, table, family, points=points, seed=seed))
    return checks


class TableCheck(BaseModel):
    """Computed against stated ``H²`` dimensions for one cohomology table."""

    table: str
    algebra: str
    params: dict[str, str]
    h2_ccd: int
    h2_jordan: int
    stated_ccd: int
    stated_jordan: int | None
    listed_span: bool
    jordan_span: bool | None
    passed: bool


def _span_mod(forms: Sequence[BilinearForm], b2: SubspaceBasis) -> SubspaceBasis:
    return SubspaceBasis.span(b2.field, b2.ambient_dim, [f.coeffs for f in forms]).sum(b2)


def cohomology_table_report(catalog: Catalog, names: Sequence[str] | None = None) -> list[TableCheck]:
    """Recompute every stated cohomology table.

    A table passes when its listed classes span ``Z²_CCD`` modulo ``B²``
    without redundancy, the count matches the computed ``dim H²_CCD``, and the
    stated Jordan part agrees where the table gives one.
    """
    field = rationals()
    checks = []
    for table in catalog.document.cohomology_tables:
        if names is not None and table.name not in names and table.algebra not in names:
            continue
        point = _point(table.params, field)
        algebra = catalog.specialized(table.algebra, point)
        n = algebra.dim
        basis = cohomology_basis(algebra, "ccd")
        listed = [delta_form(field, n, terms, point) for terms in table.listed]
        listed_span = (
            _span_mod(listed, basis.b2) == basis.z2 and len(listed) == basis.dim_h2 == table.h2_ccd
        )
        jordan_span = None
        if table.jordan is not None:
            jordan = [delta_form(field, n, terms, point) for terms in table.jordan]
            jordan_span = _span_mod(jordan, basis.b2) == basis.h2_jordan.sum(basis.b2)
        passed = basis.dim_h2 == table.h2_ccd and listed_span and jordan_span is not False
        if table.h2_jordan is not None:
            passed = passed and basis.dim_h2_jordan == table.h2_jordan
        logger.debug(f"{table.name}: H² = ({basis.dim_h2}, {basis.dim_h2_jordan}), {'pass' if passed else 'FAIL'}")
        checks.append(
            TableCheck(
                table=table.name,
                algebra=table.algebra,
                params=table.params,
                h2_ccd=basis.dim_h2,
                h2_jordan=basis.dim_h2_jordan,
                stated_ccd=table.h2_ccd,
                stated_jordan=table.h2_jordan,
                listed_span=listed_span,
                jordan_span=jordan_span,
                passed=passed,
            )
        )
    return checks


def trivial_extension_report(catalog: Catalog) -> list[ReportItem]:
    """One item per algebra of the trivial-extension record: every cocycle lies in the listed span."""
    record = catalog.document.trivial_extensions
    if record is None:
        return []
    items = []
    field = rationals()
    for name in record.algebras:
        algebra = catalog.specialized(name)
        listed = [delta_form(field, algebra.dim, terms) for terms in record.span]
        check = trivial_extension_check(algebra, listed)
        items.append(_item(name, 0, "trivial_extensions", check.contained, f"dim Z² = {check.z2_dim}"))
    return sorted(items, key=ReportItem.sort_key)

