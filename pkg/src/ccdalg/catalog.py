"""The machine-readable catalog of algebras and the records attached to them.

``data/catalog.json`` holds one document with the entries themselves and the
stated material about them: automorphism families, action formulas,
cohomology tables, the trivial-extension table and isomorphism exceptions.
Shared parameter definitions live under ``definitions`` and are pulled in
with ``$ref``; :func:`load_catalog` resolves them with ``jsonref``.

Indices are 1-based in the file.
"""

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Literal, Mapping

import jsonref  # type: ignore
from pydantic import BaseModel, Field as ModelField, ValidationError, model_validator

from ccdalg.algebra import Algebra, Ring, algebra_from_table
from ccdalg.cohomology import BilinearForm
from ccdalg.errors import CatalogError, CcdAlgError
from ccdalg.expr import CoeffExpr, evaluate as evaluate_expr, parse_coeff, substitute, to_poly, variables
from ccdalg.fields import Element, Field, rationals
from ccdalg.identities import satisfies_jordan
from ccdalg.orbits import ActionTable, AutomorphismFamily, MatrixGenerator, StatedAction
from ccdalg.poly import ParamRing, param_ring

logger = logging.getLogger(__name__)

DeltaTerm = tuple[int, int, str]


class ParamSpec(BaseModel):
    """A family parameter, its excluded values and its sample values."""

    name: str
    excluded: list[str] = []
    samples: list[str] = []


class ProductTerm(BaseModel):
    k: int
    coeff: str = "1"


class Product(BaseModel):
    """``e_i e_j = Σ coeff · e_k``; only ``i ≤ j`` is stored."""

    i: int
    j: int
    out: list[ProductTerm]

    @model_validator(mode="after")
    def _ordered(self) -> "Product":
        if self.i > self.j:
            raise ValueError(f"product e{self.i}e{self.j} must be stored with i <= j")
        return self


class Provenance(BaseModel):
    source: str
    table: str = ""
    variant_of: str | None = None
    notes: str = ""


class Expected(BaseModel):
    jordan: bool
    nilpotent: bool = True


class ExtensionRecord(BaseModel):
    """How an entry arises from a smaller one.

    ``cocycle`` items are ``[i, j, coeff, k]``: the component valued in the new
    basis vector ``e_k`` has ``coeff`` at ``Δ_ij``. ``base_params`` binds the
    base's parameters to expressions in the entry's parameters.
    """

    base: str
    base_params: dict[str, str] = {}
    s: int = ModelField(ge=1)
    cocycle: list[tuple[int, int, str, int]] = []
    orbit: str = ""


class CatalogEntry(BaseModel):
    name: str
    dim: int = ModelField(ge=0)
    params: list[ParamSpec] = []
    products: list[Product] = []
    provenance: Provenance
    expected: Expected
    extension_of: ExtensionRecord | None = None
    iso_exceptions: list[str] = []

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def parsed_products(self) -> list[tuple[int, int, int, CoeffExpr]]:
        """0-based ``(i, j, k, expr)`` for every stated term."""
        return [(p.i - 1, p.j - 1, t.k - 1, parse_coeff(t.coeff)) for p in self.products for t in p.out]


class GeneratorRecord(BaseModel):
    variables: list[str]
    matrix: list[list[str]]


class FamilyRecord(BaseModel):
    """A stated automorphism matrix; see :class:`~ccdalg.orbits.AutomorphismFamily`."""

    name: str
    algebra: str
    variables: list[str]
    matrix: list[list[str]]
    derived: dict[str, str] = {}
    constraints: list[str] = []
    generators: list[GeneratorRecord] = []
    word_length: int = 4
    expect_automorphism: bool = True
    bindings: dict[str, str] = {}
    notes: str = ""


class StatedRecord(BaseModel):
    name: str
    position: str
    formula: str


class ActionRecord(BaseModel):
    name: str
    algebra: str
    family: str
    nablas: list[list[DeltaTerm]]
    alphas: list[str]
    fixed: dict[str, str] = {}
    stated: list[StatedRecord]


class CohomologyTable(BaseModel):
    """Stated ``H²`` of one algebra at one parameter point.

    ``listed`` are representatives of all ``H²_CCD`` classes, ``jordan`` those of
    ``H²_J`` (absent when the table states none).
    """

    name: str
    algebra: str
    params: dict[str, str] = {}
    h2_ccd: int
    h2_jordan: int | None = None
    listed: list[list[DeltaTerm]] = []
    jordan: list[list[DeltaTerm]] | None = None
    notes: str = ""


class TrivialExtensions(BaseModel):
    """Algebras whose every cocycle lies in the listed span, so all extensions split."""

    algebras: list[str]
    span: list[list[DeltaTerm]]
    notes: str = ""


class IsoMap(BaseModel):
    """A candidate isomorphism ``B → A``; ``matrix`` columns are the images ``E_j`` in ``A``.

    Either the rows are given inline or ``path`` names a JSON file of rows,
    relative to the catalog file. ``w`` in an entry stands for a primitive cube
    root of unity.
    """

    matrix: list[list[str]] | None = None
    path: str | None = None

    @model_validator(mode="after")
    def _one_source(self) -> "IsoMap":
        if (self.matrix is None) == (self.path is None):
            raise ValueError("a map needs exactly one of matrix and path")
        return self


class IsoSpecialization(BaseModel):
    """One instance of an exception: parameter values for both sides and how to verify."""

    field: str
    left: dict[str, str]
    right: dict[str, str]
    mode: Literal["candidate_map", "exhaustive_gfp", "guided_gfp"]
    map: IsoMap | None = None


class IsoException(BaseModel):
    """A stated isomorphism between members of a family, ``A(left) ≅ A(right)``.

    ``symbolic`` gives the right-hand parameters as expressions in the left ones
    for a check over the parameter ring.
    """

    name: str
    entry: str
    statement: str
    symbolic: dict[str, str] | None = None
    symbolic_map: IsoMap | None = None
    specializations: list[IsoSpecialization] = []


class CatalogDocument(BaseModel):
    entries: list[CatalogEntry]
    automorphism_families: list[FamilyRecord] = []
    action_tables: list[ActionRecord] = []
    cohomology_tables: list[CohomologyTable] = []
    trivial_extensions: TrivialExtensions | None = None
    iso_exceptions: list[IsoException] = []


def _check_entry(entry: CatalogEntry) -> None:
    for p in entry.products:
        for idx in [p.i, p.j] + [t.k for t in p.out]:
            if not 1 <= idx <= entry.dim:
                raise CatalogError(f"index e{idx} out of range for dimension {entry.dim}", entry.name)
    names = set(entry.param_names)
    for i, j, k, node in entry.parsed_products():
        unknown = variables(node) - names
        if unknown:
            raise CatalogError(f"e{i + 1}e{j + 1} uses unknown parameter(s) {sorted(unknown)}", entry.name)
    record = entry.extension_of
    if record is not None:
        for i, j, _, k in record.cocycle:
            if k > entry.dim or min(i, j, k) < 1:
                raise CatalogError(f"cocycle term Δ{i}{j} -> e{k} out of range", entry.name)


def delta_form(
    ring: Ring, dim: int, terms: list[DeltaTerm], assignment: Mapping[str, Element] | None = None
) -> BilinearForm:
    """The form ``Σ coeff · Δ_ij`` from 1-based ``[i, j, coeff]`` terms.

    Coefficients with parameters are evaluated at ``assignment`` over a field, or
    kept symbolic over a :class:`~ccdalg.poly.ParamRing`.
    """
    pairs: dict[tuple[int, int], Element] = {}
    for i, j, coeff in terms:
        node = parse_coeff(coeff)
        value = to_poly(node, ring) if isinstance(ring, ParamRing) else evaluate_expr(node, ring, assignment)
        key = (min(i, j) - 1, max(i, j) - 1)
        pairs[key] = pairs.get(key, ring.zero) + value
    return BilinearForm.from_pairs(ring, dim, pairs)


def field_value(text: str, field: Field) -> Element:
    """Evaluate a coefficient expression in ``field``; ``w`` is a primitive cube root of unity."""
    node = parse_coeff(text)
    assignment = {"w": field.omega} if "w" in variables(node) else {}
    return evaluate_expr(node, field, assignment)


def _ring_for(names: tuple[str, ...]) -> Ring:
    return param_ring(names) if names else rationals()


@dataclass(frozen=True)
class Catalog:
    """A loaded catalog document with lookups by name."""

    path: str
    document: CatalogDocument

    @property
    def entries(self) -> list[CatalogEntry]:
        return self.document.entries

    @cached_property
    def _by_name(self) -> dict[str, CatalogEntry]:
        return {e.name: e for e in self.document.entries}

    def names(self) -> list[str]:
        return [e.name for e in self.document.entries]

    def entry(self, name: str) -> CatalogEntry:
        try:
            return self._by_name[name]
        except KeyError:
            raise CatalogError(f"no catalog entry named {name!r}")

    def algebra(self, name: str) -> Algebra:
        """The entry as an algebra over ``QQ``, or over ``QQ[params]`` for a family."""
        return entry_algebra(self.entry(name))

    def specialized(
        self, name: str, assignment: Mapping[str, object] | None = None, field: Field | None = None
    ) -> Algebra:
        """The entry at a full parameter assignment, moved into ``field``."""
        return self.algebra(name).specialize(dict(assignment or {}), field or rationals())

    def family(self, name: str) -> AutomorphismFamily:
        for record in self.document.automorphism_families:
            if record.name == name:
                return family_from_record(record)
        raise CatalogError(f"no automorphism family named {name!r}")

    def family_record(self, name: str) -> FamilyRecord:
        for record in self.document.automorphism_families:
            if record.name == name:
                return record
        raise CatalogError(f"no automorphism family named {name!r}")

    def action_table(self, name: str) -> ActionTable:
        for record in self.document.action_tables:
            if record.name == name:
                return action_table_from_record(record, self.entry(record.algebra).dim)
        raise CatalogError(f"no action table named {name!r}")


def entry_algebra(entry: CatalogEntry, substitutions: Mapping[str, str] | None = None) -> Algebra:
    """Build the algebra of an entry.

    Args:
        entry: The entry.
        substitutions: Parameter replacements such as ``{"b": "-1*b"}``, applied
            before the coefficients are turned into polynomials.
    """
    ring = _ring_for(entry.param_names)
    mapping = {k: parse_coeff(v) for k, v in (substitutions or {}).items()}
    products: dict[tuple[int, int], dict[int, Element]] = {}
    for i, j, k, node in entry.parsed_products():
        if mapping:
            node = substitute(node, mapping)
        value = to_poly(node, ring) if isinstance(ring, ParamRing) else evaluate_expr(node, ring)
        slot = products.setdefault((i, j), {})
        slot[k] = slot.get(k, ring.zero) + value
    return Algebra.from_products(entry.dim, ring, products, entry.name)


def parameter_samples(entry: CatalogEntry) -> list[dict[str, str]]:
    """The sample points of an entry: the ``k``-th sample of every parameter together.

    Samples equal to an excluded value are dropped with a warning. An entry
    without parameters has the single empty sample.
    """
    if not entry.params:
        return [{}]
    count = min(len(p.samples) for p in entry.params)
    points = []
    for k in range(count):
        point = {p.name: p.samples[k] for p in entry.params}
        clash = [n for p in entry.params for n in [p.name] if point[n] in p.excluded]
        if clash:
            logger.warning(f"{entry.name}: sample {point} hits excluded values of {clash}, skipped")
            continue
        points.append(point)
    return points


def family_from_record(record: FamilyRecord) -> AutomorphismFamily:
    def matrix(rows: list[list[str]]) -> tuple[tuple[CoeffExpr, ...], ...]:
        return tuple(tuple(parse_coeff(e) for e in row) for row in rows)

    return AutomorphismFamily(
        name=record.name,
        algebra=record.algebra,
        variables=tuple(record.variables),
        matrix=matrix(record.matrix),
        derived=tuple((k, parse_coeff(v)) for k, v in record.derived.items()),
        constraints=tuple(parse_coeff(c) for c in record.constraints),
        generators=tuple(MatrixGenerator(tuple(g.variables), matrix(g.matrix)) for g in record.generators),
        word_length=record.word_length,
        expect_automorphism=record.expect_automorphism,
        notes=record.notes,
    )


def action_table_from_record(record: ActionRecord, dim: int) -> ActionTable:
    field = rationals()
    return ActionTable(
        name=record.name,
        algebra=record.algebra,
        family=record.family,
        nablas=tuple(delta_form(field, dim, terms) for terms in record.nablas),
        alphas=tuple(record.alphas),
        fixed=tuple(record.fixed.items()),
        stated=tuple(StatedAction(s.name, parse_coeff(s.position), parse_coeff(s.formula)) for s in record.stated),
    )


def stated_automorphism_families(catalog: Catalog) -> list[tuple[FamilyRecord, AutomorphismFamily]]:
    """Every stated automorphism family, with its record (for the bindings)."""
    return [(r, family_from_record(r)) for r in catalog.document.automorphism_families]


def _validate(catalog: Catalog) -> None:
    seen: set[str] = set()
    for entry in catalog.entries:
        if entry.name in seen:
            raise CatalogError(f"duplicate entry name {entry.name!r}", entry.name)
        seen.add(entry.name)
        _check_entry(entry)
    for entry in catalog.entries:
        if entry.extension_of is not None and entry.extension_of.base not in seen:
            raise CatalogError(f"unknown base {entry.extension_of.base!r}", entry.name)
    refs = [(r.name, r.algebra) for r in catalog.document.automorphism_families]
    refs += [(r.name, r.algebra) for r in catalog.document.action_tables]
    refs += [(r.name, r.algebra) for r in catalog.document.cohomology_tables]
    refs += [(r.name, r.entry) for r in catalog.document.iso_exceptions]
    for owner, name in refs:
        if name not in seen:
            raise CatalogError(f"{owner} refers to unknown entry {name!r}")


def load_catalog(path: str | Path) -> Catalog:
    """Load and validate a catalog file.

    Raises:
        CatalogError: On unreadable JSON, a schema violation, a duplicate name,
            an index out of range or a reference to an unknown entry.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}")
    # make sure $ref are resolved
    resolved = jsonref.replace_refs(raw, merge_props=True, proxies=False)
    try:
        document = CatalogDocument.model_validate(resolved)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(x) for x in first["loc"])
        entry = None
        if first["loc"][:1] == ("entries",) and len(first["loc"]) > 1:
            index = first["loc"][1]
            if isinstance(index, int) and index < len(raw.get("entries", [])):
                entry = raw["entries"][index].get("name")
        raise CatalogError(f"schema violation at {where}: {first['msg']}", entry)
    catalog = Catalog(str(path), document)
    try:
        _validate(catalog)
    except CatalogError:
        raise
    except CcdAlgError as exc:
        raise CatalogError(str(exc))
    logger.info(f"loaded {len(document.entries)} catalog entries from {path}")
    return catalog


def parse_assignment(text: str | None) -> dict[str, str]:
    """Read ``"a=2,b=-1"`` into ``{"a": "2", "b": "-1"}``.

    Raises:
        CcdAlgError: If an item is not of the form ``name=value``.
    """
    out: dict[str, str] = {}
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        if not sep or not name.strip() or not value.strip():
            raise CcdAlgError(f"cannot read parameter assignment {item!r}, expected name=value")
        out[name.strip()] = value.strip()
    return out


def read_algebra_file(path: str | Path) -> CatalogEntry:
    """Read a single entry written in the catalog entry schema.

    Raises:
        CatalogError: If the file is unreadable or does not validate.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        entry = CatalogEntry.model_validate(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"cannot read algebra file {path}: {exc}")
    except ValidationError as exc:
        first = exc.errors()[0]
        raise CatalogError(f"{path}: {'.'.join(str(x) for x in first['loc'])}: {first['msg']}")
    _check_entry(entry)
    return entry


def resolve_algebra(
    source: str,
    catalog: Catalog | None = None,
    assignment: Mapping[str, str] | None = None,
    field: Field | None = None,
) -> Algebra:
    """Turn a command-line or tool argument into a numeric algebra.

    ``source`` is ``catalog:NAME``, the path of an algebra file, or an inline
    table such as ``"e1e1=e2, e2e2=e3"``. Parameters are bound from
    ``assignment``; ``w`` in a value is a primitive cube root of unity.

    Raises:
        CatalogError: For an unknown name or unreadable file.
        UnevaluatedParametersError: If a parameter is left without a value.
    """
    field = field or rationals()
    if source.startswith("catalog:"):
        if catalog is None:
            raise CatalogError(f"{source} needs a catalog")
        family = catalog.algebra(source.removeprefix("catalog:"))
    elif "=" in source:
        return algebra_from_table(source, field=field)
    else:
        family = entry_algebra(read_algebra_file(source))
    point = {k: field_value(v, field) for k, v in (assignment or {}).items()}
    unknown = set(point) - set(family.params)
    if unknown:
        raise CatalogError(f"{family.name or source} has no parameter(s) {sorted(unknown)}")
    return family.specialize(point, field)


def entry_from_algebra(algebra: Algebra, name: str = "", source: str = "ccdalg extend") -> CatalogEntry:
    """An entry for a numeric algebra over ``QQ`` or GF(p), in the catalog schema."""
    field = algebra.field
    products = [
        Product(i=i + 1, j=j + 1, out=[ProductTerm(k=k + 1, coeff=field.to_str(c)) for k, c in terms])
        for (i, j), terms in algebra.sc
        if terms
    ]
    return CatalogEntry(
        name=name or algebra.name or "algebra",
        dim=algebra.dim,
        products=products,
        provenance=Provenance(source=source, notes=f"over {field.descriptor}"),
        expected=Expected(jordan=satisfies_jordan(algebra)),
    )
