"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails (the report is
still printed), 2 for usage errors and unreadable or invalid input.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from pydantic import BaseModel

from ccdalg import __version__
from ccdalg.algebra import product_table
from ccdalg.catalog import (
    Catalog,
    IsoMap,
    entry_from_algebra,
    load_catalog,
    parse_assignment,
    resolve_algebra,
)
from ccdalg.cohomology import cohomology_summary
from ccdalg.config import Settings, load_settings
from ccdalg.errors import CcdAlgError
from ccdalg.extensions import ExtensionSpec, central_extension, extension_report, parse_cocycle
from ccdalg.fields import Field, parse_field
from ccdalg.harness import (
    ReportItem,
    cohomology_table_report,
    dump_report,
    report_failures,
    trivial_extension_report,
    verify_action_tables,
    verify_catalog,
    verify_families,
)
from ccdalg.invariants import fingerprint
from ccdalg.iso import iso_search, load_map, verify_iso_exceptions
from ccdalg.orbits import describe_family, orbit_partition

logger = logging.getLogger(__name__)

Outcome = tuple[Any, list[str], bool]


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", help="logging level, e.g. INFO or DEBUG")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging (-v info, -vv debug)")
    common.add_argument("--seed", type=int, help="seed of every randomized grid")
    common.add_argument("--workers", type=int, help="threads used by harness sweeps")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--catalog", help="path of the catalog file")
    common.add_argument("--field", default="q", help="q, qw or gf:<p>")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ccdalg", description="Commutative CD algebras and their central extensions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the catalog harness")
    p.add_argument(
        "--samples-from-file",
        nargs="?",
        const=True,
        metavar="PATH",
        help="JSON object of sample points per entry; bare, the samples stored in the catalog",
    )
    p.add_argument("--entries", help="comma-separated entry names")

    p = sub.add_parser("cohomology", parents=[common], help="Z², B² and H² of an algebra")
    p.add_argument("algebra", help="catalog:NAME, an algebra file or an inline table")
    p.add_argument("--variety", choices=["ccd", "jordan", "all"], default="ccd")
    p.add_argument("--params", help="parameter values, e.g. a=2,b=-1")

    p = sub.add_parser("extend", parents=[common], help="central extension by a cocycle")
    p.add_argument("base", help="catalog:NAME, an algebra file or an inline table")
    p.add_argument("--cocycle", required=True, help='terms "i,j,coeff;…", components separated by "|"')
    p.add_argument("--ext-dim", type=int, help="dimension s of the extension")
    p.add_argument("--params", help="parameter values of the base")
    p.add_argument("--output", help="write the extended algebra file here")

    p = sub.add_parser("orbits", parents=[common], help="Aut(A)-orbits on T_s over GF(p)")
    p.add_argument("algebra")
    p.add_argument("--ext-dim", type=int, default=1)
    p.add_argument("--params")
    p.add_argument("--limit", type=int, help="cap on enumerated automorphisms")

    p = sub.add_parser("iso", parents=[common], help="isomorphism search or candidate check")
    p.add_argument("a", nargs="?")
    p.add_argument("b", nargs="?")
    p.add_argument("--params", nargs="+", help="values for A, optionally followed by 'vs' and values for B")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--guided", action="store_true")
    mode.add_argument("--map", help="JSON file with the rows of a candidate matrix")
    mode.add_argument("--exceptions", action="store_true", help="verify the recorded isomorphism exceptions")

    p = sub.add_parser("invariants", parents=[common], help="fingerprint of an algebra")
    p.add_argument("algebra")
    p.add_argument("--params")

    sub.add_parser("list", parents=[common], help="catalog entries")

    p = sub.add_parser("show", parents=[common], help="product table of a catalog entry")
    p.add_argument("algebra")
    p.add_argument("--params")

    sub.add_parser("actions", parents=[common], help="verify automorphism families and action formulas")
    sub.add_parser("tables", parents=[common], help="reproduce the cohomology tables")
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    settings = load_settings()
    updates: dict[str, Any] = {}
    if args.catalog:
        updates["catalog_path"] = args.catalog
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.workers is not None:
        updates["workers"] = args.workers
    if args.log_level:
        updates["log_level"] = args.log_level
    elif args.verbose:
        updates["log_level"] = "DEBUG" if args.verbose > 1 else "INFO"
    return Settings.model_validate({**settings.model_dump(), **updates})


def _dump(payload: Any) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(by_alias=True)
    if isinstance(payload, list):
        return [_dump(x) for x in payload]
    if isinstance(payload, dict):
        return {k: _dump(v) for k, v in payload.items()}
    return payload


class Runner:
    """Holds the parsed flags and the lazily loaded catalog for one invocation."""

    def __init__(self, args: argparse.Namespace, settings: Settings):
        self.args = args
        self.settings = settings
        self._catalog: Catalog | None = None

    @property
    def catalog(self) -> Catalog:
        if self._catalog is None:
            self._catalog = load_catalog(self.settings.catalog_path)
        return self._catalog

    @property
    def field(self) -> Field:
        return parse_field(self.args.field)

    def algebra(self, source: str, params: str | None = None, field: Field | None = None):
        catalog = self.catalog if source.startswith("catalog:") else None
        return resolve_algebra(source, catalog, parse_assignment(params), field or self.field)

    def verify(self) -> Outcome:
        samples = None
        if isinstance(self.args.samples_from_file, str):
            path = Path(self.args.samples_from_file)
            try:
                samples = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise CcdAlgError(f"cannot read samples file {path}: {exc}")
        names = [n.strip() for n in self.args.entries.split(",")] if self.args.entries else None
        items = verify_catalog(
            self.catalog,
            field=self.field,
            names=names,
            workers=self.settings.workers,
            samples=samples,
            grid_limit=self.settings.almost_jordan_grid,
            seed=self.settings.seed,
        )
        if names is None:
            items = sorted(items + trivial_extension_report(self.catalog), key=ReportItem.sort_key)
        failures = report_failures(items)
        text = [f"{len(items)} checks, {len(failures)} failed"]
        text += [f"FAIL {f.entry}[{f.sample}] {f.check}: {f.witness}" for f in failures]
        return dump_report(items), text, not failures

    def cohomology(self) -> Outcome:
        variety = "symmetric_all" if self.args.variety == "all" else self.args.variety
        summary = cohomology_summary(self.algebra(self.args.algebra, self.args.params), variety)
        text = [
            f"{summary.algebra or 'algebra'} ({summary.variety}): dim Z² = {summary.z2}, dim B² = {summary.b2}, "
            f"dim H² = {summary.h2}, dim H²_J = {summary.h2_jordan}",
            "H²: " + (", ".join(f"[{b}]" for b in summary.basis) or "0"),
            "H²_J: " + (", ".join(f"[{b}]" for b in summary.jordan_basis) or "0"),
        ]
        payload = {"H2_ccd": summary.h2, "H2_j": summary.h2_jordan, **summary.model_dump()}
        return payload, text, True

    def extend(self) -> Outcome:
        base = self.algebra(self.args.base, self.args.params)
        spec = ExtensionSpec(base, parse_cocycle(self.args.cocycle, base, self.args.ext_dim))
        report = extension_report(spec)
        if self.args.output:
            entry = entry_from_algebra(central_extension(spec))
            Path(self.args.output).write_text(entry.model_dump_json(indent=2, exclude_none=True), encoding="utf-8")
            logger.info(f"wrote {self.args.output}")
        text = [
            report.table,
            f"cocycle {report.cocycle}: in Z² {report.cocycle_in_z2}, in T_s {report.in_ts} ({report.jordan_split})",
            f"ccd {report.ccd}, jordan {report.jordan}, annihilator decomposition {report.ann_decomposition}",
        ]
        return report, text, report.cocycle_in_z2 and report.ccd and report.ann_decomposition

    def orbits(self) -> Outcome:
        algebra = self.algebra(self.args.algebra, self.args.params)
        census = orbit_partition(algebra, self.args.ext_dim, limit=self.args.limit)
        payload = {
            "algebra": algebra.name,
            "field": self.args.field,
            "s": census.s,
            "h2": census.basis.dim_h2,
            "automorphisms": census.automorphisms,
            "points": census.points,
            "ts_points": census.ts_points,
            "consistent": census.consistent,
            "orbits": [o.summary() for o in census.orbits],
        }
        text = [
            f"|Aut| = {census.automorphisms}, {census.points} subspaces, {census.ts_points} in T_{census.s}, "
            f"{len(census.orbits)} orbits"
        ]
        text += [
            f"  {o.tag} size {o.size} stabilizer {o.stabilizer}: <{', '.join(o.summary().representative)}>"
            for o in census.orbits
        ]
        return payload, text, census.consistent

    def iso(self) -> Outcome:
        args = self.args
        if args.exceptions:
            checks = verify_iso_exceptions(self.catalog, limit=self.settings.iso_search_limit)
            text = [
                f"{'ok  ' if c.found else 'FAIL'} {c.exception} {c.sample} over {c.field} ({c.evidence})"
                for c in checks
            ]
            return checks, text, all(c.found for c in checks)
        if not (args.a and args.b):
            raise CcdAlgError("iso needs two algebras, or --exceptions")
        tokens = " ".join(args.params or []).split(" vs ")
        left = tokens[0].replace(" ", ",")
        right = tokens[1].replace(" ", ",") if len(tokens) > 1 else left
        field = self.field
        a = self.algebra(args.a, left, field)
        b = self.algebra(args.b, right, field)
        if args.map:
            candidate = load_map(IsoMap(path=str(Path(args.map).resolve())), field)
            result = iso_search(a, b, mode="candidate_map", candidate=candidate)
        elif args.exhaustive or args.guided:
            mode = "exhaustive_gfp" if args.exhaustive else "guided_gfp"
            result = iso_search(a, b, mode=mode, limit=self.settings.iso_search_limit)
        else:
            raise CcdAlgError("iso needs one of --map, --exhaustive or --guided")
        if result.found:
            verdict = "isomorphic"
        elif result.evidence == "invariants":
            verdict = "not isomorphic over this field"
        else:
            verdict = "no isomorphism found"
        text = [f"{verdict} ({result.evidence}, {result.candidates} candidates)"]
        if result.map:
            text += ["  " + " ".join(row) for row in result.map]
        return {"verdict": verdict, **result.model_dump()}, text, result.found

    def invariants(self) -> Outcome:
        fp = fingerprint(self.algebra(self.args.algebra, self.args.params))
        return fp, [f"{k}: {v}" for k, v in fp.model_dump().items()], True

    def list_entries(self) -> Outcome:
        rows = [
            {"name": e.name, "dim": e.dim, "params": list(e.param_names), "jordan": e.expected.jordan}
            for e in self.catalog.entries
        ]
        text = [
            f"{r['name']:<10} dim {r['dim']}  {','.join(r['params']) or '-':<4} {'J' if r['jordan'] else ''}"
            for r in rows
        ]
        return rows, text, True

    def show(self) -> Outcome:
        name = self.args.algebra.removeprefix("catalog:")
        entry = self.catalog.entry(name)
        if self.args.params or not entry.params:
            table = product_table(self.algebra(f"catalog:{name}", self.args.params))
        else:
            table = product_table(self.catalog.algebra(name))
        families = {
            r.name: describe_family(self.catalog.family(r.name))
            for r in self.catalog.document.automorphism_families
            if r.algebra == name
        }
        text = [f"{name}: {table}"]
        for fam, rows in families.items():
            text.append(f"{fam}:")
            text += ["  [" + ", ".join(row) + "]" for row in rows]
        payload = {"name": name, "table": table, "provenance": entry.provenance, "families": families}
        return payload, text, True

    def actions(self) -> Outcome:
        seed = self.settings.seed
        families = verify_families(self.catalog, seed=seed)
        tables = verify_action_tables(self.catalog, points=self.settings.action_grid_points, seed=seed)
        text = [f"{'ok  ' if c.passed else 'FAIL'} {c.family} ({c.samples} samples)" for c in families]
        text += [f"{'ok  ' if c.passed else 'FAIL'} {c.table} ({c.points} points) {c.failures or ''}" for c in tables]
        ok = all(c.passed for c in families) and all(c.passed for c in tables)
        return {"families": families, "tables": tables}, text, ok

    def tables(self) -> Outcome:
        checks = cohomology_table_report(self.catalog)
        trivial = trivial_extension_report(self.catalog)
        text = [
            f"{'ok  ' if c.passed else 'FAIL'} {c.table}: ({c.h2_ccd}, {c.h2_jordan}) "
            f"stated ({c.stated_ccd}, {'-' if c.stated_jordan is None else c.stated_jordan})"
            for c in checks
        ]
        text += [f"{'ok  ' if t.passed else 'FAIL'} {t.entry}: trivial extensions only" for t in trivial]
        ok = all(c.passed for c in checks) and all(t.passed for t in trivial)
        return {"tables": checks, "trivial_extensions": dump_report(trivial)}, text, ok


COMMANDS: dict[str, Callable[[Runner], Outcome]] = {
    "verify": Runner.verify,
    "cohomology": Runner.cohomology,
    "extend": Runner.extend,
    "orbits": Runner.orbits,
    "iso": Runner.iso,
    "invariants": Runner.invariants,
    "list": Runner.list_entries,
    "show": Runner.show,
    "actions": Runner.actions,
    "tables": Runner.tables,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = _settings(args)
    except (CcdAlgError, ValueError) as exc:
        print(f"ccdalg: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=settings.log_level, format="%(levelname)s %(name)s: %(message)s", force=True)
    runner = Runner(args, settings)
    try:
        payload, text, ok = COMMANDS[args.command](runner)
    except (CcdAlgError, ValueError) as exc:
        print(f"ccdalg: error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(_dump(payload), indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print("\n".join(text))
    return 0 if ok else 1
