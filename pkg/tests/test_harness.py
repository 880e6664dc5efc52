import pytest

from ccdalg import harness
from ccdalg.catalog import Catalog
from ccdalg.errors import FieldError
from ccdalg.fields import eisenstein, prime_field
from ccdalg.harness import (
    ReportItem,
    cohomology_table_report,
    distinguish_all,
    dump_report,
    reconstruct_extension,
    report_failures,
    split_round_trip,
    trivial_extension_report,
    verify_action_tables,
    verify_catalog,
    verify_families,
)

SMALL = ["C3s_01", "C4_02", "C4_04", "C5_13", "C5_14", "C5_41"]


@pytest.fixture(scope="module")
def report(catalog):
    return verify_catalog(catalog)


def test_catalog_verifies(report):
    assert report
    assert report_failures(report) == []
    checks = {item.check for item in report}
    assert {"commutative", "nilpotent", "ccd", "almost_jordan", "jordan", "annihilator", "extension"} <= checks


def test_every_entry_is_checked(catalog, report):
    assert {item.entry for item in report} == set(catalog.names())
    samples = {item.sample for item in report if item.entry == "C5_13"}
    assert samples == set(range(5))


def test_report_is_sorted(report):
    assert report == sorted(report, key=ReportItem.sort_key)


def test_worker_count_does_not_change_report(catalog):
    one = verify_catalog(catalog, names=SMALL, workers=1)
    four = verify_catalog(catalog, names=SMALL, workers=4)
    assert dump_report(one) == dump_report(four)


def test_verify_over_prime_field(catalog):
    items = verify_catalog(catalog, field=prime_field(7), names=["C3s_01", "C4_04", "C5_41"])
    assert report_failures(items) == []


@pytest.mark.parametrize("field", [prime_field(2), prime_field(3), eisenstein()])
def test_verify_rejects_field(catalog, field):
    with pytest.raises(FieldError):
        verify_catalog(catalog, field=field)


def test_corrupted_entry_is_reported(catalog):
    document = catalog.document.model_copy(deep=True)
    entry = next(e for e in document.entries if e.name == "C5_41")
    entry.products = [p for p in entry.products if (p.i, p.j) != (3, 4)]
    corrupted = Catalog(catalog.path, document)
    items = verify_catalog(corrupted, names=["C5_41"])
    failing = {item.check for item in report_failures(items)}
    assert failing == {"extension"}
    assert next(i for i in items if i.check == "ccd").passed


def test_identity_grid_reaches_the_checks(catalog, monkeypatch):
    seen = set()
    check_identity = harness.check_identity

    def recording(algebra, which, **kwargs):
        seen.add((which, kwargs["grid_limit"], kwargs["seed"]))
        return check_identity(algebra, which, **kwargs)

    monkeypatch.setattr(harness, "check_identity", recording)
    items = verify_catalog(catalog, names=["C5_41"], grid_limit=8, seed=3)
    assert ("almost_jordan", 8, 3) in seen
    assert next(i for i in items if i.check == "almost_jordan").passed


def test_replaced_samples(catalog):
    items = verify_catalog(catalog, names=["C4_02"], samples={"C4_02": [{"a": "5"}]})
    assert {item.sample for item in items} == {0}
    assert report_failures(items) == []


def test_dump_report():
    item = ReportItem(entry="A", sample=0, check="ccd", passed=False, witness="x")
    assert dump_report([item]) == [{"entry": "A", "sample": 0, "check": "ccd", "pass": False, "witness": "x"}]
    ok = ReportItem.model_validate({"entry": "A", "sample": 1, "check": "ccd", "pass": True})
    assert dump_report([ok]) == [{"entry": "A", "sample": 1, "check": "ccd", "pass": True}]


def test_reconstruct_extension(catalog, qq):
    entry = catalog.entry("C5_41")
    assert reconstruct_extension(catalog, entry, {}, qq) == catalog.algebra("C5_41")
    with pytest.raises(ValueError):
        reconstruct_extension(catalog, catalog.entry("C3s_01"), {}, qq)


def test_reconstruct_family_extension(catalog, qq):
    point = {"a": qq(2), "b": qq(-3)}
    assert reconstruct_extension(catalog, catalog.entry("C5_13"), point, qq) == catalog.specialized("C5_13", point)


def test_split_round_trip(catalog):
    assert split_round_trip(catalog.algebra("C5_25"))
    assert split_round_trip(catalog.specialized("C5_13", {"a": 2, "b": 1}))


def test_distinguish(catalog):
    report = distinguish_all(catalog, ["C5_14", "C5_41"])
    assert report.separated
    assert set(report.fingerprints) == {"C5_14", "C5_41"}


def test_distinguish_labels_family_samples(catalog):
    report = distinguish_all(catalog, ["C5_13"], all_samples=True)
    assert sorted(report.fingerprints) == [f"C5_13[{k}]" for k in range(5)]


def test_families(catalog):
    checks = verify_families(catalog, samples=10)
    assert len(checks) == len(catalog.document.automorphism_families)
    assert all(check.passed for check in checks)


def test_action_tables(catalog):
    checks = verify_action_tables(catalog, points=100)
    assert len(checks) == len(catalog.document.action_tables)
    assert all(check.passed for check in checks)


def test_cohomology_tables(catalog):
    checks = cohomology_table_report(catalog)
    assert len(checks) == len(catalog.document.cohomology_tables)
    assert all(check.passed for check in checks)
    first = cohomology_table_report(catalog, ["coh_C3s_01"])
    assert [(c.h2_ccd, c.h2_jordan) for c in first] == [(5, 4)]


def test_parametric_cohomology_tables(catalog):
    checks = cohomology_table_report(catalog, ["coh_C4_02_generic", "coh_C4_02_a1", "coh_C4_02_a0"])
    assert [(c.table, c.h2_ccd) for c in checks] == [
        ("coh_C4_02_generic", 2),
        ("coh_C4_02_a1", 3),
        ("coh_C4_02_a0", 2),
    ]
    assert all(c.listed_span and c.passed for c in checks)


def test_trivial_extensions(catalog):
    items = trivial_extension_report(catalog)
    assert [item.entry for item in items] == sorted(catalog.document.trivial_extensions.algebras)
    assert report_failures(items) == []
