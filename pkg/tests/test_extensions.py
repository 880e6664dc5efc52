import pytest

from ccdalg.algebra import algebra_from_table, change_of_basis
from ccdalg.cohomology import BilinearForm, Cocycle
from ccdalg.errors import DimensionMismatchError, FieldMismatchError, NoAnnihilatorError
from ccdalg.extensions import (
    ExtensionSpec,
    central_extension,
    extension_report,
    parse_cocycle,
    split_annihilator,
    verify_ann_decomposition,
)


def test_extension_matches_catalog(catalog):
    base = catalog.algebra("C3s_01")
    theta = parse_cocycle("2,2,1;3,3,1", base)
    assert central_extension(ExtensionSpec(base, theta)) == catalog.algebra("C4_04")


def test_two_dimensional_extension(catalog):
    base = catalog.algebra("C3s_01")
    theta = parse_cocycle("3,3,1 | 2,2,1", base, s=2)
    assert theta.s == 2
    assert central_extension(ExtensionSpec(base, theta)) == catalog.algebra("C5_14")


def test_annihilator_decomposition(catalog):
    base = catalog.algebra("C3s_01")
    for text in ("2,2,1;3,3,1", "2,2,1", "1,1,1", "2,3,1 | 1,2,1"):
        assert verify_ann_decomposition(ExtensionSpec(base, parse_cocycle(text, base)))


def test_extension_report(catalog):
    base = catalog.algebra("C3s_01")
    report = extension_report(ExtensionSpec(base, parse_cocycle("2,3,1", base)))
    assert report.dim == 4
    assert report.table == "e1e1=e2, e2e3=e4"
    assert report.cocycle == "(Δ23)"
    assert report.cocycle_in_z2
    assert report.ccd
    assert report.jordan
    assert report.ann_decomposition
    assert report.in_ts
    assert report.jordan_split == "R"


def test_parse_cocycle_with_fractions(catalog, qq):
    base = catalog.algebra("C3s_01")
    theta = parse_cocycle("1,3,1/2; 3,1,1/2; 2,2,-1", base)
    assert theta.components[0].entry(0, 2) == qq(1)
    assert theta.components[0].entry(1, 1) == qq(-1)
    assert theta.label() == "(Δ13 - Δ22)"


@pytest.mark.parametrize("text", ["1,2", "1;2;3", "1,2,3,4"])
def test_parse_cocycle_malformed(catalog, text):
    with pytest.raises(ValueError):
        parse_cocycle(text, catalog.algebra("C3s_01"))


def test_parse_cocycle_ranges(catalog):
    base = catalog.algebra("C3s_01")
    with pytest.raises(DimensionMismatchError):
        parse_cocycle("1,4,1", base)
    with pytest.raises(DimensionMismatchError):
        parse_cocycle("1,2,1", base, s=2)


def test_spec_checks_dimension_and_field(catalog, gf7):
    base = catalog.algebra("C3s_01")
    with pytest.raises(DimensionMismatchError):
        ExtensionSpec(base, Cocycle((BilinearForm.zero(base.ring, 4),)))
    with pytest.raises(FieldMismatchError):
        ExtensionSpec(base, Cocycle((BilinearForm.zero(gf7, 3),)))


@pytest.mark.parametrize("name, quotient_dim", [("C4s_01", 1), ("C5_25", 3), ("C5_41", 4), ("C4_04", 3)])
def test_split_round_trip(catalog, name, quotient_dim):
    algebra = catalog.algebra(name)
    split = split_annihilator(algebra)
    assert split.quotient.dim == quotient_dim
    assert split.theta.s == algebra.dim - quotient_dim
    rebuilt = central_extension(ExtensionSpec(split.quotient, split.theta))
    assert change_of_basis(algebra, split.basis) == rebuilt


def test_split_needs_annihilator():
    with pytest.raises(NoAnnihilatorError):
        split_annihilator(algebra_from_table("e1e1=e1"))
