import pytest

from ccdalg.cohomology import (
    BilinearForm,
    Cocycle,
    cocycle_annihilator,
    cocycle_space,
    coboundary_space,
    cohomology_basis,
    cohomology_summary,
    delta_index,
    delta_label,
    delta_pairs,
    is_cocycle,
    membership_ts,
    nabla_coordinates,
    trivial_extension_check,
)
from ccdalg.errors import DimensionMismatchError
from ccdalg.fields import prime_field


def delta(field, n, *pairs):
    """``Σ Δ_ij`` for 1-based pairs."""
    return BilinearForm.from_pairs(field, n, {(i - 1, j - 1): 1 for i, j in pairs})


def test_delta_order():
    assert delta_pairs(3) == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    assert [delta_index(3, i, j) for i, j in delta_pairs(3)] == list(range(6))
    assert delta_index(3, 2, 0) == delta_index(3, 0, 2)
    assert delta_label(1, 2) == "Δ23"
    assert delta_label(2, 10) == "Δ3,11"


def test_form_label(qq):
    form = BilinearForm.from_pairs(qq, 3, {(0, 2): 1, (1, 1): 2, (2, 2): -1})
    assert form.label() == "Δ13 + 2Δ22 - Δ33"
    assert BilinearForm.zero(qq, 3).label() == "0"


def test_form_out_of_range(qq):
    with pytest.raises(DimensionMismatchError):
        BilinearForm.from_pairs(qq, 2, {(0, 2): 1})


@pytest.mark.parametrize(
    "name, h2, h2_jordan",
    [("C3s_01", 5, 4), ("C3_01", 1, 0), ("C4s_06", 9, 8)],
)
def test_cohomology_dimensions(catalog, name, h2, h2_jordan):
    basis = cohomology_basis(catalog.algebra(name))
    assert basis.dim_h2 == h2
    assert basis.dim_h2_jordan == h2_jordan


def test_coboundaries_have_dimension_of_square(catalog):
    assert coboundary_space(catalog.algebra("C3s_01")).dim == 1
    assert coboundary_space(catalog.algebra("C3_01")).dim == 2
    assert coboundary_space(catalog.algebra("C5_14")).dim == 3


def test_coboundaries_are_cocycles(catalog):
    for name in ("C3s_02", "C3_01", "C4_04", "C4s_06"):
        basis = cohomology_basis(catalog.algebra(name))
        assert basis.z2.contains_subspace(basis.b2)
        assert basis.dim_h2 == basis.z2.dim - basis.b2.dim


def test_h2_is_canonical_complement(catalog):
    basis = cohomology_basis(catalog.algebra("C3s_01"))
    assert basis.h2.intersection(basis.b2).dim == 0
    assert basis.h2.sum(basis.b2) == basis.z2
    # Δ11 spans B², so no representative uses it
    assert all(basis.z2.field.is_zero(v[0]) for v in basis.h2.vectors)


def test_symmetric_all_variety(catalog):
    assert cocycle_space(catalog.algebra("C3_01"), "symmetric_all").dim == 6
    with pytest.raises(ValueError):
        cocycle_space(catalog.algebra("C3_01"), "lie")


def test_jordan_cocycles_inside_ccd_cocycles(catalog):
    for name in ("C3s_01", "C3s_03", "C4s_05"):
        algebra = catalog.algebra(name)
        z2_ccd = cocycle_space(algebra, "ccd")
        z2_jordan = cocycle_space(algebra, "jordan")
        assert z2_jordan.contains_subspace(coboundary_space(algebra))
        assert z2_ccd.contains_subspace(z2_jordan)


def test_is_cocycle(catalog, qq):
    algebra = catalog.algebra("C3_01")
    assert is_cocycle(algebra, delta(qq, 3, (1, 1)))
    assert not is_cocycle(algebra, delta(qq, 3, (1, 3)))
    assert not is_cocycle(algebra, delta(qq, 3, (3, 3)))
    assert is_cocycle(algebra, delta(qq, 3, (1, 3)), "symmetric_all")


def test_cocycle_annihilator(catalog, qq):
    algebra = catalog.algebra("C3s_01")
    assert cocycle_annihilator(algebra, Cocycle((delta(qq, 3, (2, 2)),))).dim == 2
    assert cocycle_annihilator(algebra, Cocycle((delta(qq, 3, (2, 2), (3, 3)),))).dim == 1


def test_membership_ts(catalog, qq):
    algebra = catalog.algebra("C3s_01")
    basis = cohomology_basis(algebra)
    # the radical of Δ22 meets Ann(A) in e3
    assert not membership_ts(algebra, Cocycle((delta(qq, 3, (2, 2)),)), basis).in_ts
    non_jordan = membership_ts(algebra, Cocycle((delta(qq, 3, (2, 2), (3, 3)),)), basis)
    assert non_jordan.in_ts
    assert non_jordan.jordan_split == "U"
    jordan = membership_ts(algebra, Cocycle((delta(qq, 3, (2, 3)),)), basis)
    assert jordan.in_ts
    assert jordan.jordan_split == "R"
    coboundary = membership_ts(algebra, Cocycle((delta(qq, 3, (1, 1)),)), basis)
    assert not coboundary.independent
    assert not coboundary.in_ts


def test_dependent_components_are_not_in_ts(catalog, qq):
    algebra = catalog.algebra("C3s_01")
    form = delta(qq, 3, (2, 3))
    assert not membership_ts(algebra, Cocycle((form, form.scaled(qq(2))))).in_ts


def test_no_extension_of_c3_01_lies_in_t1(catalog, gf2):
    algebra = catalog.algebra("C3_01")
    basis = cohomology_basis(algebra)
    assert basis.dim_h2 == 1
    (form,) = basis.forms()
    assert not membership_ts(algebra, Cocycle((form,)), basis).in_ts
    over_gf2 = catalog.specialized("C3_01", field=gf2)
    basis2 = cohomology_basis(over_gf2)
    for v in basis2.z2.vectors:
        theta = Cocycle((BilinearForm(gf2, 3, v),))
        assert cocycle_annihilator(over_gf2, theta).contains((gf2.zero, gf2.zero, gf2.one))


def test_nabla_coordinates(catalog, qq):
    basis = cohomology_basis(catalog.algebra("C3s_01"))
    nablas = [delta(qq, 3, (2, 2)), delta(qq, 3, (2, 3))]
    theta = BilinearForm.from_pairs(qq, 3, {(1, 1): 3, (0, 0): 7})
    assert nabla_coordinates(basis, nablas, theta) == (qq(3), qq(0))
    assert nabla_coordinates(basis, nablas, delta(qq, 3, (3, 3))) is None


def test_trivial_extension_check(catalog, qq):
    algebra = catalog.algebra("C3_01")
    everything = [delta(qq, 3, pair) for pair in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3)]]
    check = trivial_extension_check(algebra, everything)
    assert check.contained
    assert not check.equal
    assert check.z2_dim == 3
    assert not trivial_extension_check(algebra, everything[:1]).contained


def test_cohomology_over_prime_field(catalog):
    basis = cohomology_basis(catalog.specialized("C3s_01", field=prime_field(7)))
    assert basis.dim_h2 == 5


def test_summary(catalog):
    summary = cohomology_summary(catalog.algebra("C3s_01"))
    assert summary.algebra == "C3s_01"
    assert (summary.z2, summary.b2, summary.h2, summary.h2_jordan) == (6, 1, 5, 4)
    assert len(summary.basis) == 5
    assert "Δ11" not in summary.basis
    assert len(summary.jordan_basis) == 4
