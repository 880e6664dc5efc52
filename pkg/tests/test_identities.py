from pathlib import Path

import pytest

from ccdalg.algebra import algebra_from_table
from ccdalg.catalog import field_value, load_catalog, parameter_samples
from ccdalg.errors import FieldError, UnevaluatedParametersError
from ccdalg.fields import prime_field, rationals
from ccdalg.identities import IDENTITIES, _grid_points, check_identity, satisfies_jordan

CATALOG = load_catalog(Path(__file__).parents[1] / "data" / "catalog.json")

# e1 generates a chain of powers; commutative and nilpotent but not CCD
POWER_CHAIN = "e1e1=e2, e1e2=e3, e1e3=e4, e1e4=e5"


@pytest.fixture
def power_chain():
    return algebra_from_table(POWER_CHAIN)


def test_ccd_holds_on_catalog_algebras(catalog):
    for name in ("C3s_01", "C3_01", "C4_04", "C5_41"):
        result = check_identity(catalog.algebra(name), "ccd")
        assert result.holds
        assert result.witness is None
        assert not result.heuristic


def test_jordan_split(catalog):
    assert check_identity(catalog.algebra("C3s_01"), "jordan_linearized").holds
    assert check_identity(catalog.algebra("C3s_02"), "jordan_linearized").holds
    result = check_identity(catalog.algebra("C3_01"), "jordan_linearized")
    assert not result.holds
    assert len(result.witness) == 4
    assert satisfies_jordan(catalog.algebra("C4s_06"))
    assert not satisfies_jordan(catalog.algebra("C4_01"))


def test_ccd_fails_on_power_chain(power_chain):
    result = check_identity(power_chain, "ccd")
    assert not result.holds
    assert all(1 <= i <= 5 for i in result.witness)


def test_equivalent_identities_agree(power_chain, catalog):
    for algebra in (power_chain, catalog.algebra("C4_02").specialize({"a": 2})):
        verdicts = {which: check_identity(algebra, which).holds for which in ("ccd", "almost_jordan", "g_symmetric")}
        assert len(set(verdicts.values())) == 1, verdicts


@pytest.mark.parametrize("name", CATALOG.names())
def test_equivalent_identities_agree_on_every_entry(name):
    qq = rationals()
    for values in parameter_samples(CATALOG.entry(name)):
        point = {k: field_value(v, qq) for k, v in values.items()}
        algebra = CATALOG.specialized(name, point)
        verdicts = {which: check_identity(algebra, which).holds for which in ("ccd", "almost_jordan", "g_symmetric")}
        assert set(verdicts.values()) == {True}, (values, verdicts)


def test_commutative_always_holds(power_chain):
    assert check_identity(power_chain, "commutative").holds


def test_small_characteristic_is_refused(catalog):
    for p in (2, 3):
        with pytest.raises(FieldError):
            check_identity(catalog.specialized("C3s_01", field=prime_field(p)), "ccd")


def test_prime_field_results_are_heuristic(catalog):
    result = check_identity(catalog.specialized("C3_01", field=prime_field(5)), "ccd")
    assert result.holds
    assert result.heuristic


def test_jordan_flag_in_any_characteristic(catalog):
    assert satisfies_jordan(catalog.specialized("C3s_01", field=prime_field(2)))


def test_unknown_identity(catalog):
    with pytest.raises(ValueError):
        check_identity(catalog.algebra("C3s_01"), "associative")


def test_parametric_family_is_refused(catalog):
    with pytest.raises(UnevaluatedParametersError):
        check_identity(catalog.algebra("C4_02"), "ccd")


def test_identity_names():
    assert set(IDENTITIES) == {"commutative", "ccd", "almost_jordan", "jordan_linearized", "g_symmetric"}


def test_almost_jordan_grid_size():
    assert len(_grid_points(3, 1, 0)) == 4**3
    assert len(set(_grid_points(4, 1, 0))) == 4**4
    assert len(set(_grid_points(5, 64, 0))) == 64
    assert _grid_points(5, 64, 0) == _grid_points(5, 64, 0)
    assert _grid_points(5, 64, 0) != _grid_points(5, 64, 1)
