import itertools
import random

import pytest

from ccdalg.algebra import (
    Algebra,
    algebra_from_table,
    annihilator,
    associator,
    basis_vector,
    change_of_basis,
    direct_sum_zero,
    g_form,
    is_nilpotent,
    multiply,
    nilpotency_index,
    power_filtration,
    product_table,
)
from ccdalg.errors import (
    CoeffSyntaxError,
    DimensionMismatchError,
    FieldError,
    SingularMapError,
    UnevaluatedParametersError,
)
from ccdalg.fields import prime_field
from ccdalg.linalg import Matrix, unit_vector


def test_table_with_parameters(qq):
    family = algebra_from_table("e1e1=e2, e1e3=(a+1)e5", params=("a",))
    assert family.dim == 5
    assert family.params == ("a",)
    algebra = family.specialize({"a": 2})
    assert algebra.structure_constant(0, 2, 4) == qq(3)
    assert algebra.structure_constant(2, 0, 4) == qq(3)


@pytest.mark.parametrize(
    "text",
    ["e1e1=e2, e2e2=e3", "e1e2=e3", "e1e1=e2, e1e2=-e3 + 2e4", "e1e1=1/2e3"],
)
def test_product_table_round_trip(text):
    algebra = algebra_from_table(text)
    assert algebra_from_table(product_table(algebra)) == algebra


def test_product_table_is_canonical():
    assert product_table(algebra_from_table("e2e1 = e3, e1e1=e2")) == "e1e1=e2, e1e2=e3"
    assert product_table(algebra_from_table("e1e1=0", dim=2)) == "0"


def test_table_syntax_errors():
    with pytest.raises(ValueError):
        algebra_from_table("e1=e2")
    with pytest.raises(CoeffSyntaxError):
        algebra_from_table("e1e1=(a+)e2", params=("a",))


def test_from_products_checks_indices(qq):
    with pytest.raises(DimensionMismatchError):
        Algebra.from_products(2, qq, {(0, 0): {2: 1}})
    with pytest.raises(DimensionMismatchError):
        algebra_from_table("e1e1=e4", dim=3)


def test_equality_ignores_name(catalog):
    assert catalog.algebra("C3s_01") == algebra_from_table("e1e1=e2", dim=3, name="other")


def test_change_of_basis_by_identity(catalog, qq):
    algebra = catalog.algebra("C5_41")
    assert change_of_basis(algebra, Matrix.identity(qq, 5)) == algebra


def test_change_of_basis_permutation(catalog, qq):
    algebra = catalog.algebra("C3s_03")
    swap = Matrix.from_rows(qq, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert change_of_basis(algebra, swap) == algebra


def test_change_of_basis_scaling(catalog, qq):
    algebra = catalog.algebra("C3s_01")
    p = Matrix.from_rows(qq, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert change_of_basis(algebra, p) == algebra_from_table("e1e1=4e2", dim=3)


def test_change_of_basis_singular(catalog, qq):
    with pytest.raises(SingularMapError):
        change_of_basis(catalog.algebra("C3s_01"), Matrix.from_rows(qq, [[1, 1, 0], [1, 1, 0], [0, 0, 1]]))


def test_annihilator(catalog, qq):
    ann = annihilator(catalog.algebra("C3s_01"))
    assert ann.dim == 2
    assert ann.contains(unit_vector(qq, 3, 1))
    assert ann.contains(unit_vector(qq, 3, 2))
    assert annihilator(catalog.algebra("C3_01")).dim == 1


@pytest.mark.parametrize(
    "name, dims, index",
    [("C3s_01", (3, 1, 0), 3), ("C3_01", (3, 2, 1, 1, 0), 5), ("C3s_02", (3, 2, 1, 0), 4)],
)
def test_power_filtration(catalog, name, dims, index):
    algebra = catalog.algebra(name)
    assert tuple(s.dim for s in power_filtration(algebra)) == dims
    assert nilpotency_index(algebra) == index


def test_square_dimensions(catalog):
    assert power_filtration(catalog.algebra("C5_14"))[1].dim == 3
    assert power_filtration(catalog.algebra("C5_41"))[1].dim == 2


def test_not_nilpotent():
    algebra = algebra_from_table("e1e1=e1")
    assert not is_nilpotent(algebra)
    assert nilpotency_index(algebra) is None
    assert [s.dim for s in power_filtration(algebra)] == [1]


def test_multiply_needs_numeric_constants(catalog):
    family = catalog.algebra("C4_02")
    x = tuple(family.ring.one for _ in range(4))
    with pytest.raises(UnevaluatedParametersError):
        multiply(family, x, x)
    with pytest.raises(UnevaluatedParametersError):
        family.specialize({})


def test_specialize_into_prime_field(gf7):
    algebra = algebra_from_table("e1e1=1/2e2")
    moved = algebra.specialize({}, gf7)
    assert gf7.to_str(moved.structure_constant(0, 0, 1)) == "4"
    with pytest.raises(FieldError):
        algebra_from_table("e1e1=1/5e2").specialize({}, prime_field(5))


def test_multiply(catalog, qq):
    algebra = catalog.algebra("C3_01")
    e1 = unit_vector(qq, 3, 0)
    e2 = multiply(algebra, e1, e1)
    assert e2 == unit_vector(qq, 3, 1)
    assert multiply(algebra, e2, e2) == unit_vector(qq, 3, 2)


def test_direct_sum_zero(catalog):
    algebra = direct_sum_zero(catalog.algebra("C3s_01"), 2)
    assert algebra.dim == 5
    assert annihilator(algebra).dim == 4


def test_associator(catalog, qq):
    algebra = catalog.algebra("C5_25")
    e = [basis_vector(algebra, i) for i in range(5)]
    assert associator(algebra, e[0], e[0], e[1]) == tuple(qq(c) for c in (0, 0, 0, -1, 1))


def test_associative_algebra_has_zero_associators(catalog, qq):
    algebra = catalog.algebra("C3s_02")
    e = [basis_vector(algebra, i) for i in range(3)]
    for x, y, z in itertools.product(e, repeat=3):
        assert associator(algebra, x, y, z) == (qq.zero,) * 3


@pytest.mark.parametrize("name", ["C3_01", "C5_25", "C5_41"])
def test_g_form_is_symmetric(catalog, qq, name):
    algebra = catalog.algebra(name)
    rng = random.Random(3)
    for _ in range(25):
        x, y, z, t = ([qq(rng.randint(-3, 3)) for _ in range(algebra.dim)] for _ in range(4))
        value = g_form(algebra, x, y, z, t)
        assert g_form(algebra, x, z, y, t) == value
        assert g_form(algebra, x, y, t, z) == value
        assert g_form(algebra, x, t, z, y) == value
