import pytest

from ccdalg.algebra import algebra_from_table, change_of_basis
from ccdalg.errors import DimensionMismatchError, FieldMismatchError
from ccdalg.linalg import Matrix
from ccdalg.maps import (
    candidate_count,
    check_same_field,
    free_assignments,
    generator_program,
    homomorphisms_from,
    is_homomorphism,
    square,
)


def test_program_of_nilpotent_algebra(catalog, qq):
    program = generator_program(catalog.algebra("C3s_02"))
    assert program.generators == 1
    assert program.free == 1
    assert program.recipe == (None, (0, 0), (0, 1))


def test_program_extends_to_homomorphism(catalog, qq):
    algebra = catalog.algebra("C3_01")
    program = generator_program(algebra)
    # e1 -> 2e1 forces e2 -> 4e2 and e3 -> 16e3
    m = program.extend(algebra, [(qq(2), qq(0), qq(0))])
    assert m == Matrix.from_rows(qq, [[2, 0, 0], [0, 4, 0], [0, 0, 16]])
    assert is_homomorphism(algebra, algebra, m)


def test_program_of_algebra_with_unit_square():
    program = generator_program(algebra_from_table("e1e1=e1"))
    assert program.generators == 0
    assert program.free == 1


def test_is_homomorphism(catalog, qq):
    algebra = catalog.algebra("C3s_01")
    assert is_homomorphism(algebra, algebra, Matrix.identity(qq, 3))
    assert not is_homomorphism(algebra, algebra, Matrix.from_rows(qq, [[2, 0, 0], [0, 2, 0], [0, 0, 1]]))
    with pytest.raises(DimensionMismatchError):
        is_homomorphism(algebra, algebra, Matrix.identity(qq, 2))


def test_square(catalog):
    assert square(catalog.algebra("C4_04")).dim == 2
    assert square(catalog.algebra("C4_04")).non_pivots() == (0, 2)


def test_candidate_count_over_gf2(catalog, gf2):
    algebra = catalog.specialized("C3s_01", field=gf2)
    program = generator_program(algebra)
    assert program.generators == 2
    # generator images independent modulo A² = <e2>
    assert candidate_count(program, algebra) == (8 - 2) * (8 - 4)
    assert sum(1 for _ in free_assignments(program, algebra)) == 24


def test_automorphisms_found_from_generators(catalog, gf2):
    algebra = catalog.specialized("C3s_01", field=gf2)
    program = generator_program(algebra)
    found = list(homomorphisms_from(program, algebra, free_assignments(program, algebra)))
    assert len(found) == 8
    assert all(change_of_basis(algebra, m) == algebra for m in found)


def test_check_same_field(catalog, gf7):
    a = catalog.algebra("C3s_01")
    with pytest.raises(FieldMismatchError):
        check_same_field(a, catalog.specialized("C3s_01", field=gf7))
    with pytest.raises(DimensionMismatchError):
        check_same_field(a, catalog.algebra("C4s_01"))
