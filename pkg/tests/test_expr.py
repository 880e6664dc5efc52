from fractions import Fraction

import pytest

from ccdalg.errors import CoeffSyntaxError, UnknownParameterError
from ccdalg.expr import Add, Mul, Num, Pow, Var, evaluate, parse_coeff, show, substitute, to_poly, variables
from ccdalg.poly import param_ring


def test_parse_rational():
    assert parse_coeff("2/3") == Num(Fraction(2, 3))
    assert parse_coeff("-1") == Num(Fraction(-1))
    assert parse_coeff(" 4 / 6 ") == Num(Fraction(2, 3))


def test_parse_structure():
    assert parse_coeff("a+1") == Add(("+", "+"), (Var("a"), Num(Fraction(1))))
    assert parse_coeff("(a+1)*b") == Mul((Add(("+", "+"), (Var("a"), Num(Fraction(1)))), Var("b")))
    assert parse_coeff("x^2") == Pow(Var("x"), 2)


@pytest.mark.parametrize(
    "text, values, expected",
    [
        ("(a+1)", {"a": 2}, 3),
        ("a^2 - 1", {"a": -1}, 0),
        ("2*a - b", {"a": 3, "b": 1}, 5),
        ("1/2*a", {"a": 4}, 2),
        ("(a+b)^2 - a^2 - 2*a*b", {"a": 5, "b": 7}, 49),
    ],
)
def test_evaluate(qq, text, values, expected):
    assert evaluate(parse_coeff(text), qq, {k: qq(v) for k, v in values.items()}) == qq(expected)


def test_evaluate_in_prime_field(gf7):
    assert gf7.to_str(evaluate(parse_coeff("1/2 + a"), gf7, {"a": gf7(3)})) == "0"


def test_implicit_multiplication_is_rejected():
    with pytest.raises(CoeffSyntaxError) as exc:
        parse_coeff("2a")
    assert exc.value.offset == 1
    assert exc.value.text == "2a"


@pytest.mark.parametrize("text", ["a^", "1/0", "(a+1", "", "a +", "*a", "a - -", "2.5"])
def test_syntax_errors(text):
    with pytest.raises(CoeffSyntaxError):
        parse_coeff(text)


def test_offset_counts_bytes():
    with pytest.raises(CoeffSyntaxError) as exc:
        parse_coeff("ä + ?")
    # "ä" is an identifier character of two bytes
    assert exc.value.offset == len("ä + ".encode("utf-8"))


def test_unbound_parameter(qq):
    with pytest.raises(UnknownParameterError):
        evaluate(parse_coeff("c"), qq, {"a": qq(1)})


def test_variables():
    assert variables(parse_coeff("(a+1)*b^2 - 3")) == {"a", "b"}
    assert variables(parse_coeff("7/2")) == set()


@pytest.mark.parametrize(
    "text",
    ["a+1", "(a+1)*b - 2/3*a^2", "-1*b", "(a+b)+c", "a*(b*c)", "(1/2)^2", "(-2)^3", "a - -1", "(a^2)^3", "x*u+y*v"],
)
def test_show_is_canonical(text):
    node = parse_coeff(text)
    assert parse_coeff(show(node)) == node


def test_show_catalog_coefficients(catalog):
    texts = {t.coeff for e in catalog.entries for p in e.products for t in p.out}
    texts |= {s.formula for table in catalog.document.action_tables for s in table.stated}
    for text in texts:
        node = parse_coeff(text)
        assert parse_coeff(show(node)) == node


def test_to_poly_and_substitute(qq):
    ring = param_ring(("a", "b"))
    node = parse_coeff("(a+1)*b")
    assert to_poly(node, ring) == to_poly(parse_coeff("a*b + b"), ring)
    flipped = substitute(node, {"b": parse_coeff("-1*b")})
    assert evaluate(flipped, qq, {"a": qq(1), "b": qq(2)}) == qq(-4)
