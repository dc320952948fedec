from fractions import Fraction

import pytest

from lieconf.errors import ParseError
from lieconf.parsing import parse_linear, parse_poly
from lieconf.poly import MPoly

L = MPoly.gen(0, 2)
D = MPoly.gen(1, 2)


def test_parse_poly_basic():
    assert parse_poly("(D + 2*L)", ["L", "D"]) == D + L * 2
    assert parse_poly("3/2*L^2 - D", ["L", "D"]) == L**2 * Fraction(3, 2) - D
    assert parse_poly("-(L - 1)", ["L", "D"]) == -(L - 1)


def test_juxtaposition_multiplies():
    assert parse_poly("2L", ["L", "D"]) == L * 2
    assert parse_poly("2 (D + 1)", ["L", "D"]) == (D + 1) * 2


def test_parse_linear_collects_generators():
    out = parse_linear("(2*L + D)*n - u + 3*D*n", ["L", "D"], ["u", "n"])
    assert out["n"] == L * 2 + D * 4
    assert out["u"] == MPoly.const(-1, 2)


def test_parse_linear_zero():
    assert parse_linear("0", ["L", "D"], ["u"]) == {}


@pytest.mark.parametrize(
    "text, column",
    [("D + ", 5), ("D $ 2", 3), ("q*D", 1), ("D^x", 3), ("(D + 1", 7)],
)
def test_errors_are_positioned(text, column):
    with pytest.raises(ParseError) as info:
        parse_poly(text, ["L", "D"], line=4)
    assert info.value.line == 4
    assert info.value.column == column


def test_nonlinear_generator_terms_rejected():
    with pytest.raises(ParseError):
        parse_linear("u*n", ["D"], ["u", "n"])
    with pytest.raises(ParseError):
        parse_linear("D + u", ["D"], ["u"])
