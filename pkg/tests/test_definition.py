from pathlib import Path

import pytest

from lieconf.definition import parse_definition, parse_element, serialize
from lieconf.errors import DefinitionError, ParseError
from lieconf.vertex import build_example

FIXTURES = Path(__file__).parent / "fixtures"


def test_fixture_parses_to_example():
    defn = parse_definition((FIXTURES / "M.lie").read_text())
    L = defn.algebra
    assert defn.name == "M" and defn.vertex is None
    assert L.verified
    e, u, n = L.gens()
    assert L.lambda_bracket(n, u).to_str() == "-n"
    assert L.carrier.torsion_invariants()[0].to_str("D") == "D"
    assert "bracket n u filled in by skew symmetry" in defn.warnings
    assert any(w.startswith("brackets set to zero") for w in defn.warnings)


def test_explicit_zero_is_kept():
    text = "algebra A\ngenerator x\ngenerator y\nbracket x y = 0\nbracket y x = y\n"
    defn = parse_definition(text)
    # the table is inconsistent and must be reported as such, not repaired
    assert not defn.algebra.verified
    assert defn.algebra.report.skew == [("x", "y")]


def test_conformal_round_trip():
    defn = parse_definition((FIXTURES / "M.lie").read_text())
    text = serialize(defn)
    again = parse_definition(text)
    assert again.algebra.table == defn.algebra.table
    assert serialize(again) == text
    assert not again.warnings


def test_vertex_round_trip():
    V = build_example()
    text = serialize(V, truncation_order=6)
    defn = parse_definition(text)
    assert defn.vertex is not None
    assert defn.vertex.lo == -6 and defn.vertex.top == 0
    assert serialize(defn) == text
    e, u, n = defn.vertex.gens()
    assert defn.vertex.nth_product(u, u, -3) == V.nth_product(V.gen("u"), V.gen("u"), -3)


def test_vertex_brackets_must_agree():
    text = "algebra V\ngenerator e torsion D\ngenerator x\nvacuum e\nproduct x x 0 = 0\nbracket x x = x\n"
    with pytest.raises(DefinitionError):
        parse_definition(text)


def test_parse_element():
    L = parse_definition((FIXTURES / "M.lie").read_text()).algebra
    a = parse_element("u + D*n", L.carrier)
    assert a == L.gen("u") + L.gen("n").d()
    assert parse_element("3*D*e", L.carrier).is_zero()


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("generator x\n", 1, 1),
        ("algebra A\ngenerator x\nbracket x q = x\n", 3, 11),
        ("algebra A\ngenerator x\nfoo x\n", 3, 1),
        ("algebra A\ngenerator x\nbracket x x = (L + *x\n", 3, None),
        ("algebra A\ngenerator x\ngenerator x\n", 3, 11),
        ("algebra A\ngenerator x\nproduct x x k = x\n", 3, 13),
    ],
)
def test_parse_errors_are_positioned(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_definition(text)
    assert info.value.line == line
    if column is not None:
        assert info.value.column == column


def test_definition_errors():
    with pytest.raises(DefinitionError):
        parse_definition("algebra A\ngenerator x torsion 3\n")
    with pytest.raises(DefinitionError):
        parse_definition("algebra A\ngenerator e\ngenerator x\nproduct x x 0 = x\n")
