from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lieconf.poly import (
    DEL,
    LAM,
    MPoly,
    RatPoly,
    X,
    Y,
    antipode,
    binomial,
    coproduct,
    counit,
    falling,
    fourier,
    fourier_inverse,
    lambda_to_pseudo,
    poly_gcd,
    pseudo_to_lambda,
    rational_roots,
    straighten,
    strip_rational_roots,
    unstraighten,
)

from strategies import mpolys, nonzero_ratpolys, ratpolys

D = RatPoly.var()
x = sympy.Symbol("x")


def to_sympy(p: RatPoly):
    return sum((sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p.coeffs)), sympy.Integer(0))


def from_sympy(expr) -> RatPoly:
    poly = sympy.Poly(expr, x)
    return RatPoly([Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())])


def test_construction_and_degree():
    assert RatPoly().degree == -1
    assert RatPoly([1, 2, 0, 0]).degree == 1
    assert RatPoly.monomial(3, 2) == RatPoly([0, 0, 0, 2])
    assert (D + 1).lc == 1


def test_str_uses_variable_name():
    assert (D**2 - Fraction(3, 2)).to_str("D") == "D^2 - 3/2"
    assert RatPoly().to_str() == "0"


@given(ratpolys(), ratpolys())
def test_ring_operations_match_sympy(p, q):
    assert to_sympy(p + q).expand() == (to_sympy(p) + to_sympy(q)).expand()
    assert to_sympy(p * q).expand() == (to_sympy(p) * to_sympy(q)).expand()


@given(ratpolys(), nonzero_ratpolys())
def test_divmod_matches_sympy(p, q):
    quo, rem = divmod(p, q)
    squo, srem = sympy.div(to_sympy(p), to_sympy(q), x)
    assert quo == from_sympy(squo)
    assert rem == from_sympy(srem)
    assert rem.degree < q.degree


@given(ratpolys(3), ratpolys(3))
def test_gcd_matches_sympy(p, q):
    if not p and not q:
        return
    g = poly_gcd(p, q)
    want = sympy.Poly(sympy.gcd(to_sympy(p), to_sympy(q)), x).monic()
    assert g == from_sympy(want.as_expr())


@given(ratpolys(), st.integers(-3, 3))
def test_shift_and_reflect(p, c):
    assert to_sympy(p.shift(c)).expand() == to_sympy(p).subs(x, x + c).expand()
    assert to_sympy(p.reflect()).expand() == to_sympy(p).subs(x, -x).expand()


@given(
    st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=5), max_size=4),
    nonzero_ratpolys(2),
)
def test_rational_roots_against_sympy(roots, cofactor):
    p = cofactor
    for r in roots:
        p = p * RatPoly([-r, 1])
    want = sorted({Fraction(int(r.p), int(r.q)) for r in sympy.Poly(to_sympy(p), x).ground_roots() if r.is_Rational})
    assert rational_roots(p) == want


def test_rational_roots_large_coefficients():
    p = (D - Fraction(7, 1000)) * (D + 123456789) * (D**2 + 1)
    assert rational_roots(p) == [Fraction(-123456789), Fraction(7, 1000)]


def test_strip_rational_roots_keeps_irrational_part():
    p = (D - 1) ** 2 * (D + Fraction(1, 2)) * (D**2 - 2)
    assert strip_rational_roots(p).monic() == D**2 - 2


def test_rational_roots_of_zero_raises():
    with pytest.raises(ValueError):
        rational_roots(RatPoly())


def test_falling_and_binomial():
    assert falling(5, 2) == 20
    assert falling(-1, 3) == -6
    assert binomial(5, 2) == 10
    assert binomial(-2, 2) == 3  # (-2)(-3)/2
    assert binomial(3, 5) == 0


# -- Hopf structure ----------------------------------------------------------


@given(ratpolys())
def test_counit_axiom(h):
    # (eps (x) id) Delta h = h
    assert coproduct(h).substitute([MPoly.const(0), X]).univariate(0) == h


@given(ratpolys())
def test_antipode_axiom(h):
    # m (S (x) id) Delta h = eps(h) 1
    Dm = MPoly.gen(0, 2)
    assert coproduct(h).substitute([-Dm, Dm]).univariate(0) == RatPoly.const(counit(h))
    assert antipode(antipode(h)) == h


@given(ratpolys())
def test_coassociativity(h):
    x1, x2, x3 = (MPoly.gen(i, 3) for i in range(3))
    left = coproduct(h).substitute([x1 + x2, x3])
    right = coproduct(h).substitute([x1, x2 + x3])
    assert left == right


@given(mpolys())
def test_fourier_inversion(p):
    assert fourier_inverse(fourier(p)) == p
    assert fourier(fourier_inverse(p)) == p


@given(mpolys())
def test_straighten_round_trip(p):
    parts = straighten(p)
    assert unstraighten(parts) == p
    assert [n for _, n in parts] == sorted({n for _, n in parts})


@given(mpolys())
def test_lambda_dictionary_round_trip(p):
    assert lambda_to_pseudo(pseudo_to_lambda(p)) == p
    assert pseudo_to_lambda(lambda_to_pseudo(p)) == p


def test_lambda_dictionary_on_monomials():
    # x <-> -L, y <-> D + L
    assert pseudo_to_lambda(X) == -LAM
    assert pseudo_to_lambda(Y) == DEL + LAM
    assert pseudo_to_lambda(X + Y) == DEL


def test_mpoly_to_str():
    p = (LAM * 2 + DEL) * (LAM - 1)
    assert p.to_str(["L", "D"]) == "2*L^2 + L*D - 2*L - D"
