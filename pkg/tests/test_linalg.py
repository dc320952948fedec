from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from lieconf import linalg
from lieconf.poly import RatPoly

t = sympy.Symbol("t")

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def square(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)
    )


def rect():
    return st.tuples(st.integers(1, 4), st.integers(1, 5)).flatmap(
        lambda s: st.lists(st.lists(small, min_size=s[1], max_size=s[1]), min_size=s[0], max_size=s[0])
    )


def sym(A):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in A])


@given(square())
def test_charpoly_matches_sympy(A):
    want = sympy.Poly(sym(A).charpoly(t).as_expr(), t)
    got = linalg.charpoly(A)
    assert got == RatPoly([Fraction(int(c.p), int(c.q)) for c in reversed(want.all_coeffs())])


@given(rect())
def test_rref_matches_sympy(A):
    R, pivots = linalg.rref(A, len(A[0]))
    SR, spiv = sym(A).rref()
    assert list(spiv) == pivots
    assert sym(R) == SR[: len(pivots), :] if pivots else not R


@given(rect())
def test_nullspace_is_kernel_of_right_dimension(A):
    n = len(A[0])
    K = linalg.nullspace(A, n)
    assert len(K) == n - linalg.rank(A, n)
    for v in K:
        assert not any(linalg.matvec(A, v))


@given(rect(), rect())
def test_intersect_spans(A, B):
    n = min(len(A[0]), len(B[0]))
    A = [r[:n] for r in A]
    B = [r[:n] for r in B]
    I = linalg.intersect_spans(A, B, n)
    ra, rb = linalg.rank(A, n), linalg.rank(B, n)
    rsum = linalg.rank(A + B, n)
    assert len(I) == ra + rb - rsum
    for v in I:
        assert linalg.rank(A + [v], n) == ra
        assert linalg.rank(B + [v], n) == rb


def test_eigenvalue_candidates_flags_irrational():
    vals, irr = linalg.eigenvalue_candidates([[Fraction(0), Fraction(2)], [Fraction(1), Fraction(0)]])
    assert vals == [] and irr
    vals, irr = linalg.eigenvalue_candidates([[Fraction(1), Fraction(0)], [Fraction(5), Fraction(3)]])
    assert vals == [1, 3] and not irr
