import random

import pytest

from lieconf import ConformalAlgebra, LambdaElement, PresentedModule
from lieconf.errors import CapExhausted
from lieconf.poly import DEL, LAM, MPoly, RatPoly

from families import example_lie, instances, random_element

D = RatPoly.var()


@pytest.fixture(scope="module")
def L():
    return example_lie()


def lam_el(home, **polys):
    return LambdaElement.from_polys(home, polys)


def test_example_generator_brackets(L):
    e, u, n = L.gens()
    M = L.carrier
    assert L.lambda_bracket(u, n) == LambdaElement.constant(n)
    assert L.lambda_bracket(n, u) == LambdaElement.constant(-n)
    for g in (e, u, n):
        assert not L.lambda_bracket(e, g)
        assert not L.lambda_bracket(g, e)
    assert not L.lambda_bracket(u, u) and not L.lambda_bracket(n, n)
    assert L.verified


def test_bracket_of_u_plus_dn(L):
    # [u + Dn _L u + Dn] = (D + L) n + L n = (2L + D) n by sesquilinearity
    e, u, n = L.gens()
    a = u + n.d()
    assert L.lambda_bracket(a, a) == lam_el(L.carrier, n=LAM * 2 + DEL)
    assert L.lambda_bracket(a, a).to_str() == "(2*L + D)*n"


def test_series_of_example(L):
    e, u, n = L.gens()
    N = L.carrier.submodule([n])
    assert L.derived_series() == [L.whole(), N, L.carrier.zero_submodule()]
    assert L.central_series() == [L.whole(), N]
    assert L.stabilized_ideal() == N
    assert L.stabilized_ideal().rank() == 1
    assert L.is_solvable() and not L.is_nilpotent()
    assert L.derived_length() == 2
    # [M, N] is central in M
    assert L.bracket_submodule(L.whole(), L.bracket_submodule(L.whole(), N)) == L.bracket_submodule(L.whole(), N)


def test_centre_and_normalizer(L):
    e, u, n = L.gens()
    assert L.centre() == L.carrier.submodule([e])
    N = L.carrier.submodule([n])
    assert L.normalizer(N) == L.whole()
    U = L.carrier.submodule([u])
    # [n _L u] = -n is outside H u
    assert L.normalizer(U) == L.carrier.submodule([e, u])


def test_subalgebra_generated(L):
    e, u, n = L.gens()
    S = L.subalgebra_generated([u + n.d()])
    assert S == L.carrier.submodule([u + n.d(), n])
    assert L.subalgebra_generated([n]) == L.carrier.submodule([n])


def test_skew_violation_reported():
    M = PresentedModule(["x", "y"])
    x, y = M.gens()
    # [x _L x] = y but skew symmetry forces -y
    A = ConformalAlgebra(M, {("x", "x"): LambdaElement.constant(y)})
    assert not A.verified
    assert A.report.skew == [("x", "x")]


def test_jacobi_violation_reported():
    M = PresentedModule(["a", "b", "c"])
    a, b, c = M.gens()
    table = {
        ("a", "b"): LambdaElement.constant(c),
        ("b", "a"): LambdaElement.constant(-c),
        ("a", "c"): LambdaElement.constant(a),
        ("c", "a"): LambdaElement.constant(-a),
    }
    A = ConformalAlgebra(M, table)
    # [a [b c]] - [b [a c]] = c while [[a b] c] = 0
    assert ("a", "b", "c") in A.report.jacobi
    assert not A.report.skew


def test_relation_violation_reported():
    M = PresentedModule(["e", "u"], [[D, RatPoly()]])
    e, u = M.gens()
    A = ConformalAlgebra(
        M, {("e", "u"): LambdaElement.constant(u), ("u", "e"): LambdaElement.constant(-u)}
    )
    assert A.report.well_defined


def test_sesquilinearity_on_random_elements():
    rng = random.Random(3)
    for A, _ in instances(12, seed=5):
        a, b = random_element(rng, A), random_element(rng, A)
        ab = A.lambda_bracket(a, b)
        assert A.lambda_bracket(a.d(), b) == ab.mul(-LAM)
        assert A.lambda_bracket(a, b.d()) == ab.mul(LAM + DEL)
        # skew symmetry
        assert A.lambda_bracket(b, a) == A.skew_partner(a, b)


def test_series_cap_exhausted_carries_partial(L):
    with pytest.raises(CapExhausted) as info:
        L.derived_series(max_steps=1)
    assert info.value.partial[0] == L.whole()


def test_lambda_element_to_str_and_degree(L):
    e, u, n = L.gens()
    x = lam_el(L.carrier, n=LAM**2 + DEL, u=MPoly.const(3))
    assert x.degree() == 2
    assert x.to_str() == "3*u + (L^2 + D)*n"
