import random
from fractions import Fraction

import pytest
import sympy

from lieconf import (
    ExampleElement,
    PresentedModule,
    VertexAlgebra,
    build_example,
    coefficient,
    check_vertex_axioms,
    exp_inner_automorphism,
    is_nilpotent_element,
    lie_functor,
    root_space_decomposition,
)
from lieconf.errors import NotSquareZero, WindowError
from lieconf.poly import RatPoly
from lieconf.vertex import conjugating_automorphism, example_product

t, z, Dn = sympy.symbols("t z Dn")
D = RatPoly.var()


# -- an independent model of the example -------------------------------------
# U = Q[t^-1] with D = d/dt and Y(a, z) b = a(t + z) b;  Y(a, z) n = a(z) n;
# D-covariance and skew symmetry fix everything else.


def _u_expr(up, var):
    return sum((sympy.Rational(c.numerator, c.denominator) * var ** (-k) for k, c in up.items()), sympy.Integer(0))


def _n_expr(q):
    return sum((sympy.Rational(c.numerator, c.denominator) * Dn**i for i, c in enumerate(q.coeffs)), sympy.Integer(0))


def _laurent(expr, var):
    """{power: coefficient} for a Laurent polynomial in ``var``."""
    out = {}
    for term in sympy.Add.make_args(sympy.expand(expr)):
        if term == 0:
            continue
        c, p = term.as_coeff_exponent(var)
        out[int(p)] = out.get(int(p), 0) + c
    return out


def _y_u_on_n(up, q, w):
    # Y(a, w) D^K n = sum_i C(K, i) D^(K-i) (-d/dw)^i a(w) n
    a = _u_expr(up, w)
    out = sympy.Integer(0)
    for K, c in enumerate(q.coeffs):
        if not c:
            continue
        for i in range(K + 1):
            out += sympy.Rational(c.numerator, c.denominator) * sympy.binomial(K, i) * Dn ** (K - i) * (-1) ** i * sympy.diff(a, w, i)
    return sympy.expand(out)


def oracle_product(x, y, m):
    up = {}
    if m < 0:
        k = -m - 1
        prod = sympy.expand(sympy.diff(_u_expr(x.u_part, t), t, k) / sympy.factorial(k) * _u_expr(y.u_part, t))
        for p, c in _laurent(prod, t).items():
            up[-p] = Fraction(int(c.p), int(c.q))
    # x_u acting on y_n: coefficient of z^(-m-1)
    n_expr = _laurent(_y_u_on_n(x.u_part, y.n_part, z), z).get(-m - 1, 0)
    # y_u acting on x_n by skew symmetry: Y(b, z) a = e^(zD) Y(a, -z) b
    ya = _laurent(_y_u_on_n(y.u_part, x.n_part, z).subs(z, -z), z)
    for p, c in ya.items():
        r = -m - 1 - p
        if r >= 0:
            n_expr += c * Dn**r / sympy.factorial(r)
    n_poly = sympy.Poly(sympy.expand(n_expr), Dn) if n_expr != 0 else None
    q = RatPoly([Fraction(int(c.p), int(c.q)) for c in reversed(n_poly.all_coeffs())]) if n_poly else RatPoly()
    return ExampleElement(up, q)


def random_example_element(rng):
    up = {k: Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for k in rng.sample(range(0, 4), rng.randint(0, 2))}
    q = RatPoly([rng.randint(-2, 2) for _ in range(rng.randint(0, 3))])
    return ExampleElement(up, q)


def test_example_products_match_independent_model():
    rng = random.Random(1)
    for _ in range(120):
        x, y = random_example_element(rng), random_example_element(rng)
        m = rng.randint(-4, 3)
        assert example_product(x, y, m) == oracle_product(x, y, m), (x, y, m)


def test_coordinate_conversion_round_trip():
    V = build_example()
    rng = random.Random(2)
    for _ in range(50):
        x = random_example_element(rng)
        assert V.to_example(V.from_example(x)) == x
    # D t^-1 = -t^-2
    assert V.to_example(V.gen("u").d()) == ExampleElement({2: -1})


@pytest.fixture(scope="module")
def V():
    return build_example()


def test_generator_products(V):
    e, u, n = V.gens()
    assert V.nth_product(u, n, 0) == n
    assert V.nth_product(n, u, 0) == -n
    # u(z) = z^-1 has no z^0 term
    assert not V.nth_product(u, n, -1)
    assert V.nth_product(u, u, -1) == V.from_example(ExampleElement({2: 1}))
    assert not V.nth_product(n, n, -3)
    assert V.nth_product(e, u, -1) == u
    assert V.nth_product(u, e, -1) == u


def test_rule_based_products_match_example(V):
    # the table form only knows generator products on a window
    W = V.table_form(-12)
    rng = random.Random(4)
    for _ in range(150):
        x = V.from_example(random_example_element(rng))
        y = V.from_example(random_example_element(rng))
        m = rng.randint(-4, 2)
        assert W.nth_product(x, y, m) == V.nth_product(x, y, m)


def test_window_error_below_table(V):
    W = V.table_form(-2)
    with pytest.raises(WindowError):
        W.nth_product(W.gen("u"), W.gen("u"), -5)
    assert not W.nth_product(W.gen("u"), W.gen("n"), 3)


def test_axioms_hold_for_example(V):
    rep = check_vertex_axioms(V, 8)
    assert rep.ok
    assert all(r.checked for r in rep.results.values())


def test_axiom_failure_on_bad_table():
    M = PresentedModule(["e", "x"], [[D, RatPoly()]])
    e, x = M.gens()
    # x_(0) x = x breaks skew symmetry
    bad = VertexAlgebra(M, "e", {("x", "x", 0): x}, (-4, 0))
    rep = check_vertex_axioms(bad, 4)
    assert not rep.ok
    assert rep.results["skew"].counterexample is not None


def test_lie_functor_gives_example_brackets(V):
    L = lie_functor(V)
    e, u, n = L.gens()
    assert L.lambda_bracket(u, n).to_str() == "n"
    assert L.verified


def test_nilpotent_elements(V):
    e, u, n = V.gens()
    cert = is_nilpotent_element(V, n, bound=4)
    assert cert.nilpotent and cert.order == 2
    assert not is_nilpotent_element(V, u, bound=3).nilpotent
    assert is_nilpotent_element(V, V.carrier.zero()).nilpotent


@pytest.mark.parametrize("k", [Fraction(1), Fraction(-2), Fraction(3, 2)])
def test_inner_automorphism(V, k):
    # exp(k n_(0)) u = u + k n_(0) u = u - k n
    e, u, n = V.gens()
    psi = exp_inner_automorphism(V, n, k)
    assert psi(u) == u - n * k
    assert psi(n) == n and psi(e) == e
    assert psi.preserves_products(8) == (True, None)
    assert psi.inverse()(psi(u)) == u


def test_inner_automorphism_needs_square_zero():
    M = PresentedModule(["e", "x", "y"], [[D, RatPoly(), RatPoly()]])
    e, x, y = M.gens()
    # x_(0) acts on y as the identity, so x_(0)^2 != 0
    table = {("x", "y", 0): y, ("y", "x", 0): -y}
    Vxy = VertexAlgebra(M, "e", table, (-2, 0))
    with pytest.raises(NotSquareZero):
        exp_inner_automorphism(Vxy, x, 1)


def test_root_space_decomposition(V):
    rsd = root_space_decomposition(V)
    e, u, n = V.gens()
    assert rsd.N == V.carrier.submodule([n])
    assert rsd.U.rank() == 1
    assert rsd.report["ok"], rsd.report["checks"]
    assert rsd.report["singularity"] == rsd.report["lower_bound"] == 1
    U, N, abar, report = rsd
    assert (U, N, abar) == (rsd.U, rsd.N, rsd.abar) and report is rsd.report


def test_root_space_decompositions_are_conjugate(V):
    e, u, n = V.gens()
    N = V.carrier.submodule([n])
    U1 = V.carrier.submodule([e, u])
    U2 = V.carrier.submodule([e, u - n * 5])
    x, k = conjugating_automorphism(V, U1, U2, N)
    assert exp_inner_automorphism(V, x, k).image(U1) == U2


def test_root_space_decomposition_seeds_share_N(V):
    runs = [root_space_decomposition(V, seed=s) for s in (1, 2)]
    assert runs[0].N == runs[1].N
    for r in runs:
        # U maps isomorphically onto V / N
        assert r.report["ok"]
        assert r.U + r.N == V.carrier.whole() and r.U.intersect(r.N).is_zero()


def test_bracket_coefficients_are_products(V):
    L = lie_functor(V)
    for x in V.gens():
        for y in V.gens():
            for m in range(4):
                assert coefficient(L.lambda_bracket(x, y), m) == V.nth_product(x, y, m)
