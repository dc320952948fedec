from fractions import Fraction

import pytest

from lieconf import LambdaAction, Weight, decompose, engel_check, singularity, weight_spaces
from lieconf.errors import NeedsFieldExtension
from lieconf.repweight import first_weight_vector, generalized_weight_filtration, lie_filtration

from families import example_lie, semidirect

F = Fraction


@pytest.fixture(scope="module")
def L():
    return example_lie()


def test_weights_of_u(L):
    # [u _L n] = n and u commutes with e, u
    e, u, n = L.gens()
    act = LambdaAction(L, u)
    spaces = dict(weight_spaces(act))
    assert set(spaces) == {Weight.of(0), Weight.of(1)}
    assert spaces[Weight.of(1)] == [n]
    assert act.module_action.is_weight_vector(n, Weight.of(1))
    assert act.module_action.is_weight_vector(u, Weight.of(0))


def test_nonzero_weight_comes_first(L):
    e, u, n = L.gens()
    w, v = first_weight_vector(LambdaAction(L, u))
    assert w == Weight.of(1) and v == n


def test_decomposition_of_u(L):
    e, u, n = L.gens()
    dec = decompose(LambdaAction(L, u))
    assert dec.covers
    assert dec.parts == {
        Weight.of(0): L.carrier.submodule([e, u]),
        Weight.of(1): L.carrier.submodule([n]),
    }


def test_u_plus_dn_does_not_cover(L):
    # [a _L a] = (2L + D) n, so a has no zero-weight complement of n
    e, u, n = L.gens()
    act = LambdaAction(L, u + n.d())
    dec = decompose(act)
    assert not dec.covers
    assert not act.image_is_nilpotent()


def test_singularity_of_example(L):
    e, u, n = L.gens()
    assert singularity(LambdaAction(L, u)) == 1


def test_triangular_weights_follow_diagonal():
    # weights on y_i are sum_s r_s c_i^s L^s for the diagonal entries c_i
    C = [[F(1), F(1)], [F(0), F(2)]]
    A = semidirect(C, [F(0), F(1)])
    act = LambdaAction(A, A.gen(0))
    dec = decompose(act)
    assert set(dec.parts) == {Weight.of(0), Weight.of(0, 1), Weight.of(0, 2)}
    assert dec.covers
    filt = lie_filtration(act)
    assert filt.weights() == [Weight.of(0, 1), Weight.of(0, 2), Weight.of(0)]
    assert singularity(act) == 1


def test_generalized_weight_filtration_of_jordan_block():
    # C = [[1, 1], [0, 1]]: y1 is a weight vector, y2 only generalized
    A = semidirect([[F(1), F(1)], [F(0), F(1)]], [F(0), F(1)])
    x, y1, y2 = A.gens()
    filt = generalized_weight_filtration(LambdaAction(A, x), Weight.of(0, 1))
    assert filt.chain == [A.carrier.zero_submodule(), A.carrier.submodule([y1]), A.carrier.submodule([y1, y2])]


def test_irrational_weights_raise():
    A = semidirect([[F(0), F(2)], [F(1), F(0)]], [F(0), F(1)])
    with pytest.raises(NeedsFieldExtension):
        decompose(LambdaAction(A, A.gen(0)))


def test_engel_check(L):
    assert not engel_check(L)
    nil = semidirect([[F(0), F(1)], [F(0), F(0)]], [F(0), F(1)])
    assert nil.is_nilpotent() and engel_check(nil)


def test_unstable_subquotient_rejected(L):
    e, u, n = L.gens()
    with pytest.raises(ValueError):
        LambdaAction(L, n, L.carrier.submodule([u]))
