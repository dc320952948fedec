import json

import pytest

from lieconf import ConformalAlgebra, LambdaAction, LambdaElement, PresentedModule, Weight, decompose, modify
from lieconf.errors import NotApplicable, NotSolvable
from lieconf.modify import check_modification, modify_length2
from lieconf.poly import DEL, LAM

from families import example_lie, instances


@pytest.fixture(scope="module")
def L():
    return example_lie()


def assert_modification(L, a, trace):
    S = L.subalgebra_generated([a])
    assert L.bracket_submodule(S, S).contains(trace.result - a)
    act = LambdaAction(L, trace.result)
    assert decompose(act).covers
    assert act.image_is_nilpotent()


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_modify_u_plus_dn(L, seed):
    e, u, n = L.gens()
    a = u + n.d()
    trace = modify(a, L, seed=seed)
    assert_modification(L, a, trace)
    abar = trace.result
    assert L.carrier.submodule([n]).contains(abar - a)
    assert L.is_abelian(L.subalgebra_generated([abar]))
    weights = [w for w, _ in trace.components]
    assert weights == [Weight.of(0), Weight.of(1)]
    assert "reduce-D" in [s.case for s in trace.steps]


def test_modify_is_deterministic_per_seed(L):
    e, u, n = L.gens()
    a = u + n.d()
    for seed in (0, 3):
        assert modify(a, L, seed=seed).to_dict() == modify(a, L, seed=seed).to_dict()


def test_seeds_give_different_results(L):
    e, u, n = L.gens()
    a = u + n.d()
    results = {modify(a, L, seed=s).result for s in (0, 1, 2)}
    assert len(results) == 3


def test_already_nilpotent_action_is_unchanged(L):
    e, u, n = L.gens()
    trace = modify(u, L)
    assert trace.result == u and not trace.steps


def test_trace_json(L):
    e, u, n = L.gens()
    data = json.loads(modify(u + n.d(), L).to_json())
    assert data["original"] == "u + D*n"
    assert [c["weight"] for c in data["components"]] == ["0", "1"]


def test_not_solvable():
    M = PresentedModule(["v"])
    (v,) = M.gens()
    vir = ConformalAlgebra(M, {("v", "v"): LambdaElement.from_polys(M, {"v": DEL + LAM * 2})})
    assert vir.verified
    with pytest.raises(NotSolvable):
        modify(v, vir)


def test_equal_weights_not_applicable(L):
    e, u, n = L.gens()
    with pytest.raises(NotApplicable):
        modify_length2(L, u, n, u, Weight.of(1), Weight.of(1))


def test_random_instances_satisfy_postconditions():
    for A, a in instances(18, seed=11):
        if not A.is_solvable(A.subalgebra_generated([a])):
            continue
        trace = modify(a, A)
        check_modification(trace, LambdaAction(A, a))
