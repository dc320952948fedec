"""Modifications: turning a solvable one-generated subalgebra into a nilpotent one.

Given ``a`` with ``S = <a>`` solvable and an ``S``-stable subquotient ``W/Q`` of
the algebra, we look for ``abar = a mod S'`` such that ``W/Q`` splits as a
direct sum of generalized weight modules for ``abar``.

The two-generator step works with ``u`` (a weight vector, weight ``p``) and
``v`` (a weight vector modulo ``Hu``, weight ``q``)::

    a _L v = q(L) v + X(L, D) u   (mod Q)

and repeatedly shrinks the cross term ``X`` by one of three moves:

* ``reduce-D``:    subtract a coefficient of ``[a _L a]`` from ``a``;
* ``reduce-K``:    subtract ``h(D)`` times a coefficient of ``[a _L b]``;
* ``reduce-rank``: replace ``v`` by ``v - c^-1 D^K u``.

Write ``Xhat(x, y) = X(-x, x + y)``, ``K = deg_y Xhat`` and ``h(x)`` for its
``y^K`` coefficient.  With ``alpha(x) = p(-x) - q(-x)`` of degree ``N``, the
move is ``reduce-D`` when ``deg h > N``, ``reduce-rank`` when ``h`` is
proportional to ``alpha`` and ``reduce-K`` otherwise.  Each move strictly lowers
``(K, deg h, rank)`` lexicographically.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .conformal import ConformalAlgebra
from .errors import Degenerate, NotApplicable, NotSolvable, PostconditionError
from .hmodule import ModuleElement, Submodule, annihilator_poly, solve_multiple
from .poly import MPoly, RatPoly
from .repweight import (
    DEFAULT_CAP,
    DEFAULT_MAX_CAP,
    LambdaAction,
    Weight,
    decompose,
    first_weight_vector,
    lie_filtration,
)

MAX_LOOP = 500


@dataclass
class Step:
    case: str
    correction: ModuleElement
    triple: tuple | None = None
    vector: ModuleElement | None = None

    def to_dict(self) -> dict:
        out = {"case": self.case, "correction": self.correction.to_str()}
        if self.triple is not None:
            out["triple"] = list(self.triple)
        if self.vector is not None:
            out["vector"] = self.vector.to_str()
        return out


@dataclass
class ModificationTrace:
    original: ModuleElement
    result: ModuleElement
    steps: list = field(default_factory=list)
    components: list = field(default_factory=list)  # [(Weight, Submodule)]

    def to_dict(self) -> dict:
        return {
            "original": self.original.to_str(),
            "result": self.result.to_str(),
            "steps": [s.to_dict() for s in self.steps],
            "components": [
                {"weight": str(w), "generators": [g.to_str() for g in P.generator_elements]}
                for w, P in self.components
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass
class PairContext:
    """The two-generator situation ``(Q + Hu + Hv) / Q``."""

    u: ModuleElement
    v: ModuleElement
    Q: Submodule
    p: RatPoly  # weight of u
    q: RatPoly  # weight of v modulo Hu

    @property
    def alpha(self) -> RatPoly:
        return (self.p - self.q).reflect()


# ---------------------------------------------------------------------------
# the cross term
# ---------------------------------------------------------------------------


def cross_term(L: ConformalAlgebra, x: ModuleElement, ctx: PairContext, weight: RatPoly | None = None):
    """``X(L, D)`` with ``x _L v = weight(L) v + X u`` modulo ``Q`` (as ``{k: h_k}``).

    ``weight`` defaults to the weight of ``v``; D-coefficients are reduced
    modulo the annihilator of ``u``.
    """
    weight = ctx.q if weight is None else weight
    br = L.lambda_bracket(x, ctx.v)
    out = {}
    for k in range(max(br.degree(), weight.degree) + 1):
        m = br[k] - ctx.v * weight[k]
        if not m:
            continue
        h = solve_multiple(ctx.u, m, ctx.Q)
        if h is None:
            raise PostconditionError(f"{ctx.v} is not a weight vector modulo Hu")
        if h:
            out[k] = h
    return out


def _invariants(X: dict):
    """``(K, deg h, rank)`` and ``h(x)`` of a cross term."""
    if not X:
        return (-1, -1, 0), RatPoly()
    K = max(h.degree for h in X.values())
    top = RatPoly([X[k][K] if k in X else 0 for k in range(max(X) + 1)])
    h = top.reflect()
    return (K, h.degree, 1), h


def _gamma_combination(coeffs: list, gamma: dict) -> ModuleElement:
    """``sum_n gamma((-x)^n) c_n`` for a k-valued functional on monomials."""
    out = None
    for n, c in enumerate(coeffs):
        g = gamma.get(n, 0)
        if g and c:
            term = c * (g if n % 2 == 0 else -g)
            out = term if out is None else out + term
    return out


def _case1_gamma(alpha: RatPoly, top: int, rng: random.Random | None) -> dict:
    """A functional with ``gamma(alpha) = 1``.

    Without a generator it is dual to the leading monomial of ``alpha``;
    otherwise random values are put on the other monomials first.
    """
    N = alpha.degree
    gamma = {}
    if rng is not None:
        for m in range(max(top, N) + 1):
            if m != N:
                gamma[m] = Fraction(rng.choice((-3, -2, -1, 1, 2, 3)))
    rest = sum((alpha[m] * g for m, g in gamma.items()), Fraction(0))
    gamma[N] = (1 - rest) / alpha.lc
    return gamma


def _case2_gamma(h: RatPoly, alpha: RatPoly) -> dict:
    """A functional with ``gamma(h) = -1`` and ``gamma(alpha) = 0`` (two monomials)."""
    top = max(h.degree, alpha.degree)
    for m1 in range(top + 1):
        for m2 in range(m1 + 1, top + 1):
            det = h[m1] * alpha[m2] - h[m2] * alpha[m1]
            if det:
                # [h1 h2; a1 a2] (g1, g2) = (-1, 0)
                g1 = -alpha[m2] / det
                g2 = alpha[m1] / det
                return {m1: g1, m2: g2}
    raise Degenerate("h and alpha are proportional")


def tech_coefficient(L: ConformalAlgebra, a: ModuleElement, b: ModuleElement, ctx: PairContext) -> ModuleElement:
    """A coefficient ``s`` of ``[a _L b]`` with ``s _L v = (D + L)^K u`` up to lower D-degree.

    ``b`` must kill ``u`` and act on ``v`` with a cross term of D-degree ``K``
    whose top coefficient is nonzero.
    """
    alpha = ctx.alpha
    if alpha.is_zero():
        raise Degenerate("u and v have equal weights")
    if not b:
        raise Degenerate("degenerate input: b is zero")
    if any(not ctx.Q.contains(m) for m in L.lambda_bracket(b, ctx.u).terms.values()):
        raise Degenerate("b does not kill u")
    B = cross_term(L, b, ctx, RatPoly())
    (K, _, rank), beta = _invariants(B)
    if rank == 0:
        raise Degenerate("b acts trivially on v")
    prod = alpha * beta.reflect()  # alpha * S(beta)
    T = prod.degree
    c = L.lambda_bracket(a, b)[T]
    return c * (Fraction(1 if T % 2 == 0 else -1) / prod.lc)


# ---------------------------------------------------------------------------
# the length-two step
# ---------------------------------------------------------------------------


class _Run:
    def __init__(self, L: ConformalAlgebra, a: ModuleElement, seed: int, cap: int, max_cap: int):
        self.L = L
        self.a = a
        self.rng = random.Random(seed) if seed else None
        self.steps: list[Step] = []
        self.cap = cap
        self.max_cap = max_cap

    def log(self, case, correction=None, triple=None, vector=None):
        zero = self.L.carrier.zero()
        self.steps.append(Step(case, correction if correction is not None else zero, triple, vector))


def _length2(run: _Run, ctx: PairContext) -> ModuleElement:
    """Modify ``run.a`` in place and return ``vbar`` spanning an invariant complement of ``Hu``."""
    L = run.L
    alpha = ctx.alpha
    if alpha.is_zero():
        raise NotApplicable("modification step needs distinct weights")
    N = alpha.degree
    last = None
    for _ in range(MAX_LOOP):
        X = cross_term(L, run.a, ctx)
        triple, h = _invariants(X)
        if last is not None and not triple < last:
            raise PostconditionError(f"no descent: {last} -> {triple}")
        last = triple
        if triple[2] == 0:
            run.log("complement", vector=ctx.v)
            return ctx.v
        K, D, _ = triple
        if D > N:
            cs = L.lambda_bracket(run.a, run.a).coefficients()
            s = _gamma_combination(cs, _case1_gamma(alpha, len(cs) - 1, run.rng))
            if s is None:
                raise PostconditionError("reduce-D produced no correction")
            run.a = run.a - s
            run.log("reduce-D", s, triple)
        elif h.degree == alpha.degree and (h * alpha.lc - alpha * h.lc).is_zero():
            c = alpha.lc / h.lc  # alpha = c h
            shift = ctx.u * RatPoly.monomial(K, 1 / c)
            ctx.v = ctx.v - shift
            run.log("reduce-rank", triple=triple, vector=ctx.v)
        else:
            cs = L.lambda_bracket(run.a, run.a).coefficients()
            b = _gamma_combination(cs, _case2_gamma(h, alpha))
            s = tech_coefficient(L, run.a, b, ctx)
            corr = s * h.reflect()  # h(D) s with h(x) the top coefficient
            run.a = run.a - corr
            run.log("reduce-K", corr, triple)
    raise PostconditionError("modification loop did not terminate")


def modify_length2(
    L: ConformalAlgebra,
    a: ModuleElement,
    u: ModuleElement,
    v: ModuleElement,
    phi: Weight,
    psi: Weight,
    Q: Submodule | None = None,
    seed: int = 0,
):
    """Return ``(abar, vbar)`` with ``H vbar`` an ``abar``-stable complement of ``Hu``."""
    if phi == psi:
        raise NotApplicable("modification step needs distinct weights")
    Q = Q if Q is not None else L.carrier.zero_submodule()
    run = _Run(L, a, seed, DEFAULT_CAP, DEFAULT_MAX_CAP)
    vbar = _length2(run, PairContext(u, v, Q, phi.p, psi.p))
    return run.a, vbar


# ---------------------------------------------------------------------------
# general induction
# ---------------------------------------------------------------------------


def _phipsi(run: _Run, P: Submodule, Q: Submodule, u: ModuleElement, phi: Weight, psi: Weight) -> Submodule:
    """Complement of ``Q + Hu`` inside ``P`` (all generalized weight ``psi`` above it)."""
    Qu = Q.add([u])
    act = LambdaAction(run.L, run.a, P, Qu)
    filt = lie_filtration(act, run.cap, run.max_cap)
    C = Q
    for _, w, vt in filt.steps:
        if w != psi:
            raise PostconditionError(f"expected weight {psi}, found {w}")
        v = act.lift(vt)
        vbar = _length2(run, PairContext(u, v, C, phi.p, psi.p))
        C = C.add([vbar])
    return C


def _quasinilp(run: _Run, W: Submodule, Q: Submodule) -> list:
    """Components ``[(weight, P)]`` with ``W/Q`` the direct sum of the ``P/Q``."""
    if W == Q:
        return []
    act = LambdaAction(run.L, run.a, W, Q)
    phi, ut = first_weight_vector(act, run.cap, run.max_cap)
    u = act.lift(ut)
    Qu = Q.add([u])
    run.log("recurse", vector=u)
    comps = _quasinilp(run, W, Qu)
    out = []
    own = Qu
    for w, P in comps:
        if w == phi:
            own = P
        else:
            out.append((w, _phipsi(run, P, Q, u, phi, w)))
    out.append((phi, own))
    return sorted(out, key=lambda t: t[0].key())


def modify(
    a: ModuleElement,
    act: LambdaAction | ConformalAlgebra,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    max_cap: int = DEFAULT_MAX_CAP,
    check: bool = True,
) -> ModificationTrace:
    """Find ``abar = a mod <a>'`` whose action splits into generalized weight modules.

    ``act`` is an action of ``a`` (or an algebra, meaning the adjoint action
    on the whole carrier).  ``seed`` randomizes the functional used by the
    ``reduce-D`` move; seed 0 is the deterministic default.
    """
    if isinstance(act, ConformalAlgebra):
        act = LambdaAction(act, a)
    L = act.algebra
    S = L.subalgebra_generated([a])
    if not L.is_solvable(S):
        raise NotSolvable(f"<{a}> is not solvable")
    W, Q = act.W, act.Q
    trace = ModificationTrace(a, a)
    act_a = LambdaAction(L, a, W, Q)
    if act_a.image_is_nilpotent():
        dec = decompose(act_a, cap, max_cap)
        trace.components = [(w, act_a.to_ambient(P)) for w, P in sorted(dec.parts.items(), key=lambda t: t[0].key())]
        return trace
    run = _Run(L, a, seed, cap, max_cap)
    comps = _quasinilp(run, W, Q)
    trace.result = run.a
    trace.steps = run.steps
    trace.components = comps
    if check:
        check_modification(trace, act, cap, max_cap)
    return trace


def check_modification(trace: ModificationTrace, act: LambdaAction, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP):
    """Assert the four postconditions of a modification run."""
    L = act.algebra
    a, abar = trace.original, trace.result
    S = L.subalgebra_generated([a])
    Sp = L.bracket_submodule(S, S)
    if not Sp.contains(abar - a):
        raise PostconditionError("abar - a is not in S'")
    new = LambdaAction(L, abar, act.W, act.Q)
    dec = decompose(new, cap, max_cap)
    if not dec.covers:
        raise PostconditionError("generalized weight modules of abar do not cover the module")
    if not new.image_is_nilpotent():
        raise PostconditionError("image of <abar> is not nilpotent")
    old_weights = set(lie_filtration(LambdaAction(L, a, act.W, act.Q), cap, max_cap).weights())
    if old_weights != set(dec.parts):
        raise PostconditionError("weights changed under modification")
    for w, P in trace.components:
        if not new.module_action.is_stable(new.from_ambient(P)):
            raise PostconditionError(f"component for weight {w} is not stable")
    return dec
