"""Actions of a single element on a Q[D]-module: weights and weight filtrations.

An element ``a`` acts through ``a _L v = sum_k v_k(D + L) * table[k]`` where
``table[k]`` is the action on the k-th generator.  A weight is a polynomial
``p(L)`` and a weight vector satisfies ``a _L v = p(L) v``.

Weight vectors are searched for among canonical forms of bounded coordinate
degree; the bound doubles until two consecutive bounds agree (reported as
``heuristic-stable``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .conformal import ConformalAlgebra, LambdaElement
from .errors import CapExhausted, NeedsFieldExtension, PostconditionError
from .hmodule import (
    ModuleElement,
    PresentedModule,
    Submodule,
    FreeBasis,
    element_from_monomials,
    smith_normal_form,
)
from .poly import DEL, LAM, MPoly, RatPoly

log = logging.getLogger(__name__)

DEFAULT_CAP = 4
DEFAULT_MAX_CAP = 64


@dataclass(frozen=True)
class Weight:
    """A weight ``p(L)``; ordered by degree, then coefficients from the constant term up."""

    p: RatPoly

    @classmethod
    def of(cls, *coeffs) -> Weight:
        return cls(RatPoly(coeffs))

    def key(self):
        return (self.p.degree, self.p.coeffs)

    def __lt__(self, other: Weight) -> bool:
        return self.key() < other.key()

    def is_zero(self) -> bool:
        return self.p.is_zero()

    def __str__(self) -> str:
        return self.p.to_str("L")

    def __repr__(self) -> str:
        return f"Weight({self})"


ZERO_WEIGHT = Weight(RatPoly())

# results of weight solves, keyed by the action's content (all values immutable)
_SPACES: dict = {}


def clear_caches():
    """Forget cached weight computations (used to time cold runs)."""
    _SPACES.clear()


# ---------------------------------------------------------------------------
# bare module actions
# ---------------------------------------------------------------------------


class ModuleAction:
    """Action of one element on a presented module, given on generators."""

    def __init__(self, target: PresentedModule, table: Sequence[LambdaElement]):
        if len(table) != target.ngens:
            raise ValueError("action table must have one entry per generator")
        self.target = target
        self.table = list(table)
        self._cache: dict = {}

    def act(self, v: ModuleElement) -> LambdaElement:
        out = LambdaElement(self.target)
        for k, c in enumerate(v.coords):
            if c and self.table[k]:
                out = out + self.table[k].mul(c(LAM + DEL))
        return out

    def is_zero(self) -> bool:
        return not any(self.table)

    def is_stable(self, W: Submodule) -> bool:
        return all(W.contains(m) for g in W.generator_elements for m in self.act(g).terms.values())

    def quotient(self, W: Submodule) -> ModuleAction:
        """Induced action on ``target / W`` (``W`` must be stable)."""
        Q = PresentedModule(self.target.labels, W.ech.rows)
        table = [
            LambdaElement(Q, {k: Q.element(m.coords) for k, m in t.terms.items()}) for t in self.table
        ]
        return ModuleAction(Q, table)

    def in_quotient(self, W: Submodule, v: ModuleElement) -> ModuleElement:
        return PresentedModule(self.target.labels, W.ech.rows).element(v.coords)

    # -- finite-dimensional slices ------------------------------------------
    def _matrices(self, cap: int):
        """Matrices ``C_s`` of the L^s-part of the action on monomials of degree <= cap.

        Returns ``(basis, rows, C)`` where ``basis`` are the source monomials,
        ``rows`` the index of every target monomial (basis first) and ``C[s]`` a
        dense matrix ``len(rows) x len(basis)``.
        """
        if cap in self._cache:
            return self._cache[cap]
        T = self.target
        basis = T.standard_monomials(cap)
        rows = {m: i for i, m in enumerate(basis)}
        images = []
        smax = -1
        for c, r in basis:
            t = self.table[c]
            img = t.mul((LAM + DEL) ** r) if t else t
            coords = {}
            for s, m in img.terms.items():
                smax = max(smax, s)
                for mono, v in m.monomial_coords().items():
                    rows.setdefault(mono, len(rows))
                    coords[(s, mono)] = v
            images.append(coords)
        C = [[[Fraction(0)] * len(basis) for _ in rows] for _ in range(smax + 1)]
        for j, coords in enumerate(images):
            for (s, mono), v in coords.items():
                C[s][rows[mono]][j] = v
        out = (basis, rows, C)
        self._cache[cap] = out
        return out

    def _vector_element(self, basis, vec) -> ModuleElement:
        return element_from_monomials(
            self.target, {mono: v for mono, v in zip(basis, vec) if v}
        )

    def _weight_vectors_at(self, p: RatPoly, cap: int) -> list[ModuleElement]:
        basis, rows, C = self._matrices(cap)
        n = len(basis)
        if n == 0:
            return []
        stacked = []
        for s in range(max(len(C), p.degree + 1)):
            ps = p[s]
            if s < len(C):
                for i, row in enumerate(C[s]):
                    r = list(row)
                    if i < n and ps:
                        r[i] -= ps
                    stacked.append(r)
            elif ps:
                # no L^s term in the action but p has one: v must vanish
                for i in range(n):
                    r = [Fraction(0)] * n
                    r[i] = -ps
                    stacked.append(r)
        if not stacked:
            return [self._vector_element(basis, v) for v in linalg.nullspace([], n)]
        return [self._vector_element(basis, v) for v in linalg.nullspace(stacked, n)]

    def _all_weights_at(self, cap: int):
        """``[(p, basis vectors)]`` at one cap plus an irrationality flag."""
        basis, rows, C = self._matrices(cap)
        n = len(basis)
        if n == 0:
            return [], False
        # the subspace whose images stay inside the monomial slice
        outside = [row for Cs in C for i, row in enumerate(Cs) if i >= n]
        Z = linalg.nullspace(outside, n) if outside else linalg.nullspace([], n)
        G = [[row for row in Cs[:n]] for Cs in C]
        B = linalg.invariant_subspace(Z, G, n)
        found = []
        irrational = [False]

        def rec(B, s, p):
            if not B:
                return
            if s == len(G):
                found.append((RatPoly(p), B))
                return
            Gr, R = linalg.restrict(G[s], B, n)
            roots, irr = linalg.eigenvalue_candidates(Gr)
            if irr:
                irrational[0] = True
            for r in roots:
                shifted = [[x - (r if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(Gr)]
                ker = linalg.nullspace(shifted, len(R))
                E = []
                for k in ker:
                    w = [Fraction(0)] * n
                    for coef, row in zip(k, R):
                        if coef:
                            w = [x + coef * y for x, y in zip(w, row)]
                    E.append(w)
                E = linalg.invariant_subspace(E, G[s + 1 :], n)
                rec(E, s + 1, p + [r])

        rec(B, 0, [])
        out = [(p, [self._vector_element(basis, v) for v in vecs]) for p, vecs in found]
        return out, irrational[0]

    # -- public weight API -----------------------------------------------------
    def key(self):
        return (self.target.labels, self.target.rel.key(), tuple(self.table))

    def weight_spaces(self, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP):
        """``[(Weight, weight vectors)]`` sorted by weight, with the stability flag.

        Returns ``(spaces, flag)``; ``flag`` is ``"heuristic-stable"`` when
        two consecutive caps agree.
        """
        key = (self.key(), cap, max_cap)
        hit = _SPACES.get(key)
        if hit is None:
            hit = self._weight_spaces(cap, max_cap)
            if len(_SPACES) > 4096:
                _SPACES.clear()
            _SPACES[key] = hit
        return hit

    def _weight_spaces(self, cap: int, max_cap: int):
        prev = None
        D = cap
        while D <= max_cap:
            cur, irr = self._all_weights_at(D)
            summary = self._summarize(cur)
            if prev is not None and summary == prev[1]:
                spaces = sorted(((Weight(p), vecs) for p, vecs in prev[0]), key=lambda t: t[0].key())
                if not spaces and (prev[2] or irr) and self.target.ngens:
                    raise NeedsFieldExtension("weights exist only over an extension of Q")
                return spaces, "heuristic-stable"
            prev = (cur, summary, irr)
            D *= 2
        raise CapExhausted(f"weight spaces did not stabilize up to cap {max_cap}", partial=prev[0])

    def _summarize(self, found):
        out = {}
        for p, vecs in found:
            if p.is_zero():
                out[p] = ("H", self.target.submodule(vecs))
            else:
                out[p] = ("k", len(vecs))
        return out

    def weight_space(self, w: Weight, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP):
        """Weight vectors of the given weight and the H-submodule they span."""
        prev = None
        D = cap
        while D <= max_cap:
            vecs = self._weight_vectors_at(w.p, D)
            span = self.target.submodule(vecs)
            if prev is not None and span == prev[1]:
                return prev[0], prev[1]
            prev = (vecs, span)
            D *= 2
        raise CapExhausted(f"weight space did not stabilize up to cap {max_cap}", partial=prev)

    def is_weight_vector(self, v: ModuleElement, w: Weight) -> bool:
        return self.act(v) == LambdaElement.constant(v).mul(w.p.to_mpoly(2, 0))


def weight_spaces(act, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP):
    """Weights and bases of weight vectors; see :meth:`ModuleAction.weight_spaces`."""
    return _as_module_action(act).weight_spaces(cap, max_cap)[0]


def _as_module_action(act) -> ModuleAction:
    return act.module_action if isinstance(act, LambdaAction) else act


def _pick_vector(vecs: Sequence[ModuleElement], reverse: bool = False) -> ModuleElement:
    """The vector with smallest leading monomial (degree, then generator index)."""
    T = vecs[0].home
    keys = sorted({m for v in vecs for m in v.monomial_coords()}, key=lambda m: (m[1], m[0]))
    if reverse:
        keys = sorted(keys, key=lambda m: (m[1], -m[0]))
    cols = list(reversed(keys))
    idx = {m: i for i, m in enumerate(cols)}
    rows = []
    for v in vecs:
        r = [Fraction(0)] * len(cols)
        for m, c in v.monomial_coords().items():
            r[idx[m]] = c
        rows.append(r)
    R, _ = linalg.rref(rows, len(cols))
    last = R[-1]
    return element_from_monomials(T, {m: c for m, c in zip(cols, last) if c})


# ---------------------------------------------------------------------------
# filtrations
# ---------------------------------------------------------------------------


@dataclass
class WeightFiltration:
    """``chain[0] = 0`` strictly increasing up to its limit ``chain[-1]``."""

    weight: Weight
    chain: list
    flag: str = "heuristic-stable"

    @property
    def limit(self) -> Submodule:
        return self.chain[-1]


@dataclass
class LieFiltration:
    steps: list  # [(Submodule, Weight, vector)]
    flag: str = "heuristic-stable"

    def submodules(self) -> list[Submodule]:
        return [s for s, _, _ in self.steps]

    def weights(self) -> list[Weight]:
        return [w for _, w, _ in self.steps]


def first_weight_vector(act, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP, reverse: bool = False):
    """``(weight, vector)`` chosen by the filtration rule, or None for a zero module.

    Nonzero weights come before the zero weight (smallest weight first);
    within a weight the vector with smallest leading monomial is used.
    """
    A = _as_module_action(act)
    if A.target.whole().is_zero():
        return None
    spaces, _ = A.weight_spaces(cap, max_cap)
    if not spaces:
        raise CapExhausted("no weight vector found", partial=A.target)
    nonzero = [s for s in spaces if not s[0].is_zero()]
    w, vecs = (nonzero or spaces)[0]
    return w, _pick_vector(vecs, reverse)


def lie_filtration(act, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP, reverse: bool = False):
    """Greedy chain ``0 = M_0 < M_1 < ... < M_n = M``, each step spanned by a weight vector.

    Steps are chosen by :func:`first_weight_vector` in successive quotients;
    ``reverse`` flips the generator tie-break.
    """
    A = _as_module_action(act)
    T = A.target
    cur = T.zero_submodule()
    whole = T.whole()
    steps = []
    while cur != whole:
        try:
            w, vq = first_weight_vector(A.quotient(cur), cap, max_cap, reverse)
        except CapExhausted as exc:
            raise CapExhausted(str(exc), partial=LieFiltration(steps, "lower-bound")) from exc
        v = T.element(vq.coords)
        cur = cur.add([v])
        steps.append((cur, w, v))
    return LieFiltration(steps)


def generalized_weight_filtration(act, w: Weight, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP, max_steps: int = 256):
    A = _as_module_action(act)
    T = A.target
    chain = [T.zero_submodule()]
    for _ in range(max_steps):
        cur = chain[-1]
        Aq = A.quotient(cur)
        try:
            vecs, _ = Aq.weight_space(w, cap, max_cap)
        except CapExhausted as exc:
            raise CapExhausted(str(exc), partial=WeightFiltration(w, chain, "lower-bound")) from exc
        nxt = cur.add(T.element(v.coords) for v in vecs)
        if nxt == cur:
            return WeightFiltration(w, chain)
        chain.append(nxt)
    raise CapExhausted("generalized weight filtration did not stabilize", partial=WeightFiltration(w, chain, "lower-bound"))


def _independent(parts: Sequence[Submodule]) -> bool:
    for i, P in enumerate(parts):
        others = [Q for j, Q in enumerate(parts) if j != i]
        if not others:
            continue
        total = others[0]
        for Q in others[1:]:
            total = total + Q
        if not P.intersect(total).is_zero():
            return False
    return True


@dataclass
class Decomposition:
    parts: dict  # Weight -> Submodule
    covers: bool
    filtration: LieFiltration

    def weights(self) -> list[Weight]:
        return sorted(self.parts, key=lambda w: w.key())


def decompose(act, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP, check: bool = True) -> Decomposition:
    """Nonzero generalized weight submodules, their directness and coverage.

    For a :class:`LambdaAction` coverage is cross-checked against nilpotence
    of the image of the acting subalgebra.
    """
    A = _as_module_action(act)
    T = A.target
    filt = lie_filtration(A, cap, max_cap)
    weights = sorted(set(filt.weights()), key=lambda w: w.key())
    parts = {}
    for w in weights:
        lim = generalized_weight_filtration(A, w, cap, max_cap).limit
        if not lim.is_zero():
            parts[w] = lim
    values = list(parts.values())
    if not _independent(values):
        raise PostconditionError("generalized weight submodules are not independent")
    for w, P in parts.items():
        if not w.is_zero() and not P.is_free():
            raise PostconditionError(f"generalized weight submodule for {w} is not free")
    total = T.zero_submodule()
    for P in values:
        total = total + P
    covers = total == T.whole()
    if check and isinstance(act, LambdaAction):
        nil = act.image_is_nilpotent()
        if nil != covers:
            raise PostconditionError(
                f"decomposition covers={covers} but image nilpotent={nil}"
            )
    return Decomposition(parts, covers, filt)


def singularity(act, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP, check: bool = True) -> int:
    """Number of non-torsion zero-weight steps in the Lie filtration."""

    def count(filt: LieFiltration) -> int:
        n = 0
        prev_rank = 0
        for S, w, _ in filt.steps:
            r = S.rank()
            if w.is_zero() and r > prev_rank:
                n += 1
            prev_rank = r
        return n

    A = _as_module_action(act)
    value = count(lie_filtration(A, cap, max_cap))
    if check:
        other = count(lie_filtration(A, cap, max_cap, reverse=True))
        if other != value:
            raise PostconditionError(f"singularity depends on the filtration: {value} vs {other}")
    return value


# ---------------------------------------------------------------------------
# actions coming from a conformal algebra
# ---------------------------------------------------------------------------


class _Identity:
    """Stand-in for a subquotient presentation when acting on the whole carrier."""

    def __init__(self, M: PresentedModule):
        self.module = M
        self.ambient = M

    def lift(self, x):
        return x

    def express(self, m):
        return m


class LambdaAction:
    """Adjoint action of ``acting`` on the subquotient ``W / Q`` of an algebra.

    ``W`` and ``Q`` default to the whole carrier and zero.  Both must be
    stable under the acting element (checked).
    """

    def __init__(
        self,
        algebra: ConformalAlgebra,
        acting: ModuleElement,
        W: Submodule | None = None,
        Q: Submodule | None = None,
    ):
        L = algebra
        self.algebra = L
        self.acting = acting
        self.W = W if W is not None else L.whole()
        self.Q = Q if Q is not None else L.carrier.zero_submodule()
        if self.W == L.whole() and self.Q.is_zero():
            self.pres = _Identity(L.carrier)
        else:
            self.pres = self.W.presentation(self.Q)
        self.target = self.pres.module
        self.module_action = self.action_of(acting)
        for X in (self.W, self.Q):
            for g in X.generator_elements:
                for m in L.lambda_bracket(acting, g).terms.values():
                    if not X.contains(m):
                        raise ValueError("submodule is not stable under the acting element")

    @classmethod
    def adjoint(cls, algebra: ConformalAlgebra, acting: ModuleElement) -> LambdaAction:
        return cls(algebra, acting)

    def action_of(self, b: ModuleElement) -> ModuleAction:
        table = []
        for g in self.target.gens():
            br = self.algebra.lambda_bracket(b, self.pres.lift(g))
            table.append(
                LambdaElement(self.target, {k: self.pres.express(m) for k, m in br.terms.items()})
            )
        return ModuleAction(self.target, table)

    def act(self, v: ModuleElement) -> LambdaElement:
        return self.module_action.act(v)

    # -- transport between the target and the ambient carrier -----------------
    def to_ambient(self, S: Submodule) -> Submodule:
        """Preimage in the carrier (between Q and W) of a submodule of the target."""
        return self.Q.add(self.pres.lift(g) for g in S.generator_elements)

    def from_ambient(self, S: Submodule) -> Submodule:
        return self.target.submodule(self.pres.express(g) for g in S.generator_elements)

    def lift(self, v: ModuleElement) -> ModuleElement:
        return self.pres.lift(v)

    def express(self, m: ModuleElement) -> ModuleElement:
        return self.pres.express(m)

    # -- acting subalgebra -----------------------------------------------------
    def acting_subalgebra(self) -> Submodule:
        return self.algebra.subalgebra_generated([self.acting])

    def kernel(self, S: Submodule | None = None) -> Submodule:
        """Elements of ``S = <a>`` acting trivially on ``W / Q``."""
        S = S if S is not None else self.acting_subalgebra()
        return self.algebra.annihilator(S, self.W, self.Q)

    def image_is_nilpotent(self, max_steps: int = 256) -> bool:
        """Is ``<a>`` modulo the kernel of the action nilpotent?"""
        L = self.algebra
        S = self.acting_subalgebra()
        K = self.kernel(S)
        cur = S
        for _ in range(max_steps):
            nxt = L.bracket_submodule(S, cur) + K
            if nxt == cur:
                return cur == K
            cur = nxt
        raise CapExhausted("central series of the image did not stabilize")

    def quotient(self, U: Submodule) -> LambdaAction:
        """Action on ``W / U`` for an ambient submodule ``Q <= U <= W``."""
        return LambdaAction(self.algebra, self.acting, self.W, U)

    def sub(self, V: Submodule) -> LambdaAction:
        """Action on ``V / Q`` for an ambient submodule ``Q <= V <= W``."""
        return LambdaAction(self.algebra, self.acting, V, self.Q)


def image_is_nilpotent(act: LambdaAction) -> bool:
    return act.image_is_nilpotent()


def engel_check(A: ConformalAlgebra, cap: int = DEFAULT_CAP, max_cap: int = DEFAULT_MAX_CAP) -> bool:
    """Does every tested element act with generalized zero weight on the whole algebra?

    Tested elements: each generator, each pairwise sum and the sum of all.
    """
    gens = [g for g in A.gens() if g]
    tests = list(gens)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            tests.append(gens[i] + gens[j])
    if len(gens) > 2:
        total = gens[0]
        for g in gens[1:]:
            total = total + g
        tests.append(total)
    whole = A.whole()
    for x in tests:
        act = LambdaAction(A, x)
        lim = generalized_weight_filtration(act, ZERO_WEIGHT, cap, max_cap).limit
        if lim != whole:
            return False
    return True


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------


def find_section(M: PresentedModule, U: Submodule):
    """An H-linear section of ``M -> M/U`` if one exists, else ``None``.

    Returns the images in ``M`` of the generators of ``M/U``.  ``U`` must be
    free.
    """
    fb = FreeBasis(U)
    r = len(fb)
    rels = list(U.ech.rows)
    ngen = M.ngens
    if not rels or r == 0:
        return [M.gen(i) for i in range(ngen)]
    # lifts g_i + sum_k X[i][k] u_k must satisfy every relation of M/U
    B = [fb.coordinates(M.element(row)) for row in rels]
    Uq, S, V = smith_normal_form([list(row) for row in rels])
    nrel = len(rels)
    # R X = -B  <=>  S Y = -Uq B  with  X = V Y
    UB = [[sum((Uq[i][t] * B[t][k] for t in range(nrel)), RatPoly()) for k in range(r)] for i in range(nrel)]
    Y = [[RatPoly()] * r for _ in range(ngen)]
    for i in range(nrel):
        d = S[i][i] if i < ngen else RatPoly()
        for k in range(r):
            rhs = -UB[i][k]
            if not d:
                if rhs:
                    return None
                continue
            q, rem = divmod(rhs, d)
            if rem:
                return None
            Y[i][k] = q
    out = []
    for i in range(ngen):
        e = M.gen(i)
        for k in range(r):
            x = sum((V[i][t] * Y[t][k] for t in range(ngen)), RatPoly())
            if x:
                e = e + fb.basis[k] * x
        out.append(e)
    return out
