"""Finite vertex algebras over H = Q[D] (D acts as the translation T).

A vertex algebra is stored through its n-th products on C[D]-generators.  All
other products follow from the translation rules::

    (D x)_(n) y   = -n x_(n-1) y
    x_(n) (D y)   = D (x_(n) y) + n x_(n-1) y

so ``(D^a g)_(n) (D^b h) = (-1)^a (n)_a sum_r C(b, r) (n-a)_r D^(b-r) (g_(n-a-r) h)``
with falling factorials ``(n)_a``.  Table-backed algebras declare generator
products on a window ``lo <= n <= hi``; products above ``hi`` vanish and
products below ``lo`` raise :class:`WindowError`.

The built-in example has carrier ``e`` (the vacuum, killed by D), ``u = t^-1``
and ``n``, with ``U = Q[t^-1]`` a commutative vertex algebra acting on
``N = Q[D] n`` through ``Y(a(t), z) n = a(z) n`` and ``Y(n, z) n = 0``.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Sequence

from . import linalg
from .conformal import ConformalAlgebra, LambdaElement
from .errors import (
    BudgetExhausted,
    CapExhausted,
    NeedsFieldExtension,
    NotSolvable,
    NotSquareZero,
    PostconditionError,
    WindowError,
)
from .hmodule import (
    ModuleElement,
    PresentedModule,
    Submodule,
    element_from_monomials,
    is_zero_vec,
    unit_vec,
    vaxpy,
    zero_vec,
)
from .poly import RatPoly, binomial, falling
from .repweight import DEFAULT_CAP, DEFAULT_MAX_CAP, ZERO_WEIGHT, LambdaAction, decompose, singularity

log = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 8
DEFAULT_BUDGET = 200


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class VertexAlgebra:
    """Vertex algebra given by generator products on a window.

    ``table`` maps ``(g1, g2, n)`` (labels or indices) to carrier elements.
    Products with the vacuum are never read from the table.
    """

    def __init__(
        self,
        carrier: PresentedModule,
        vacuum=None,
        table: dict | None = None,
        window: tuple[int | None, int] | None = None,
        name: str = "",
    ):
        self.carrier = carrier
        self.name = name
        self.vacuum_index = self._index(vacuum) if vacuum is not None else None
        self.table: dict[tuple[int, int, int], ModuleElement] = {}
        for (g1, g2, n), v in (table or {}).items():
            i, j = self._index(g1), self._index(g2)
            if i == self.vacuum_index or j == self.vacuum_index:
                continue
            if v:
                self.table[(i, j, n)] = v
        if window is None:
            ns = [n for (_, _, n) in self.table]
            window = (min(ns + [0]), max(ns + [-1]))
        self.lo, self.hi = window
        self._cache: dict = {}

    def _index(self, g) -> int:
        return self.carrier.labels.index(g) if isinstance(g, str) else g

    def __repr__(self) -> str:
        return f"VertexAlgebra({self.name or list(self.carrier.labels)})"

    # -- elements -------------------------------------------------------
    @property
    def vacuum(self) -> ModuleElement | None:
        return None if self.vacuum_index is None else self.carrier.gen(self.vacuum_index)

    def gen(self, which) -> ModuleElement:
        return self.carrier.gen(which)

    def gens(self) -> list[ModuleElement]:
        return self.carrier.gens()

    def translation(self, x: ModuleElement) -> ModuleElement:
        return x.d()

    @property
    def top(self) -> int:
        """Largest n for which a generator product ``g_(n) h`` may be nonzero."""
        return self.hi

    # -- products ---------------------------------------------------------
    def _gen_product(self, i: int, j: int, n: int):
        """``g_i (n) g_j`` as a coordinate vector."""
        ng = self.carrier.ngens
        if i == self.vacuum_index:
            return unit_vec(ng, j) if n == -1 else zero_vec(ng)
        if j == self.vacuum_index:
            if n >= 0:
                return zero_vec(ng)
            k = -n - 1
            return vaxpy(zero_vec(ng), RatPoly.monomial(k, Fraction(1, factorial(k))), unit_vec(ng, i))
        if n > self.hi:
            return zero_vec(ng)
        if self.lo is not None and n < self.lo:
            labels = self.carrier.labels
            raise WindowError(f"outside product window: {labels[i]}_({n}) {labels[j]} (window {self.lo}..{self.hi})")
        v = self.table.get((i, j, n))
        return v.coords if v is not None else zero_vec(ng)

    def _raw(self, xc: Sequence[RatPoly], yc: Sequence[RatPoly], n: int):
        """Product of unreduced coordinate vectors via the translation rules."""
        out = zero_vec(self.carrier.ngens)
        for i, xi in enumerate(xc):
            for a, ca in enumerate(xi.coeffs):
                if not ca:
                    continue
                f = (-1) ** a * falling(n, a)
                if not f:
                    continue
                m = n - a
                for j, yj in enumerate(yc):
                    for b, cb in enumerate(yj.coeffs):
                        if not cb:
                            continue
                        for r in range(b + 1):
                            g = binomial(b, r) * falling(m, r)
                            if not g:
                                continue
                            p = self._gen_product(i, j, m - r)
                            if is_zero_vec(p):
                                continue
                            out = vaxpy(out, RatPoly.monomial(b - r, ca * cb * f * g), p)
        return out

    def nth_product(self, x: ModuleElement, y: ModuleElement, n: int) -> ModuleElement:
        key = (x.coords, y.coords, n)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.carrier.element(self._raw(x.coords, y.coords, n))
            self._cache[key] = hit
        return hit

    def product_table(self, lo: int, hi: int | None = None) -> dict:
        """Nonzero non-vacuum generator products ``{(l1, l2, n): element}`` for ``lo <= n <= hi``."""
        hi = self.top if hi is None else hi
        labels = self.carrier.labels
        out = {}
        for i, j in itertools.product(range(self.carrier.ngens), repeat=2):
            if self.vacuum_index in (i, j):
                continue
            for n in range(lo, hi + 1):
                v = self.nth_product(self.gen(i), self.gen(j), n)
                if v:
                    out[(labels[i], labels[j], n)] = v
        return out

    def locality_order(self, x: ModuleElement, y: ModuleElement) -> int:
        """Smallest N with ``x_(n) y = 0`` for all ``n >= N``."""
        top = self.top + max(x.degree(), 0) + max(y.degree(), 0)
        N = 0
        for n in range(top + 1):
            if self.nth_product(x, y, n):
                N = n + 1
        return N


# ---------------------------------------------------------------------------
# the example Q[t^-1] + Q[D] n
# ---------------------------------------------------------------------------


class ExampleElement:
    """``sum_k c_k t^-k + q(D) n`` with ``c_k`` for ``k >= 0``."""

    __slots__ = ("u_part", "n_part")

    def __init__(self, u_part: dict | None = None, n_part: RatPoly | None = None):
        self.u_part = {k: Fraction(c) for k, c in (u_part or {}).items() if c}
        if any(k < 0 for k in self.u_part):
            raise ValueError("positive powers of t are not allowed")
        self.n_part = n_part if n_part is not None else RatPoly()

    @classmethod
    def from_coords(cls, coords: Sequence[RatPoly]) -> ExampleElement:
        e, u, n = coords
        up = {}
        if e[0]:
            up[0] = e[0]
        # D^r t^-1 = (-1)^r r! t^(-r-1)
        for r, c in enumerate(u.coeffs):
            if c:
                up[r + 1] = c * (-1) ** r * factorial(r)
        return cls(up, n)

    def to_coords(self) -> tuple:
        e = RatPoly.const(self.u_part.get(0, 0))
        u = RatPoly([
            self.u_part.get(r + 1, 0) * Fraction((-1) ** r, factorial(r))
            for r in range(max(self.u_part, default=0))
        ])
        return (e, u, self.n_part)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExampleElement)
            and self.u_part == other.u_part
            and self.n_part == other.n_part
        )

    def __hash__(self):
        return hash((tuple(sorted(self.u_part.items())), self.n_part))

    def __add__(self, other: ExampleElement) -> ExampleElement:
        up = dict(self.u_part)
        for k, c in other.u_part.items():
            up[k] = up.get(k, 0) + c
        return ExampleElement(up, self.n_part + other.n_part)

    def to_str(self) -> str:
        parts = []
        for k in sorted(self.u_part):
            c = self.u_part[k]
            mono = "1" if k == 0 else f"t^-{k}"
            if c == 1:
                parts.append(mono)
            elif k == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*{mono}")
        if self.n_part:
            parts.append(f"({self.n_part.to_str('D')})*n")
        return " + ".join(parts) or "0"

    __str__ = to_str

    def __repr__(self) -> str:
        return f"ExampleElement({self.to_str()})"


def _uu(a: dict, b: dict, m: int) -> dict:
    # a_(-k-1) b = (a^(k) / k!) b in Q[t^-1]
    if m >= 0:
        return {}
    k = -m - 1
    out: dict = {}
    for j, cj in a.items():
        c = cj * Fraction(falling(-j, k), factorial(k))
        if not c:
            continue
        for l, dl in b.items():
            out[j + k + l] = out.get(j + k + l, 0) + c * dl
    return out


def _un(a: dict, q: RatPoly, m: int) -> RatPoly:
    # a_(m) D^K n = sum_i C(K, i) (-1)^i [z^(-m-1)] a^(i)(z) D^(K-i) n
    out = [Fraction(0)] * (q.degree + 1 if q else 0)
    for K, qK in enumerate(q.coeffs):
        if not qK:
            continue
        for i in range(K + 1):
            k = m + 1 - i
            if k < 0 or k not in a:
                continue
            out[K - i] += qK * binomial(K, i) * (-1) ** i * a[k] * falling(-k, i)
    return RatPoly(out)


def _nu(q: RatPoly, a: dict, m: int) -> RatPoly:
    # skew symmetry: b_(m) a = sum_j (-1)^(m+j+1) D^(j) (a_(m+j) b)
    out = RatPoly()
    if not q or not a:
        return out
    jmax = max(a) + q.degree - 1 - m
    for j in range(jmax + 1):
        t = _un(a, q, m + j)
        if t:
            out = out + t * RatPoly.monomial(j, Fraction(_sign(m + j + 1), factorial(j)))
    return out


def example_product(x: ExampleElement, y: ExampleElement, m: int) -> ExampleElement:
    """``x_(m) y`` in the example, straight from the defining formulas."""
    up = _uu(x.u_part, y.u_part, m)
    nq = _un(x.u_part, y.n_part, m) + _nu(x.n_part, y.u_part, m)
    return ExampleElement(up, nq)


class ExampleVertexAlgebra(VertexAlgebra):
    """``Q[t^-1] + Q[D] n``; every product is defined (no window)."""

    def __init__(self):
        D = RatPoly.var()
        carrier = PresentedModule(["e", "u", "n"], [[D, RatPoly(), RatPoly()]])
        super().__init__(carrier, vacuum="e", window=(None, 0), name="M")

    def _gen_product(self, i: int, j: int, n: int):
        return self._raw(unit_vec(3, i), unit_vec(3, j), n)

    def _raw(self, xc, yc, n):
        x = ExampleElement.from_coords(xc)
        y = ExampleElement.from_coords(yc)
        return example_product(x, y, n).to_coords()

    def to_example(self, x: ModuleElement) -> ExampleElement:
        return ExampleElement.from_coords(x.coords)

    def from_example(self, x: ExampleElement) -> ModuleElement:
        return self.carrier.element(x.to_coords())

    def table_form(self, lo: int = -DEFAULT_TRUNCATION) -> VertexAlgebra:
        """The same algebra as a table on the window ``lo..0``."""
        return VertexAlgebra(self.carrier, "e", self.product_table(lo, 0), (lo, 0), name=self.name)


def build_example() -> ExampleVertexAlgebra:
    return ExampleVertexAlgebra()


# ---------------------------------------------------------------------------
# the underlying Lie conformal algebra
# ---------------------------------------------------------------------------


def lie_functor(V: VertexAlgebra, verify: bool = True) -> ConformalAlgebra:
    """``[a _L b] = sum_n L^n / n! a_(n) b`` on generators."""
    table = {}
    gens = V.gens()
    for i, j in itertools.product(range(len(gens)), repeat=2):
        terms = {}
        for n in range(V.top + 1):
            p = V.nth_product(gens[i], gens[j], n)
            if p:
                terms[n] = p * Fraction(1, factorial(n))
        if terms:
            table[(i, j)] = LambdaElement(V.carrier, terms)
    name = f"{V.name}^lie" if V.name else ""
    return ConformalAlgebra(V.carrier, table, name=name, verify=verify)


# ---------------------------------------------------------------------------
# axioms at finite truncation
# ---------------------------------------------------------------------------


@dataclass
class AxiomResult:
    checked: int = 0
    skipped: int = 0
    counterexample: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


@dataclass
class VertexAxiomReport:
    truncation: int
    results: dict = field(default_factory=dict)  # name -> AxiomResult
    locality_orders: dict = field(default_factory=dict)  # (label, label) -> N

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def summary(self) -> dict:
        return {
            "truncation": self.truncation,
            "ok": self.ok,
            "axioms": {
                name: {
                    "ok": r.ok,
                    "checked": r.checked,
                    "skipped": r.skipped,
                    "counterexample": list(r.counterexample) if r.counterexample else None,
                }
                for name, r in self.results.items()
            },
            "locality_orders": {f"{a},{b}": N for (a, b), N in sorted(self.locality_orders.items())},
        }


def _run_check(res: AxiomResult, witness: tuple, test):
    if res.counterexample is not None:
        return
    try:
        good = test()
    except WindowError:
        res.skipped += 1
        return
    res.checked += 1
    if not good:
        res.counterexample = witness


def check_vertex_axioms(V: VertexAlgebra, truncation_order: int = DEFAULT_TRUNCATION) -> VertexAxiomReport:
    """Vacuum, translation, skew symmetry and locality on generators.

    Locality is tested through the commutator formula
    ``[a_(m), b_(k)] c = sum_j C(m, j) (a_(j) b)_(m+k-j) c`` for ``0 <= m <= T``
    and ``|k| <= T``.  Products falling outside a declared window are counted
    as skipped.
    """
    T = truncation_order
    rep = VertexAxiomReport(T)
    labels = V.carrier.labels
    gens = V.gens()
    ng = len(gens)
    P = V.nth_product
    res = {name: AxiomResult() for name in ("vacuum", "translation", "well_defined", "skew", "locality")}
    rep.results = res
    window = range(-T, T + 1)

    vac = V.vacuum
    if vac is None:
        res["vacuum"].counterexample = ("no vacuum declared",)
    else:
        for j, g in enumerate(gens):
            for m in window:
                want = g if m == -1 else V.carrier.zero()
                _run_check(res["vacuum"], ("1", labels[j], m), lambda: P(vac, g, m) == want)
                if m >= 0:
                    want = V.carrier.zero()
                else:
                    want = g.d(-m - 1) * Fraction(1, factorial(-m - 1))
                _run_check(res["vacuum"], (labels[j], "1", m), lambda: P(g, vac, m) == want)

    for i, j in itertools.product(range(ng), repeat=2):
        x, y = gens[i], gens[j]
        for m in window:
            w = (labels[i], labels[j], m)
            _run_check(res["translation"], w, lambda: P(x.d(), y, m) == P(x, y, m - 1) * (-m))
            _run_check(res["translation"], w, lambda: P(x, y, m).d() == P(x.d(), y, m) + P(x, y.d(), m))
            # y_(m) x = sum_j (-1)^(m+j+1) D^(j) (x_(m+j) y)
            def skew():
                rhs = V.carrier.zero()
                for s in range(max(V.top - m, -1) + 1):
                    t = P(x, y, m + s)
                    if t:
                        rhs = rhs + t.d(s) * Fraction(_sign(m + s + 1), factorial(s))
                return P(y, x, m) == rhs

            _run_check(res["skew"], w, skew)

    # relations of the carrier must multiply to zero on both sides
    for r in V.carrier.relations:
        for j, g in enumerate(gens):
            for m in window:
                rel = " + ".join(f"({c.to_str()})*{lab}" for c, lab in zip(r, labels) if c)
                w = (rel, labels[j], m)
                _run_check(
                    res["well_defined"],
                    w,
                    lambda: is_zero_vec(V.carrier.rel.reduce(V._raw(r, g.coords, m)))
                    and is_zero_vec(V.carrier.rel.reduce(V._raw(g.coords, r, m))),
                )

    for i, j, l in itertools.product(range(ng), repeat=3):
        a, b, c = gens[i], gens[j], gens[l]
        for m in range(T + 1):
            for k in window:
                def comm():
                    lhs = P(a, P(b, c, k), m) - P(b, P(a, c, m), k)
                    rhs = V.carrier.zero()
                    for s in range(m + 1):
                        ab = P(a, b, s)
                        if ab:
                            rhs = rhs + P(ab, c, m + k - s) * binomial(m, s)
                    return lhs == rhs

                _run_check(res["locality"], (labels[i], labels[j], labels[l], m, k), comm)

    for i, j in itertools.product(range(ng), repeat=2):
        rep.locality_orders[(labels[i], labels[j])] = V.locality_order(gens[i], gens[j])
    return rep


# ---------------------------------------------------------------------------
# nilpotent elements
# ---------------------------------------------------------------------------


@dataclass
class NilpotenceCertificate:
    nilpotent: bool
    order: int | None
    window: tuple
    status: str

    def to_dict(self) -> dict:
        return {"status": self.status, "order": self.order, "window": list(self.window)}


def _span(elements: Iterable[ModuleElement], home: PresentedModule) -> list[ModuleElement]:
    elements = [e for e in elements if e]
    if not elements:
        return []
    keys = sorted({k for e in elements for k in e.monomial_coords()})
    idx = {k: i for i, k in enumerate(keys)}
    rows = []
    for e in elements:
        row = [Fraction(0)] * len(keys)
        for k, v in e.monomial_coords().items():
            row[idx[k]] = v
        rows.append(row)
    basis = linalg.span_basis(rows, len(keys))
    return [element_from_monomials(home, {keys[i]: v for i, v in enumerate(row) if v}) for row in basis]


def is_nilpotent_element(
    V: VertexAlgebra, v: ModuleElement, bound: int = 4, truncation_order: int = DEFAULT_TRUNCATION
) -> NilpotenceCertificate:
    """Bounded certificate that all ``k``-fold products ``v_(m1) ... v_(m_k-1) v`` vanish.

    Indices ``m`` range over ``-T <= m <= top + deg``, beyond which nonnegative
    products vanish for degree reasons.  A negative answer is only ever
    "not decided".
    """
    T = truncation_order
    if not v:
        return NilpotenceCertificate(True, 1, (-T, -T), "nilpotent")
    level = [v]
    hi_seen = -T
    for order in range(2, bound + 1):
        prods = []
        try:
            for s in level:
                hi = V.top + max(v.degree(), 0) + max(s.degree(), 0)
                hi_seen = max(hi_seen, hi)
                for m in range(-T, hi + 1):
                    prods.append(V.nth_product(v, s, m))
        except WindowError:
            return NilpotenceCertificate(False, None, (-T, hi_seen), "not decided (outside product window)")
        level = _span(prods, V.carrier)
        if not level:
            return NilpotenceCertificate(True, order, (-T, hi_seen), "nilpotent")
    return NilpotenceCertificate(False, None, (-T, hi_seen), "not decided")


# ---------------------------------------------------------------------------
# inner automorphisms exp(k u_(0))
# ---------------------------------------------------------------------------


class InnerAutomorphism:
    """``psi = id + k u_(0)`` for ``u`` with ``u_(0)^2 = 0``."""

    def __init__(self, V: VertexAlgebra, u: ModuleElement, k):
        self.V = V
        self.u = u
        self.k = Fraction(k)

    def derivation(self, x: ModuleElement) -> ModuleElement:
        return self.V.nth_product(self.u, x, 0)

    def __call__(self, x: ModuleElement) -> ModuleElement:
        return x + self.derivation(x) * self.k

    def inverse(self) -> InnerAutomorphism:
        return InnerAutomorphism(self.V, self.u, -self.k)

    def image(self, S: Submodule) -> Submodule:
        return S.home.submodule(self(g) for g in S.generator_elements)

    def preserves_products(self, truncation_order: int = DEFAULT_TRUNCATION):
        """``(True, None)`` or ``(False, (g1, g2, m))`` for the first failing product."""
        V = self.V
        labels = V.carrier.labels
        gens = V.gens()
        for i, j in itertools.product(range(len(gens)), repeat=2):
            x, y = gens[i], gens[j]
            for m in range(-truncation_order, truncation_order + 1):
                if self(V.nth_product(x, y, m)) != V.nth_product(self(x), self(y), m):
                    return False, (labels[i], labels[j], m)
        return True, None


def exp_inner_automorphism(
    V: VertexAlgebra, u: ModuleElement, k, truncation_order: int = DEFAULT_TRUNCATION
) -> InnerAutomorphism:
    psi = InnerAutomorphism(V, u, k)
    for g in V.gens():
        if psi.derivation(psi.derivation(g)):
            raise NotSquareZero(f"u_(0)^2 does not vanish on {g}")
    labels = V.carrier.labels
    gens = V.gens()
    for i, j in itertools.product(range(len(gens)), repeat=2):
        x, y = gens[i], gens[j]
        for m in range(-truncation_order, truncation_order + 1):
            d = psi.derivation
            lhs = d(V.nth_product(x, y, m))
            if lhs != V.nth_product(d(x), y, m) + V.nth_product(x, d(y), m):
                raise PostconditionError(f"u_(0) is not a derivation on {labels[i]}_({m}) {labels[j]}")
    return psi


# ---------------------------------------------------------------------------
# root space decomposition V = U + N
# ---------------------------------------------------------------------------


def _candidates(V: VertexAlgebra, seed: int):
    """``(level, element)`` for sum c_i g_i + d_i D g_i by increasing max-norm.

    Within a level, sparser vectors come first; a nonzero seed shuffles them.
    Elements are deduplicated up to a scalar.
    """
    ng = V.carrier.ngens
    rng = random.Random(seed) if seed else None
    seen = set()
    for level in itertools.count(1):
        groups: dict = {}
        for vec in itertools.product(range(-level, level + 1), repeat=2 * ng):
            if max(map(abs, vec)) != level:
                continue
            first = next(c for c in vec if c)
            g = 0
            for c in vec:
                g = gcd(g, c)
            if first < 0 or g != 1:
                continue
            groups.setdefault(sum(1 for c in vec if c), []).append(vec)
        for support in sorted(groups):
            # fewer D-terms first, then generators in declaration order
            vecs = sorted(groups[support], key=lambda v: (sum(1 for c in v[ng:] if c), [-abs(c) for c in v], [-c for c in v]))
            if rng is not None:
                rng.shuffle(vecs)
            for vec in vecs:
                coords = [RatPoly([vec[i], vec[ng + i]]) for i in range(ng)]
                x = V.carrier.element(coords)
                if not x:
                    continue
                key = _projective_key(x)
                if key in seen:
                    continue
                seen.add(key)
                yield level, x


def _projective_key(x: ModuleElement):
    mc = x.monomial_coords()
    lead = mc[min(mc)]
    return tuple(sorted((k, v / lead) for k, v in mc.items()))


@dataclass
class RootSpaceDecomposition:
    U: Submodule
    N: Submodule
    abar: ModuleElement
    report: dict

    def __iter__(self):
        return iter((self.U, self.N, self.abar, self.report))


def _sum(parts: Iterable[Submodule], home: PresentedModule) -> Submodule:
    out = home.zero_submodule()
    for P in parts:
        out = out + P
    return out


def _closed(V: VertexAlgebra, A: Submodule, B: Submodule, target: Submodule, T: int) -> bool:
    """``a_(m) b`` in ``target`` for H-generators of A, B and ``|m| <= T``."""
    for a in A.generator_elements:
        for b in B.generator_elements:
            for m in range(-T, T + 1):
                if not target.contains(V.nth_product(a, b, m)):
                    return False
    return True


def root_space_decomposition(
    V: VertexAlgebra,
    candidate_budget: int = DEFAULT_BUDGET,
    truncation_order: int = DEFAULT_TRUNCATION,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
    max_cap: int = DEFAULT_MAX_CAP,
) -> RootSpaceDecomposition:
    """``V = U + N`` with ``N`` the limit of the central series of the Lie part.

    An element of minimal singularity is searched for among small integer
    combinations of generators and their derivatives.  Since
    ``singularity >= rank V - rank N`` the search stops as soon as this bound
    is met; otherwise a value repeated on two consecutive norm levels is
    accepted.  The chosen element is modified so that it generates a
    nilpotent subalgebra, and U is its zero generalized weight module.
    """
    from .modify import modify

    T = truncation_order
    L = lie_functor(V)
    if not L.is_solvable():
        raise NotSolvable("the Lie part is not solvable")
    N = L.stabilized_ideal()
    bound = V.carrier.rank() - N.rank()
    report: dict = {"lower_bound": bound, "candidates": []}
    best = None  # (singularity, element)
    level_min: dict = {}
    tried = 0
    accepted = None
    for level, x in _candidates(V, seed):
        if level - 1 in level_min and level - 2 in level_min and level_min[level - 1] == level_min[level - 2]:
            accepted = "repeat-rule"
            break
        if tried >= candidate_budget:
            break
        tried += 1
        try:
            s = singularity(LambdaAction(L, x), cap, max_cap)
        except (NeedsFieldExtension, CapExhausted, NotSolvable) as exc:
            report["candidates"].append({"element": x.to_str(), "error": str(exc)})
            continue
        report["candidates"].append({"element": x.to_str(), "singularity": s})
        level_min[level] = min(level_min.get(level, s), s)
        if best is None or s < best[0]:
            best = (s, x)
        if s == bound:
            accepted = "lower-bound"
            break
    report["candidates_tried"] = tried
    if accepted is None:
        raise BudgetExhausted(
            f"no candidate of certified minimal singularity within budget {candidate_budget}",
            partial=report,
        )
    s, a = best
    report["singularity"] = s
    report["certified"] = accepted
    report["element"] = a.to_str()

    trace = modify(a, L, seed=seed, cap=cap, max_cap=max_cap)
    abar = trace.result
    report["modified"] = abar.to_str()
    report["trace"] = trace.to_dict()
    act = LambdaAction(L, abar)
    dec = decompose(act, cap, max_cap)
    U = dec.parts.get(ZERO_WEIGHT, V.carrier.zero_submodule())
    Nw = _sum((P for w, P in dec.parts.items() if not w.is_zero()), V.carrier)
    report["weights"] = [str(w) for w in dec.weights()]
    whole = V.carrier.whole()
    checks = {
        "nonzero_weights_equal_stabilized_ideal": Nw == N,
        "direct_sum": (U + N) == whole and U.intersect(N).is_zero(),
        "U_closed": _closed(V, U, U, U, T),
        "U_lie_nilpotent": L.is_nilpotent(U),
        "U_self_normalizing": L.normalizer(U) == U,
        "N_abelian": _closed(V, N, N, V.carrier.zero_submodule(), T),
        "N_ideal": _closed(V, whole, N, N, T) and _closed(V, N, whole, N, T),
        "singularity_is_rank_of_U": U.rank() == s,
    }
    report["checks"] = checks
    report["ok"] = all(checks.values())
    report["N_nilpotent_elements"] = {
        g.to_str(): is_nilpotent_element(V, g, 2, T).nilpotent for g in N.generator_elements
    }
    return RootSpaceDecomposition(U, N, abar, report)


def conjugating_automorphism(V: VertexAlgebra, U1: Submodule, U2: Submodule, N: Submodule):
    """Look for ``psi = exp(k x_(0))`` with ``x`` an H-generator of N and ``psi(U1) = U2``.

    Returns ``(x, k)`` or ``None`` (conjugacy unknown).
    """
    if U1 == U2:
        return (V.carrier.zero(), Fraction(0))
    for x in N.generator_elements:
        k = None
        ok = True
        for g in U1.generator_elements:
            r0 = U2.reduce(g)
            r1 = U2.reduce(V.nth_product(x, g, 0))
            m0, m1 = r0.monomial_coords(), r1.monomial_coords()
            if not m1:
                ok = not m0
            else:
                key = min(m1)
                c = -m0.get(key, Fraction(0)) / m1[key]
                if r0 + r1 * c:
                    ok = False
                elif k is None:
                    k = c
                elif k != c:
                    ok = False
            if not ok:
                break
        if not ok:
            continue
        k = k if k is not None else Fraction(0)
        try:
            psi = exp_inner_automorphism(V, x, k)
        except (NotSquareZero, PostconditionError):
            continue
        if psi.image(U1) == U2:
            return (x, k)
    return None
