"""Lie conformal algebras over H = Q[D] in lambda-bracket form.

Brackets are stored on generators as :class:`LambdaElement` values and
extended by sesquilinearity::

    [D a _L b] = -L [a _L b],     [a _L D b] = (D + L) [a _L b].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .errors import CapExhausted
from .hmodule import (
    ModuleElement,
    PresentedModule,
    Submodule,
    kernel_basis,
    vaxpy,
    zero_vec,
)
from .poly import DEL, LAM, MPoly, RatPoly, binomial, lambda_to_pseudo, pseudo_to_lambda

# ---------------------------------------------------------------------------
# elements of M[L]
# ---------------------------------------------------------------------------


class LambdaElement:
    """``sum_k L^k m_k`` with coefficients in a fixed presented module."""

    __slots__ = ("home", "terms")

    def __init__(self, home: PresentedModule, terms: dict | None = None):
        self.home = home
        self.terms: dict[int, ModuleElement] = {}
        for k, m in (terms or {}).items():
            if m:
                self.terms[k] = m

    @classmethod
    def zero(cls, home: PresentedModule) -> LambdaElement:
        return cls(home)

    @classmethod
    def constant(cls, m: ModuleElement) -> LambdaElement:
        return cls(m.home, {0: m})

    @classmethod
    def from_polys(cls, home: PresentedModule, table: dict) -> LambdaElement:
        """Build from ``{generator label or index: MPoly in (L, D)}``."""
        raw: dict[int, tuple] = {}
        n = home.ngens
        for g, poly in table.items():
            gi = home.labels.index(g) if isinstance(g, str) else g
            for (i, j), c in poly.terms.items():
                v = raw.get(i, zero_vec(n))
                col = list(v)
                col[gi] = col[gi] + RatPoly.monomial(j, c)
                raw[i] = tuple(col)
        return cls(home, {k: home.element(v) for k, v in raw.items()})

    def to_polys(self) -> dict[str, MPoly]:
        """Inverse of :meth:`from_polys` (only generators with nonzero coefficient)."""
        out: dict[str, MPoly] = {}
        for k, m in self.terms.items():
            for gi, p in enumerate(m.coords):
                for j, c in enumerate(p.coeffs):
                    if c:
                        acc = out.setdefault(self.home.labels[gi], MPoly({}, 2))
                        out[self.home.labels[gi]] = acc + MPoly({(k, j): c}, 2)
        return {g: p for g, p in out.items() if p}

    # -- queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max(self.terms, default=-1)

    def __getitem__(self, k: int) -> ModuleElement:
        return self.terms.get(k) or self.home.zero()

    def coefficients(self) -> list[ModuleElement]:
        """``[m_0, m_1, ...]`` up to the degree (zeros included)."""
        return [self[k] for k in range(self.degree() + 1)]

    def __eq__(self, other) -> bool:
        if isinstance(other, LambdaElement):
            return self.home == other.home and self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted((k, m.coords) for k, m in self.terms.items())))

    def to_str(self) -> str:
        polys = self.to_polys()
        if not polys:
            return "0"
        parts = []
        for g in self.home.labels:
            if g not in polys:
                continue
            s = polys[g].to_str(("L", "D"))
            if s == "1":
                parts.append(g)
            elif s == "-1":
                parts.append(f"-{g}")
            elif len(polys[g].terms) == 1 and not s.startswith("-"):
                parts.append(f"{s}*{g}")
            else:
                parts.append(f"({s})*{g}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __str__ = to_str

    def __repr__(self) -> str:
        return f"LambdaElement({self.to_str()!r})"

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: LambdaElement) -> LambdaElement:
        out = dict(self.terms)
        for k, m in other.terms.items():
            out[k] = out[k] + m if k in out else m
        return LambdaElement(self.home, out)

    def __neg__(self) -> LambdaElement:
        return LambdaElement(self.home, {k: -m for k, m in self.terms.items()})

    def __sub__(self, other: LambdaElement) -> LambdaElement:
        return self + (-other)

    def scale(self, c) -> LambdaElement:
        return LambdaElement(self.home, {k: m * c for k, m in self.terms.items()})

    def mul(self, q: MPoly) -> LambdaElement:
        """Multiply by a polynomial ``q(L, D)``."""
        n = self.home.ngens
        raw: dict[int, tuple] = {}
        for (i, j), c in q.terms.items():
            dj = RatPoly.monomial(j, c)
            for k, m in self.terms.items():
                v = raw.get(i + k, zero_vec(n))
                raw[i + k] = tuple(x + dj * y for x, y in zip(v, m.coords))
        return LambdaElement(self.home, {k: self.home.element(v) for k, v in raw.items()})

    def substitute(self, q: MPoly) -> LambdaElement:
        """Replace ``L`` by ``q(L, D)`` (``D`` acting on the coefficients)."""
        out = LambdaElement(self.home)
        power = MPoly.const(1, 2)
        for k in range(self.degree() + 1):
            if k in self.terms:
                out = out + LambdaElement.constant(self.terms[k]).mul(power)
            power = power * q
        return out

    def map(self, f) -> LambdaElement:
        """Apply a k[D]-linear map coefficientwise (result may live elsewhere)."""
        items = {k: f(m) for k, m in self.terms.items()}
        home = next(iter(items.values())).home if items else None
        return LambdaElement(home, items) if home else None

    def to_pseudo(self) -> dict[str, MPoly]:
        """The pseudobracket form ``P(x, y)`` for each generator."""
        return {g: lambda_to_pseudo(p) for g, p in self.to_polys().items()}


def coefficient(e: LambdaElement, n: int) -> ModuleElement:
    """The ``n``-th product coefficient ``n! * [L^n]``."""
    return e[n] * factorial(n)


def lambda_from_pseudo(home: PresentedModule, table: dict) -> LambdaElement:
    return LambdaElement.from_polys(home, {g: pseudo_to_lambda(p) for g, p in table.items()})


def tensor_element(alpha: MPoly, m: ModuleElement) -> LambdaElement:
    """Canonical form of ``alpha (x)_H m`` for ``alpha`` in H (x) H (variables x, y)."""
    return LambdaElement.constant(m).mul(pseudo_to_lambda(alpha))


# two-variable elements for the Jacobi identity: {(i, j): ModuleElement}


def _two_add(acc: dict, key, m: ModuleElement):
    if key in acc:
        acc[key] = acc[key] + m
    else:
        acc[key] = m


def _two_clean(d: dict) -> dict:
    return {k: m for k, m in d.items() if m}


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    skew: list = field(default_factory=list)
    jacobi: list = field(default_factory=list)
    well_defined: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.skew or self.jacobi or self.well_defined)

    def summary(self) -> dict:
        return {
            "ok": self.ok,
            "skew_violations": [list(p) for p in self.skew],
            "jacobi_violations": [list(t) for t in self.jacobi],
            "relation_violations": [list(t) for t in self.well_defined],
        }


class ConformalAlgebra:
    """Lie conformal algebra on a presented Q[D]-module.

    ``table`` maps pairs of generator labels (or indices) to the
    :class:`LambdaElement` ``[g_i _L g_j]``; missing pairs are zero.
    """

    def __init__(
        self,
        carrier: PresentedModule,
        table: dict | None = None,
        name: str = "",
        verify: bool = True,
    ):
        self.carrier = carrier
        self.name = name
        self.table: dict[tuple[int, int], LambdaElement] = {}
        for (gi, gj), v in (table or {}).items():
            i = carrier.labels.index(gi) if isinstance(gi, str) else gi
            j = carrier.labels.index(gj) if isinstance(gj, str) else gj
            if v:
                self.table[(i, j)] = v
        self.report = self.check_axioms() if verify else None
        self.verified = bool(self.report and self.report.ok)

    def __repr__(self) -> str:
        return f"ConformalAlgebra({self.name or list(self.carrier.labels)})"

    # -- elements -------------------------------------------------------
    def gen(self, which) -> ModuleElement:
        return self.carrier.gen(which)

    def gens(self) -> list[ModuleElement]:
        return self.carrier.gens()

    def whole(self) -> Submodule:
        return self.carrier.whole()

    def entry(self, i: int, j: int) -> LambdaElement:
        return self.table.get((i, j)) or LambdaElement(self.carrier)

    # -- the bracket ----------------------------------------------------
    def lambda_bracket(self, a: ModuleElement, b: ModuleElement) -> LambdaElement:
        out = LambdaElement(self.carrier)
        for i, ai in enumerate(a.coords):
            if not ai:
                continue
            left = ai.reflect().to_mpoly(2, 0)
            for j, bj in enumerate(b.coords):
                if not bj:
                    continue
                t = self.table.get((i, j))
                if t is None:
                    continue
                out = out + t.mul(left * bj(LAM + DEL))
        return out

    def bracket_two(self, a: ModuleElement, b: ModuleElement, c: ModuleElement):
        """Terms of ``[a _L [b _M c]]`` as ``{(i, j): element}`` (L^i M^j)."""
        acc: dict = {}
        for j, m in self.lambda_bracket(b, c).terms.items():
            for i, r in self.lambda_bracket(a, m).terms.items():
                _two_add(acc, (i, j), r)
        return _two_clean(acc)

    def _jacobi_right(self, a, b, c):
        """``[[a _L b] _{L+M} c]`` as ``{(i, j): element}``."""
        acc: dict = {}
        for k, m in self.lambda_bracket(a, b).terms.items():
            for r, e in self.lambda_bracket(m, c).terms.items():
                # L^k (L + M)^r
                for s in range(r + 1):
                    _two_add(acc, (k + s, r - s), e * binomial(r, s))
        return _two_clean(acc)

    def skew_partner(self, a: ModuleElement, b: ModuleElement) -> LambdaElement:
        """``-[a _{-L-D} b]``; equals ``[b _L a]`` when skew symmetry holds."""
        return -self.lambda_bracket(a, b).substitute(-LAM - DEL)

    def check_axioms(self) -> AxiomReport:
        rep = AxiomReport()
        gens = self.gens()
        labels = self.carrier.labels
        n = len(gens)
        for i in range(n):
            for j in range(i, n):
                if self.lambda_bracket(gens[j], gens[i]) != self.skew_partner(gens[i], gens[j]):
                    rep.skew.append((labels[i], labels[j]))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    a, b, c = gens[i], gens[j], gens[k]
                    lhs = self.bracket_two(a, b, c)
                    swapped = self.bracket_two(b, a, c)
                    for (p, q), m in swapped.items():
                        _two_add(lhs, (q, p), -m)
                    if _two_clean(lhs) != self._jacobi_right(a, b, c):
                        rep.jacobi.append((labels[i], labels[j], labels[k]))
        # relations must bracket to zero on both sides
        for r in self.carrier.relations:
            rel = self.carrier_free_element(r)
            for j, g in enumerate(gens):
                if self._bracket_raw(r, g.coords) or self._bracket_raw(g.coords, r):
                    rep.well_defined.append((rel, labels[j]))
        return rep

    def carrier_free_element(self, coords) -> str:
        parts = []
        for c, lab in zip(coords, self.carrier.labels):
            if c:
                parts.append(f"({c.to_str()})*{lab}")
        return " + ".join(parts) or "0"

    def _bracket_raw(self, a, b) -> LambdaElement:
        """Bracket of unreduced coordinate vectors (relations reduce to zero otherwise)."""
        out = LambdaElement(self.carrier)
        for i, ai in enumerate(a):
            if not ai:
                continue
            left = ai.reflect().to_mpoly(2, 0)
            for j, bj in enumerate(b):
                if bj and (i, j) in self.table:
                    out = out + self.table[(i, j)].mul(left * bj(LAM + DEL))
        return out

    # -- submodules and series ----------------------------------------
    def bracket_submodule(self, A: Submodule, B: Submodule) -> Submodule:
        coeffs = []
        for a in A.generator_elements:
            for b in B.generator_elements:
                coeffs.extend(self.lambda_bracket(a, b).terms.values())
        return self.carrier.submodule(coeffs)

    def is_subalgebra(self, S: Submodule) -> bool:
        return S.contains(self.bracket_submodule(S, S))

    def derived_series(self, S: Submodule | None = None, max_steps: int = 256) -> list[Submodule]:
        """``[S, S', S'', ...]`` ending at the first term equal to its successor."""
        cur = S if S is not None else self.whole()
        out = [cur]
        for _ in range(max_steps):
            nxt = self.bracket_submodule(cur, cur)
            if nxt == cur:
                return out
            out.append(nxt)
            cur = nxt
        raise CapExhausted("derived series did not stabilize", partial=out)

    def central_series(self, S: Submodule | None = None, max_steps: int = 256) -> list[Submodule]:
        """``[S, [S, S], [S, [S, S]], ...]`` ending at the first term equal to its successor."""
        top = S if S is not None else self.whole()
        cur = top
        out = [cur]
        for _ in range(max_steps):
            nxt = self.bracket_submodule(top, cur)
            if nxt == cur:
                return out
            out.append(nxt)
            cur = nxt
        raise CapExhausted("central series did not stabilize", partial=out)

    def stabilized_ideal(self, S: Submodule | None = None) -> Submodule:
        return self.central_series(S)[-1]

    def is_solvable(self, S: Submodule | None = None) -> bool:
        return self.derived_series(S)[-1].is_zero()

    def is_nilpotent(self, S: Submodule | None = None) -> bool:
        return self.stabilized_ideal(S).is_zero()

    def is_abelian(self, S: Submodule | None = None) -> bool:
        S = S if S is not None else self.whole()
        return self.bracket_submodule(S, S).is_zero()

    def derived_length(self, S: Submodule | None = None) -> int | None:
        series = self.derived_series(S)
        return len(series) - 1 if series[-1].is_zero() else None

    def subalgebra_generated(self, elements: Iterable[ModuleElement], max_steps: int = 256) -> Submodule:
        W = self.carrier.submodule(list(elements))
        for _ in range(max_steps):
            nxt = W + self.bracket_submodule(W, W)
            if nxt == W:
                return W
            W = nxt
        raise CapExhausted("subalgebra generation did not reach a fixed point", partial=W)

    # -- kernels over Q[L] -------------------------------------------------
    def left_kernel(
        self,
        basis: Sequence[ModuleElement],
        targets: Sequence[ModuleElement],
        modulo: Submodule | None = None,
    ) -> Submodule:
        """``{x = sum c_k basis_k : [x _L t] in modulo[L] for every target t}``.

        Writing ``x`` this way the condition reads ``sum_k c_k(-L) red[b_k _L t] = 0``,
        a Q[L]-linear system solved exactly by a syzygy computation.
        """
        modulo = modulo if modulo is not None else self.carrier.zero_submodule()
        # columns: one per (target, L-power, generator column, D-power)
        cols: dict = {}
        entries = []
        for b in basis:
            row: dict = {}
            for ti, t in enumerate(targets):
                for k, m in self.lambda_bracket(b, t).terms.items():
                    red = modulo.reduce(m)
                    for (c, r), v in red.monomial_coords().items():
                        key = (ti, c, r)
                        cols.setdefault(key, len(cols))
                        row.setdefault(key, {})[k] = v
            entries.append(row)
        ncols = len(cols)
        rows = []
        for row in entries:
            vec = [RatPoly()] * ncols
            for key, powers in row.items():
                vec[cols[key]] = RatPoly([powers.get(i, 0) for i in range(max(powers) + 1)])
            rows.append(tuple(vec))
        if ncols == 0:
            syz = [tuple(RatPoly.const(int(i == k)) for i in range(len(basis))) for k in range(len(basis))]
        else:
            syz = kernel_basis(rows, ncols)
        out = []
        for s in syz:
            v = zero_vec(self.carrier.ngens)
            for c, b in zip(s, basis):
                v = vaxpy(v, c.reflect(), b.coords)
            out.append(self.carrier.element(v))
        return self.carrier.submodule(out)

    def centre(self, S: Submodule | None = None) -> Submodule:
        """Elements of ``S`` (default: everything) bracketing trivially with ``S``."""
        S = S if S is not None else self.whole()
        gens = S.generator_elements
        return self.left_kernel(gens, gens)

    def normalizer(self, S: Submodule, cap: int = 4) -> Submodule:
        """``{x : [x _L s] in S[L] for all s in S}`` (computed exactly; ``cap`` is unused)."""
        return self.left_kernel(self.gens(), S.generator_elements, S)

    def annihilator(self, S: Submodule, W: Submodule, Q: Submodule | None = None) -> Submodule:
        """Elements of ``S`` acting trivially on ``W / Q``."""
        return self.left_kernel(S.generator_elements, W.generator_elements, Q)

    # -- misc -----------------------------------------------------------------
    def restrict_table(self) -> dict:
        return {(self.carrier.labels[i], self.carrier.labels[j]): v for (i, j), v in self.table.items()}


def derived_series(A: ConformalAlgebra, S=None):
    return A.derived_series(S)


def central_series(A: ConformalAlgebra, S=None):
    return A.central_series(S)


def stabilized_ideal(A: ConformalAlgebra, S=None):
    return A.stabilized_ideal(S)


def lambda_bracket(A: ConformalAlgebra, a: ModuleElement, b: ModuleElement) -> LambdaElement:
    return A.lambda_bracket(a, b)


def check_axioms(A: ConformalAlgebra) -> AxiomReport:
    return A.check_axioms()


def skew_complete(carrier: PresentedModule, table: dict) -> tuple[dict, list]:
    """Fill ``[g_j _L g_i]`` from ``[g_i _L g_j]`` where only one is given.

    Returns the completed table and the list of filled pairs.
    """
    tmp = ConformalAlgebra(carrier, table, verify=False)
    out = dict(tmp.table)
    filled = []
    for (i, j), v in tmp.table.items():
        if (j, i) not in out:
            out[(j, i)] = tmp.skew_partner(carrier.gen(i), carrier.gen(j))
            filled.append((carrier.labels[j], carrier.labels[i]))
    return out, filled


def frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
