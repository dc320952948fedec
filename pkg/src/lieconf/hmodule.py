"""Finitely generated modules over H = Q[D].

A module is presented as ``F / R`` with ``F = H^g`` free on named generators
and ``R`` spanned by relation rows.  Every submodule ``W`` of ``M = F/R`` is
stored through its preimage in ``F`` (which contains ``R``) in reduced
Hermite form, so equality, membership and canonical representatives are all
decided by row reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import RatPoly

Vec = tuple  # tuple[RatPoly, ...]

ZERO = RatPoly()
ONE = RatPoly.const(1)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(a: Vec, p) -> Vec:
    return tuple(x * p for x in a)


def vaxpy(a: Vec, p: RatPoly, b: Vec) -> Vec:
    """a + p*b."""
    if not p:
        return a
    return tuple(x + p * y for x, y in zip(a, b))


def is_zero_vec(a: Vec) -> bool:
    return not any(a)


def leading_col(a: Vec) -> int:
    for i, x in enumerate(a):
        if x:
            return i
    return -1


# ---------------------------------------------------------------------------
# Hermite (reduced row echelon) form over Q[D]
# ---------------------------------------------------------------------------


@dataclass
class Echelon:
    """Reduced Hermite form of a list of row vectors.

    ``rows[i]`` has its first nonzero entry (monic) in column ``pivots[i]``;
    every other row's entry in that column has smaller degree.  When built
    with ``track=True``, ``transform[i]`` expresses ``rows[i]`` in the input
    rows and ``syzygies`` is a basis of the relation module among the inputs.
    """

    ncols: int
    rows: list = field(default_factory=list)
    pivots: list = field(default_factory=list)
    transform: list | None = None
    syzygies: list | None = None

    def reduce(self, v: Vec, track: bool = False):
        """Canonical representative of ``v`` modulo the row span.

        With ``track`` also returns the multipliers ``q`` such that
        ``v = remainder + sum q[i] * rows[i]``.
        """
        quots = [ZERO] * len(self.rows)
        for i, (row, c) in enumerate(zip(self.rows, self.pivots)):
            if v[c]:
                q = v[c] // row[c]
                if q:
                    v = vaxpy(v, -q, row)
                    quots[i] = q
        return (v, quots) if track else v

    def contains(self, v: Vec) -> bool:
        return is_zero_vec(self.reduce(v))

    def key(self):
        return tuple(self.rows)


def echelon(rows: Iterable[Vec], ncols: int, track: bool = False) -> Echelon:
    rows = [tuple(r) for r in rows]
    m = len(rows)
    work = []
    for k, r in enumerate(rows):
        work.append([r, unit_vec(m, k) if track else None])
    piv_rows: list = []
    pivots: list = []
    for col in range(ncols):
        cand = [w for w in work if w[0][col]]
        while len(cand) > 1:
            best = min(range(len(cand)), key=lambda i: (cand[i][0][col].degree, i))
            p = cand[best]
            for i, w in enumerate(cand):
                if i == best:
                    continue
                q = w[0][col] // p[0][col]
                w[0] = vaxpy(w[0], -q, p[0])
                if track:
                    w[1] = vaxpy(w[1], -q, p[1])
            cand = [w for w in cand if w[0][col]]
        if cand:
            p = cand[0]
            inv = 1 / p[0][col].lc
            p[0] = vscale(p[0], inv)
            if track:
                p[1] = vscale(p[1], inv)
            work.remove(p)
            piv_rows.append(p)
            pivots.append(col)
    # reduce entries above pivots
    for i, c in enumerate(pivots):
        pr = piv_rows[i]
        for j in range(i):
            w = piv_rows[j]
            if w[0][c]:
                q = w[0][c] // pr[0][c]
                if q:
                    w[0] = vaxpy(w[0], -q, pr[0])
                    if track:
                        w[1] = vaxpy(w[1], -q, pr[1])
    ech = Echelon(ncols, [p[0] for p in piv_rows], pivots)
    if track:
        ech.transform = [p[1] for p in piv_rows]
        ech.syzygies = [w[1] for w in work]
    return ech


def kernel_basis(rows: Sequence[Vec], ncols: int) -> list[Vec]:
    """Basis of ``{c : sum c[i] rows[i] = 0}`` (a free module)."""
    ech = echelon(rows, ncols, track=True)
    return echelon(ech.syzygies, len(rows)).rows if ech.syzygies else []


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _mat_identity(n: int) -> list[list[RatPoly]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(A, B):
    n = len(A)
    k = len(B)
    m = len(B[0]) if B else 0
    out = [[ZERO] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = A[i][t]
            if a:
                for j in range(m):
                    if B[t][j]:
                        out[i][j] = out[i][j] + a * B[t][j]
    return out


def smith_normal_form(A: Sequence[Sequence[RatPoly]]):
    """Return ``(U, S, V)`` with ``U A V = S`` diagonal, ``d1 | d2 | ...``.

    Pivot: nonzero entry of minimal degree, ties broken by smallest
    (row, column).  Nonzero diagonal entries are monic.
    """
    n = len(A)
    m = len(A[0]) if n else 0
    S = [list(r) for r in A]
    U = _mat_identity(n)
    V = _mat_identity(m)

    def row_op(dst, src, q):  # row[dst] -= q * row[src]
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_op(dst, src, q):  # col[dst] -= q * col[src]
        for r in S:
            r[dst] = r[dst] - q * r[src]
        for r in V:
            r[dst] = r[dst] - q * r[src]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(n, m):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if S[i][j]:
                    key = (S[i][j].degree, i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, n):
                if S[i][t]:
                    q, r = divmod(S[i][t], S[t][t])
                    row_op(i, t, q)
                    if r:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, m):
                if S[t][j]:
                    q, r = divmod(S[t][j], S[t][t])
                    col_op(j, t, q)
                    if r:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if S[i][j] and not S[t][t].divides(S[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        inv = 1 / S[t][t].lc
        S[t] = [a * inv for a in S[t]]
        U[t] = [a * inv for a in U[t]]
        t += 1
    return U, S, V


def det(A) -> RatPoly:
    """Determinant by Laplace-free fraction-free elimination over Q(D) (small sizes)."""
    n = len(A)
    if n == 0:
        return ONE
    M = [list(r) for r in A]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            return ZERO
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = ZERO
        prev = M[k][k]
    return M[n - 1][n - 1] * sign


# ---------------------------------------------------------------------------
# Presented modules and their elements
# ---------------------------------------------------------------------------


class PresentedModule:
    """``H^g / R`` with labelled generators.

    >>> M = PresentedModule(["e", "u", "n"], [[RatPoly.var(), ZERO, ZERO]])
    >>> M.rank(), [str(d) for d in M.torsion_invariants()]
    (2, ['D'])
    """

    def __init__(self, labels: Sequence[str], relations: Iterable[Sequence[RatPoly]] = ()):
        self.labels = tuple(labels)
        self.ngens = len(self.labels)
        rels = []
        for r in relations:
            r = tuple(r)
            if len(r) != self.ngens:
                raise ValueError("relation length does not match generator count")
            rels.append(r)
        self.relations = tuple(rels)
        self.rel = echelon(self.relations, self.ngens)
        self._snf = None

    def __repr__(self) -> str:
        return f"PresentedModule({list(self.labels)}, rank={self.rank()})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PresentedModule)
            and self.labels == other.labels
            and self.rel.key() == other.rel.key()
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.rel.key()))

    # -- structure ----------------------------------------------------
    def smith(self):
        if self._snf is None:
            rows = [list(r) for r in self.rel.rows]
            if rows:
                self._snf = smith_normal_form(rows)
            else:
                self._snf = ([], [], _mat_identity(self.ngens))
        return self._snf

    def invariant_factors(self) -> list[RatPoly]:
        _, S, _ = self.smith()
        return [S[i][i] for i in range(min(len(S), self.ngens)) if S[i][i]]

    def rank(self) -> int:
        return self.ngens - len(self.invariant_factors())

    def torsion_invariants(self) -> list[RatPoly]:
        return [d.monic() for d in self.invariant_factors() if d.degree > 0]

    def is_free(self) -> bool:
        return not self.torsion_invariants()

    # -- elements -----------------------------------------------------
    def element(self, coords: Sequence) -> ModuleElement:
        coords = tuple(c if isinstance(c, RatPoly) else RatPoly.const(c) for c in coords)
        if len(coords) != self.ngens:
            raise ValueError("coordinate count does not match generator count")
        return ModuleElement(self, self.rel.reduce(coords))

    def zero(self) -> ModuleElement:
        return ModuleElement(self, zero_vec(self.ngens))

    def gen(self, which) -> ModuleElement:
        i = self.labels.index(which) if isinstance(which, str) else which
        return self.element(unit_vec(self.ngens, i))

    def gens(self) -> list[ModuleElement]:
        return [self.gen(i) for i in range(self.ngens)]

    def standard_monomials(self, cap: int) -> list[tuple[int, int]]:
        """k-basis ``(column, power)`` of canonical forms of coordinate degree <= cap."""
        bound = {c: row[c].degree for row, c in zip(self.rel.rows, self.rel.pivots)}
        out = []
        for c in range(self.ngens):
            top = min(cap, bound[c] - 1) if c in bound else cap
            out.extend((c, r) for r in range(top + 1))
        return out

    def whole(self) -> Submodule:
        return Submodule(self, [self.gen(i) for i in range(self.ngens)])

    def zero_submodule(self) -> Submodule:
        return Submodule(self, [])

    def submodule(self, elements: Iterable[ModuleElement]) -> Submodule:
        return Submodule(self, list(elements))

    def torsion_submodule(self) -> Submodule:
        """Elements killed by some nonzero polynomial."""
        return Submodule(self, self._torsion_from_snf())

    def _torsion_from_snf(self) -> list[ModuleElement]:
        U, S, V = self.smith()
        # Row relations R' = U R V; change of basis on F: e' = V^{-1} e.
        # An element with coordinates c in the new basis has old coordinates c V^{-1}.
        Vinv = _unimodular_inverse(V)
        out = []
        for i, d in enumerate(self.invariant_factors()):
            if d.degree > 0:
                out.append(self.element(Vinv[i]))
        return out


def _unimodular_inverse(V):
    n = len(V)
    rows = [tuple(V[i]) + unit_vec(n, i) for i in range(n)]
    ech = echelon(rows, 2 * n)
    # the left block reduces to the identity since V is unimodular
    return [list(r[n:]) for r in ech.rows]


class ModuleElement:
    """Element of a :class:`PresentedModule`, stored in canonical reduced form."""

    __slots__ = ("home", "coords")

    def __init__(self, home: PresentedModule, coords: Vec):
        self.home = home
        self.coords = coords

    def _check(self, other: ModuleElement):
        if other.home is not self.home and other.home != self.home:
            raise ValueError("elements live in different modules")

    def __add__(self, other: ModuleElement) -> ModuleElement:
        self._check(other)
        return ModuleElement(self.home, self.home.rel.reduce(vadd(self.coords, other.coords)))

    def __sub__(self, other: ModuleElement) -> ModuleElement:
        self._check(other)
        return ModuleElement(self.home, self.home.rel.reduce(vsub(self.coords, other.coords)))

    def __neg__(self) -> ModuleElement:
        return ModuleElement(self.home, tuple(-c for c in self.coords))

    def __mul__(self, p) -> ModuleElement:
        """Scalar or H-action (``RatPoly`` in D)."""
        if isinstance(p, (int, Fraction)):
            if not p:
                return self.home.zero()
            return ModuleElement(self.home, tuple(c * p for c in self.coords))
        return ModuleElement(self.home, self.home.rel.reduce(vscale(self.coords, p)))

    __rmul__ = __mul__

    def d(self, k: int = 1) -> ModuleElement:
        return self * RatPoly.monomial(k)

    def is_zero(self) -> bool:
        return is_zero_vec(self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, ModuleElement):
            return self.home == other.home and self.coords == other.coords
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coords)

    def degree(self) -> int:
        return max((c.degree for c in self.coords), default=-1)

    def to_str(self) -> str:
        parts = []
        for c, lab in zip(self.coords, self.home.labels):
            if not c:
                continue
            s = c.to_str("D")
            if s == "1":
                parts.append(lab)
            elif s == "-1":
                parts.append(f"-{lab}")
            elif len(c.coeffs) == 1 or (sum(1 for x in c.coeffs if x) == 1):
                parts.append(f"{s}*{lab}")
            else:
                parts.append(f"({s})*{lab}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __str__ = to_str

    def __repr__(self) -> str:
        return f"<{self.to_str()}>"

    def monomial_coords(self) -> dict[tuple[int, int], Fraction]:
        """Coordinates in the standard monomial basis ``(column, power)``."""
        out = {}
        for c, p in enumerate(self.coords):
            for r, v in enumerate(p.coeffs):
                if v:
                    out[(c, r)] = v
        return out


def element_from_monomials(home: PresentedModule, coeffs: dict) -> ModuleElement:
    cols = [dict() for _ in range(home.ngens)]
    for (c, r), v in coeffs.items():
        cols[c][r] = cols[c].get(r, 0) + v
    coords = []
    for d in cols:
        if d:
            coords.append(RatPoly([d.get(i, 0) for i in range(max(d) + 1)]))
        else:
            coords.append(ZERO)
    return home.element(coords)


# ---------------------------------------------------------------------------
# Submodules
# ---------------------------------------------------------------------------


class Submodule:
    """An H-submodule ``W`` of a presented module, stored via its preimage in ``F``."""

    def __init__(self, home: PresentedModule, elements: Sequence[ModuleElement] = (), _ech=None):
        self.home = home
        if _ech is None:
            rows = [e.coords for e in elements] + list(home.rel.rows)
            _ech = echelon(rows, home.ngens)
        self.ech = _ech
        self._gens = None

    @classmethod
    def from_rows(cls, home: PresentedModule, rows: Iterable[Vec]) -> Submodule:
        return cls(home, _ech=echelon(list(rows) + list(home.rel.rows), home.ngens))

    @property
    def generator_elements(self) -> list[ModuleElement]:
        """Canonical H-generators (Hermite rows that are nonzero in the module)."""
        if self._gens is None:
            out = []
            for row in self.ech.rows:
                e = self.home.element(row)
                if e:
                    out.append(e)
            self._gens = out
        return self._gens

    def __repr__(self) -> str:
        return "span_H{" + ", ".join(str(g) for g in self.generator_elements) + "}"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Submodule)
            and self.home == other.home
            and self.ech.key() == other.ech.key()
        )

    def __hash__(self) -> int:
        return hash(self.ech.key())

    def is_zero(self) -> bool:
        return not self.generator_elements

    def contains(self, v) -> bool:
        if isinstance(v, Submodule):
            return all(self.contains(g) for g in v.generator_elements)
        return self.ech.contains(v.coords)

    __contains__ = contains

    def __le__(self, other: Submodule) -> bool:
        return other.contains(self)

    def reduce(self, v: ModuleElement) -> ModuleElement:
        """Canonical representative of ``v + W`` (as an element of the home module)."""
        return ModuleElement(self.home, self.ech.reduce(v.coords))

    def __add__(self, other: Submodule) -> Submodule:
        return Submodule.from_rows(self.home, list(self.ech.rows) + list(other.ech.rows))

    def add(self, elements: Iterable[ModuleElement]) -> Submodule:
        return Submodule.from_rows(self.home, list(self.ech.rows) + [e.coords for e in elements])

    def intersect(self, other: Submodule) -> Submodule:
        a = list(self.ech.rows)
        b = list(other.ech.rows)
        n = self.home.ngens
        syz = kernel_basis(a + b, n)
        rows = []
        for s in syz:
            v = zero_vec(n)
            for coef, r in zip(s[: len(a)], a):
                v = vaxpy(v, coef, r)
            rows.append(v)
        return Submodule.from_rows(self.home, rows)

    def rank(self) -> int:
        return len(self.ech.rows) - len(self.home.rel.rows)

    def quotient(self) -> Quotient:
        return Quotient(self)

    def presentation(self, modulo: Submodule | None = None) -> SubquotientPresentation:
        return SubquotientPresentation(self, modulo or self.home.zero_submodule())

    def is_free(self) -> bool:
        return self.presentation().module.is_free()


def span_saturate(elements: Sequence[ModuleElement], home: PresentedModule | None = None) -> Submodule:
    """Smallest H-submodule containing ``elements``."""
    if home is None:
        if not elements:
            raise ValueError("need a home module for an empty element list")
        home = elements[0].home
    return Submodule(home, list(elements))


def membership(v: ModuleElement, W: Submodule) -> bool:
    return W.contains(v)


def reduce(v: ModuleElement, W: Submodule) -> ModuleElement:
    return W.reduce(v)


def rank(M: PresentedModule) -> int:
    return M.rank()


def torsion_invariants(M: PresentedModule) -> list[RatPoly]:
    return M.torsion_invariants()


class Quotient:
    """``M / W`` as a presented module, with projection and section maps."""

    def __init__(self, W: Submodule):
        self.parent = W.home
        self.sub = W
        self.module = PresentedModule(W.home.labels, W.ech.rows)

    def project(self, v: ModuleElement) -> ModuleElement:
        return self.module.element(v.coords)

    def section(self, q: ModuleElement) -> ModuleElement:
        return self.parent.element(q.coords)

    def preimage(self, S: Submodule) -> Submodule:
        """Preimage in the parent of a submodule of the quotient."""
        return Submodule.from_rows(self.parent, list(S.ech.rows) + list(self.sub.ech.rows))

    def image(self, S: Submodule) -> Submodule:
        return Submodule.from_rows(self.module, S.ech.rows)


def quotient(M: PresentedModule, W: Submodule) -> Quotient:
    if W.home != M:
        raise ValueError("submodule of a different module")
    return W.quotient()


class SubquotientPresentation:
    """Presentation of ``W / Q`` (``Q`` inside ``W``) on the Hermite generators of ``W``.

    ``lift`` maps an element of the presented module to a representative in
    the ambient module; ``express`` does the converse for elements of ``W``.
    """

    def __init__(self, W: Submodule, Q: Submodule):
        if not W.contains(Q):
            raise ValueError("Q must be contained in W")
        self.ambient = W.home
        self.W = W
        self.Q = Q
        n = self.ambient.ngens
        qrows = list(Q.ech.rows)
        gens = [g for g in W.ech.rows if not Q.ech.contains(g)]
        # drop generators made redundant modulo Q
        self.gen_rows = gens
        r = len(gens)
        self._ech = echelon(gens + qrows, n, track=True)
        rels = [tuple(s[:r]) for s in (self._ech.syzygies or [])]
        rels = [s for s in rels if not is_zero_vec(s)]
        labels = [f"w{i}" for i in range(r)]
        self.module = PresentedModule(labels, rels)

    def lift(self, x: ModuleElement) -> ModuleElement:
        v = zero_vec(self.ambient.ngens)
        for c, g in zip(x.coords, self.gen_rows):
            v = vaxpy(v, c, g)
        return self.ambient.element(v)

    def express(self, m: ModuleElement) -> ModuleElement:
        rem, quots = self._ech.reduce(m.coords, track=True)
        if not is_zero_vec(rem):
            raise ValueError(f"{m} is not in the submodule")
        r = len(self.gen_rows)
        coeff = zero_vec(r)
        for q, t in zip(quots, self._ech.transform):
            coeff = vaxpy(coeff, q, t[:r])
        return self.module.element(coeff)

    def submodule_of(self, S: Submodule) -> Submodule:
        """Image in the presented module of ``S`` (with Q inside S inside W)."""
        return self.module.submodule(self.express(g) for g in S.generator_elements)

    def pull_back(self, S: Submodule) -> Submodule:
        """Preimage in the ambient module (always containing Q)."""
        return self.Q.add(self.lift(g) for g in S.generator_elements)


class FreeBasis:
    """A basis of a free submodule together with the coordinate map."""

    def __init__(self, S: Submodule):
        pres = S.presentation()
        M = pres.module
        if not M.is_free():
            raise ValueError("submodule is not free")
        self.pres = pres
        _, _, V = M.smith()
        self.V = V
        self.skip = len(M.invariant_factors())
        Vinv = _unimodular_inverse(V)
        self.basis = [pres.lift(M.element(Vinv[i])) for i in range(self.skip, M.ngens)]

    def __len__(self) -> int:
        return len(self.basis)

    def coordinates(self, m: ModuleElement) -> list[RatPoly]:
        c = self.pres.express(m).coords
        n = len(c)
        out = []
        for i in range(self.skip, n):
            acc = ZERO
            for t in range(n):
                if c[t] and self.V[t][i]:
                    acc = acc + c[t] * self.V[t][i]
            out.append(acc)
        return out


def free_basis(S: Submodule) -> list[ModuleElement]:
    return FreeBasis(S).basis


def _multiple_data(u: ModuleElement, Q: Submodule) -> Echelon:
    return echelon([u.coords] + list(Q.ech.rows), u.home.ngens, track=True)


def annihilator_poly(u: ModuleElement, Q: Submodule) -> RatPoly:
    """Monic generator of ``{d : d u in Q}`` (zero when ``u`` is free modulo Q)."""
    ech = _multiple_data(u, Q)
    g = ZERO
    for s in ech.syzygies or []:
        if s[0]:
            g = s[0] if not g else _gcd(g, s[0])
    return g.monic() if g else g


def _gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    while b:
        a, b = b, a % b
    return a


def solve_multiple(u: ModuleElement, m: ModuleElement, Q: Submodule) -> RatPoly | None:
    """``h`` with ``h u - m`` in ``Q``, reduced modulo the annihilator of ``u``; None if none exists."""
    ech = _multiple_data(u, Q)
    rem, quots = ech.reduce(m.coords, track=True)
    if not is_zero_vec(rem):
        return None
    h = ZERO
    for q, t in zip(quots, ech.transform):
        if q and t[0]:
            h = h + q * t[0]
    d = annihilator_poly(u, Q)
    return h % d if d else h
