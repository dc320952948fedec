"""Dense exact linear algebra over Q (lists of Fraction)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import RatPoly


def rref(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    M = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}``."""
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, c in zip(R, pivots):
            x[c] = -row[f]
        basis.append(x)
    return basis


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def matvec(A, x):
    nz = [(j, v) for j, v in enumerate(x) if v]
    return [sum((row[j] * v for j, v in nz if row[j]), Fraction(0)) for row in A]


def matmul(A, B):
    cols = list(zip(*B)) if B else []
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in A]


def transpose(A, ncols: int | None = None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*A)]


def charpoly(A) -> RatPoly:
    """det(t I - A) by reduction to upper Hessenberg form (exact over Q)."""
    n = len(A)
    H = [[Fraction(x) for x in row] for row in A]
    for k in range(n - 2):
        p = next((i for i in range(k + 1, n) if H[i][k]), None)
        if p is None:
            continue
        if p != k + 1:
            H[p], H[k + 1] = H[k + 1], H[p]
            for row in H:
                row[p], row[k + 1] = row[k + 1], row[p]
        piv = H[k + 1][k]
        for i in range(k + 2, n):
            if H[i][k]:
                f = H[i][k] / piv
                Hi, Hk = H[i], H[k + 1]
                for j in range(k, n):
                    if Hk[j]:
                        Hi[j] -= f * Hk[j]
                for row in H:
                    if row[i]:
                        row[k + 1] += f * row[i]
    # p_k = (t - h_kk) p_{k-1} - sum_i h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
    t = RatPoly.var()
    polys = [RatPoly.const(1)]
    for k in range(n):
        pk = polys[k] * (t - H[k][k])
        prod = Fraction(1)
        for i in range(k - 1, -1, -1):
            prod *= H[i + 1][i]
            if not prod:
                break
            if H[i][k]:
                pk = pk - polys[i] * (H[i][k] * prod)
        polys.append(pk)
    return polys[n]


def eigenvalue_candidates(A):
    """``(rational eigenvalues, has_irrational)`` for a square matrix."""
    from .poly import rational_roots, strip_rational_roots

    n = len(A)
    if all(not A[i][j] for i in range(n) for j in range(i)):
        return sorted(set(A[i][i] for i in range(n))), False
    cp = charpoly(A)
    return rational_roots(cp), strip_rational_roots(cp).degree > 0


def span_basis(vectors, ncols: int) -> list[list[Fraction]]:
    """Row-reduced basis of the span of ``vectors``."""
    return rref(vectors, ncols)[0]


def intersect_spans(A, B, ncols: int) -> list[list[Fraction]]:
    """Basis of span(A) ∩ span(B)."""
    if not A or not B:
        return []
    # x A = y B  <=>  [x, -y] [A; B] = 0
    stacked = [list(r) for r in A] + [list(r) for r in B]
    kern = nullspace(transpose(stacked), len(stacked))
    out = []
    for k in kern:
        v = [Fraction(0)] * ncols
        for coef, row in zip(k[: len(A)], A):
            if coef:
                v = [x + coef * y for x, y in zip(v, row)]
        out.append(v)
    return span_basis(out, ncols)


def invariant_subspace(basis, maps, ncols: int) -> list[list[Fraction]]:
    """Largest subspace of span(basis) mapped into itself by every map.

    ``maps`` act on column vectors of length ``ncols``.
    """
    W = span_basis(basis, ncols)
    while True:
        V = W
        for G in maps:
            if not V:
                break
            # {w in V : G w in V}: parametrize w = c V, need G (c V) in span V
            imgs = [matvec(G, w) for w in V]
            # solve c . imgs in span(V): kernel of the projection onto a complement
            R, piv = rref(V, ncols)
            proj = []
            for img in imgs:
                r = list(img)
                for row, c in zip(R, piv):
                    if r[c]:
                        f = r[c]
                        r = [x - f * y for x, y in zip(r, row)]
                proj.append(r)
            kern = nullspace(transpose(proj, ncols), len(V))
            newV = []
            for k in kern:
                w = [Fraction(0)] * ncols
                for coef, row in zip(k, V):
                    if coef:
                        w = [x + coef * y for x, y in zip(w, row)]
                newV.append(w)
            V = span_basis(newV, ncols)
        if len(V) == len(W):
            return W
        W = V


def restrict(G, basis, ncols: int):
    """Matrix of ``G`` on an invariant subspace with the given (rref) basis."""
    R, piv = rref(basis, ncols)
    out = []
    for w in R:
        img = matvec(G, w)
        # coordinates of img in the rref basis are its pivot entries
        out.append([img[c] for c in piv])
    # out[i][j] = coordinate j of G(w_i): transpose to act on coordinate columns
    return transpose(out, len(R)), R
