"""Property checks shared by the unit and acceptance suites."""

from lieconf.hmodule import det, matmul, smith_normal_form


def check_smith(A):
    """Assert U A V = S with S diagonal, monic, a divisibility chain and U, V unimodular."""
    U, S, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == S
    n, m = len(A), len(A[0])
    diag = []
    for i in range(n):
        for j in range(m):
            if i != j:
                assert not S[i][j]
        if i < m:
            diag.append(S[i][i])
    nonzero = [d for d in diag if d]
    # zeros come last and the chain divides
    assert diag[: len(nonzero)] == nonzero
    for a, b in zip(nonzero, nonzero[1:]):
        assert a.divides(b)
    for d in nonzero:
        assert d.lc == 1
    for T in (U, V):
        dt = det(T)
        assert dt and dt.degree == 0
    return S
