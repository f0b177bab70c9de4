"""Exact integer and rational linear algebra: LLL reduction, Hermite and
Smith normal forms, rational solving, and numeric integer-relation search.

Everything here is small-matrix work (dimensions in the tens at most), so
clarity wins over asymptotics: Fractions for Gram-Schmidt data, Python ints
everywhere else.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp


# ---------------------------------------------------------------------------
# LLL

def lll_reduce(basis, delta=Fraction(3, 4)):
    """LLL-reduce integer row vectors; returns a new list of rows.

    Zero rows are discarded.  Standard textbook algorithm with exact
    rational Gram-Schmidt coefficients.
    """
    b = [list(map(int, row)) for row in basis if any(row)]
    n = len(b)
    if n == 0:
        return []

    # Gram-Schmidt data, recomputed per touched row (small dimensions)
    bstar = [None] * n
    bnorm = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]

    def update_gs(i):
        v = [Fraction(x) for x in b[i]]
        for j in range(i):
            if bnorm[j] == 0:
                mu[i][j] = Fraction(0)
                continue
            mu[i][j] = _frac_dot(b[i], bstar[j]) / bnorm[j]
            v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
        bstar[i] = v
        bnorm[i] = _frac_dot(v, v)

    for i in range(n):
        update_gs(i)

    k = 1
    while k < n:
        # size reduction
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                r = _nearest_int(mu[k][j])
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                for i in range(j):
                    mu[k][i] -= r * mu[j][i]
                mu[k][j] -= r
        # recompute b*_k after size reduction
        update_gs(k)
        if bnorm[k] >= (delta - mu[k][k - 1] ** 2) * bnorm[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            for i in range(k - 1, n):
                update_gs(i)
            k = max(k - 1, 1)
    return b


def _frac_dot(u, v):
    return sum(Fraction(x) * Fraction(y) for x, y in zip(u, v))


def _nearest_int(q):
    return int(Fraction(q) + Fraction(1, 2)) if q >= 0 else -int(-Fraction(q) + Fraction(1, 2))


# ---------------------------------------------------------------------------
# Hermite / Smith forms

def hnf_rows(mat):
    """Row-style Hermite normal form of an integer matrix (row space basis).

    Returns (H, U) with U unimodular and U @ mat == H; zero rows of H are
    kept at the bottom.
    """
    A = [list(map(int, row)) for row in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        U[r], U[piv] = U[piv], U[r]
        # clear below by gcd steps
        for i in range(r + 1, m):
            while A[i][c] != 0:
                q = A[r][c] // A[i][c]
                A[r] = [a - q * bb for a, bb in zip(A[r], A[i])]
                U[r] = [a - q * bb for a, bb in zip(U[r], U[i])]
                A[r], A[i] = A[i], A[r]
                U[r], U[i] = U[i], U[r]
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        # reduce above
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * bb for a, bb in zip(A[i], A[r])]
                U[i] = [a - q * bb for a, bb in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return A, U


def rank_int(mat):
    H, _ = hnf_rows(mat)
    return sum(1 for row in H if any(row))


def kernel_int(mat):
    """Basis of the integer kernel {x : x @ mat = 0} (left kernel), as rows."""
    H, U = hnf_rows(mat)
    return [U[i] for i, row in enumerate(H) if not any(row)]


def snf_with_projection(rel_rows, m):
    """Diagonalize the sublattice R of Z^m spanned by ``rel_rows``.

    Returns (diag, proj):  Z^m / R  =  (+)_i Z/diag[i]  (+)  Z^f  and ``proj``
    is an f x m integer matrix computing the free-part coordinates of a
    vector.  diag holds the nontrivial elementary divisors up to ordering
    (the divisibility chain is not normalized).
    """
    if not rel_rows:
        return [], [[1 if j == i else 0 for j in range(m)] for i in range(m)]
    k = len(rel_rows)
    # relations as columns of the m x k matrix B; row ops tracked in P
    B = [[int(rel_rows[j][i]) for j in range(k)] for i in range(m)]
    P = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def row_swap(i, j):
        B[i], B[j] = B[j], B[i]
        P[i], P[j] = P[j], P[i]

    def row_sub(i, j, q):
        B[i] = [a - q * b for a, b in zip(B[i], B[j])]
        P[i] = [a - q * b for a, b in zip(P[i], P[j])]

    r = 0
    while r < m and r < k:
        piv = None
        best = None
        for i in range(r, m):
            for j in range(r, k):
                if B[i][j] != 0 and (best is None or abs(B[i][j]) < best):
                    best = abs(B[i][j])
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        row_swap(r, i0)
        if j0 != r:
            for row in B:
                row[r], row[j0] = row[j0], row[r]
        dirty = True
        while dirty:
            dirty = False
            for i in range(r + 1, m):
                while B[i][r] != 0:
                    q = B[i][r] // B[r][r]
                    row_sub(i, r, q)
                    if B[i][r] != 0:
                        row_swap(r, i)
                        dirty = True
            for j in range(r + 1, k):
                while B[r][j] != 0:
                    q = B[r][j] // B[r][r]
                    for row in B:
                        row[j] -= q * row[r]
                    if B[r][j] != 0:
                        for row in B:
                            row[r], row[j] = row[j], row[r]
                        dirty = True
        if B[r][r] < 0:
            B[r] = [-a for a in B[r]]
            P[r] = [-a for a in P[r]]
        r += 1
    diag = [B[i][i] for i in range(r)]
    proj = [P[i] for i in range(r, m)]
    return [d for d in diag if d not in (0, 1)] or [], proj


# ---------------------------------------------------------------------------
# exact rational solving

def solve_rational(mat, rhs):
    """One exact solution of mat @ x = rhs over Q, or None if inconsistent.

    mat: list of integer/Fraction rows; rhs: vector.  Free variables are 0.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        A[r] = [a / A[r][c] for a in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if A[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = A[i][n]
    return x


def solve_integer(mat, rhs):
    """One integer solution of mat @ x = rhs, or None when none exists."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    # Column HNF via the transpose: U @ mat^T = H, so mat @ U^T = H^T, whose
    # columns (= rows of H) are in echelon form with pivots moving down.
    At = [[int(mat[i][j]) for i in range(m)] for j in range(n)]
    H, U = hnf_rows(At)
    rem = [Fraction(r) for r in rhs]
    y = [0] * n
    for j in range(n):
        col = H[j]  # column j of mat @ U^T, length m
        piv = next((i for i, v in enumerate(col) if v != 0), None)
        if piv is None:
            continue
        val = rem[piv] / col[piv]
        if val.denominator != 1:
            return None
        y[j] = int(val)
        rem = [rem[i] - y[j] * col[i] for i in range(m)]
    if any(r != 0 for r in rem):
        return None
    x = [sum(U[j][i] * y[j] for j in range(n)) for i in range(n)]
    for i in range(m):
        if sum(int(mat[i][j]) * x[j] for j in range(n)) != int(rhs[i]):
            return None
    return x


# ---------------------------------------------------------------------------
# numeric integer relations

def integer_relations(vectors, precision, max_coeff=None):
    """Integer relation candidates for a list of real vectors.

    Searches for integer rows e with sum_i e_i * vectors[i] numerically zero,
    by LLL on [I | K * vectors] with K = 2^(precision/2).  Returns candidate
    rows sorted by coefficient size; the caller must verify them exactly.
    """
    n = len(vectors)
    if n == 0:
        return []
    dim = len(vectors[0])
    with mp.workprec(precision + 32):
        K = mp.mpf(2) ** (precision // 2)
        rows = []
        for i, v in enumerate(vectors):
            tail = [int(mp.nint(K * mp.mpf(x))) for x in v]
            rows.append([1 if j == i else 0 for j in range(n)] + tail)
        red = lll_reduce(rows)
        out = []
        thresh = mp.mpf(2) ** (precision // 2 - precision // 4)
        for row in red:
            coeffs = row[:n]
            tail = row[n:]
            if not any(coeffs):
                continue
            tail_norm = mp.sqrt(mp.fsum([mp.mpf(t) ** 2 for t in tail]))
            if tail_norm < thresh:
                if max_coeff is None or max(abs(c) for c in coeffs) <= max_coeff:
                    out.append(list(coeffs))
        out.sort(key=lambda r: max(abs(c) for c in r))
        return out
