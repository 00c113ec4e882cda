"""Exact integer and rational matrix routines on plain nested lists.

Matrices are lists of rows of Python ints (or Fractions where stated); no
fixed-width integers are used anywhere, so entries never overflow.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list  # list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def copy(A: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in A]


def transpose(A: Sequence[Sequence]) -> Matrix:
    if not A:
        return []
    return [list(c) for c in zip(*A)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def dot(x: Sequence, y: Sequence):
    return sum(a * b for a, b in zip(x, y))


def bilinear(G: Sequence[Sequence], x: Sequence, y: Sequence):
    return dot(x, matvec(G, y))


def is_square(A) -> bool:
    return all(len(r) == len(A) for r in A)


def is_symmetric(A) -> bool:
    n = len(A)
    return is_square(A) and all(A[i][j] == A[j][i] for i in range(n) for j in range(i))


def block_diag(*blocks: Sequence[Sequence]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    o = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[o + i][o + j] = b[i][j]
        o += k
    return out


def det(A: Sequence[Sequence]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = copy(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rational_inverse(A: Sequence[Sequence]) -> Matrix:
    """Inverse over Q; raises ZeroDivisionError if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def rank(A: Sequence[Sequence]) -> int:
    return len(rref(A)[1])


def rref(A: Sequence[Sequence]):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    M = [[Fraction(x) for x in row] for row in A]
    m = len(M)
    n = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M, pivots


def solve_rational(A: Sequence[Sequence], b: Sequence):
    """One solution x of A x = b over Q, or None if inconsistent."""
    m = len(A)
    n = len(A[0])
    aug = [list(A[i]) + [b[i]] for i in range(m)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return x


def smith_normal_form(M: Sequence[Sequence]):
    """Return (U, D, V) with U*M*V = D diagonal, d1 | d2 | ..., U and V unimodular.

    Diagonal entries are nonnegative; works for rectangular and singular M.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = copy(M)
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):   # row dst += f * row src
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):   # col dst += f * col src
        for row in D:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = D[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    add_row(t, i, -q)
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // p
                    add_col(t, j, -q)
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def snf_diagonal(M) -> list[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def integer_kernel(A: Sequence[Sequence]) -> Matrix:
    """Rows form a basis of {x in Z^n : A x = 0}; the basis is primitive."""
    if not A:
        raise ValueError("kernel of an empty matrix needs an explicit column count")
    n = len(A[0])
    _, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i] != 0)
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def saturation(B: Sequence[Sequence]):
    """Primitive closure of the row span of B (rows independent over Q).

    Returns (basis rows, index) where index = [closure : span B].
    """
    k = len(B)
    U, D, V = smith_normal_form(B)
    diag = [D[i][i] for i in range(k)]
    if any(d == 0 for d in diag):
        raise ValueError("rows are linearly dependent")
    Vinv = integer_inverse(V)
    index = 1
    for d in diag:
        index *= d
    return [Vinv[i] for i in range(k)], index


def integer_inverse(A: Sequence[Sequence]) -> Matrix:
    inv = rational_inverse(A)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def hermite_normal_form(B: Sequence[Sequence]) -> Matrix:
    """Row-style HNF of a full-row-rank integer matrix (canonical basis of the row lattice)."""
    H = copy(B)
    m = len(H)
    n = len(H[0]) if m else 0
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-combine column c over rows r..m-1 into row r
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[i0] = H[i0], H[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if all(H[i][c] == 0 for i in range(r, m)):
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
        r += 1
    return [row for row in H if any(row)]


def is_integral(A) -> bool:
    return all(Fraction(x).denominator == 1 for row in A for x in row)


def to_int(A) -> Matrix:
    return [[int(x) for x in row] for row in A]


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def congruence_diagonalize(G: Sequence[Sequence]) -> list[Fraction]:
    """Diagonal of a rational matrix congruent to symmetric G (zeros for radical)."""
    A = [[Fraction(x) for x in row] for row in G]
    n = len(A)
    diag = []
    active = list(range(n))
    while active:
        # pivot on a nonzero diagonal entry if possible
        piv = next((i for i in active if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and A[i][j] != 0), None)
            if pair is None:
                diag.extend(Fraction(0) for _ in active)
                break
            i, j = pair
            # e_i <- e_i + e_j makes A[i][i] = 2 A[i][j] != 0
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            piv = i
        a = A[piv][piv]
        diag.append(a)
        active.remove(piv)
        for i in active:
            f = A[i][piv] / a
            if f:
                for k in range(n):
                    A[i][k] -= f * A[piv][k]
                for k in range(n):
                    A[k][i] -= f * A[k][piv]
    return diag
