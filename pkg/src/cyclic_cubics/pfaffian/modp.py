"""Vectorized prime-field kernels: matrix rank and batch polynomial evaluation.

All arrays are int64 with entries in [0, p); p must stay below 2**31 so that
products of two residues fit in 64 bits before reduction.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from ..poly.multipoly import MultiPoly

MAX_VECTOR_PRIME = 2 ** 31


def check_vector_prime(p: int) -> None:
    if p >= MAX_VECTOR_PRIME:
        raise ValueError(f"prime {p} too large for vectorized arithmetic")


def rank_mod_p(A, p: int) -> int:
    """Rank of an integer matrix over F_p by Gaussian elimination."""
    check_vector_prime(p)
    M = np.array(A, dtype=np.int64) % p
    if M.size == 0:
        return 0
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = (M[r] * inv) % p
        below = np.nonzero(M[r + 1:, c])[0] + r + 1
        if below.size:
            factors = M[below, c][:, None]
            M[below] = (M[below] - factors * M[r]) % p
        r += 1
    return r


def monomials_of_degree(n: int, d: int) -> list:
    """All exponent tuples of total degree d in n variables (lexicographic)."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    assert len(out) == comb(n + d - 1, d)
    return out


def evaluate_mod_p(f: MultiPoly, X: np.ndarray, p: int) -> np.ndarray:
    """Values of f at the rows of X (shape (N, nvars)) modulo p."""
    check_vector_prime(p)
    X = np.asarray(X, dtype=np.int64) % p
    N = X.shape[0]
    out = np.zeros(N, dtype=np.int64)
    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            if k == 1:
                powers[key] = X[:, i]
            else:
                powers[key] = (power(i, k - 1) * X[:, i]) % p
        return powers[key]

    for e, c in f.terms.items():
        c = int(c) % p if f.modulus is not None else _coeff_mod(c, p)
        if not c:
            continue
        term = np.full(N, c, dtype=np.int64)
        for i, k in enumerate(e):
            if k:
                term = (term * power(i, k)) % p
        out = (out + term) % p
    return out


def _coeff_mod(c, p: int) -> int:
    from fractions import Fraction
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, p) % p


def projective_points(n: int, p: int) -> np.ndarray:
    """Normalized representatives of P^{n-1}(F_p): first nonzero coordinate equals 1."""
    blocks = []
    for lead in range(n):
        free = n - lead - 1
        grid = affine_points(free, p)
        block = np.zeros((grid.shape[0], n), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = grid
        blocks.append(block)
    return np.concatenate(blocks)


def affine_points(n: int, p: int) -> np.ndarray:
    """All of F_p^n as rows, last coordinate varying fastest."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = np.meshgrid(*([np.arange(p, dtype=np.int64)] * n), indexing="ij")
    return np.stack([a.ravel() for a in axes], axis=1)
