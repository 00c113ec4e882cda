"""Matrix-based Groebner engine (F4 style) over F_p in grevlex order.

All critical pairs of the lowest lcm degree are processed together: their
two halves, plus every reducer needed to cancel the monomials they touch
(symbolic preprocessing), become the rows of one matrix whose columns are
monomials in decreasing order.  Echelon rows whose leading monomial is new
join the basis.  Pair bookkeeping (Gebauer-Moeller) and the packed monomial
representation are shared with the Buchberger engine in :mod:`.groebner`.
"""

from __future__ import annotations

import numpy as np

from .groebner import GroebnerStats, _find_reducer, _make_monic, _PairSet, _Poly, _Ring, _to_internal
from .multipoly import MultiPoly

# chunked products are done in float64; they stay exact while CHUNK * p**2 < 2**53
_CHUNK = 128
_MAX_PRIME = 2 ** 22


def _echelon(M: np.ndarray, p: int) -> list:
    """Forward elimination mod p; returns [(pivot column, row array)]."""
    rows, cols = M.shape
    out = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), -1, p)
        if inv != 1:
            M[r, c:] = (M[r, c:] * inv) % p
        below = r + 1 + np.flatnonzero(M[r + 1:, c])
        if below.size:
            f = M[below, c][:, None]
            M[below, c:] = (M[below, c:] - f * M[r, c:]) % p
        out.append((c, M[r]))
        r += 1
    return out


def _unitriangular_inverse(A: np.ndarray, p: int) -> np.ndarray:
    """Inverse mod p of a unit upper-triangular float matrix: prod (I + Y^(2^k)), Y = I - A."""
    k = A.shape[0]
    I = np.eye(k)
    Y = np.mod(I - A, p)
    inv = np.mod(I + Y, p)
    Yp = Y
    for _ in range(k.bit_length()):
        Yp = np.mod(Yp @ Yp, p)
        if not Yp.any():
            break
        inv = np.mod(inv @ (I + Yp), p)
    return inv


def _reduce_by_pivots(P: np.ndarray, piv_cols: np.ndarray, O: np.ndarray, p: int) -> np.ndarray:
    """Eliminate the pivot columns from the rows O using the monic echelon rows P.

    ``P`` rows are sorted by increasing pivot column and vanish left of their
    pivot.  Works in chunks of pivot rows with float64 matrix products.
    """
    O = O.astype(np.float64)
    P = P.astype(np.float64)
    for s in range(0, len(piv_cols), _CHUNK):
        cs = piv_cols[s:s + _CHUNK]
        Pc = P[s:s + _CHUNK]
        c0 = int(cs[0])
        X = O[:, cs]
        if not X.any():
            continue
        X = np.mod(X @ _unitriangular_inverse(Pc[:, cs], p), p)
        O[:, c0:] = np.mod(O[:, c0:] - X @ Pc[:, c0:], p)
    return O.astype(np.int64)


def _f4(gens: list[MultiPoly], stop_on_unit: bool):
    n = gens[0].nvars
    p = gens[0].modulus
    if p is None:
        raise ValueError("Groebner bases are computed over F_p only; reduce the generators first")
    if p >= _MAX_PRIME:
        raise ValueError(f"prime {p} too large for the matrix engine")
    for g in gens:
        if g.nvars != n or g.modulus != p:
            raise ValueError("generators must share variables and field")
    R = _Ring(n, p)
    stats = GroebnerStats()
    polys: list[_Poly] = []
    active: list[int] = []
    pairs = _PairSet(R)

    def add(d: dict, sugar: int) -> bool:
        h = _make_monic(d, R, sugar)
        polys.append(h)
        idx = len(polys) - 1
        deg = R.degree(h.keys[0])
        stats.max_degree = max(stats.max_degree, deg)
        if deg == 0:
            active[:] = [idx]
            return True
        pairs.update(polys, active, idx, stats)
        active[:] = [j for j in active if not R.divides(h.E, polys[j].E)] + [idx]
        return False

    def reduce_rows(rows: list) -> list:
        """Symbolic preprocessing + elimination; returns new (dict, sugar) polynomials."""
        basis = [polys[j] for j in active]
        seen_rows = set()
        row_list = []
        done = set()
        todo = set()
        for shift, poly in rows:
            key = (shift, id(poly))
            if key in seen_rows:
                continue
            seen_rows.add(key)
            row_list.append((shift, poly))
            done.add(poly.keys[0] + shift)
            todo.update(k + shift for k in poly.keys[1:])
        while todo:
            u = todo.pop()
            if u in done:
                continue
            done.add(u)
            b = _find_reducer(R.mask - (u & R.mask), basis, R)
            if b is None:
                continue
            shift = u - b.keys[0]
            row_list.append((shift, b))
            todo.update(k + shift for k in b.keys[1:] if k + shift not in done)
        monos = set()
        for shift, poly in row_list:
            monos.update(k + shift for k in poly.keys)
        cols = sorted(monos, reverse=True)
        col_of = {k: i for i, k in enumerate(cols)}
        # one pivot row per leading monomial; the rest must be reduced
        pivots: dict = {}
        others = []
        for shift, poly in row_list:
            c = col_of[poly.keys[0] + shift]
            if c in pivots:
                others.append((shift, poly))
            else:
                pivots[c] = (shift, poly)
        stats.pairs_considered += len(rows) // 2
        if not others:
            return []

        def dense(items):
            M = np.zeros((len(items), len(cols)), dtype=np.int64)
            for i, (shift, poly) in enumerate(items):
                M[i, [col_of[k + shift] for k in poly.keys]] = poly.coeffs
            return M

        piv_cols = np.array(sorted(pivots), dtype=np.int64)
        P = dense([pivots[c] for c in piv_cols])
        O = _reduce_by_pivots(P, piv_cols, dense(others), p)
        rest = np.setdiff1d(np.arange(len(cols)), piv_cols)
        O = O[:, rest]
        top_sugar = max(poly.sugar + R.degree(shift + R.mask) for shift, poly in row_list)
        new = []
        for c, row in _echelon(O, p):
            nzc = np.flatnonzero(row)
            new.append(({cols[rest[j]]: int(row[j]) for j in nzc}, top_sugar))
        return new

    # seed: the generators themselves form the first matrix (interreduced together)
    seeds = [_make_monic(_to_internal(f, R), R, f.degree()) for f in gens if _to_internal(f, R)]
    if not seeds:
        raise ValueError("need at least one nonzero generator")
    # a shift of 0 is multiplication by the monomial 1
    for d, sug in sorted(_seed_basis([(0, s) for s in seeds], R, p), key=lambda t: max(t[0])):
        if add(d, sug) and stop_on_unit:
            return R, polys, active, stats, True
    while pairs:
        batch = pairs.pop_lowest_degree()
        rows = []
        for (i, j), l in batch:
            rows.append((l - polys[i].keys[0], polys[i]))
            rows.append((l - polys[j].keys[0], polys[j]))
        new = reduce_rows(rows)
        if not new:
            stats.reductions_to_zero += len(batch)
        # smallest leading monomials first: a unit ends the computation at once
        for d, sug in sorted(new, key=lambda t: max(t[0])):
            if add(d, sug) and stop_on_unit:
                return R, polys, active, stats, True
    unit = any(R.degree(polys[j].keys[0]) == 0 for j in active)
    return R, polys, active, stats, unit


def _seed_basis(rows: list, R: _Ring, p: int) -> list:
    """Echelon form of the generators (no multiples), as (dict, sugar) pairs."""
    monos = set()
    for _, poly in rows:
        monos.update(poly.keys)
    cols = sorted(monos, reverse=True)
    col_of = {k: i for i, k in enumerate(cols)}
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    sugars = []
    for i, (_, poly) in enumerate(rows):
        M[i, [col_of[k] for k in poly.keys]] = poly.coeffs
        sugars.append(poly.sugar)
    out = []
    for c, row in _echelon(M, p):
        nzc = np.flatnonzero(row)
        out.append(({cols[j]: int(row[j]) for j in nzc}, R.degree(cols[c])))
    return out
