"""Bounded backtracking search for isometries between small-rank lattices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import intmat as im
from .core import Lattice, discriminant_group, signature


@dataclass
class SearchOutcome:
    """Result of :func:`isometry_search`.

    ``witness`` is a matrix B (columns = images of the L2 basis, in L1
    coordinates) with ``B^T G1 B = G2``.  When no witness is found,
    ``conclusive`` says whether an invariant proved non-isometry or the
    box was merely exhausted.
    """
    witness: tuple | None
    conclusive: bool
    reason: str

    def __bool__(self):
        return self.witness is not None


def _invariant_mismatch(L1: Lattice, L2: Lattice) -> str | None:
    if L1.rank != L2.rank:
        return "rank"
    if L1.det != L2.det:
        return "determinant"
    if signature(L1) != signature(L2):
        return "signature"
    if L1.is_even != L2.is_even:
        return "parity"
    d1, d2 = discriminant_group(L1), discriminant_group(L2)
    if d1.invariant_factors != d2.invariant_factors:
        return "discriminant group"
    return None


def isometry_search(L1: Lattice, L2: Lattice, bound: int) -> SearchOutcome:
    reason = _invariant_mismatch(L1, L2)
    if reason:
        return SearchOutcome(None, True, f"{reason} differs")
    n = L1.rank
    G1, G2 = L1.gram, L2.gram
    if n == 0:
        return SearchOutcome((), True, "empty lattices")
    by_norm: dict = {}
    # box enumeration ordered by height so small witnesses come first
    box = sorted(itertools.product(range(-bound, bound + 1), repeat=n),
                 key=lambda v: (max(map(abs, v)), sum(map(abs, v)), v))
    for v in box:
        if any(v):
            by_norm.setdefault(im.bilinear(G1, v, v), []).append(v)
    Gv_cache: dict = {}

    def pairing(u, v):
        key = u
        if key not in Gv_cache:
            Gv_cache[key] = im.matvec(G1, u)
        return im.dot(Gv_cache[key], v)

    chosen: list = []

    def extend(j: int) -> bool:
        if j == n:
            return True
        for v in by_norm.get(G2[j][j], ()):
            if all(pairing(chosen[i], v) == G2[i][j] for i in range(j)):
                chosen.append(v)
                if extend(j + 1):
                    return True
                chosen.pop()
        return False

    if extend(0):
        B = im.transpose([list(v) for v in chosen])
        return SearchOutcome(tuple(tuple(r) for r in B), True, "witness found")
    return SearchOutcome(None, False, f"no witness with entries bounded by {bound}")


def verify_witness(L1: Lattice, L2: Lattice, B) -> bool:
    B = [list(r) for r in B]
    ok = im.matmul(im.matmul(im.transpose(B), L1.gram), B) == [list(r) for r in L2.gram]
    return ok and abs(im.det(B)) == 1
