"""Fixed-point-free order-3 isometries on the blocks U+U and E8(-1).

Construction: find mutually orthogonal copies of A2(s) (s = +-1) filling a
finite-index sublattice, rotate each copy by a -> b -> -a-b, and conjugate
back to lattice coordinates.  The rotation acts trivially on the
discriminant group of A2, so it preserves every overlattice and the
conjugated matrix is integral.  The search is deterministic; its output is
frozen below and re-verified whenever the model is built.
"""

from __future__ import annotations

import itertools

from ..lattice import intmat as im
from ..lattice.core import Lattice, direct_sum, reflection
from ..lattice.named import E8, U

#: rotation of A2 in the basis (a, b): a -> b, b -> -a - b (columns = images)
A2_ROTATION = ((0, -1), (1, -1))


class BlockSearchFailed(RuntimeError):
    pass


def rotation_from_frames(L: Lattice, frames) -> list:
    """Matrix (lattice coordinates) of the isometry rotating each A2 frame."""
    F = im.transpose([list(v) for pair in frames for v in pair])  # columns = frame vectors
    R = im.block_diag(*([A2_ROTATION] * len(frames)))
    M = im.matmul(im.matmul(F, R), im.rational_inverse(F))
    if not im.is_integral(M):
        raise BlockSearchFailed("rotation does not extend to the lattice")
    return im.to_int(M)


def _root_system(L: Lattice, norm: int) -> list:
    """All vectors of the given norm in a root lattice, as the Weyl orbit of the basis."""
    seen = {tuple(int(i == j) for j in range(L.rank)) for i in range(L.rank)}
    seen |= {tuple(-x for x in v) for v in seen}
    refl = [reflection(L, L.basis_vector(i)) for i in range(L.rank)]
    todo = list(seen)
    while todo:
        v = todo.pop()
        for r in refl:
            w = r(v)
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return sorted(seen, key=lambda v: (sum(map(abs, v)), v))


def find_a2_frames(L: Lattice, candidates, count: int, sign: int) -> list:
    """Backtrack for `count` mutually orthogonal pairs (a, b) spanning A2(sign)."""
    n2, n1 = 2 * sign, -sign
    cand = [v for v in candidates if L.norm(v) == n2]
    frames: list = []

    def orth(v, used):
        return all(L.inner(v, w) == 0 for w in used)

    def extend(used):
        if len(frames) == count:
            return True
        for a in cand:
            if not orth(a, used):
                continue
            for b in cand:
                if L.inner(a, b) == n1 and orth(b, used):
                    frames.append((a, b))
                    if extend(used + [a, b]):
                        return True
                    frames.pop()
            return False       # a can be taken as the first remaining candidate WLOG
        return False

    if not extend([]):
        raise BlockSearchFailed(f"no {count} orthogonal A2({sign}) frames found")
    return frames


def _search_uu() -> list:
    L = direct_sum(U(), U())
    vecs = [v for v in itertools.product(range(-2, 3), repeat=4) if any(v)]
    a, b = find_a2_frames(L, vecs, 1, 1)[0]
    rest = [v for v in vecs if L.inner(v, a) == 0 and L.inner(v, b) == 0]
    c, d = find_a2_frames(L, rest, 1, -1)[0]
    return rotation_from_frames(L, [(a, b), (c, d)])


def _search_e8_minus() -> list:
    L = E8(-1)
    roots = _root_system(L, -2)
    return rotation_from_frames(L, find_a2_frames(L, roots, 4, -1))


RHO_UU = (
    (0, 0, -1, 0),
    (0, -1, 0, -1),
    (1, 0, -1, 0),
    (0, 1, 0, 0),
)

RHO_E8_MINUS = (
    (0, -1, 0, 0, 0, -1, 2, 1),
    (1, -1, -1, 0, 0, -2, 4, 2),
    (0, 0, -2, 0, 0, -3, 6, 3),
    (0, 0, -1, 0, -1, -2, 5, 2),
    (0, 0, -1, 1, -1, -2, 4, 1),
    (0, 0, 0, 0, 0, -2, 3, 0),
    (0, 0, 0, 0, 0, -1, 1, 0),
    (0, 0, -1, 0, 0, -1, 3, 1),
)


def derive_blocks() -> dict:
    """Re-run the deterministic searches (used to check the frozen data)."""
    return {"UU": _search_uu(), "E8(-1)": _search_e8_minus()}
