"""The order-3 covering automorphism acting on pairs of points of the dual K3.

Points of Sigma are 2-planes P of V with phi(P, P) = 0 for every phi in W.
For distinct P, Q spanning a 4-plane K = P + Q, the forms of W vanishing on
K make a pencil l (a line on the cubic fourfold).  The covering automorphism
scales the phi_0-coordinate by a cube root of unity xi; the image pencil
sigma(l) has a bilagrangian K' (the span of the kernels of its members), and
the pencil of 2-vectors in wedge^2 K' annihilated by W meets the quadric of
decomposable tensors in the image pair (P', Q').  Everything is computed over
F_p (p = 1 mod 3); the image pair may be a conjugate pair over F_{p^2}.
"""

from __future__ import annotations

import itertools
import random

from ..poly.wedge import DIM
from .fields import Fp2, bilinear, canonical_span, kernel, rank, rref
from .flag import PfaffianFlag
from .lines import DualData, _forms_mod_p, dual_data


class NoCubeRoot(ValueError):
    pass


class DegeneratePair(ValueError):
    pass


class SigmaAction:
    """Precomputed data for the action on pairs over F_p."""

    def __init__(self, flag: PfaffianFlag | DualData, p: int):
        dual = flag if isinstance(flag, DualData) else dual_data(flag)
        F = Fp2(p)
        xi = F.cube_root_of_unity()
        if xi is None:
            raise NoCubeRoot(f"p = {p} is not 1 mod 3, so F_{p} has no primitive cube root of unity")
        self.F = F
        self.p = p
        self.xi = xi
        # W basis: the five forms of Z, then phi_0 (the covering coordinate x5)
        self.forms = [[[F(x) for x in row] for row in M] for M in _forms_mod_p(dual, p)]

    # -- helpers ------------------------------------------------------------
    def vec(self, xs) -> list:
        return [x if hasattr(x, "frobenius") else self.F(int(x)) for x in xs]

    def form(self, c: list) -> list:
        """The 6 x 6 matrix of sum_m c_m Phi_m."""
        F = self.F
        M = [[F.zero] * DIM for _ in range(DIM)]
        for cm, Phi in zip(c, self.forms):
            if not cm:
                continue
            for i in range(DIM):
                for j in range(DIM):
                    if Phi[i][j]:
                        M[i][j] = M[i][j] + cm * Phi[i][j]
        return M

    def on_sigma(self, P: list) -> bool:
        P = [self.vec(v) for v in P]
        return rank(P) == 2 and all(not bilinear(P[0], Phi, P[1]) for Phi in self.forms)

    def canonical_pair(self, P: list, Q: list) -> tuple:
        a = canonical_span([self.vec(v) for v in P])
        b = canonical_span([self.vec(v) for v in Q])
        return tuple(sorted((a, b)))

    # -- the construction ---------------------------------------------------
    def pencil_of(self, K: list) -> list:
        """Basis of {c : phi_c restricted to K vanishes} (coordinates on W)."""
        eqs = []
        for a, b in itertools.combinations(range(len(K)), 2):
            eqs.append([bilinear(K[a], Phi, K[b]) for Phi in self.forms])
        return kernel(eqs, len(self.forms), self.F)

    def bilagrangian(self, pencil: list) -> list:
        """Span of the kernels of members of a Kronecker pencil (expected dimension 4)."""
        F = self.F
        g1, g2 = pencil
        vecs = []
        for lam in range(4):
            c = [x + y * lam for x, y in zip(g1, g2)] if lam < 3 else g2
            vecs.extend(kernel(self.form(c), DIM, F))
        K, _ = rref(vecs)
        if len(K) != 4:
            raise DegeneratePair(f"kernels of the pencil span a space of dimension {len(K)}, not 4")
        return K

    def bilagrangian_oracle(self, pencil: list) -> list:
        """Independent computation: the g1-orthogonal of ker(g2), for two members g1, g2 of
        the pencil whose kernels meet only in 0 (the result does not depend on the choice).
        If all members share a kernel vector, falls back to the span of the kernels of all
        p + 1 members."""
        F = self.F
        a, b = pencil
        members = [[x + y * lam for x, y in zip(a, b)] for lam in range(self.p)] + [b]
        for c1, c2 in itertools.combinations(members, 2):
            g1, g2 = self.form(c1), self.form(c2)
            if not kernel(g1 + g2, DIM, F):
                break
        else:
            return rref([v for c in members for v in kernel(self.form(c), DIM, F)])[0]
        k2 = kernel(g2, DIM, self.F)
        eqs = [[sum((g1[i][j] * w[j] for j in range(DIM)), self.F.zero) for i in range(DIM)] for w in k2]
        K = kernel(eqs, DIM, self.F)
        return rref(K)[0]

    def points_of(self, K: list) -> tuple:
        """The two points of Sigma in P(wedge^2 K): pencil wedge^2 K cap W^0 meets the Grassmannian."""
        F = self.F
        idx = list(itertools.combinations(range(4), 2))
        eqs = [[bilinear(K[a], Phi, K[b]) for a, b in idx] for Phi in self.forms]
        pen = kernel(eqs, len(idx), F)
        if len(pen) < 2:
            raise DegeneratePair("wedge^2 K' meets W^0 in less than a pencil")
        if len(pen) > 2:
            raise DegeneratePair(f"wedge^2 K' meets W^0 in dimension {len(pen)}, more than a pencil")
        pos = {P: i for i, P in enumerate(idx)}

        def quad(y):   # Pluecker relation on wedge^2 of a 4-space
            return (y[pos[(0, 1)]] * y[pos[(2, 3)]] - y[pos[(0, 2)]] * y[pos[(1, 3)]]
                    + y[pos[(0, 3)]] * y[pos[(1, 2)]])

        a, b = pen
        A = quad(a)
        C = quad(b)
        B = quad([x + y for x, y in zip(a, b)]) - A - C
        roots = []
        if A:
            disc = B * B - A * C * 4
            if not disc:
                raise DegeneratePair("the pencil is tangent to the Grassmannian")
            s = F.sqrt(disc)
            for sgn in (1, -1):
                roots.append(((-B + s * sgn) / (A * 2), F.one))
        else:
            if not B:
                raise DegeneratePair("the pencil meets the Grassmannian in a double or infinite locus")
            roots = [(F.one, F.zero), (-C, B)]
        planes = []
        for lam, mu in roots:
            y = [lam * x + mu * z for x, z in zip(a, b)]
            # the 2-vector sum y_ab k_a ^ k_b as a skew matrix; its image is the plane
            M = [[F.zero] * DIM for _ in range(DIM)]
            for (i, j), c in zip(idx, y):
                if not c:
                    continue
                for r in range(DIM):
                    for s_ in range(DIM):
                        M[r][s_] = M[r][s_] + c * (K[i][r] * K[j][s_] - K[j][r] * K[i][s_])
            plane, _ = rref([list(col) for col in zip(*M)])
            if len(plane) != 2:
                raise DegeneratePair("a root of the pencil is not decomposable")
            planes.append(plane)
        return tuple(planes)

    def apply(self, P: list, Q: list) -> tuple:
        """sigma({P, Q}) as a pair of planes (bases as rows, possibly over F_{p^2})."""
        P = [self.vec(v) for v in P]
        Q = [self.vec(v) for v in Q]
        K, _ = rref(P + Q)
        if len(K) != 4:
            raise DegeneratePair("P and Q meet: P + Q is not a 4-plane")
        if not all(x.in_prime_field() for row in K for x in row):
            raise DegeneratePair("P + Q is not defined over F_p (the pair is not Galois-stable)")
        pencil = self.pencil_of(K)
        if len(pencil) != 2:
            raise DegeneratePair(f"the forms of W vanishing on P + Q have dimension {len(pencil)}, not 2")
        if all(not c[5] for c in pencil):
            return P, Q            # the line lies in P(Z): fixed by the covering automorphism
        image = [c[:5] + [c[5] * self.xi] for c in pencil]
        return self.points_of(self.bilagrangian(image))


def sigma_on_pairs(flag: PfaffianFlag, P, Q, p: int) -> tuple:
    """Image of the pair {P, Q} of points of the dual K3 under the covering automorphism."""
    return SigmaAction(flag, p).apply(P, Q)


def sample_sigma_points(action: SigmaAction, count: int, seed: int = 0, max_tries: int = 200000) -> list:
    """Random F_p-points of Sigma: a random v1 with a 2-dimensional solution space for v2."""
    rng = random.Random(seed)
    F = action.F
    p = action.p
    out = []
    seen = set()
    for _ in range(max_tries):
        v1 = [F(rng.randrange(p)) for _ in range(DIM)]
        if not any(v1):
            continue
        eqs = [[sum((v1[i] * Phi[i][j] for i in range(DIM)), F.zero) for j in range(DIM)]
               for Phi in action.forms]
        ker = kernel(eqs, DIM, F)
        if len(ker) < 2:
            continue
        # pick a second vector of the kernel independent of v1
        for w in ker:
            if rank([v1, w]) == 2:
                key = canonical_span([v1, w])
                if key not in seen:
                    seen.add(key)
                    out.append(rref([v1, w])[0])
                break
        if len(out) == count:
            return out
    raise RuntimeError(f"found only {len(out)} points of Sigma in {max_tries} tries")
