"""Integral lattices given by Gram matrices, their sublattices and isometries.

Conventions
-----------
* Vectors are integer coordinate tuples in the lattice's own basis.
* Sublattice bases are stored as rows in ambient coordinates.
* An isometry matrix acts on column coordinate vectors: ``x -> M x``; it
  preserves the form when ``M^T G M = G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import intmat as im


class LatticeError(ValueError):
    pass


class DegenerateLattice(LatticeError):
    pass


class NotAnIsometry(LatticeError):
    pass


class NonIntegralReflection(LatticeError):
    pass


class IsotropicVector(LatticeError):
    pass


class ZeroVector(LatticeError):
    pass


class InvalidDecomposition(LatticeError):
    pass


def _freeze(A) -> tuple:
    return tuple(tuple(int(x) for x in row) for row in A)


@dataclass(frozen=True)
class Lattice:
    gram: tuple
    name: str | None = None
    degenerate_ok: bool = False

    def __post_init__(self):
        g = _freeze(self.gram)
        object.__setattr__(self, "gram", g)
        if not im.is_symmetric(g):
            raise LatticeError("Gram matrix must be square and symmetric")
        if not self.degenerate_ok and g and im.det(g) == 0:
            raise DegenerateLattice(f"lattice {self.name or ''} has determinant 0")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return im.det(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    def inner(self, x: Sequence, y: Sequence):
        return im.bilinear(self.gram, x, y)

    def norm(self, x: Sequence):
        return im.bilinear(self.gram, x, x)

    def basis_vector(self, i: int) -> tuple:
        return tuple(int(i == j) for j in range(self.rank))

    def sublattice(self, basis) -> "Sublattice":
        return Sublattice(self, basis)

    def identity(self) -> "Isometry":
        return Isometry(self, im.identity(self.rank))

    def renamed(self, name: str) -> "Lattice":
        return Lattice(self.gram, name, self.degenerate_ok)

    def __repr__(self):
        return f"Lattice({self.name or 'unnamed'}, rank={self.rank})"


@dataclass(frozen=True)
class Sublattice:
    ambient: Lattice
    basis: tuple

    def __post_init__(self):
        b = _freeze(self.basis)
        object.__setattr__(self, "basis", b)
        if any(len(r) != self.ambient.rank for r in b):
            raise LatticeError("basis rows must live in ambient coordinates")
        if b and im.rank(b) != len(b):
            raise LatticeError("sublattice basis rows are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def gram(self) -> tuple:
        return _freeze(im.matmul(im.matmul(self.basis, self.ambient.gram), im.transpose(self.basis)))

    def lattice(self, name: str | None = None) -> Lattice:
        return Lattice(self.gram, name, degenerate_ok=True)

    def to_ambient(self, coords: Sequence) -> list:
        """Ambient coordinates of a vector given in this sublattice's basis."""
        return [sum(c * self.basis[i][j] for i, c in enumerate(coords)) for j in range(self.ambient.rank)]

    def coordinates(self, v: Sequence):
        """Rational coordinates of an ambient vector in this basis, or None if outside the Q-span."""
        return im.solve_rational(im.transpose(self.basis), list(v))

    def contains(self, v: Sequence) -> bool:
        c = self.coordinates(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def same_span(self, other: "Sublattice") -> bool:
        return self.rank == other.rank and all(self.contains(r) for r in other.basis) and \
            all(other.contains(r) for r in self.basis)

    def same_qspan(self, other: "Sublattice") -> bool:
        return self.rank == other.rank and all(self.coordinates(r) is not None for r in other.basis)


@dataclass(frozen=True)
class Isometry:
    lattice: Lattice
    matrix: tuple
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        M = _freeze(self.matrix)
        object.__setattr__(self, "matrix", M)
        if self.check:
            G = self.lattice.gram
            if len(M) != len(G) or not im.is_square(M):
                raise NotAnIsometry("matrix size does not match lattice rank")
            if _freeze(im.matmul(im.matmul(im.transpose(M), G), M)) != G:
                raise NotAnIsometry("matrix does not preserve the Gram matrix")
            if abs(im.det(M)) != 1:
                raise NotAnIsometry("matrix is not invertible over Z")

    def __call__(self, x: Sequence) -> tuple:
        return tuple(im.matvec(self.matrix, x))

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if other.lattice.gram != self.lattice.gram:
            raise LatticeError("isometries of different lattices")
        return Isometry(self.lattice, im.matmul(self.matrix, other.matrix), check=False)

    def power(self, k: int) -> "Isometry":
        out = self.lattice.identity()
        for _ in range(k):
            out = self @ out
        return out

    @property
    def is_identity(self) -> bool:
        return self.matrix == _freeze(im.identity(self.lattice.rank))

    def order(self, limit: int = 64) -> int | None:
        cur = self
        for k in range(1, limit + 1):
            if cur.is_identity:
                return k
            cur = self @ cur
        return None

    def inverse(self) -> "Isometry":
        return Isometry(self.lattice, im.integer_inverse(self.matrix), check=False)

    def fixed_sublattice(self) -> Sublattice:
        n = self.lattice.rank
        A = [[self.matrix[i][j] - int(i == j) for j in range(n)] for i in range(n)]
        return Sublattice(self.lattice, im.integer_kernel(A))

    def preserves(self, sub: Sublattice) -> bool:
        return all(sub.contains(self(b)) for b in sub.basis)

    def restrict(self, sub: Sublattice) -> "Isometry":
        """Matrix of the restriction in the sublattice basis (must be invariant)."""
        cols = []
        for b in sub.basis:
            c = sub.coordinates(self(b))
            if c is None or any(x.denominator != 1 for x in c):
                raise LatticeError("sublattice is not invariant")
            cols.append([int(x) for x in c])
        return Isometry(sub.lattice(), im.transpose(cols))


@dataclass(frozen=True)
class DiscriminantGroup:
    invariant_factors: tuple
    generator_lifts: tuple          # rational vectors in lattice coordinates
    q_values: tuple                 # q(g_i) reduced mod q_modulus
    b_values: tuple                 # b(g_i, g_j) reduced mod 1
    q_modulus: int                  # 2 for even lattices, 1 otherwise

    @property
    def order(self) -> int:
        o = 1
        for d in self.invariant_factors:
            o *= d
        return o

    @property
    def length(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def q_strings(self) -> list[str]:
        return [str(q) for q in self.q_values]


# --------------------------------------------------------------------------
# constructions


def direct_sum(*lattices: Lattice, name: str | None = None) -> Lattice:
    return Lattice(im.block_diag(*(L.gram for L in lattices)),
                   name or "+".join(L.name or "?" for L in lattices))


def rescale(L: Lattice, n: int, name: str | None = None) -> Lattice:
    if n == 0:
        raise LatticeError("rescaling by 0 is not allowed")
    return Lattice([[n * x for x in row] for row in L.gram], name or f"{L.name}({n})")


# --------------------------------------------------------------------------
# invariants


def snf(M):
    """Smith normal form (U, D, V) with U M V = D."""
    return im.smith_normal_form(M)


def signature(L: Lattice) -> tuple[int, int]:
    diag = im.congruence_diagonalize(L.gram)
    if any(d == 0 for d in diag):
        raise DegenerateLattice("signature of a degenerate form")
    return sum(1 for d in diag if d > 0), sum(1 for d in diag if d < 0)


def _reduce_mod(x: Fraction, m: int) -> Fraction:
    return x - m * (x // m)


def discriminant_group(L: Lattice) -> DiscriminantGroup:
    if L.rank and L.det == 0:
        raise DegenerateLattice("discriminant group of a degenerate lattice")
    G = L.gram
    _, D, V = im.smith_normal_form(G)
    n = L.rank
    factors, lifts = [], []
    for i in range(n):
        d = D[i][i]
        if d > 1:
            factors.append(d)
            lifts.append(tuple(Fraction(V[r][i], d) for r in range(n)))
    qmod = 2 if L.is_even else 1
    qv = tuple(_reduce_mod(im.bilinear(G, g, g), qmod) for g in lifts)
    bv = tuple(tuple(_reduce_mod(im.bilinear(G, g, h), 1) for h in lifts) for g in lifts)
    return DiscriminantGroup(tuple(factors), tuple(lifts), qv, bv, qmod)


def divisibility(L: Lattice, v: Sequence[int]) -> int:
    if not any(v):
        raise ZeroVector("divisibility of the zero vector")
    return abs(im.vec_gcd(im.matvec(L.gram, v)))


# --------------------------------------------------------------------------
# sublattice operations


def orthogonal_complement(sub: Sublattice) -> Sublattice:
    A = im.matmul(sub.basis, sub.ambient.gram) if sub.basis else []
    if not A:
        return Sublattice(sub.ambient, im.identity(sub.ambient.rank))
    return Sublattice(sub.ambient, im.integer_kernel(A))


def saturate(sub: Sublattice) -> tuple[Sublattice, int]:
    if not sub.basis:
        return sub, 1
    B, index = im.saturation(sub.basis)
    return Sublattice(sub.ambient, im.hermite_normal_form(B)), index


def is_primitive(sub: Sublattice) -> bool:
    return saturate(sub)[1] == 1


def span(L: Lattice, *vectors) -> Sublattice:
    return Sublattice(L, [list(v) for v in vectors])


# --------------------------------------------------------------------------
# isometries


def reflection(L: Lattice, v: Sequence[int]) -> Isometry:
    vv = L.norm(v)
    if vv == 0:
        if not any(v):
            raise ZeroVector("reflection in the zero vector")
        raise IsotropicVector("reflection in an isotropic vector")
    n = L.rank
    Gv = im.matvec(L.gram, v)
    # column j = r_v(e_j) = e_j - 2 <e_j, v>/<v, v> v
    cols = []
    for j in range(n):
        num = 2 * Gv[j]
        if num % vv:
            raise NonIntegralReflection(f"2<e_{j},v>/<v,v> = {num}/{vv} is not an integer")
        c = num // vv
        cols.append([int(i == j) - c * v[i] for i in range(n)])
    return Isometry(L, im.transpose(cols))


def nikulin_hypothesis(L: Lattice) -> dict:
    """Checks rank >= length + 2 for an even indefinite lattice; reports all parts."""
    n_plus, n_minus = signature(L)
    dg = discriminant_group(L)
    return {
        "rank": L.rank,
        "length": dg.length,
        "even": L.is_even,
        "indefinite": n_plus > 0 and n_minus > 0,
        "holds": L.is_even and n_plus > 0 and n_minus > 0 and L.rank >= dg.length + 2,
    }


@dataclass
class GlueResult:
    extends: bool
    isometry: Isometry | None
    glue_group: list          # list of (S-part, T-part) rational coordinate vectors


def glue_extends(M: Lattice, S: Sublattice, T: Sublattice, phi_S: Isometry,
                 phi_T: Isometry) -> GlueResult:
    """Does (phi_S, phi_T) on S + T extend to an isometry of M?"""
    if S.ambient.gram != M.gram or T.ambient.gram != M.gram:
        raise InvalidDecomposition("sublattices must live in M")
    if S.rank + T.rank != M.rank:
        raise InvalidDecomposition("ranks of S and T do not add up to rank M")
    cross = im.matmul(im.matmul(S.basis, M.gram), im.transpose(T.basis))
    if any(x for row in cross for x in row):
        raise InvalidDecomposition("T is not orthogonal to S")
    if not is_primitive(T):
        raise InvalidDecomposition("T is not primitive, so it is not the complement of S")
    if phi_S.lattice.gram != S.gram or phi_T.lattice.gram != T.gram:
        raise InvalidDecomposition("isometries do not act on the given sublattices")
    B = list(S.basis) + list(T.basis)                      # rows: basis of S + T
    Binv_T = im.rational_inverse(im.transpose(B))          # M coords -> S+T coords
    k = S.rank
    Phi = im.block_diag(phi_S.matrix, phi_T.matrix)
    A = im.matmul(im.matmul(im.transpose(B), Phi), Binv_T)
    # the glue group M/(S+T): classes of the M basis vectors in (S+T)* coordinates
    glue = []
    for j in range(M.rank):
        col = [Binv_T[i][j] for i in range(M.rank)]
        red = [x - (x.numerator // x.denominator) for x in col]
        if any(red):
            glue.append((tuple(red[:k]), tuple(red[k:])))
    if im.is_integral(A):
        return GlueResult(True, Isometry(M, im.to_int(A)), glue)
    return GlueResult(False, None, glue)
