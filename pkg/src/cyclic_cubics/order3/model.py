"""An explicit model of L = U^3 + E8(-1)^2 + <-2> as an overlattice of <6> + S(-1).

Coordinates
-----------
S(-1) = U + U + E8(-1) + E8(-1) + A2(-1) in its block basis (22 coordinates);
delta1, delta2 are the last two basis vectors (the A2(-1) block).

L is the overlattice of <6> + S(-1) obtained by adjoining
g = (theta + 2 delta1 + delta2) / 3, where theta spans <6>.  Since
theta = 3g - 2 delta1 - delta2, the vectors (g, s_1, ..., s_22) form a
Z-basis of L; L-coordinates always refer to this basis.

rho0 acts blockwise on S(-1) (rotation of A2 frames, see ``blocks``) and
rho = id + rho0 is extended to L through the glue.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..lattice import intmat as im
from ..lattice.core import (
    Isometry, Lattice, Sublattice, direct_sum, glue_extends, is_primitive, orthogonal_complement,
    signature, span,
)
from ..lattice.io import encode_matrix, encode_vector
from ..lattice.named import S_minus, rank_one
from .blocks import A2_ROTATION, RHO_E8_MINUS, RHO_UU

SCHEMA = "cyclic-cubics/model/1"
S_RANK = 22
DELTA1 = 20          # index of delta1 in S(-1) coordinates
DELTA2 = 21


class ConstructionFailed(RuntimeError):
    """A defining invariant of the model does not hold."""


@dataclass(frozen=True)
class Order3Lattice:
    """A lattice with an isometry rho satisfying rho^2 + rho + 1 = 0."""
    lattice: Lattice
    rho: Isometry

    def __post_init__(self):
        if not is_fixed_point_free_order3(self.rho):
            raise ConstructionFailed("rho^2 + rho + 1 != 0")


def is_fixed_point_free_order3(rho: Isometry) -> bool:
    M = rho.matrix
    n = len(M)
    M2 = im.matmul(M, M)
    return all(M2[i][j] + M[i][j] + int(i == j) == 0 for i in range(n) for j in range(n))


def rho0_matrix() -> list:
    return im.block_diag(RHO_UU, RHO_E8_MINUS, RHO_E8_MINUS, A2_ROTATION)


def glue_coordinates() -> tuple:
    """g in the basis (theta, s_1, ..., s_22) of <6> + S(-1)."""
    g = [Fraction(0)] * (1 + S_RANK)
    g[0] = Fraction(1, 3)
    g[1 + DELTA1] = Fraction(2, 3)
    g[1 + DELTA2] = Fraction(1, 3)
    return tuple(g)


@dataclass(frozen=True)
class ReferenceModel:
    L: Lattice
    theta: tuple                 # L-coordinates of the square-6 class
    Sminus: Sublattice           # S(-1) inside L; basis row i = s_i
    rho: Isometry                # on L
    glue_vector: tuple           # g in (theta, s_1..s_22) coordinates
    rho0: Order3Lattice          # S(-1) with rho0, in S(-1) coordinates

    @property
    def S(self) -> Lattice:
        return self.rho0.lattice

    def s_to_L(self, v) -> tuple:
        """L-coordinates of a vector given in S(-1) coordinates."""
        return (0, *v)

    def L_to_s(self, x):
        """S(-1) coordinates of an L-vector lying in S(-1), or None."""
        c = self.Sminus.coordinates(x)
        if c is None or any(t.denominator != 1 for t in c):
            return None
        return tuple(int(t) for t in c)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "L": {"name": self.L.name, "gram": encode_matrix(self.L.gram)},
            "theta": encode_vector(self.theta),
            "Sminus_basis": encode_matrix(self.Sminus.basis),
            "rho": encode_matrix(self.rho.matrix),
            "glue_vector": encode_vector(self.glue_vector),
        }


def build_reference_model() -> ReferenceModel:
    S = S_minus()
    rho0 = Isometry(S, rho0_matrix())
    OS = Order3Lattice(S, rho0)
    six = rank_one(6)
    M0 = direct_sum(six, S, name="<6>+S(-1)")
    g = glue_coordinates()
    # L basis (g, s_1, ..., s_22) written in M0 coordinates
    P = [list(g)] + [[Fraction(int(j == i + 1)) for j in range(1 + S_RANK)] for i in range(S_RANK)]
    G = im.matmul(im.matmul(P, M0.gram), im.transpose(P))
    if not im.is_integral(G):
        raise ConstructionFailed("glue vector does not give an integral overlattice")
    L = Lattice(im.to_int(G), "L")
    theta = (3,) + tuple(-2 if i == DELTA1 else -1 if i == DELTA2 else 0 for i in range(S_RANK))
    Sminus = Sublattice(L, [[0] + [int(i == j) for j in range(S_RANK)] for i in range(S_RANK)])
    six_sub = span(L, theta)
    glue = glue_extends(L, six_sub, Sminus, six.identity(), rho0)
    if not glue.extends:
        raise ConstructionFailed("id + rho0 does not extend to L")
    model = ReferenceModel(L, theta, Sminus, glue.isometry, g, OS)
    verify_model(model)
    return model


def model_checks(m: ReferenceModel) -> list:
    """(name, expected, got) triples for every defining invariant of the model."""
    L, rho = m.L, m.rho
    out = [
        ("theta^2", 6, L.norm(m.theta)),
        ("L even", True, L.is_even),
        ("signature(L)", (3, 20), signature(L)),
        ("|det L|", 2, abs(L.det)),
        ("rho(theta) = theta", True, rho(m.theta) == tuple(m.theta)),
        ("rho^3 = id", True, rho.power(3).is_identity),
        ("rho != id", True, not rho.is_identity),
        ("S(-1) = theta^perp", True,
         orthogonal_complement(span(L, m.theta)).same_span(m.Sminus)),
        ("S(-1) primitive", True, is_primitive(m.Sminus)),
        ("S(-1) Gram", m.S.gram, m.Sminus.gram),
        ("rho0 fixed-point-free", True, is_fixed_point_free_order3(m.rho0.rho)),
        ("rho restricts to rho0", m.rho0.rho.matrix, rho.restrict(m.Sminus).matrix),
        ("rho(g) = g - delta1", tuple(int(i == 0) - int(i == 1 + DELTA1) for i in range(L.rank)),
         rho((1,) + (0,) * S_RANK)),
    ]
    return out


def verify_model(m: ReferenceModel) -> None:
    for name, expected, got in model_checks(m):
        if expected != got:
            raise ConstructionFailed(f"{name}: expected {expected}, got {got}")
