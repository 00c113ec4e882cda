"""Standard lattices.  A2 uses the Gram matrix [[2, -1], [-1, 2]]."""

from __future__ import annotations

from .core import Lattice, direct_sum, rescale

E8_CARTAN = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)


def U(n: int = 1) -> Lattice:
    return Lattice([[0, n], [n, 0]], "U" if n == 1 else f"U({n})")


def A2(scale: int = 1) -> Lattice:
    L = Lattice([[2, -1], [-1, 2]], "A2")
    return L if scale == 1 else rescale(L, scale, f"A2({scale})")


def E8(scale: int = 1) -> Lattice:
    L = Lattice(E8_CARTAN, "E8")
    return L if scale == 1 else rescale(L, scale, f"E8({scale})")


def rank_one(m: int) -> Lattice:
    return Lattice([[m]], f"<{m}>")


def S_lattice() -> Lattice:
    """U^2 + E8^2 + A2: primitive cohomology of a cubic fourfold, signature (20, 2)."""
    return direct_sum(U(), U(), E8(), E8(), A2(), name="S")


def S_minus() -> Lattice:
    """S(-1) = U^2 + E8(-1)^2 + A2(-1)."""
    return direct_sum(U(), U(), E8(-1), E8(-1), A2(-1), name="S(-1)")


def L_lattice() -> Lattice:
    """U^3 + E8(-1)^2 + <-2>: second cohomology of K3^[2]-type manifolds."""
    return direct_sum(U(), U(), U(), E8(-1), E8(-1), rank_one(-2), name="L")


def K3_lattice() -> Lattice:
    return direct_sum(U(), U(), U(), E8(-1), E8(-1), name="K3")
