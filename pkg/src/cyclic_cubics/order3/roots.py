"""Hermitian form, nodal/chordal roots and the degeneration data attached to a root.

All root vectors are given in S(-1) coordinates of a :class:`ReferenceModel`.
The Hermitian form H(x, y) = theta (<x, rho y> - xi <x, y>) is evaluated on
the lattice exactly as given, so on S(-1) a root has H(delta, delta) = -3;
the nodal/chordal dichotomy only depends on the ideal H(S, delta), which is
insensitive to the sign of the form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..lattice import intmat as im
from ..lattice.core import (
    Isometry, Lattice, Sublattice, direct_sum, discriminant_group, glue_extends, is_primitive,
    orthogonal_complement, reflection, saturate, signature, span,
)
from ..lattice.io import encode_matrix, encode_vector
from ..lattice.named import U, rank_one
from ..lattice.search import isometry_search, verify_witness
from . import eisenstein as eis
from .eisenstein import EisensteinInt
from .model import Order3Lattice, ReferenceModel

SCHEMA = "cyclic-cubics/degeneration/1"
NODAL, CHORDAL = "nodal", "chordal"


class NotARoot(ValueError):
    pass


class InconsistentClassification(RuntimeError):
    """The three nodal/chordal criteria disagree (an implementation bug)."""


def hermitian_form(OL: Order3Lattice, x, y) -> EisensteinInt:
    G = OL.lattice
    return eis.THETA * EisensteinInt(G.inner(x, OL.rho(y)), -G.inner(x, y))


def _check_root(model: ReferenceModel, delta) -> tuple:
    delta = tuple(int(c) for c in delta)
    if len(delta) != model.S.rank:
        raise NotARoot(f"expected {model.S.rank} coordinates, got {len(delta)}")
    n = model.S.norm(delta)
    if n != -2:
        raise NotARoot(f"<delta, delta> = {n}, not -2")
    return delta


@dataclass(frozen=True)
class RootClass:
    delta: tuple
    kind: str
    ideal_generator: EisensteinInt          # generator of H(S(-1), delta)
    e_c: tuple | None                       # L-coordinates of an integral e_c (chordal)
    e_c_unit: int | None                    # k such that the e_c formula uses u_k * delta
    complement_det: int                     # |det R_delta^perp|

    def to_json(self) -> dict:
        return {
            "delta": list(self.delta),
            "kind": self.kind,
            "ideal_generator": str(self.ideal_generator),
            "e_c": None if self.e_c is None else list(self.e_c),
            "complement_det": self.complement_det,
        }


def unit_multiple(model: ReferenceModel, k: int, delta) -> tuple:
    """u_k * delta, where the units (1, xi, xi^2, -1, -xi, -xi^2) act through rho0."""
    v = tuple(delta)
    for _ in range(k % 3):
        v = model.rho0.rho(v)
    return tuple(-c for c in v) if k >= 3 else v


def e_c_candidate(model: ReferenceModel, delta) -> tuple:
    """(1/3)(-theta + 4 delta + 2 rho(delta)) in L-coordinates (rational)."""
    d = model.s_to_L(delta)
    rd = model.rho(d)
    return tuple(Fraction(-t + 4 * a + 2 * b, 3) for t, a, b in zip(model.theta, d, rd))


def e_n_class(model: ReferenceModel, delta) -> tuple:
    d = model.s_to_L(delta)
    rd = model.rho(d)
    return tuple(-t + 2 * a + 2 * b for t, a, b in zip(model.theta, d, rd))


def degeneracy_lattice(model: ReferenceModel, delta) -> Sublattice:
    """R_delta = span(delta, rho0 delta) inside S(-1)."""
    delta = _check_root(model, delta)
    return span(model.S, delta, model.rho0.rho(delta))


def classify_root(model: ReferenceModel, delta) -> RootClass:
    delta = _check_root(model, delta)
    OS = model.rho0
    S = model.S
    # test 1: the ideal H(S, delta)
    vals = [hermitian_form(OS, S.basis_vector(i), delta) for i in range(S.rank)]
    gen = eis.gcd(*vals)
    if gen.norm() == 9:
        by_ideal = CHORDAL
    elif gen.norm() == 3:
        by_ideal = NODAL
    else:
        raise InconsistentClassification(f"H(S, delta) has generator {gen} of norm {gen.norm()}")
    # test 2: an integral e_c for some unit multiple of delta
    e_c, unit = None, None
    for k in range(6):
        cand = e_c_candidate(model, unit_multiple(model, k, delta))
        if all(c.denominator == 1 for c in cand):
            e_c, unit = tuple(int(c) for c in cand), k
            break
    by_integrality = CHORDAL if e_c is not None else NODAL
    # test 3: unimodularity of R_delta^perp in S(-1)
    comp = orthogonal_complement(span(S, delta, OS.rho(delta)))
    cdet = abs(im.det(comp.gram))
    by_complement = CHORDAL if cdet == 1 else NODAL
    if not by_ideal == by_integrality == by_complement:
        raise InconsistentClassification(
            f"ideal: {by_ideal}, e_c integrality: {by_integrality}, complement: {by_complement}")
    return RootClass(delta, by_ideal, gen, e_c, unit, cdet)


# --------------------------------------------------------------------------
# degeneration report


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    return str(x)


@dataclass
class DegenerationReport:
    delta: RootClass
    R_delta: Sublattice          # in S(-1)
    T_delta: Sublattice          # in L
    S_delta: Sublattice          # in L
    rho_delta: Isometry          # on L
    e_class: tuple               # L-coordinates of e_n (nodal) or e_c (chordal)
    T_index: int
    T_witness: tuple | None      # B with B^T G_T B = Gram of the target model lattice
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "root": self.delta.to_json(),
            "R_delta": encode_matrix(self.R_delta.basis),
            "T_delta": encode_matrix(self.T_delta.basis),
            "S_delta": encode_matrix(self.S_delta.basis),
            "rho_delta": encode_matrix(self.rho_delta.matrix),
            "e_class": encode_vector(self.e_class),
            "T_index": self.T_index,
            "T_witness": None if self.T_witness is None else encode_matrix(self.T_witness),
            "checks": self.checks,
            "pass": self.passed,
        }


def _check(checks: list, name: str, expected, got) -> None:
    checks.append({"name": name, "expected": _jsonable(expected), "got": _jsonable(got),
                   "pass": expected == got})


def T_model(kind: str) -> Lattice:
    """U(3) + <-2> for nodal roots, U + <-2> for chordal roots."""
    return direct_sum(U(3) if kind == NODAL else U(), rank_one(-2))


def _acts_trivially_on_discriminant(rho: Isometry, sub: Sublattice) -> bool:
    """Does rho (preserving sub) induce the identity on the discriminant group of sub?"""
    R = rho.restrict(sub)
    dg = discriminant_group(sub.lattice())
    for x in dg.generator_lifts:
        diff = [a - b for a, b in zip(im.matvec(R.matrix, x), x)]
        # diff must lie in sub, i.e. have integral coordinates
        if any(Fraction(c).denominator != 1 for c in diff):
            return False
    return True


def degenerate(model: ReferenceModel, delta, search_bound: int = 3) -> DegenerationReport:
    root = classify_root(model, delta)
    delta = root.delta
    kind = root.kind
    L, rho = model.L, model.rho
    checks: list = []

    R = degeneracy_lattice(model, delta)
    _check(checks, "det R_delta", 3, im.det(R.gram))
    _check(checks, "R_delta Gram in basis (delta, rho delta)", ((-2, 1), (1, -2)), R.gram)
    _check(checks, "R_delta primitive in S(-1)", True, is_primitive(R))
    _check(checks, "rho0 trivial on D(R_delta)", True,
           _acts_trivially_on_discriminant(model.rho0.rho, R))

    d_L = model.s_to_L(delta)
    rd_L = model.rho(d_L)
    base = span(L, model.theta, d_L, rd_L)
    T, index = saturate(base)
    _check(checks, "[T_delta : <6> + R_delta]", 1 if kind == NODAL else 3, index)
    _check(checks, "|det T_delta|", 18 if kind == NODAL else 2, abs(im.det(T.gram)))
    _check(checks, "signature T_delta", (1, 2), signature(T.lattice()))
    target = T_model(kind)
    found = isometry_search(T.lattice(), target, search_bound)
    witness = found.witness
    _check(checks, f"T_delta isometric to {'U(3)' if kind == NODAL else 'U'} + <-2> (witness)",
           True, witness is not None and verify_witness(T.lattice(), target, witness))

    Sd = orthogonal_complement(T)
    Rperp = orthogonal_complement(R)
    Rperp_in_L = Sublattice(L, [model.s_to_L(v) for v in Rperp.basis])
    _check(checks, "S_delta = R_delta^perp in S(-1)", True, Sd.same_span(Rperp_in_L))
    _check(checks, "|det S_delta|", 9 if kind == NODAL else 1, abs(im.det(Sd.gram)))
    _check(checks, "signature S_delta", (2, 18), signature(Sd.lattice()))

    r_d = reflection(L, d_L)
    r_rd = reflection(L, rd_L)
    rho_delta = r_rd @ r_d @ rho
    rho_delta = Isometry(L, rho_delta.matrix)                 # re-checks Gram preservation
    _check(checks, "rho_delta preserves the Gram matrix", True, True)
    _check(checks, "order(rho_delta)", 3, rho_delta.order())
    _check(checks, "fixed sublattice of rho_delta = T_delta", True,
           rho_delta.fixed_sublattice().same_span(T))
    glue = glue_extends(L, T, Sd, T.lattice().identity(), rho.restrict(Sd))
    _check(checks, "id_T + rho|S_delta extends to L", True, glue.extends)
    _check(checks, "rho_delta = r_{rho delta} r_delta rho (equals the glued extension)", True,
           glue.extends and glue.isometry.matrix == rho_delta.matrix)
    rs = rho_delta.restrict(Sd)
    rr = rho.restrict(Sd)
    _check(checks, "rho_delta commutes with rho on S_delta", True,
           im.matmul(rs.matrix, rr.matrix) == im.matmul(rr.matrix, rs.matrix))

    if kind == NODAL:
        e = e_n_class(model, delta)
        ename = "e_n"
    else:
        e = root.e_c
        ename = "e_c"
    _check(checks, f"{ename}^2", -2, L.norm(e))
    _check(checks, f"{ename} in T_delta", True, T.contains(e))
    _check(checks, f"{ename} primitive", True, is_primitive(span(L, e)))
    _check(checks, f"rho_delta fixes {ename}", True, rho_delta(e) == tuple(e))
    perp = orthogonal_complement(span(L, e)).lattice()
    _check(checks, f"rank of {ename}^perp", 22, perp.rank)
    _check(checks, f"{ename}^perp even", True, perp.is_even)
    _check(checks, f"signature of {ename}^perp", (3, 19), signature(perp))
    _check(checks, f"|det {ename}^perp|", 1, abs(perp.det))

    return DegenerationReport(root, R, T, Sd, rho_delta, tuple(e), index, witness, checks)


def restrict_to_eclass_complement(report: DegenerationReport, search_bound: int = 3):
    """The K3-type lattice e^perp with the restriction of rho_delta.

    Returns (lattice, isometry, fixed-part witness).  The fixed part of the
    restriction is isometric to U(3) (nodal) or U (chordal); the witness is a
    matrix B with B^T G_fixed B = Gram of that target.
    """
    L = report.rho_delta.lattice
    perp = orthogonal_complement(span(L, report.e_class))
    phi = report.rho_delta.restrict(perp)
    lat = phi.lattice
    fixed = phi.fixed_sublattice()
    target = U(3) if report.delta.kind == NODAL else U()
    found = isometry_search(fixed.lattice(), target, search_bound)
    if found.witness is None:
        raise InconsistentClassification("fixed part of the restriction has the wrong isometry class")
    return lat, phi, found.witness


# --------------------------------------------------------------------------
# root sampling

BLOCKS = {"U+U": range(0, 4), "E8(-1)_1": range(4, 12), "E8(-1)_2": range(12, 20), "A2(-1)": range(20, 22)}


def block_of(delta) -> str:
    """The block supporting delta, or 'mixed'."""
    support = {i for i, c in enumerate(delta) if c}
    for name, r in BLOCKS.items():
        if support <= set(r):
            return name
    return "mixed"


def block_roots(model: ReferenceModel) -> list:
    """Roots supported on a single block: e_i - f_i in each U and the diagonal roots of the other blocks."""
    n = model.S.rank
    out = []
    for e, f in ((0, 1), (2, 3)):
        out.append(tuple(int(i == e) - int(i == f) for i in range(n)))
    out.extend(tuple(int(i == k) for i in range(n)) for k in range(4, n) if model.S.gram[k][k] == -2)
    return out


def sample_roots(model: ReferenceModel, count: int, seed: int = 0, per_block: int = 4) -> list:
    """Deterministic sample of distinct roots of S(-1) covering every block and mixed roots.

    Starts from ``per_block`` roots of each block, then adds roots obtained by random
    words in rho0 and reflections in sampled roots (isometries, so norms stay -2),
    together with e + f-shifted roots r + x with x isotropic in U and orthogonal to r.
    """
    rng = random.Random(seed)
    S = model.S
    seeds = block_roots(model)
    out: list = []
    seen: set = set()

    def add(v):
        v = tuple(v)
        if v not in seen and S.norm(v) == -2:
            seen.add(v)
            out.append(v)

    for name in BLOCKS:
        members = [r for r in seeds if block_of(r) == name]
        for r in members[:per_block]:
            add(r)
    # mixed roots r + x with x isotropic in U+U: x = e_1 keeps the Hermitian ideal of an E8 root,
    # x = 3 e_1 or 3 e_2 keeps that of an A2 root (H(S, x) lies in theta E, H(S, 3x) in 3E)
    for r in seeds[2:2 + per_block]:
        add(tuple(c + int(i == 0) for i, c in enumerate(r)))
    a2 = [r for r in seeds if block_of(r) == "A2(-1)"]
    for r in a2 + [model.rho0.rho(r) for r in a2]:
        for e in (0, 2):
            add(tuple(c + 3 * int(i == e) for i, c in enumerate(r)))
    reflections = {}
    while len(out) < count:
        v = rng.choice(out)
        for _ in range(rng.randint(1, 4)):
            if rng.random() < 0.4:
                v = model.rho0.rho(v)
            else:
                r = rng.choice(out[: max(8, len(out) // 2)])
                if r not in reflections:
                    reflections[r] = reflection(S, r)
                v = reflections[r](v)
        if max(abs(c) for c in v) <= 6:
            add(v)
    return out[:count]
