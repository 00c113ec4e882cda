"""Eisenstein structure, the explicit order-3 model, root classification and degenerations."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cyclic_cubics.lattice import intmat as im
from cyclic_cubics.lattice.core import (
    Isometry, glue_extends, is_primitive, orthogonal_complement, reflection,
    signature, span,
)
from cyclic_cubics.lattice.named import A2, E8, S_minus, U
from cyclic_cubics.order3 import eisenstein as eis
from cyclic_cubics.order3.blocks import A2_ROTATION, RHO_E8_MINUS, RHO_UU
from cyclic_cubics.order3.eisenstein import EisensteinInt
from cyclic_cubics.order3.model import (
    DELTA1, DELTA2, ConstructionFailed, Order3Lattice, glue_coordinates, is_fixed_point_free_order3,
)
from cyclic_cubics.order3.roots import (
    CHORDAL, NODAL, NotARoot, block_of, block_roots, classify_root, degeneracy_lattice, degenerate,
    hermitian_form, restrict_to_eclass_complement, sample_roots,
)

eis_ints = st.builds(EisensteinInt, st.integers(-30, 30), st.integers(-30, 30))


def unit_vector(i, n=22, c=1):
    return tuple(c * int(j == i) for j in range(n))


# -- Eisenstein integers ----------------------------------------------------


@given(eis_ints, eis_ints, eis_ints)
def test_ring_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert (x * y).norm() == x.norm() * y.norm()


def test_units_and_theta():
    xi = eis.XI
    assert xi * xi == -eis.ONE - xi
    assert xi * xi * xi == eis.ONE
    assert eis.THETA * eis.THETA.conjugate() == EisensteinInt(3, 0)
    assert eis.THETA == xi - xi * xi           # xi^{-1} = xi^2
    assert all(u.is_unit() for u in eis.UNITS)
    units = {(u.a, u.b) for u in eis.UNITS}
    found = {(a, b) for a in range(-3, 4) for b in range(-3, 4) if EisensteinInt(a, b).norm() == 1}
    assert units == found


@given(eis_ints, eis_ints.filter(lambda d: not d.is_zero()))
def test_division_with_remainder(a, b):
    q, r = divmod(a, b)
    assert a == q * b + r and r.norm() < b.norm()


@given(eis_ints, eis_ints)
def test_gcd_divides_and_is_combination_sized(a, b):
    g = eis.gcd(a, b)
    if a.is_zero() and b.is_zero():
        assert g.is_zero()
        return
    assert g.divides(a) and g.divides(b)
    # any common divisor among small candidates divides g
    for c in (eis.THETA, EisensteinInt(2, 0), EisensteinInt(3, 0), EisensteinInt(2, 1)):
        if c.divides(a) and c.divides(b):
            assert c.divides(g)


# -- blocks and the model ---------------------------------------------------


def test_a2_rotation():
    rho = Isometry(A2(-1), A2_ROTATION)
    assert is_fixed_point_free_order3(rho)
    # characteristic polynomial x^2 + x + 1
    M = A2_ROTATION
    assert M[0][0] + M[1][1] == -1 and im.det(M) == 1


def test_frozen_blocks_are_order3_isometries():
    from cyclic_cubics.lattice.core import direct_sum
    for L, M in ((direct_sum(U(), U()), RHO_UU), (E8(-1), RHO_E8_MINUS), (A2(-1), A2_ROTATION)):
        rho = Isometry(L, M)                  # checks M^T G M = G
        assert is_fixed_point_free_order3(rho)
        assert rho.power(3).is_identity


def test_order3_rejects_bad_isometry():
    with pytest.raises(ConstructionFailed):
        Order3Lattice(U(), U().identity())


def test_model_invariants(model):
    L = model.L
    assert L.rank == 23 and L.is_even and abs(L.det) == 2
    assert signature(L) == (3, 20)
    assert L.norm(model.theta) == 6
    assert model.rho(model.theta) == tuple(model.theta)
    assert model.rho.power(3).is_identity
    assert orthogonal_complement(span(L, model.theta)).same_span(model.Sminus)
    assert model.S.gram == S_minus().gram


def test_glue_vector_arithmetic(model):
    # g = (theta + 2 delta1 + delta2) / 3 in <6> + S(-1): g^2 = 0, <g, theta> = 2, <g, delta1> = -1
    g = glue_coordinates()
    assert g[0] == Fraction(1, 3) and g[1 + DELTA1] == Fraction(2, 3) and g[1 + DELTA2] == Fraction(1, 3)
    L = model.L
    g_L = (1,) + (0,) * 22
    assert L.norm(g_L) == 0
    assert L.inner(g_L, model.theta) == 2
    assert L.inner(g_L, model.s_to_L(unit_vector(DELTA1))) == -1
    # rho(g) = g - delta1
    assert model.rho(g_L) == tuple(a - b for a, b in zip(g_L, model.s_to_L(unit_vector(DELTA1))))


def test_glue_extension_on_model(model):
    L = model.L
    six = span(L, model.theta)
    assert glue_extends(L, six, model.Sminus, six.lattice().identity(), model.rho0.rho).extends
    minus = Isometry(model.S, [[-int(i == j) for j in range(22)] for i in range(22)])
    minus6 = Isometry(six.lattice(), [[-1]])
    # epsilon clause: -id on S(-1) acts as -1 on the glue, so it pairs with -id on <6>, not with id
    assert glue_extends(L, six, model.Sminus, minus6, minus).extends
    assert not glue_extends(L, six, model.Sminus, six.lattice().identity(), minus).extends
    # reflections in roots act trivially on discriminant groups, so (id, r_delta1) extends
    r = reflection(model.S, unit_vector(DELTA1))
    assert glue_extends(L, six, model.Sminus, six.lattice().identity(), r).extends
    # an isometry of S(-1) acting by -1 on D_S (here -r_delta1) does not glue with id
    mr = Isometry(model.S, [[-x for x in row] for row in r.matrix])
    assert not glue_extends(L, six, model.Sminus, six.lattice().identity(), mr).extends


def test_model_json(model):
    d = model.to_json()
    assert d["schema"].startswith("cyclic-cubics/model/")
    assert len(d["Sminus_basis"]) == 22 and len(d["rho"]) == 23


# -- Hermitian form ---------------------------------------------------------


def test_hermitian_on_roots(model):
    OS = model.rho0
    d = unit_vector(DELTA1)
    assert hermitian_form(OS, d, d) == EisensteinInt(-3, 0)
    # on S (positive convention) the same root has H = 3
    from cyclic_cubics.lattice.core import rescale
    S_pos = rescale(model.S, -1)
    OSp = Order3Lattice(S_pos, Isometry(S_pos, model.rho0.rho.matrix))
    assert hermitian_form(OSp, d, d) == EisensteinInt(3, 0)


vec22 = st.lists(st.integers(-3, 3), min_size=22, max_size=22)


@given(vec22, vec22)
def test_hermitian_sesquilinear_and_theta_valued(model, x, y):
    OS = model.rho0
    hxy = hermitian_form(OS, x, y)
    # H(xi x, y) = xi H(x, y) and H(x, xi y) = conj(xi) H(x, y)
    assert hermitian_form(OS, OS.rho(x), y) == eis.XI * hxy
    assert hermitian_form(OS, x, OS.rho(y)) == eis.XI.conjugate() * hxy
    assert hermitian_form(OS, y, x) == hxy.conjugate()
    assert eis.THETA.divides(hxy)
    hxx = hermitian_form(OS, x, x)
    assert hxx.b == 0 and hxx.a % 3 == 0


# need the fixture inside hypothesis tests
test_hermitian_sesquilinear_and_theta_valued = pytest.mark.usefixtures("model")(
    test_hermitian_sesquilinear_and_theta_valued)


# -- classification ----------------------------------------------------------


def test_delta1_is_chordal_with_explicit_e_c(model):
    rc = classify_root(model, unit_vector(DELTA1))
    assert rc.kind == CHORDAL and rc.complement_det == 1
    # e_c = -g + 2 delta1 + delta2 in the L basis (g, s_1, ..., s_22)
    expected = tuple([-1] + [2 if i == DELTA1 else 1 if i == DELTA2 else 0 for i in range(22)])
    from cyclic_cubics.order3.roots import e_c_candidate
    assert e_c_candidate(model, unit_vector(DELTA1)) == expected


def test_e8_root_is_nodal(model):
    rc = classify_root(model, unit_vector(4))
    assert rc.kind == NODAL and rc.complement_det == 9 and rc.e_c is None


@pytest.mark.parametrize("v", [unit_vector(4, c=2), unit_vector(0), unit_vector(4, c=3)])
def test_not_a_root(model, v):
    with pytest.raises(NotARoot):
        classify_root(model, v)


def test_degeneracy_lattice(model):
    for delta in block_roots(model)[:6]:
        R = degeneracy_lattice(model, delta)
        assert im.det(R.gram) == 3 and all(R.gram[i][i] == -2 for i in range(2))
        assert is_primitive(R)


def test_sample_roots_cover_all_blocks_and_agree(model):
    roots = sample_roots(model, 60, seed=1)
    assert len(set(roots)) == 60
    blocks = {block_of(r) for r in roots}
    assert blocks == {"U+U", "E8(-1)_1", "E8(-1)_2", "A2(-1)", "mixed"}
    kinds = {classify_root(model, r).kind for r in roots}    # raises on any disagreement
    assert kinds == {NODAL, CHORDAL}


def test_sample_roots_deterministic(model):
    assert sample_roots(model, 30, seed=5) == sample_roots(model, 30, seed=5)


# -- degenerations -----------------------------------------------------------


@pytest.fixture(scope="module")
def chordal_report(model):
    return degenerate(model, unit_vector(DELTA1))


@pytest.fixture(scope="module")
def nodal_report(model):
    return degenerate(model, unit_vector(4))


def test_chordal_report(model, chordal_report):
    r = chordal_report
    assert r.passed, [c for c in r.checks if not c["pass"]]
    assert r.T_index == 3 and abs(im.det(r.T_delta.gram)) == 2
    assert model.L.norm(r.e_class) == -2


def test_nodal_report(model, nodal_report):
    r = nodal_report
    assert r.passed, [c for c in r.checks if not c["pass"]]
    assert r.T_index == 1 and abs(im.det(r.T_delta.gram)) == 18
    assert model.L.norm(r.e_class) == -2
    assert abs(im.det(r.S_delta.gram)) == 9 and signature(r.S_delta.lattice()) == (2, 18)


def test_rho_delta_identity(model, nodal_report, chordal_report):
    for r in (nodal_report, chordal_report):
        L = model.L
        d = model.s_to_L(r.delta.delta)
        rd = model.rho(d)
        M = (reflection(L, rd) @ reflection(L, d) @ model.rho).matrix
        assert r.rho_delta.matrix == M
        G = L.gram
        assert im.matmul(im.matmul(im.transpose(M), G), M) == [list(x) for x in G]
        assert r.rho_delta.power(3).is_identity
        assert r.rho_delta.fixed_sublattice().same_span(r.T_delta)


def test_restriction_to_eclass_complement(nodal_report, chordal_report):
    from cyclic_cubics.lattice.search import verify_witness
    for r, target in ((nodal_report, U(3)), (chordal_report, U())):
        lat, phi, witness = restrict_to_eclass_complement(r)
        assert lat.rank == 22 and phi.power(3).is_identity
        assert verify_witness(phi.fixed_sublattice().lattice(), target, witness)


def test_report_json(chordal_report):
    d = chordal_report.to_json()
    assert d["pass"] and d["root"]["kind"] == CHORDAL
    assert all({"name", "expected", "got", "pass"} <= set(c) for c in d["checks"])
