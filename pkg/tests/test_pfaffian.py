"""Pfaffian flags, certificates, line loci, the covering action and the certificate chain."""

import itertools
import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclic_cubics.poly.multipoly import MultiPoly
from cyclic_cubics.poly.wedge import PAIRS, WedgeElement
from cyclic_cubics.pfaffian import modp
from cyclic_cubics.pfaffian.certify import (
    BadPrime, Certificate, certify_smooth, verify_cyclic_form, verify_isotropy, witt_certificate,
)
from cyclic_cubics.pfaffian.fields import bilinear, rref
from cyclic_cubics.pfaffian.flag import (
    DatasetCorrupt, PfaffianFlag, dataset_text, load_appendix, parse_dataset,
)
from cyclic_cubics.pfaffian.lines import (
    EnumerationTooLarge, _fp_lines_on_cubic, _line_plane_polys, dual_from_forms,
    grassmannian_lines, k3_line_charts, k3_lines, triple_line_charts, triple_lines,
)
from cyclic_cubics.pfaffian.pipeline import (
    BUNDLE_SCHEMA, STAGES, random_isotropic_flag, recheck, run_chain, search, verify_appendix,
)
from cyclic_cubics.pfaffian.quadratic import (
    find_isotropic_subspace, hyperplane_basis, q_gram, restrict_gram, signature_of,
)
from cyclic_cubics.pfaffian.sigma import DegeneratePair, NoCubeRoot, SigmaAction, sample_sigma_points

from oracles import gaussian_binomial, projective_singular_points, subspaces_by_rank_enumeration

X = MultiPoly.variables(6)
x = MultiPoly.variables(5)


def cone_cubic():
    """A cone over the Fermat cubic surface: singular at e_4."""
    return x[0] ** 3 + x[1] ** 3 + x[2] ** 3 + x[3] ** 3


# -- the shipped dataset -------------------------------------------------------


def test_appendix_loads_and_matches_printed_cubic(flag):
    assert flag.pf_phi0() == 1
    assert flag.expected_pfaffian is not None
    assert (flag.F - flag.expected_pfaffian).is_zero()
    spots = {(3, 0, 0, 0, 0, 0): -42, (2, 1, 0, 0, 0, 0): -179, (0, 0, 0, 0, 3, 0): -3,
             (0, 0, 0, 0, 0, 3): 1}
    for e, c in spots.items():
        assert flag.F.coefficient(e) == c


def test_appendix_phi0_is_the_covering_form(flag):
    expected = [0] * len(PAIRS)
    for P in ((0, 3), (1, 4), (2, 5)):
        expected[PAIRS.index(P)] = -1
    assert [int(c) for c in flag.phi0.upper()] == expected


def test_flag_json_round_trip(flag):
    d = json.loads(json.dumps(flag.to_json()))
    again = PfaffianFlag.from_json(d)
    assert again == flag and (again.F - flag.F).is_zero()


@pytest.mark.parametrize("edit", [
    lambda t: t.replace("[entries]", "[entry]"),
    lambda t: t.replace("u15 4 5", "u15 4 4"),
    lambda t: t.replace("u2 = x0 + x2 + x3", "u2 = x0 + x2 + x5"),
    lambda t: t.replace("u1 = 2*x0", "u1 = 2*x0 +* "),
    lambda t: "stray line\n" + t,
])
def test_corrupt_dataset(edit):
    with pytest.raises(DatasetCorrupt):
        load_appendix(edit(dataset_text()))


def test_tampered_dataset_breaks_pfaffian_equation():
    tampered = parse_dataset(dataset_text().replace("u1 = 2*x0", "u1 = 3*x0"))
    assert not (tampered.F - tampered.expected_pfaffian).is_zero()


# -- cyclic form, isotropy, Witt bounds ----------------------------------------


def test_cyclic_form(flag):
    assert verify_cyclic_form(flag.F).verdict
    fermat = sum((v ** 3 for v in X), MultiPoly.zero(6))
    assert verify_cyclic_form(fermat).verdict
    assert not verify_cyclic_form(fermat + X[5] ** 2 * X[0]).verdict
    assert not verify_cyclic_form(fermat - X[5] ** 3).verdict


def test_cyclic_form_on_random_isotropic_flags(flag):
    for seed in range(10):
        g = random_isotropic_flag(flag.phi0, seed)
        assert g is not None
        assert verify_isotropy(g).verdict
        assert verify_cyclic_form(g.F).verdict


def test_isotropy(flag):
    assert verify_isotropy(flag).verdict
    with_phi0 = (flag.phi0,) + tuple(flag.Z_basis[1:])
    assert not verify_isotropy(flag, with_phi0).verdict
    zero = WedgeElement.two_form([0] * len(PAIRS))
    assert verify_isotropy(flag, (zero,) * 5).verdict


def test_witt_bounds(flag):
    cert = witt_certificate(flag)
    assert cert.verdict
    q, qH = cert.payload["q"], cert.payload["q_H"]
    assert q["lower"] == q["upper"] == 7 and sorted(q["signature"]) == [7, 8]
    assert qH["lower"] == qH["upper"] == 6 and sorted(qH["signature"]) == [6, 8]


def test_isotropic_subspace_witness_is_isotropic(flag):
    GH = restrict_gram(q_gram(flag.phi0), hyperplane_basis(flag.phi0))
    assert signature_of(GH)[2] == 0
    res = find_isotropic_subspace(GH, 5, seed=3)
    assert res.found and len(res.basis) == 5
    for a, b in itertools.product(res.basis, repeat=2):
        assert sum(a[i] * GH[i][j] * b[j] for i in range(14) for j in range(14)) == 0


# -- smoothness ------------------------------------------------------------------


def test_smoothness_ranks(flag):
    cy = certify_smooth(flag.F, 101)
    cc = certify_smooth(flag.f, 101)
    assert cy.verdict and cy.payload["rank"] == cy.payload["target_rank"] == 792
    assert cc.verdict and cc.payload["rank"] == cc.payload["target_rank"] == 210


def test_cone_is_singular():
    for method in ("nullstellensatz_rank", "enumeration"):
        assert not certify_smooth(cone_cubic(), 7, method).verdict


@pytest.mark.parametrize("p", [2, 3, 4, 1])
def test_bad_primes(flag, p):
    with pytest.raises(BadPrime):
        certify_smooth(flag.f, p)


def _random_plane_cubic(rng, singular):
    """Random ternary cubic over F_5; if ``singular``, forced through a singular point at [1:0:0]."""
    v = MultiPoly.variables(3)
    while True:
        F = MultiPoly.zero(3)
        for e in modp.monomials_of_degree(3, 3):
            if singular and e[1] + e[2] < 2:
                continue
            c = rng.randrange(5)
            if c:
                m = MultiPoly.constant(c, 3)
                for i, k in enumerate(e):
                    m = m * v[i] ** k
                F = F + m
        if not F.is_zero() and F.is_homogeneous(3):
            return F


def test_smoothness_methods_agree_on_random_cubics():
    rng = random.Random(11)
    verdicts = set()
    for k in range(10):
        F = _random_plane_cubic(rng, singular=k % 2 == 0)
        rank = certify_smooth(F, 5, "nullstellensatz_rank")
        enum = certify_smooth(F, 5, "enumeration")
        sing = projective_singular_points(F, 5)
        assert enum.payload["singular_count"] == len(sing)
        assert enum.verdict == (not sing)
        if rank.verdict:                      # rank certificate implies the weaker rational claim
            assert enum.verdict
        if not enum.verdict:                  # a rational singular point refutes smoothness
            assert not rank.verdict
        verdicts.add(rank.verdict)
    assert verdicts == {True, False}


def test_certificate_json_round_trip(flag):
    c = certify_smooth(flag.f, 101)
    again = Certificate.from_json(json.loads(c.dumps()))
    assert again.to_json() == c.to_json()
    assert "proper" in c.soundness_note


# -- triple lines ----------------------------------------------------------------


def test_grassmannian_chart_coverage_p3():
    lines = grassmannian_lines(3)
    assert len(lines) == gaussian_binomial(5, 2, 3) == subspaces_by_rank_enumeration(5, 2, 3) == 1210


@pytest.mark.parametrize("p,on_cubic,triple", [(5, 19, 1), (7, 90, 1), (11, 88, 1), (13, 189, 0)])
def test_triple_line_enumeration_counts(flag, p, on_cubic, triple):
    cert = triple_lines(flag.f, p, "enumeration")
    assert cert.payload["lines_on_cubic"] == on_cubic
    assert len(cert.payload["triple_lines"]) == triple
    assert cert.verdict == (triple == 0)


def test_triple_line_witness_mod_7(flag):
    """The rational triple line found mod 7: the plane through it cuts out 3 * line."""
    p = 7
    line = [[1, 0, 6, 3, 5], [0, 1, 5, 1, 3]]
    alpha = [0, 0] + [1, 4, 0]                  # chart p01: alpha lives on x2, x3, x4
    u, v, t = MultiPoly.variables(3)
    images = [u * line[0][k] + v * line[1][k] + t * alpha[k] for k in range(5)]
    g = flag.f.reduce_mod(p).compose([q.reduce_mod(p) for q in images])
    nonzero = {e: c for e, c in g.terms.items() if c % p}
    assert list(nonzero) == [(0, 0, 3)]
    cert = triple_lines(flag.f, p, "enumeration")
    assert cert.payload["triple_lines"][0]["line"] == line


def test_line_in_cubic_equations_vanish_on_enumerated_lines(flag):
    p = 7
    fp = flag.f.reduce_mod(p)
    lines = _fp_lines_on_cubic(fp, p)
    assert len(lines) == 90
    cache = {}
    for key, (a, b, coords) in lines.items():
        if (a, b) not in cache:
            cache[(a, b)] = _line_plane_polys(fp, a, b, p)[0]
        eqs = cache[(a, b)]
        assert len(eqs) == 4
        pt = np.array([coords + [0, 0, 0]], dtype=np.int64)
        assert all(modp.evaluate_mod_p(q, pt, p)[0] == 0 for q in eqs)


def test_triple_line_chart_shapes(flag):
    charts = triple_line_charts(flag.f.reduce_mod(13), 13)
    assert len(charts) == 30
    assert all(len(c.variables) == 8 and len(c.generators) == 4 + 3 + 2 for c in charts)
    assert len({c.chart_id for c in charts}) == 30


def test_triple_lines_refuse_singular_cubic():
    for mode in ("groebner_charts", "enumeration"):
        cert = triple_lines(cone_cubic(), 7, mode)
        assert not cert.verdict and "refused" in cert.payload


def test_triple_lines_bad_input(flag):
    with pytest.raises(BadPrime):
        triple_lines(flag.f, 3)
    with pytest.raises(ValueError):
        triple_lines(flag.F, 13)


# -- lines on the dual K3 ---------------------------------------------------------


def _flag_keys(V, p):
    """Hashable keys for flags (v1 in V3) given as rows (v1, w2, w3): projective v1 and the
    Pluecker vector of V3, both normalized by their first nonzero coordinate."""
    def normalize(A):
        first = np.argmax(A != 0, axis=1)
        lead = A[np.arange(len(A)), first]
        inv_lead = np.array([pow(int(c), -1, p) if c else 0 for c in range(p)])[lead]
        return (A * inv_lead[:, None]) % p
    v1 = V[:, 0, :]
    minors = []
    for cols in itertools.combinations(range(6), 3):
        M = V[:, :, cols]
        d = (M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
             - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
             + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0]))
        minors.append(d % p)
    pl = np.stack(minors, axis=1)
    assert (pl != 0).any(axis=1).all()
    key = np.concatenate([normalize(v1 % p), normalize(pl)], axis=1)
    weights = p ** np.arange(key.shape[1] - 1, -1, -1, dtype=np.int64)
    return key @ weights


def _chart_flags(chart_id, pts):
    i = int(chart_id[3])
    j, k = int(chart_id[-2]), int(chart_id[-1])
    rest = [m for m in range(6) if m != i]
    free = [m for m in range(6) if m not in (i, j, k)]
    V = np.zeros((len(pts), 3, 6), dtype=np.int64)
    V[:, 0, i] = 1
    V[:, 0, rest] = pts[:, :5]
    V[:, 1, j] = 1
    V[:, 1, free] = pts[:, 5:8]
    V[:, 2, k] = 1
    V[:, 2, free] = pts[:, 8:11]
    return V


def test_flag_chart_coverage_p3(dual):
    p = 3
    charts = k3_line_charts(dual, p)
    assert len(charts) == 60 and len({c.chart_id for c in charts}) == 60
    pts = modp.affine_points(11, p)
    keys = np.unique(np.concatenate([_flag_keys(_chart_flags(c.chart_id, pts), p) for c in charts]))
    expected = subspaces_by_rank_enumeration(6, 1, p) * subspaces_by_rank_enumeration(5, 2, p)
    assert expected == gaussian_binomial(6, 1, p) * gaussian_binomial(5, 2, p) == 440440
    assert len(keys) == expected


def test_k3_chart_equations_are_the_incidence_conditions(dual):
    """Chart generators = psi(v1, w) for the six forms psi of W and both pencil generators w."""
    p = 7
    rng = random.Random(2)
    mats = []
    for w in dual.W_forms:
        M = np.zeros((6, 6), dtype=np.int64)
        for (a, b), c in zip(PAIRS, w):
            c = Fraction(c)
            M[a, b] = c.numerator * pow(c.denominator, -1, p) % p
            M[b, a] = -M[a, b] % p
        mats.append(M)
    for ch in k3_line_charts(dual, p)[::7]:
        pt = np.array([[rng.randrange(p) for _ in range(11)]], dtype=np.int64)
        V = _chart_flags(ch.chart_id, pt)[0]
        expected = [int(V[0] @ M @ V[r]) % p for M in mats for r in (1, 2)]
        got = [int(modp.evaluate_mod_p(g, pt, p)[0]) for g in ch.generators]
        assert got == expected


def test_k3_enumeration_p2_finds_no_lines(dual):
    cert = k3_lines(dual, 2, "enumeration")
    assert cert.verdict and cert.payload["lines"] == []


def test_k3_enumeration_p3_finds_rational_lines(dual):
    cert = k3_lines(dual, 3, "enumeration")
    assert not cert.verdict and cert.payload["lines"]


def test_k3_errors(dual):
    with pytest.raises(EnumerationTooLarge):
        k3_lines(dual, 5, "enumeration")
    with pytest.raises(BadPrime):
        k3_lines(dual, 9)


def degenerate_forms(seed=0):
    """Six forms with no (0,1) and (0,2) coefficient: the pencil e0 ^ span(e1, e2) lies in W^0,
    so the line {P : e0 in P in span(e0, e1, e2)} lies on Sigma."""
    rng = random.Random(seed)
    return [[0, 0] + [rng.randint(-3, 3) for _ in range(len(PAIRS) - 2)] for _ in range(6)]


def test_degenerate_dual_has_lines():
    dd = dual_from_forms(degenerate_forms())
    cert = k3_lines(dd, 7, charts=["v1:0/V3:12"])
    assert not cert.verdict
    enum = k3_lines(dd, 2, "enumeration")
    assert not enum.verdict and any(f["chart"] == "v1:0/V3:12" for f in enum.payload["lines"])


def test_k3_single_chart_unit_for_appendix(dual):
    cert = k3_lines(dual, 7, charts=["v1:0/V3:12", "v1:5/V3:34"])
    assert cert.verdict and cert.payload["chart_count"] == 2


# -- the covering action on pairs ---------------------------------------------------


@pytest.fixture(scope="module")
def action(flag):
    return SigmaAction(flag, 13)


@pytest.fixture(scope="module")
def sigma_pairs(action):
    pts = sample_sigma_points(action, 60, seed=0)
    out = []
    for P, Q in zip(pts[::2], pts[1::2]):
        try:
            one = action.apply(P, Q)
            two = action.apply(*one)
            three = action.apply(*two)
        except DegeneratePair:
            continue
        out.append(((P, Q), one, two, three))
    return out


def test_sampled_points_lie_on_sigma(action):
    for P in sample_sigma_points(action, 10, seed=4):
        assert action.on_sigma(P)


def test_sigma_has_order_three(action, sigma_pairs):
    assert len(sigma_pairs) >= 10
    for start, one, _, three in sigma_pairs[:10]:
        assert action.canonical_pair(*start) == action.canonical_pair(*three)
        assert action.canonical_pair(*start) != action.canonical_pair(*one)


def test_sigma_is_injective_on_sampled_orbits(action, sigma_pairs):
    starts = {action.canonical_pair(*s) for s, *_ in sigma_pairs}
    images = {action.canonical_pair(*o) for _, o, *_ in sigma_pairs}
    assert len(starts) == len(images) == len(sigma_pairs)


def test_sigma_images_lie_on_sigma(action, sigma_pairs):
    for _, one, _, _ in sigma_pairs[:5]:
        for P in one:
            assert action.on_sigma(P) or not all(x.in_prime_field() for r in P for x in r)


def test_bilagrangian_matches_oracle(action, sigma_pairs):
    for (P, Q), *_ in sigma_pairs[:10]:
        K, _ = rref([action.vec(v) for v in P + Q])
        pencil = action.pencil_of(K)
        image = [c[:5] + [c[5] * action.xi] for c in pencil]
        K2 = action.bilagrangian(image)
        assert K2 == action.bilagrangian_oracle(image) and len(K2) == 4
        for c in image:                       # both generators vanish on K'
            M = action.form(c)
            assert all(not bilinear(u, M, w) for u in K2 for w in K2)
        assert action.bilagrangian(pencil) == K


def test_sigma_fixes_pairs_over_lines_in_PZ(flag, action):
    """A line of P(Z) inside Y is a line on C; its pair of points is fixed."""
    F = action.F
    lines = _fp_lines_on_cubic(flag.f.reduce_mod(13), 13)
    checked = 0
    for key in sorted(lines)[:40]:
        pencil = [[F(c) for c in row] + [F.zero] for row in key]
        try:
            P, Q = action.points_of(action.bilagrangian(pencil))
        except DegeneratePair:
            continue
        if not all(x.in_prime_field() for r in P + Q for x in r):
            continue
        assert action.on_sigma(P) and action.on_sigma(Q)
        assert action.apply(P, Q) == ([action.vec(v) for v in P], [action.vec(v) for v in Q])
        checked += 1
    assert checked >= 3


@pytest.mark.parametrize("p", [5, 11])
def test_no_cube_root(flag, p):
    with pytest.raises(NoCubeRoot):
        SigmaAction(flag, p)


def test_sigma_rejects_meeting_planes(action):
    P = sample_sigma_points(action, 1, seed=9)[0]
    with pytest.raises(DegeneratePair):
        action.apply(P, P)


# -- the certificate chain ----------------------------------------------------------


@pytest.fixture(scope="module")
def enum_bundle():
    return verify_appendix(mode="enum")


def test_enum_chain_passes(enum_bundle):
    b = enum_bundle
    assert b.verdict and b.failed_stage is None
    assert [name for name, _ in b.stages] == list(STAGES)
    assert all("weaker claim" in c.soundness_note for n, c in b.stages if n in
               ("smooth_C", "smooth_Y", "triple_lines", "k3_lines"))
    assert any("plane" in n for n in b.notes)


def test_bundle_json_recheck(enum_bundle):
    d = json.loads(json.dumps(enum_bundle.to_json()))
    assert d["schema"] == BUNDLE_SCHEMA
    same, fresh = recheck(d)
    assert same and fresh.verdict


def test_recheck_detects_edited_verdict(enum_bundle):
    d = json.loads(json.dumps(enum_bundle.to_json()))
    d["stages"][1]["certificate"]["verdict"] = False
    same, _ = recheck(d)
    assert not same
    with pytest.raises(ValueError):
        recheck({"schema": "something/else"})


def test_tampered_chain_fails_at_pfaffian_equation():
    text = dataset_text().replace("u1 = 2*x0", "u1 = 3*x0")
    b = verify_appendix(mode="enum", text=text)
    assert not b.verdict and b.failed_stage == "pfaffian_equation"


def test_enum_prime_5_stops_at_rational_triple_line():
    b = verify_appendix(mode="enum", primes={"smooth": 5, "triple": 5})
    assert not b.verdict and b.failed_stage == "triple_lines"


def test_skip_validation(flag):
    with pytest.raises(ValueError):
        run_chain(flag, "enum", skip=("nonsense",))
    with pytest.raises(ValueError):
        run_chain(flag, "fast")
    b = run_chain(flag, "enum", skip=("k3_lines", "triple_lines"))
    assert b.verdict and [n for n, _ in b.stages] == list(STAGES[:-2])


def test_injected_appendix_Z_verifies(flag):
    injected = PfaffianFlag(flag.phi0, flag.Z_basis)
    b = run_chain(injected, "enum")
    assert b.verdict
    assert "no expected cubic" in b.stages[0][1].soundness_note


def test_random_non_isotropic_Z_fails_isotropy(flag):
    rng = random.Random(1)
    Z = tuple(WedgeElement.two_form([rng.randint(-2, 2) for _ in PAIRS]) for _ in range(5))
    b = run_chain(PfaffianFlag(flag.phi0, Z), "enum", skip=("cyclic_form",))
    assert not b.verdict and b.failed_stage == "isotropy"


def test_search_is_deterministic(flag):
    assert random_isotropic_flag(flag.phi0, 7) == random_isotropic_flag(flag.phi0, 7)
    assert random_isotropic_flag(flag.phi0, 7) != random_isotropic_flag(flag.phi0, 8)
    skip = ("triple_lines", "k3_lines")
    a_flag, a = search(seed=2, attempts=1, mode="enum", skip=skip)
    b_flag, b = search(seed=2, attempts=1, mode="enum", skip=skip)
    assert a_flag == b_flag and a.verdict == b.verdict
    if a_flag is not None:
        assert verify_isotropy(a_flag).verdict


def test_search_exhaustion_is_inconclusive(flag):
    flag_, bundle = search(seed=0, attempts=0)
    assert flag_ is None and bundle.inconclusive and not bundle.verdict


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_random_flags_are_isotropic_and_cyclic(seed):
    g = random_isotropic_flag(load_appendix().phi0, seed)
    assert g is not None and verify_isotropy(g).verdict and verify_cyclic_form(g.F).verdict
