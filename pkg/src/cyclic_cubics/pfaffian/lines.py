"""Chart systems for triple lines on the cubic threefold and lines on the dual K3.

Triple lines.  A line l in P^4 with Pluecker pivot (a, b) is spanned by
l0 = e_a + sum_k s_k e_k and l1 = e_b + sum_k t_k e_k (k ranging over the
three other coordinates); a plane P containing l meets {x_a = x_b = 0} in
a point p = sum_k alpha_k e_k.  Expanding f(u l0 + v l1 + T p) in T, the
line is a triple line of the plane section iff the T^0, T^1 and T^2
coefficients vanish identically in (u, v): 4 + 3 + 2 equations.  The
condition alpha != 0 is handled by the three charts alpha_c = 1, so
10 x 3 = 30 affine charts with 8 variables cover all (line, plane) pairs.

K3 lines.  Lines on Sigma = Grass(2, V) cap P(W^0) are the pencils
{v1 ^ w : w in V3} for flags V1 subset V3 with phi(v1, w) = 0 for all phi
in W and w in V3.  In the chart with pivots i (for v1) and j, k (for V3/V1)
we use v1 = e_i + sum_{m != i} a_m e_m, w2 = e_j + sum b_m e_m and
w3 = e_k + sum c_m e_m (m outside {i, j, k}): 11 variables and 6 x 2
bilinear equations; the 6 x 10 = 60 charts cover Flag(1, 3; 6).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..lattice import intmat as im
from ..poly.groebner import GroebnerStats, is_unit_ideal
from ..poly.multipoly import MultiPoly
from ..poly.text import format_poly
from ..poly.wedge import DIM, PAIRS, WedgeElement
from . import modp
from .certify import TRANSFER_NOTE, BadPrime, Certificate, _is_prime, certify_smooth, check_prime
from .flag import PfaffianFlag

N_P4 = 5


class EnumerationTooLarge(ValueError):
    pass


@dataclass
class ChartSystem:
    chart_id: str
    variables: tuple
    generators: list            # MultiPoly over F_p

    def to_json(self) -> dict:
        return {"chart": self.chart_id, "variables": list(self.variables),
                "generators": [format_poly(g) for g in self.generators]}


# --------------------------------------------------------------------------
# triple lines


def _line_plane_polys(fp: MultiPoly, a: int, b: int, p: int):
    """Equations in (s_k, t_k, alpha_k) for chart (a, b): 9 variables.

    Returns (line_eqs, tangency_eqs, osculation_eqs) grouped by T-degree.
    """
    others = [k for k in range(N_P4) if k not in (a, b)]
    n = 9 + 3                  # s(3), t(3), alpha(3), u, v, T
    var = MultiPoly.variables(n, p)
    s, t, al = var[0:3], var[3:6], var[6:9]
    u, v, T = var[9], var[10], var[11]
    images = [None] * N_P4
    images[a] = u
    images[b] = v
    for idx, k in enumerate(others):
        images[k] = u * s[idx] + v * t[idx] + T * al[idx]
    g = fp.compose(images)
    groups: dict = {}
    for e, c in g.terms.items():
        key = e[9:]
        groups.setdefault(key, {})[e[:9]] = c
    def coeffs(tdeg):
        keys = [(3 - tdeg - j, j, tdeg) for j in range(3 - tdeg + 1)]
        return [MultiPoly(9, groups.get(k, {}), p) for k in keys]
    return coeffs(0), coeffs(1), coeffs(2)


def triple_line_charts(fp: MultiPoly, p: int) -> list:
    charts = []
    for a, b in itertools.combinations(range(N_P4), 2):
        others = [k for k in range(N_P4) if k not in (a, b)]
        line, tang, osc = _line_plane_polys(fp, a, b, p)
        for ci, c in enumerate(others):
            keep = [i for i in range(9) if i != 6 + ci]
            images = []
            xs = MultiPoly.variables(8, p)
            it = iter(xs)
            for i in range(9):
                images.append(MultiPoly.constant(1, 8, p) if i == 6 + ci else next(it))
            gens = [q.compose(images) for q in line + tang + osc]
            names = tuple([f"s{k}" for k in others] + [f"t{k}" for k in others] +
                          [f"alpha{others[i - 6]}" for i in keep if i >= 6])
            charts.append(ChartSystem(f"p{a}{b}/alpha{c}=1", names, gens))
    return charts


def _canonical_line(M: np.ndarray, p: int) -> tuple:
    """Reduced row echelon form of a 2 x n matrix over F_p, as a hashable key."""
    M = M.copy() % p
    r = 0
    for c in range(M.shape[1]):
        nz = [i for i in range(r, M.shape[0]) if M[i, c]]
        if not nz:
            continue
        M[[r, nz[0]]] = M[[nz[0], r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        for i in range(M.shape[0]):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
        if r == M.shape[0]:
            break
    return tuple(map(tuple, M.tolist()))


def grassmannian_lines(p: int) -> set:
    """All F_p-lines of P^4 obtained from the 10 pivot charts (coverage check)."""
    seen = set()
    pts = modp.affine_points(6, p)
    for a, b in itertools.combinations(range(N_P4), 2):
        others = [k for k in range(N_P4) if k not in (a, b)]
        for row in pts:
            M = np.zeros((2, N_P4), dtype=np.int64)
            M[0, a] = 1
            M[1, b] = 1
            M[0, others] = row[:3]
            M[1, others] = row[3:]
            seen.add(_canonical_line(M, p))
    return seen


def triple_lines(f: MultiPoly, p: int = 13, mode: str = "groebner_charts") -> Certificate:
    fp = check_prime(f, p)
    if f.nvars != N_P4 or not f.is_homogeneous(3):
        raise ValueError("triple_lines expects a homogeneous cubic in 5 variables")
    smooth = certify_smooth(f, p)
    if not smooth.verdict:
        return Certificate("triple_lines", mode, [p], {
            "refused": "the cubic is singular mod p; the chart analysis assumes a smooth cubic",
            "smoothness": smooth.payload}, False,
            "refused: no statement is made for a singular cubic")
    if mode == "groebner_charts":
        charts = triple_line_charts(fp, p)
        results = []
        for ch in charts:
            st = GroebnerStats()
            t0 = time.perf_counter()
            unit = is_unit_ideal(ch.generators, st)
            results.append({"chart": ch.chart_id, "unit": unit, "variables": len(ch.variables),
                            "equations": len(ch.generators),
                            "seconds": round(time.perf_counter() - t0, 3)})
        ok = all(r["unit"] for r in results)
        return Certificate("triple_lines", mode, [p], {
            "charts": results, "chart_count": len(results)}, ok,
            f"each of the {len(results)} chart ideals is the unit ideal over F_{p}, so no pair "
            f"(line, plane) with plane section 3*line exists over an algebraic closure of F_{p}; "
            f"the triple-line locus is a " + TRANSFER_NOTE)
    if mode == "enumeration":
        return _triple_lines_enum(fp, p)
    raise ValueError(f"unknown mode {mode!r}")


def _fp_lines_on_cubic(fp: MultiPoly, p: int) -> dict:
    """All F_p-lines on {f = 0} as {canonical key: (a, b, chart coordinates)}.

    f is tabulated once on F_p^5.  In pivot chart (a, b) the spanning points
    l0 = e_a + s and l1 = e_b + t must lie on the cubic, and then so must the
    p - 1 points l0 + lam * l1; a cubic vanishing at p + 1 >= 4 points of a
    line contains it.
    """
    pts = modp.affine_points(N_P4, p)
    on = modp.evaluate_mod_p(fp, pts, p) == 0
    weights = p ** np.arange(N_P4 - 1, -1, -1, dtype=np.int64)
    cube = modp.affine_points(3, p)
    lines: dict = {}
    for a, b in itertools.combinations(range(N_P4), 2):
        others = [k for k in range(N_P4) if k not in (a, b)]
        L0 = np.zeros((len(cube), N_P4), dtype=np.int64)
        L0[:, a] = 1
        L0[:, others] = cube
        L1 = np.zeros_like(L0)
        L1[:, b] = 1
        L1[:, others] = cube
        S = L0[on[L0 @ weights]]
        T = L1[on[L1 @ weights]]
        if not len(S) or not len(T):
            continue
        i, j = np.meshgrid(np.arange(len(S)), np.arange(len(T)), indexing="ij")
        i, j = i.ravel(), j.ravel()
        ok = np.ones(len(i), dtype=bool)
        for lam in range(1, p):
            ok &= on[((S[i] + lam * T[j]) % p) @ weights]
        for ii, jj in zip(i[ok], j[ok]):
            M = np.stack([S[ii], T[jj]])
            key = _canonical_line(M, p)
            if key not in lines:
                lines[key] = (a, b, S[ii][others].tolist() + T[jj][others].tolist())
    return lines


def _triple_lines_enum(fp: MultiPoly, p: int) -> Certificate:
    lines = _fp_lines_on_cubic(fp, p)
    alphas = modp.projective_points(3, p)
    systems: dict = {}
    triple = []
    for key, (a, b, coords) in sorted(lines.items()):
        if (a, b) not in systems:
            systems[(a, b)] = _line_plane_polys(fp, a, b, p)
        _, tang, osc = systems[(a, b)]
        Y = np.concatenate([np.tile(np.array(coords, dtype=np.int64), (len(alphas), 1)), alphas], axis=1)
        ok = np.ones(len(alphas), dtype=bool)
        for q in tang + osc:
            ok &= modp.evaluate_mod_p(q, Y, p) == 0
        if ok.any():
            triple.append({"line": [list(r) for r in key], "chart": f"p{a}{b}",
                           "alpha": alphas[ok][0].tolist()})
    return Certificate("triple_lines", "enumeration", [p], {
        "lines_on_cubic": len(lines), "triple_lines": triple}, not triple,
        f"weaker claim: among the {len(lines)} F_{p}-rational lines on the cubic, none has an "
        f"F_{p}-rational plane meeting the cubic in 3*line")


# --------------------------------------------------------------------------
# dual data and K3 lines


@dataclass
class DualData:
    W_forms: tuple               # 6 two-forms spanning W (upper-triangular coordinates)
    W_ann: list                  # basis of W^0 in Pluecker coordinates (rows)
    Z_ann: list                  # basis of Z^0
    sigma_quadrics: list         # Pluecker quadrics restricted to P(W^0), in W_ann coordinates

    def to_json(self) -> dict:
        return {"W_forms": [[str(c) for c in w] for w in self.W_forms],
                "W_ann": self.W_ann, "Z_ann": self.Z_ann,
                "sigma_quadrics": [format_poly(q) for q in self.sigma_quadrics]}


def pluecker_quadrics(nvars_map: list) -> list:
    """Pluecker relations p_ij p_kl - p_ik p_jl + p_il p_jk for i<j<k<l.

    ``nvars_map[a]`` is a polynomial expressing the coordinate p_{PAIRS[a]}.
    """
    idx = {P: a for a, P in enumerate(PAIRS)}
    out = []
    for i, j, k, l in itertools.combinations(range(DIM), 4):
        P = lambda x, y: nvars_map[idx[(x, y)]]
        out.append(P(i, j) * P(k, l) - P(i, k) * P(j, l) + P(i, l) * P(j, k))
    return out


def dual_data(flag: PfaffianFlag) -> DualData:
    W = [tuple(Fraction(c) for c in w.upper()) for w in flag.W_basis]
    Z = W[:5]
    def ann(rows):
        den = 1
        for r in rows:
            for c in r:
                den = den * c.denominator // _gcd(den, c.denominator)
        return im.integer_kernel([[int(c * den) for c in r] for r in rows])
    W_ann = ann(W)
    Z_ann = ann(Z)
    y = MultiPoly.variables(len(W_ann))
    coords = [sum((y[r] * W_ann[r][a] for r in range(len(W_ann))), MultiPoly.zero(len(W_ann)))
              for a in range(len(PAIRS))]
    return DualData(tuple(W), W_ann, Z_ann, pluecker_quadrics(coords))


def dual_from_forms(W_forms) -> DualData:
    """Dual data from an arbitrary list of six 2-forms (for degenerate test flags)."""
    W = [tuple(Fraction(c) for c in (w.upper() if isinstance(w, WedgeElement) else w)) for w in W_forms]
    dd = dual_data(PfaffianFlag(WedgeElement.two_form(W[5]),
                                tuple(WedgeElement.two_form(w) for w in W[:5])))
    return dd


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _forms_mod_p(dual: DualData, p: int) -> list:
    out = []
    for w in dual.W_forms:
        M = [[0] * DIM for _ in range(DIM)]
        for (i, j), c in zip(PAIRS, w):
            c = Fraction(c)
            if c.denominator % p == 0:
                raise BadPrime(f"{p} divides a denominator of W")
            v = c.numerator * pow(c.denominator, -1, p) % p
            M[i][j] = v
            M[j][i] = (-v) % p
        out.append(M)
    return out


def k3_line_charts(dual: DualData, p: int) -> list:
    mats = _forms_mod_p(dual, p)
    charts = []
    for i in range(DIM):
        rest = [m for m in range(DIM) if m != i]
        for j, k in itertools.combinations(rest, 2):
            free = [m for m in range(DIM) if m not in (i, j, k)]
            var = MultiPoly.variables(11, p)
            one = MultiPoly.constant(1, 11, p)
            zero = MultiPoly.zero(11, p)
            v1 = [one if m == i else var[rest.index(m)] for m in range(DIM)]
            w2 = [one if m == j else var[5 + free.index(m)] if m in free else zero for m in range(DIM)]
            w3 = [one if m == k else var[8 + free.index(m)] if m in free else zero for m in range(DIM)]
            gens = []
            for Phi in mats:
                for w in (w2, w3):
                    g = zero
                    for r in range(DIM):
                        for c in range(DIM):
                            if Phi[r][c]:
                                g = g + v1[r] * w[c] * Phi[r][c]
                    gens.append(g)
            names = tuple([f"a{m}" for m in rest] + [f"b{m}" for m in free] + [f"c{m}" for m in free])
            charts.append(ChartSystem(f"v1:{i}/V3:{j}{k}", names, gens))
    return charts


def k3_lines(dual: DualData, p: int = 7, mode: str = "groebner_charts",
             charts: list | None = None) -> Certificate:
    if not _is_prime(p):
        raise BadPrime(f"{p} is not prime")
    mats = _forms_mod_p(dual, p)
    if modp.rank_mod_p([[M[i][j] for i, j in PAIRS] for M in mats], p) != len(mats):
        raise BadPrime(f"the forms spanning W become dependent mod {p}")
    if mode == "enumeration" and p > 3:
        raise EnumerationTooLarge(f"enumeration needs p in {{2, 3}}; p = {p} gives {p}^11 points per chart")
    systems = k3_line_charts(dual, p)
    if charts is not None:
        systems = [s for s in systems if s.chart_id in charts]
    results = []
    if mode == "groebner_charts":
        for ch in systems:
            st = GroebnerStats()
            t0 = time.perf_counter()
            unit = is_unit_ideal(ch.generators, st)
            results.append({"chart": ch.chart_id, "unit": unit, "variables": len(ch.variables),
                            "equations": len(ch.generators),
                            "seconds": round(time.perf_counter() - t0, 3)})
        ok = all(r["unit"] for r in results)
        note = (f"each of the {len(results)} chart ideals is the unit ideal over F_{p}, so the dual "
                f"K3 surface contains no line over an algebraic closure of F_{p}; its Fano scheme "
                f"of lines is a " + TRANSFER_NOTE)
        return Certificate("k3_lines", mode, [p], {"charts": results, "chart_count": len(results)},
                           ok, note)
    if mode == "enumeration":
        pts = modp.affine_points(11, p)
        found = []
        for ch in systems:
            ok = np.ones(len(pts), dtype=bool)
            for g in ch.generators:
                ok &= modp.evaluate_mod_p(g, pts, p) == 0
            n = int(ok.sum())
            results.append({"chart": ch.chart_id, "points": n})
            if n:
                found.append({"chart": ch.chart_id, "point": pts[ok][0].tolist()})
        return Certificate("k3_lines", mode, [p], {"charts": results, "lines": found}, not found,
                           f"weaker claim: no line on the dual K3 surface is defined over F_{p}")
    raise ValueError(f"unknown mode {mode!r}")
