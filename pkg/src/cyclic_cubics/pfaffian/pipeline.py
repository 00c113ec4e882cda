"""The full certificate chain for a Pfaffian flag, and a seeded search for new flags.

Stages, in order: the Pfaffian equation (against the expected cubic, when
one is shipped), the cyclic form F = f + x5^3, total isotropy of Z, Witt
bounds, smoothness of C and Y, absence of triple lines on C and absence of
lines on the dual K3 surface.  A plane in the cubic fourfold Y would meet
P(Z) in a triple line of C, so the triple-line stage also rules out planes
in Y; the bundle records this implication.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from math import gcd
from dataclasses import dataclass, field

from ..lattice import intmat as im
from ..poly.text import format_poly, parse_poly
from ..poly.wedge import WedgeElement
from .certify import BadPrime, Certificate, certify_smooth, verify_cyclic_form, verify_isotropy, witt_certificate
from .flag import NVARS, PfaffianFlag, load_appendix
from .lines import EnumerationTooLarge, dual_data, k3_lines, triple_lines
from .quadratic import find_isotropic_subspace, hyperplane_basis, q_gram, restrict_gram

BUNDLE_SCHEMA = "cyclic-cubics/bundle/1"

STAGES = ("pfaffian_equation", "cyclic_form", "isotropy", "witt", "smooth_C", "smooth_Y",
          "triple_lines", "k3_lines")

PLANE_NOTE = ("a plane in Y meets P(Z) in a line l with Pf vanishing on the plane; writing the plane "
              "as span(phi0 + phi1', l) shows that span(phi1', l) meets C in 3*l, so the absence of "
              "triple lines on C excludes planes in Y")

# default primes: rank certificates for smoothness, chart systems for the line stages
DEFAULT_PRIMES = {"smooth": 101, "triple": 13, "k3": 7}
# enumeration mode: one prime for smoothness and triple lines, F_2 for the dual K3
ENUM_PRIMES = {"smooth": 13, "triple": 13, "k3": 2}


@dataclass
class Bundle:
    verdict: bool
    stages: list = field(default_factory=list)      # [(name, Certificate)]
    failed_stage: str | None = None
    inconclusive: bool = False
    notes: list = field(default_factory=list)
    seconds: float = 0.0
    flag: PfaffianFlag | None = None
    settings: dict = field(default_factory=dict)     # mode, primes, skip
    schema: str = BUNDLE_SCHEMA

    def to_json(self) -> dict:
        return {
            "schema": self.schema,
            "verdict": self.verdict,
            "settings": self.settings,
            "flag": None if self.flag is None else self.flag.to_json(),
            "failed_stage": self.failed_stage,
            "inconclusive": self.inconclusive,
            "notes": self.notes,
            "seconds": round(self.seconds, 3),
            "stages": [{"stage": name, "certificate": cert.to_json()} for name, cert in self.stages],
        }


def pfaffian_equation_certificate(flag: PfaffianFlag) -> Certificate:
    expected = flag.expected_pfaffian
    F = flag.F
    if expected is None:
        return Certificate("pfaffian_equation", "exact", [], {"F": format_poly(F), "expected": None},
                           True, "no expected cubic supplied; the Pfaffian is reported as computed")
    diff = F - expected
    return Certificate(
        "pfaffian_equation", "exact", [], {
            "F": format_poly(F), "expected": format_poly(expected),
            "differing_monomials": [list(e) for e in sorted(diff.terms)]},
        diff.is_zero(), "exact over Q: the Pfaffian of the skew matrix equals the expected cubic")


def run_chain(flag: PfaffianFlag, mode: str = "gb", primes: dict | None = None,
              skip: tuple = (), stop_on_failure: bool = True) -> Bundle:
    """Run every stage on ``flag``; mode 'gb' (Groebner charts) or 'enum' (enumeration)."""
    if mode not in ("gb", "enum"):
        raise ValueError("mode must be 'gb' or 'enum'")
    unknown = set(skip) - set(STAGES)
    if unknown:
        raise ValueError(f"unknown stages to skip: {sorted(unknown)}")
    pr = dict(DEFAULT_PRIMES if mode == "gb" else ENUM_PRIMES)
    pr.update(primes or {})
    chart_mode = "groebner_charts" if mode == "gb" else "enumeration"
    smooth_method = "nullstellensatz_rank" if mode == "gb" else "enumeration"
    t0 = time.perf_counter()
    bundle = Bundle(verdict=True, notes=[PLANE_NOTE], flag=flag,
                    settings={"mode": mode, "primes": pr, "skip": sorted(skip)})

    def stage(name):
        if name == "pfaffian_equation":
            return pfaffian_equation_certificate(flag)
        if name == "cyclic_form":
            return verify_cyclic_form(flag.F)
        if name == "isotropy":
            return verify_isotropy(flag)
        if name == "witt":
            return witt_certificate(flag)
        if name == "smooth_C":
            return certify_smooth(flag.f, pr["smooth"], smooth_method)
        if name == "smooth_Y":
            return certify_smooth(flag.F, pr["smooth"], smooth_method)
        if name == "triple_lines":
            return triple_lines(flag.f, pr["triple"], chart_mode)
        if name == "k3_lines":
            return k3_lines(dual_data(flag), pr["k3"], chart_mode)
        raise AssertionError(name)

    for name in STAGES:
        if name in skip:
            bundle.notes.append(f"stage {name} skipped on request")
            continue
        cert = stage(name)
        bundle.stages.append((name, cert))
        if not cert.verdict:
            bundle.verdict = False
            if bundle.failed_stage is None:
                bundle.failed_stage = name
            if stop_on_failure:
                break
    bundle.seconds = time.perf_counter() - t0
    return bundle


def verify_appendix(mode: str = "gb", primes: dict | None = None, skip: tuple = (),
                    text: str | None = None) -> Bundle:
    return run_chain(load_appendix(text), mode, primes, skip)


def recheck(d: dict) -> tuple[bool, Bundle]:
    """Rebuild the flag recorded in a bundle, rerun the chain with the recorded settings
    and compare stage by stage; returns (same verdicts, fresh bundle)."""
    if not isinstance(d, dict) or d.get("schema") != BUNDLE_SCHEMA:
        raise ValueError(f"not a bundle of schema {BUNDLE_SCHEMA}")
    if d.get("flag") is None:
        raise ValueError("the bundle does not record its flag")
    flag = PfaffianFlag.from_json(d["flag"])
    old = {s["stage"]: s["certificate"] for s in d["stages"]}
    expected = old.get("pfaffian_equation", {}).get("payload", {}).get("expected")
    if expected:
        flag = PfaffianFlag(flag.phi0, flag.Z_basis, parse_poly(expected, NVARS))
    st = d["settings"]
    fresh = run_chain(flag, st["mode"], st["primes"], tuple(st["skip"]))
    new = {name: cert.verdict for name, cert in fresh.stages}
    same = ({k: bool(v["verdict"]) for k, v in old.items()} == new
            and bool(d["verdict"]) == fresh.verdict and d.get("failed_stage") == fresh.failed_stage)
    return same, fresh


# --------------------------------------------------------------------------
# search


def hyperbolic_partners(G, U: list) -> list:
    """Rational w_1..w_k with B(u_i, w_j) = delta_ij and B(w_i, w_j) = 0."""
    k = len(U)
    GU = [im.matvec(G, u) for u in U]                # rows: B(u_i, .)
    W = []
    for j in range(k):
        x = im.solve_rational(GU, [1 if i == j else 0 for i in range(k)])
        if x is None:
            raise ValueError("the isotropic vectors are not independent modulo the radical")
        W.append(x)
    Bw = [[im.bilinear(G, a, b) for b in W] for a in W]
    # w_j <- w_j - sum_k c_jk u_k with c_jk + c_kj = B(w_j, w_k)
    out = []
    for j in range(k):
        c = [Bw[j][m] if m > j else (Bw[j][j] / 2 if m == j else 0) for m in range(k)]
        out.append([W[j][a] - sum(c[m] * U[m][a] for m in range(k)) for a in range(len(W[j]))])
    return out


def _primitive(v: list) -> list:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = im.vec_gcd(w) or 1
    return [x // g for x in w]


def random_isotropic_flag(phi0: WedgeElement, seed: int, height: int = 1,
                          max_height: int = 3) -> PfaffianFlag | None:
    """A flag (phi0, Z) with Z a seeded random 5-dimensional totally isotropic subspace of
    H = ker h: a maximal isotropic U, moved by a random skew matrix A to
    span(u_i + sum_j A_ij w_j) (w a hyperbolic partner basis), then cut down to dimension 5."""
    rng = random.Random(seed)
    B = hyperplane_basis(phi0)
    GH = restrict_gram(q_gram(phi0), B)
    res = find_isotropic_subspace(GH, 6, max_height=max_height, seed=seed)
    if not res.found:
        return None
    U = [[int(x) for x in v] for v in res.basis]
    Wp = hyperbolic_partners(GH, U)
    k = len(U)
    A = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            A[i][j] = rng.randint(-height, height)
            A[j][i] = -A[i][j]
    UA = [_primitive([U[i][a] + sum(A[i][j] * Wp[j][a] for j in range(k)) for a in range(len(U[i]))])
          for i in range(k)]
    while True:
        C = [[rng.randint(-height, height) for _ in range(k)] for _ in range(5)]
        if im.rank(C) == 5:
            break
    iso = [_primitive(row) for row in im.matmul(C, UA)]                  # 5 x 14, H coordinates
    assert all(im.bilinear(GH, a, b) == 0 for a in iso for b in iso)
    Z = [[sum(c * B[m][a] for m, c in enumerate(row)) for a in range(len(B[0]))] for row in iso]
    return PfaffianFlag(phi0, tuple(WedgeElement.two_form(z) for z in Z))


def search(seed: int = 0, attempts: int = 3, mode: str = "gb", primes: dict | None = None,
           skip: tuple = (), phi0: WedgeElement | None = None) -> tuple[PfaffianFlag | None, Bundle]:
    """Try ``attempts`` seeded random flags; returns the first passing one and its bundle.

    On exhaustion returns (None, last bundle) with ``inconclusive`` set: failing the
    chain does not prove that no suitable flag exists.
    """
    if phi0 is None:
        phi0 = load_appendix().phi0
    last = Bundle(verdict=False, inconclusive=True)
    for k in range(attempts):
        flag = random_isotropic_flag(phi0, seed * 1000 + k)
        if flag is None:
            last.notes.append(f"attempt {k}: no isotropic subspace found")
            continue
        try:
            bundle = run_chain(flag, mode, primes, tuple(skip))
        except (BadPrime, EnumerationTooLarge) as exc:
            last.notes.append(f"attempt {k}: {exc}")
            continue
        bundle.notes.append(f"seed {seed}, attempt {k}")
        if bundle.verdict:
            return flag, bundle
        last = bundle
    last.verdict = False
    last.inconclusive = True
    last.notes.append(f"search exhausted after {attempts} attempts")
    return None, last
