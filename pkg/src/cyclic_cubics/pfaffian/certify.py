"""Certificates for the cyclic form, isotropy, Witt bounds and smoothness.

Every certificate records the exact statement it establishes in
``soundness_note``.  Mod-p certificates that prove emptiness over the
algebraic closure of F_p transfer to characteristic 0: the loci involved
are closed subschemes of projective (hence proper) schemes over Z, so a
point over an algebraic closure of Q would specialize to a point over an
algebraic closure of F_p.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from ..poly.multipoly import MultiPoly
from ..poly.text import format_poly
from ..poly.wedge import h_form, q_form, q_polar
from . import modp
from .flag import PfaffianFlag
from .quadratic import hyperplane_basis, q_gram, restrict_gram, witt_bounds

SCHEMA = "cyclic-cubics/certificate/1"

TRANSFER_NOTE = (
    "closed subscheme of a projective scheme over Z, proper over Spec Z: a point over an "
    "algebraic closure of Q would reduce to a point over an algebraic closure of F_p, so "
    "emptiness mod p implies emptiness in characteristic 0")


class BadPrime(ValueError):
    pass


@dataclass
class Certificate:
    kind: str
    method: str
    primes: list
    payload: dict
    verdict: bool
    soundness_note: str
    schema: str = field(default=SCHEMA)

    def to_json(self) -> dict:
        return _jsonable(asdict(self))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        return cls(d["kind"], d["method"], list(d["primes"]), d["payload"], bool(d["verdict"]),
                   d["soundness_note"], d.get("schema", SCHEMA))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, MultiPoly):
        return format_poly(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


# --------------------------------------------------------------------------
# prime checks


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_prime(F: MultiPoly, p: int) -> MultiPoly:
    """Reduce F mod p after checking the prime is usable; returns the reduction."""
    if not _is_prime(p):
        raise BadPrime(f"{p} is not prime")
    if p == 3 and F.is_homogeneous(3):
        raise BadPrime("p = 3 divides the degree: Euler's relation fails for cubics")
    if p == 2:
        raise BadPrime("p = 2 is not supported")
    if F.modulus is not None:
        if F.modulus != p:
            raise BadPrime(f"polynomial is defined mod {F.modulus}, not mod {p}")
        return F
    for d in F.content_denominators():
        if d % p == 0:
            raise BadPrime(f"{p} divides a coefficient denominator")
    Fp = F.reduce_mod(p)
    if Fp.is_zero() or Fp.degree() != F.degree():
        raise BadPrime(f"reduction mod {p} drops the degree")
    return Fp


# --------------------------------------------------------------------------
# cyclic form, isotropy, Witt bounds


def verify_cyclic_form(F: MultiPoly, var: int | None = None) -> Certificate:
    """F = f + x^3 with f free of x, where x is the last variable by default."""
    n = F.nvars
    var = n - 1 if var is None else var
    cube = tuple(3 if i == var else 0 for i in range(n))
    rest = {e: c for e, c in F.terms.items() if e != cube}
    mixed = [e for e in rest if e[var]]
    ok = F.is_homogeneous(3) and F.coefficient(cube) == 1 and not mixed
    f = MultiPoly(n - 1, {e[:var] + e[var + 1:]: c for e, c in rest.items()}) if ok else None
    return Certificate(
        "cyclic_form", "exact", [], {
            "F": format_poly(F), "variable": f"x{var}",
            "mixed_monomials": [list(e) for e in mixed],
            "f": format_poly(f) if f is not None else None,
        }, ok,
        f"exact over Q: F - x{var}^3 contains no monomial involving x{var}, so F = f + x{var}^3")


def verify_isotropy(flag: PfaffianFlag, Z=None) -> Certificate:
    """h vanishes on Z and q with its polar form vanishes identically on Z x Z."""
    Z = list(flag.Z_basis if Z is None else Z)
    phi0 = flag.phi0
    h_vals = [h_form(phi0, z) for z in Z]
    q_vals = [q_form(phi0, z) for z in Z]
    polar = [[q_polar(phi0, a, b) for b in Z] for a in Z]
    ok = all(v == 0 for v in h_vals) and all(v == 0 for v in q_vals) and \
        all(v == 0 for row in polar for v in row)
    return Certificate(
        "isotropy", "exact", [], {"dim": len(Z), "h": h_vals, "q": q_vals, "polar": polar}, ok,
        "exact over Q: Z lies in H = ker h and is totally isotropic for q (q and its polar form "
        "vanish on a basis)")


def witt_certificate(flag: PfaffianFlag, max_height: int = 3) -> Certificate:
    G = q_gram(flag.phi0)
    full = witt_bounds(G, max_height)
    B = hyperplane_basis(flag.phi0)
    GH = restrict_gram(G, B)
    hyp = witt_bounds(GH, max_height)
    ok = full["exact"] and hyp["exact"]
    return Certificate(
        "witt_bounds", "exact", [], {"q": full, "q_H": hyp, "H_basis": B}, ok,
        "exact over Q: explicit totally isotropic subspaces give the lower bounds; the real "
        "signature gives min(n+, n-) as upper bound")


# --------------------------------------------------------------------------
# smoothness


def macaulay_matrix(polys: list, degree: int, p: int):
    """Rows: coefficient vectors of m * g over all monomials m with deg(m g) = degree."""
    n = polys[0].nvars
    cols = modp.monomials_of_degree(n, degree)
    col_index = {e: i for i, e in enumerate(cols)}
    rows = []
    for g in polys:
        dg = g.degree()
        if dg > degree or g.is_zero():
            continue
        for m in modp.monomials_of_degree(n, degree - dg):
            row = np.zeros(len(cols), dtype=np.int64)
            for e, c in g.terms.items():
                row[col_index[tuple(a + b for a, b in zip(e, m))]] = int(c) % p
            rows.append(row)
    return (np.array(rows, dtype=np.int64) if rows else np.zeros((0, len(cols)), dtype=np.int64)), cols


def certify_smooth(F: MultiPoly, p: int = 101, method: str = "nullstellensatz_rank") -> Certificate:
    Fp = check_prime(F, p)
    n = F.nvars
    d = F.degree()
    grads = [g for g in Fp.gradient()]
    if method == "nullstellensatz_rank":
        # n forms of degree d-1 without common projective zero generate every monomial
        # of degree n(d-2)+1 (Macaulay bound); conversely full rank leaves no common zero
        D = n * (d - 2) + 1
        A, cols = macaulay_matrix(grads, D, p)
        r = modp.rank_mod_p(A, p)
        target = comb(n + D - 1, D)
        ok = r == target
        note = (f"the partial derivatives of F mod {p} have no common zero in projective space over "
                f"an algebraic closure of F_{p} (their degree-{D} span is everything), so the "
                f"hypersurface is smooth in characteristic {p}; singular locus is a " + TRANSFER_NOTE)
        payload = {"degree": D, "rows": int(A.shape[0]), "columns": len(cols), "rank": r,
                   "target_rank": target}
    elif method == "enumeration":
        pts = modp.projective_points(n, p)
        zero = np.ones(len(pts), dtype=bool)
        for g in grads:
            zero &= modp.evaluate_mod_p(g, pts, p) == 0
        sing = pts[zero]
        ok = len(sing) == 0
        note = (f"weaker claim: no F_{p}-rational point of projective space is a common zero of the "
                f"partial derivatives (singular points over extensions are not excluded)")
        payload = {"points_scanned": int(len(pts)), "singular_points": sing.tolist()[:20],
                   "singular_count": int(len(sing))}
    else:
        raise ValueError(f"unknown method {method!r}")
    payload["F"] = format_poly(F)
    return Certificate("smoothness", method, [p], payload, ok, note)
