"""Exterior algebra of a fixed 6-dimensional space, skew forms and Pfaffians.

Basis vectors are e_0, ..., e_5 (0-based); e_I for a sorted index tuple I
spans the degree-|I| part.  The orientation identifies e_0^...^e_5 with 1,
so the "top" coefficient of a 6-form is a scalar (or polynomial).

Coefficients may be ints, Fractions, prime-field ints or :class:`MultiPoly`
instances; they only need ``+``, ``*`` and a zero test.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .multipoly import MultiPoly
from .text import format_poly, parse_poly

DIM = 6
PAIRS = tuple(itertools.combinations(range(DIM), 2))     # the 15 index pairs i < j


class DegreeOverflow(ValueError):
    pass


class NotAntisymmetric(ValueError):
    pass


class NotNormalized(ValueError):
    pass


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, MultiPoly) else c == 0


def _merge_sign(I: tuple, J: tuple) -> int:
    """Sign of the shuffle putting I + J (disjoint, each sorted) in increasing order."""
    inversions = sum(1 for a in I for b in J if a > b)
    return -1 if inversions % 2 else 1


class WedgeElement:
    """Homogeneous element of degree k: mapping sorted index tuple -> coefficient."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: dict | None = None):
        if not 0 <= degree <= DIM:
            raise DegreeOverflow(f"degree {degree} outside 0..{DIM}")
        self.degree = degree
        clean = {}
        for I, c in (coeffs or {}).items():
            I = tuple(I)
            if len(I) != degree or len(set(I)) != degree or not all(0 <= i < DIM for i in I):
                raise ValueError(f"bad index set {I} for degree {degree}")
            sI = tuple(sorted(I))
            # permutation sign of I -> sorted(I)
            sign = 1
            lst = list(I)
            for a in range(len(lst)):
                for b in range(a + 1, len(lst)):
                    if lst[a] > lst[b]:
                        sign = -sign
            val = c if sign == 1 else -c
            if sI in clean:
                val = clean[sI] + val
            clean[sI] = val
        self.coeffs = {I: c for I, c in clean.items() if not _is_zero(c)}

    @classmethod
    def basis(cls, *indices) -> "WedgeElement":
        return cls(len(indices), {tuple(indices): 1})

    @classmethod
    def two_form(cls, upper: Sequence) -> "WedgeElement":
        """2-form sum_{i<j} c_ij e_i^e_j from the 15 upper-triangular entries."""
        return cls(2, dict(zip(PAIRS, upper)))

    @classmethod
    def from_matrix(cls, M) -> "WedgeElement":
        return cls.two_form([M[i][j] for i, j in PAIRS])

    def __add__(self, other: "WedgeElement") -> "WedgeElement":
        if other.degree != self.degree:
            raise ValueError("adding forms of different degree")
        out = dict(self.coeffs)
        for I, c in other.coeffs.items():
            out[I] = out[I] + c if I in out else c
        return WedgeElement(self.degree, out)

    def __neg__(self):
        return WedgeElement(self.degree, {I: -c for I, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "WedgeElement":
        return WedgeElement(self.degree, {I: c * s for I, c in self.coeffs.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def __xor__(self, other: "WedgeElement") -> "WedgeElement":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, WedgeElement) or other.degree != self.degree:
            return NotImplemented
        return (self - other).coeffs == {}

    __hash__ = None

    def coefficient(self, *I):
        c = self.coeffs.get(tuple(sorted(I)), 0)
        return c if _is_zero(c) or _perm_sign(I) == 1 else -c

    def top(self):
        """The scalar x with self = x e_0^...^e_5 (requires degree 6)."""
        if self.degree != DIM:
            raise ValueError("top coefficient of a form that is not of top degree")
        return self.coeffs.get(tuple(range(DIM)), 0)

    def map_coefficients(self, f) -> "WedgeElement":
        return WedgeElement(self.degree, {I: f(c) for I, c in self.coeffs.items()})

    def upper(self) -> list:
        """For a 2-form: the 15 coefficients at (i, j), i < j."""
        if self.degree != 2:
            raise ValueError("upper() is only defined for 2-forms")
        return [self.coeffs.get(P, 0) for P in PAIRS]

    def __repr__(self):
        body = " + ".join(f"({c})e{''.join(map(str, I))}" for I, c in sorted(self.coeffs.items()))
        return f"WedgeElement[{self.degree}]({body or '0'})"


def _perm_sign(I: Sequence[int]) -> int:
    s = 1
    for a in range(len(I)):
        for b in range(a + 1, len(I)):
            if I[a] > I[b]:
                s = -s
    return s


def wedge(a: WedgeElement, b: WedgeElement) -> WedgeElement:
    if a.degree + b.degree > DIM:
        raise DegreeOverflow(f"degree {a.degree} + {b.degree} exceeds {DIM}")
    out: dict = {}
    for I, c in a.coeffs.items():
        sI = set(I)
        for J, d in b.coeffs.items():
            if sI.intersection(J):
                continue
            K = tuple(sorted(I + J))
            term = c * d if _merge_sign(I, J) == 1 else -(c * d)
            out[K] = out[K] + term if K in out else term
    return WedgeElement(a.degree + b.degree, out)


# --------------------------------------------------------------------------
# skew forms and Pfaffians


def _check_antisymmetric(M) -> None:
    n = len(M)
    if any(len(r) != n for r in M):
        raise NotAntisymmetric("matrix is not square")
    for i in range(n):
        if not _is_zero(M[i][i]):
            raise NotAntisymmetric(f"nonzero diagonal entry at {i}")
        for j in range(i + 1, n):
            if not _is_zero(M[i][j] + M[j][i]):
                raise NotAntisymmetric(f"entries ({i},{j}) and ({j},{i}) are not opposite")


def _pf(M, idx: tuple):
    if not idx:
        return 1
    i0 = idx[0]
    total = 0
    for k in range(1, len(idx)):
        a = M[i0][idx[k]]
        if _is_zero(a):
            continue
        rest = idx[1:k] + idx[k + 1:]
        term = a * _pf(M, rest)
        # expansion along the first row: sign (-1)^(k+1) for the k-th remaining column
        total = total + term if k % 2 == 1 else total - term
    return total


def pfaffian(M):
    """Pfaffian of an even-size antisymmetric matrix by first-row expansion.

    Accepts a :class:`SkewForm` or any square nested sequence of ring
    elements.  Normalization: Pf of the block matrix with [[0, 1], [-1, 0]]
    blocks on the diagonal is 1.
    """
    if isinstance(M, SkewForm):
        M = M.matrix
    _check_antisymmetric(M)
    n = len(M)
    if n % 2:
        return 0 * M[0][0] if n else 1
    return _pf(M, tuple(range(n)))


@dataclass(frozen=True)
class SkewForm:
    """6x6 antisymmetric matrix of polynomials (entries at i < j define it)."""
    nvars: int
    upper: tuple                # 15 MultiPoly entries at PAIRS
    modulus: int | None = None

    def __post_init__(self):
        if len(self.upper) != len(PAIRS):
            raise ValueError(f"a skew form on a {DIM}-space has {len(PAIRS)} entries")
        ups = []
        for u in self.upper:
            if not isinstance(u, MultiPoly):
                u = MultiPoly.constant(u, self.nvars, self.modulus)
            if u.nvars != self.nvars:
                raise ValueError("entries have different variable counts")
            ups.append(u)
        object.__setattr__(self, "upper", tuple(ups))

    @classmethod
    def from_matrix(cls, M, nvars: int | None = None, modulus=None) -> "SkewForm":
        _check_antisymmetric(M)
        if nvars is None:
            nvars = next(x.nvars for r in M for x in r if isinstance(x, MultiPoly))
        return cls(nvars, tuple(M[i][j] for i, j in PAIRS), modulus)

    @property
    def matrix(self) -> list:
        z = MultiPoly.zero(self.nvars, self.modulus)
        M = [[z] * DIM for _ in range(DIM)]
        for (i, j), u in zip(PAIRS, self.upper):
            M[i][j] = u
            M[j][i] = -u
        return M

    def to_wedge(self) -> WedgeElement:
        return WedgeElement.two_form(self.upper)

    def coefficient_forms(self) -> list:
        """The constant 2-forms Phi_k with M = sum_k x_k Phi_k (entries must be linear)."""
        out = []
        for k in range(self.nvars):
            e = tuple(int(i == k) for i in range(self.nvars))
            out.append(WedgeElement.two_form([u.coefficient(e) for u in self.upper]))
        return out

    def to_json(self) -> dict:
        return {"nvars": self.nvars, "upper": [format_poly(u) for u in self.upper]}

    @classmethod
    def from_json(cls, d, modulus=None) -> "SkewForm":
        if isinstance(d, str):
            d = json.loads(d)
        n = d["nvars"]
        return cls(n, tuple(parse_poly(s, n, modulus) for s in d["upper"]), modulus)


# --------------------------------------------------------------------------
# the decomposition Pf(t phi0 + phi) = t^3 + t^2 h(phi) + t q(phi) + Pf(phi)


def pf_form(phi: WedgeElement):
    """Pf of a 2-form through the cube: phi^3 = 6 Pf(phi) vol."""
    cube = wedge(wedge(phi, phi), phi)
    return _div(cube.top(), 6)


def _div(c, n: int):
    if isinstance(c, MultiPoly):
        return c * Fraction(1, n) if c.modulus is None else c * pow(n, -1, c.modulus)
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c, n)
    return c / n


def h_form(phi0: WedgeElement, phi: WedgeElement):
    return _div(wedge(wedge(phi0, phi0), phi).top(), 2)


def q_form(phi0: WedgeElement, phi: WedgeElement):
    return _div(wedge(wedge(phi0, phi), phi).top(), 2)


def q_polar(phi0: WedgeElement, phi: WedgeElement, psi: WedgeElement):
    """Polar form B(phi, psi) = q(phi + psi) - q(phi) - q(psi) = phi0^phi^psi."""
    return wedge(wedge(phi0, phi), psi).top()


def pfaffian_decomposition(phi0: WedgeElement, phi: WedgeElement):
    """(h(phi), q(phi), Pf(phi)) relative to phi0, which must satisfy Pf(phi0) = 1."""
    if pf_form(phi0) != 1:
        raise NotNormalized(f"Pf(phi0) = {pf_form(phi0)}, expected 1")
    return h_form(phi0, phi), q_form(phi0, phi), pf_form(phi)


def decomposition_identity_holds(phi0: WedgeElement, phi: WedgeElement) -> bool:
    """Check Pf(t phi0 + phi) = t^3 + t^2 h + t q + Pf as a polynomial identity in t."""
    h, q, pf = pfaffian_decomposition(phi0, phi)
    sample = next((c for c in list(phi.coeffs.values()) + list(phi0.coeffs.values())
                   if isinstance(c, MultiPoly)), None)
    n = sample.nvars if sample is not None else 0
    mod = sample.modulus if sample is not None else None

    def lift(c):
        if isinstance(c, MultiPoly):
            return c.with_nvars(n + 1)
        return MultiPoly.constant(c, n + 1, mod)

    t = MultiPoly.variable(n, n + 1, mod)
    M = (phi0.map_coefficients(lambda c: lift(c) * t) + phi.map_coefficients(lift))
    lhs = pfaffian(SkewForm(n + 1, tuple(M.upper()), mod))
    rhs = t ** 3 + t * t * lift(h) + t * lift(q) + lift(pf)
    return lhs == rhs
