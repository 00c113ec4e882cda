"""The forms h and q on 2-forms, isotropic subspace search and Witt-index bounds.

A quadratic form is represented by its rational Gram matrix G of the polar
form, q(x) = x^T G x / 2; isotropy questions do not depend on the factor.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from ..lattice import intmat as im
from ..poly.wedge import PAIRS, WedgeElement, h_form, q_polar

UNIT_FORMS = tuple(WedgeElement.two_form([int(k == a) for k in range(len(PAIRS))])
                   for a in range(len(PAIRS)))


def q_gram(phi0: WedgeElement) -> list:
    """Gram matrix of the polar form B(phi, psi) = phi0^phi^psi in the basis e_ij."""
    return [[q_polar(phi0, a, b) for b in UNIT_FORMS] for a in UNIT_FORMS]


def h_vector(phi0: WedgeElement) -> list:
    return [h_form(phi0, e) for e in UNIT_FORMS]


def hyperplane_basis(phi0: WedgeElement) -> list:
    """Integral basis (rows, coordinates in e_ij) of H = ker h."""
    h = h_vector(phi0)
    den = 1
    for c in h:
        den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
    return im.integer_kernel([[int(c * den) for c in h]])


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def restrict_gram(G, B) -> list:
    """Gram of the form restricted to the row span of B."""
    return im.matmul(im.matmul(B, G), im.transpose(B))


def form_value(G, x):
    return im.bilinear(G, x, x)


def signature_of(G) -> tuple:
    d = im.congruence_diagonalize(G)
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0), sum(1 for x in d if x == 0)


# --------------------------------------------------------------------------
# isotropic subspaces


@dataclass
class IsotropicResult:
    basis: list | None           # rows, coordinates in the input basis
    conclusive: bool
    reason: str

    @property
    def found(self) -> bool:
        return self.basis is not None


def _is_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _sqrt(x: Fraction) -> Fraction:
    return Fraction(isqrt(x.numerator), isqrt(x.denominator))


def _primitive(v) -> list:
    v = [Fraction(c) for c in v]
    den = 1
    for c in v:
        den = den * c.denominator // _gcd(den, c.denominator)
    w = [int(c * den) for c in v]
    g = 0
    for c in w:
        g = _gcd(g, abs(c))
    return [c // g for c in w] if g else w


def _isotropic_vector(G, max_height: int):
    """A nonzero rational x with x^T G x = 0, searched by increasing complexity."""
    n = len(G)
    for i in range(n):
        if G[i][i] == 0:
            return [int(k == i) for k in range(n)]
    # two-term vectors: a^2 G_ii + 2ab G_ij + b^2 G_jj = 0 has a rational root iff disc is a square
    for i, j in itertools.combinations(range(n), 2):
        disc = Fraction(G[i][j]) ** 2 - Fraction(G[i][i]) * Fraction(G[j][j])
        if _is_square(disc):
            a = (-Fraction(G[i][j]) + _sqrt(disc)) / Fraction(G[i][i])
            x = [Fraction(0)] * n
            x[i], x[j] = a, Fraction(1)
            return _primitive(x)
    for h in range(1, max_height + 1):
        rng = [c for c in range(-h, h + 1) if c]
        for support in itertools.combinations(range(n), 3):
            for coeffs in itertools.product(rng, repeat=3):
                if max(map(abs, coeffs)) != h or coeffs[0] < 0:
                    continue
                x = [0] * n
                for k, c in zip(support, coeffs):
                    x[k] = c
                if form_value(G, x) == 0:
                    return x
    return None


def _random_unimodular(n: int, rng: random.Random, steps: int = None) -> list:
    U = im.identity(n)
    for _ in range(steps or 3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
    return U


def find_isotropic_subspace(G, target_dim: int, max_height: int = 3, restarts: int = 4,
                            seed: int = 0) -> IsotropicResult:
    """Totally isotropic subspace of dimension target_dim by Witt decomposition.

    Each step finds an isotropic v in the current nondegenerate space,
    completes it to a hyperbolic pair (v, w) and continues in the
    orthogonal complement of that plane; by Witt's theorem this greedy
    procedure can reach any dimension up to the Witt index.
    """
    G = [[Fraction(x) for x in row] for row in G]
    n = len(G)
    if target_dim == 0:
        return IsotropicResult([], True, "zero subspace")
    n_plus, n_minus, n_zero = signature_of(G)
    if n_zero:
        raise ValueError("find_isotropic_subspace expects a nondegenerate form")
    if target_dim > min(n_plus, n_minus):
        return IsotropicResult(None, True,
                               f"signature ({n_plus},{n_minus}) bounds the Witt index by "
                               f"{min(n_plus, n_minus)}")
    rng = random.Random(seed)
    found: list = []                      # isotropic vectors, ambient coordinates
    space = im.identity(n)                # rows: basis of the current nondegenerate space
    attempt = 0
    while len(found) < target_dim:
        Gs = restrict_gram(G, space)
        x = _isotropic_vector(Gs, max_height)
        if x is None:
            if attempt >= restarts:
                return IsotropicResult(None, False,
                                       f"no isotropic vector found after {len(found)} steps")
            attempt += 1
            U = _random_unimodular(len(space), rng)
            space = im.matmul(U, space)
            continue
        v = [sum(Fraction(c) * row[k] for c, row in zip(x, space)) for k in range(n)]
        v = _primitive(v)
        Gv = im.matvec(G, v)
        # w with B(v, w) != 0 inside the current space
        w = next(row for row in space if im.dot(Gv, row) != 0)
        found.append(v)
        space = [_primitive(r) for r in _intersect_complement(G, space, [v, w])]
    basis = found
    assert all(im.bilinear(G, a, b) == 0 for a in basis for b in basis)
    return IsotropicResult(basis, True, "verified totally isotropic basis")


def _intersect_complement(G, space, plane):
    """Basis of {x in span(space) : B(x, p) = 0 for p in plane}."""
    A = [[im.dot(im.matvec(G, p), row) for row in space] for p in plane]   # conditions on coords
    R, piv = im.rref(A)
    m = len(space)
    free = [c for c in range(m) if c not in piv]
    out = []
    for fcol in free:
        y = [Fraction(0)] * m
        y[fcol] = Fraction(1)
        for r, c in enumerate(piv):
            y[c] = -R[r][fcol]
        out.append([sum(y[i] * space[i][k] for i in range(m)) for k in range(len(G))])
    return out


def witt_bounds(G, max_height: int = 3) -> dict:
    """Lower bound from an explicit isotropic subspace, upper bound from the real signature."""
    n_plus, n_minus, n_zero = signature_of(G)
    if n_zero:
        raise ValueError("witt_bounds expects a nondegenerate form")
    upper = min(n_plus, n_minus)
    res = find_isotropic_subspace(G, upper, max_height=max_height)
    lower = len(res.basis) if res.found else None
    if lower is None:
        # fall back to the largest dimension actually reached
        lower = 0
        for d in range(upper - 1, 0, -1):
            r = find_isotropic_subspace(G, d, max_height=max_height)
            if r.found:
                lower, res = d, r
                break
    return {
        "signature": (n_plus, n_minus),
        "lower": lower,
        "upper": upper,
        "exact": lower == upper,
        "witness": res.basis if res.found else [],
    }
