"""The fields F_p and F_{p^2} and small dense linear algebra over them.

F_{p^2} = F_p[r] / (r^2 - n) with n the least quadratic non-residue mod p.
Elements of F_p are the elements with vanishing r-part.
"""

from __future__ import annotations

from .certify import _is_prime


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a mod an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if _legendre(a, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


class Fp2:
    """The field with p^2 elements (p an odd prime)."""

    def __init__(self, p: int):
        if p == 2 or not _is_prime(p):
            raise ValueError(f"{p} is not an odd prime")
        self.p = p
        n = 2
        while _legendre(n, p) != -1:
            n += 1
        self.n = n

    def __call__(self, a: int = 0, b: int = 0) -> "Fp2Elt":
        return Fp2Elt(self, a % self.p, b % self.p)

    def __eq__(self, other):
        return isinstance(other, Fp2) and other.p == self.p

    def __hash__(self):
        return hash(("Fp2", self.p))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def sqrt(self, x: "Fp2Elt") -> "Fp2Elt":
        """Square root of an element of the prime field (always exists in F_{p^2})."""
        if x.b:
            raise ValueError("square roots are only provided for prime-field elements")
        r = sqrt_mod(x.a, self.p)
        if r is not None:
            return self(r)
        # x = n * y with y a square: sqrt(x) = sqrt(y) * r
        y = x.a * pow(self.n, -1, self.p) % self.p
        return self(0, sqrt_mod(y, self.p))

    def cube_root_of_unity(self) -> "Fp2Elt | None":
        """The least primitive cube root of unity in F_p, if p = 1 mod 3."""
        p = self.p
        if p % 3 != 1:
            return None
        for x in range(2, p):
            if pow(x, 3, p) == 1:
                return self(x)
        return None


class Fp2Elt:
    __slots__ = ("F", "a", "b")

    def __init__(self, F: Fp2, a: int, b: int):
        self.F = F
        self.a = a
        self.b = b

    def _lift(self, other):
        if isinstance(other, Fp2Elt):
            return other
        return self.F(int(other))

    def __add__(self, other):
        o = self._lift(other)
        p = self.F.p
        return Fp2Elt(self.F, (self.a + o.a) % p, (self.b + o.b) % p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        p = self.F.p
        return Fp2Elt(self.F, (self.a - o.a) % p, (self.b - o.b) % p)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        p = self.F.p
        return Fp2Elt(self.F, -self.a % p, -self.b % p)

    def __mul__(self, other):
        o = self._lift(other)
        p = self.F.p
        return Fp2Elt(self.F, (self.a * o.a + self.F.n * self.b * o.b) % p,
                      (self.a * o.b + self.b * o.a) % p)

    __rmul__ = __mul__

    def norm(self) -> int:
        p = self.F.p
        return (self.a * self.a - self.F.n * self.b * self.b) % p

    def inverse(self):
        N = self.norm()
        if N == 0:
            raise ZeroDivisionError("inverse of zero")
        inv = pow(N, -1, self.F.p)
        p = self.F.p
        return Fp2Elt(self.F, self.a * inv % p, -self.b * inv % p)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def frobenius(self):
        return Fp2Elt(self.F, self.a, -self.b % self.F.p)

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.F(other)
        return isinstance(other, Fp2Elt) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def in_prime_field(self) -> bool:
        return self.b == 0

    def key(self) -> tuple:
        return (self.a, self.b)

    def __repr__(self):
        return f"{self.a}" if not self.b else f"{self.a}+{self.b}r"


# --------------------------------------------------------------------------
# linear algebra on lists of rows


def rref(rows: list) -> tuple[list, list]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    piv = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if M[i][c]), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], piv


def rank(rows: list) -> int:
    return len(rref(rows)[1])


def kernel(rows: list, ncols: int, F: Fp2) -> list:
    """Basis (as rows) of {x : A x = 0}."""
    R, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [F.zero] * ncols
        x[f] = F.one
        for i, c in enumerate(piv):
            x[c] = -R[i][f]
        basis.append(x)
    return basis


def canonical_span(rows: list) -> tuple:
    """Hashable canonical form (RREF) of the row span."""
    R, _ = rref(rows)
    return tuple(tuple(x.key() for x in r) for r in R)


def mat_vec(M: list, v: list) -> list:
    out = []
    for row in M:
        s = v[0].F.zero
        for a, b in zip(row, v):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def bilinear(u: list, M: list, v: list):
    return sum((a * b for a, b in zip(u, mat_vec(M, v))), u[0].F.zero)
