"""Sparse multivariate polynomials over Q or a prime field F_p.

A polynomial stores a mapping ``exponent tuple -> coefficient``.  Over Q the
coefficients are :class:`fractions.Fraction` (plain ints are promoted); over
F_p they are ints in ``range(p)``.  Zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class VariableCountMismatch(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


def grevlex_key(exps: Sequence[int]) -> tuple:
    """Sort key: larger key means larger monomial in grevlex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _coerce(c, modulus):
    if modulus is None:
        return c if isinstance(c, Fraction) else Fraction(c)
    if isinstance(c, Fraction):
        if c.denominator % modulus == 0:
            raise ZeroDivisionError(f"denominator {c.denominator} not invertible mod {modulus}")
        return c.numerator * pow(c.denominator, -1, modulus) % modulus
    return c % modulus


class MultiPoly:
    __slots__ = ("nvars", "terms", "modulus")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None,
                 modulus: int | None = None):
        self.nvars = nvars
        self.modulus = modulus
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise VariableCountMismatch(f"exponent {e} has wrong length for {nvars} variables")
                c = _coerce(c, modulus)
                if c:
                    clean[e] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def _raw(cls, nvars, terms, modulus):
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p.modulus = modulus
        return p

    @classmethod
    def zero(cls, nvars, modulus=None):
        return cls._raw(nvars, {}, modulus)

    @classmethod
    def constant(cls, c, nvars, modulus=None):
        return cls(nvars, {(0,) * nvars: c}, modulus)

    @classmethod
    def variable(cls, i, nvars, modulus=None):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, modulus)

    @classmethod
    def variables(cls, nvars, modulus=None):
        return [cls.variable(i, nvars, modulus) for i in range(nvars)]

    @classmethod
    def linear_form(cls, coeffs: Sequence, modulus=None):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms, modulus)

    # -- basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return d is None or degs.pop() == d

    def coefficient(self, exps) -> object:
        zero = 0 if self.modulus is not None else Fraction(0)
        return self.terms.get(tuple(exps), zero)

    def monomials(self, order: str = "grevlex") -> list[tuple]:
        if order != "grevlex":
            raise ValueError("only grevlex is supported")
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def leading_term(self):
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def uses_variable(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if self.nvars != other.nvars:
            raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")
        if self.modulus != other.modulus:
            raise FieldMismatch(f"modulus {self.modulus} vs {other.modulus}")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(other, self.nvars, self.modulus)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        p = self.modulus
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if p is not None:
                v %= p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return MultiPoly._raw(self.nvars, t, p)

    __radd__ = __add__

    def __neg__(self):
        p = self.modulus
        if p is None:
            t = {e: -c for e, c in self.terms.items()}
        else:
            t = {e: (-c) % p for e, c in self.terms.items()}
        return MultiPoly._raw(self.nvars, t, p)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = _coerce(c, self.modulus)
        if not c:
            return MultiPoly.zero(self.nvars, self.modulus)
        p = self.modulus
        if p is None:
            t = {e: v * c for e, v in self.terms.items()}
        else:
            t = {e: v * c % p for e, v in self.terms.items()}
        return MultiPoly._raw(self.nvars, t, p)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        p = self.modulus
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        if p is not None:
            t = {e: c % p for e, c in t.items() if c % p}
        else:
            t = {e: c for e, c in t.items() if c}
        return MultiPoly._raw(self.nvars, t, p)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.nvars, self.modulus)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return (self.nvars == other.nvars and self.modulus == other.modulus
                    and self.terms == other.terms)
        if self.modulus is None or isinstance(other, int):
            return self == self._lift(other)
        return NotImplemented

    __hash__ = None

    # -- calculus and substitution ------------------------------------------
    def partial(self, i: int) -> "MultiPoly":
        p = self.modulus
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                v = c * e[i]
                if p is not None:
                    v %= p
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    t[tuple(ne)] = v
        return MultiPoly._raw(self.nvars, t, p)

    partial_derivative = partial

    def gradient(self) -> list["MultiPoly"]:
        return [self.partial(i) for i in range(self.nvars)]

    def eval(self, point: Sequence):
        if len(point) != self.nvars:
            raise VariableCountMismatch("point has wrong dimension")
        p = self.modulus
        total = 0
        for e, c in self.terms.items():
            v = c
            for xi, k in zip(point, e):
                if k:
                    v = v * xi ** k
                    if p is not None:
                        v %= p
            total += v
        if p is not None:
            return total % p
        return total

    def compose(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``x_i -> images[i]`` (all images share a ring)."""
        if len(images) != self.nvars:
            raise VariableCountMismatch("need one image per variable")
        ref = images[0]
        result = MultiPoly.zero(ref.nvars, ref.modulus)
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        for e, c in self.terms.items():
            term = MultiPoly.constant(c, ref.nvars, ref.modulus)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def substitute_linear(self, A: Sequence[Sequence]) -> "MultiPoly":
        """Apply the linear change ``x -> A x``: x_i becomes sum_j A[i][j] x_j."""
        if len(A) != self.nvars:
            raise VariableCountMismatch("change of variables has wrong size")
        m = len(A[0])
        images = [MultiPoly.linear_form(row, self.modulus) if len(row) == m else None for row in A]
        if any(im is None for im in images):
            raise VariableCountMismatch("ragged change-of-variables matrix")
        return self.compose(images)

    def reduce_mod(self, p: int) -> "MultiPoly":
        if self.modulus is not None:
            if self.modulus != p:
                raise FieldMismatch("already reduced modulo a different prime")
            return self
        return MultiPoly(self.nvars, self.terms, p)

    def with_nvars(self, n: int, positions: Sequence[int] | None = None) -> "MultiPoly":
        """Re-embed into ``n`` variables; variable i goes to ``positions[i]``."""
        positions = list(positions) if positions is not None else list(range(self.nvars))
        t = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                ne[positions[i]] += k
            t[tuple(ne)] = c
        return MultiPoly._raw(n, t, self.modulus)

    def content_denominators(self) -> list[int]:
        if self.modulus is not None:
            return []
        return sorted({c.denominator for c in self.terms.values() if c.denominator != 1})

    # -- display ----------------------------------------------------------
    def __str__(self):
        from .text import format_poly
        return format_poly(self)

    def __repr__(self):
        field = "Q" if self.modulus is None else f"F_{self.modulus}"
        return f"MultiPoly[{field}]({self})"


def poly_sum(polys: Iterable[MultiPoly], nvars: int, modulus=None) -> MultiPoly:
    total = MultiPoly.zero(nvars, modulus)
    for f in polys:
        total = total + f
    return total
