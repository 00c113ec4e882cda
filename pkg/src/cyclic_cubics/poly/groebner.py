"""Groebner bases over F_p in grevlex order.

Two engines share the monomial packing and pair bookkeeping below: the
classical Buchberger loop (``method="buchberger"``) and the matrix-based
engine of :mod:`.f4` (``method="f4"``, the default).

Monomials are packed into single Python ints so that comparison, product,
quotient and divisibility are a few integer operations.  For ``n`` variables
with field width ``W`` bits the key of ``x^e`` is::

    key = (deg << W*n) | (MASK - E),   E = sum(e_i << W*i)

Integer order on keys is grevlex: higher degree first, then the smaller
exponent in the last variable, and so on.  Products are ``k1 + k2 - MASK``.
The top bit of every field is a guard, which keeps exponents below
``2**(W-1)`` and makes fieldwise ``<=`` a single subtraction.

Pair handling uses the Gebauer-Moeller installation of Buchberger's
criteria (coprime leading monomials; chain criterion) and the normal
selection strategy, ties broken by sugar degree.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .multipoly import MultiPoly

_WIDTH = 8


class _Ring:
    __slots__ = ("n", "p", "shift", "mask", "guard", "low", "fieldmask")

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.shift = _WIDTH * n
        self.mask = (1 << self.shift) - 1
        self.guard = sum(1 << (_WIDTH * i + _WIDTH - 1) for i in range(n))
        self.low = sum(1 << (_WIDTH * i) for i in range(n))
        self.fieldmask = (1 << _WIDTH) - 1

    def pack(self, exps) -> int:
        E = 0
        for i, e in enumerate(exps):
            if e >= 1 << (_WIDTH - 1):
                raise OverflowError("exponent too large for packed monomials")
            E |= e << (_WIDTH * i)
        return (sum(exps) << self.shift) | (self.mask - E)

    def unpack(self, key: int) -> tuple:
        E = self.mask - (key & self.mask)
        f = self.fieldmask
        return tuple((E >> (_WIDTH * i)) & f for i in range(self.n))

    def exps_field(self, key: int) -> int:
        return self.mask - (key & self.mask)

    def divides(self, E_small: int, E_big: int) -> bool:
        g = self.guard
        return ((E_big | g) - E_small) & g == g

    def lcm(self, k1: int, k2: int) -> int:
        E1 = self.mask - (k1 & self.mask)
        E2 = self.mask - (k2 & self.mask)
        g = self.guard
        ge = ((E1 | g) - E2) & g          # guard bit set where e1 >= e2
        sel = (ge >> (_WIDTH - 1)) * self.fieldmask
        E = (E1 & sel) | (E2 & ~sel & self.mask)
        deg = 0
        f = self.fieldmask
        t = E
        while t:
            deg += t & f
            t >>= _WIDTH
        return (deg << self.shift) | (self.mask - E)

    def degree(self, key: int) -> int:
        return key >> self.shift


@dataclass
class _Poly:
    """Monic polynomial: terms sorted by decreasing key, leading coeff 1."""
    keys: list
    coeffs: list
    sugar: int
    E: int = field(default=0)

    @property
    def lm(self) -> int:
        return self.keys[0]


@dataclass
class GroebnerStats:
    pairs_considered: int = 0
    pairs_skipped: int = 0
    reductions_to_zero: int = 0
    basis_size: int = 0
    max_degree: int = 0


def _to_internal(f: MultiPoly, R: _Ring) -> dict:
    return {R.pack(e): c % R.p for e, c in f.terms.items() if c % R.p}


def _from_internal(d, R: _Ring) -> MultiPoly:
    return MultiPoly._raw(R.n, {R.unpack(k): c for k, c in d.items()}, R.p)


def _make_monic(d: dict, R: _Ring, sugar: int) -> _Poly:
    keys = sorted(d, reverse=True)
    inv = pow(d[keys[0]], -1, R.p)
    p = R.p
    coeffs = [d[k] * inv % p for k in keys]
    return _Poly(keys, coeffs, sugar, R.exps_field(keys[0]))


def _find_reducer(E: int, basis: list, R: _Ring):
    g = R.guard
    for b in basis:
        if ((E | g) - b.E) & g == g:
            return b
    return None


def _reduce(h: dict, sugar: int, basis: list, R: _Ring, full: bool = True):
    """Normal form of ``h`` modulo ``basis``; returns (remainder dict, sugar)."""
    p = R.p
    mask = R.mask
    heap = [-k for k in h]
    heapq.heapify(heap)
    rem = {}
    while heap:
        k = -heapq.heappop(heap)
        c = h.pop(k, 0)
        if not c:
            continue
        E = mask - (k & mask)
        b = _find_reducer(E, basis, R)
        if b is None:
            rem[k] = c
            if not full:
                # top-reduced only: move the rest over untouched
                for kk in h:
                    rem[kk] = h[kk]
                h.clear()
                break
            continue
        shift = k - b.keys[0]          # key of the multiplier monomial, minus MASK
        sugar = max(sugar, b.sugar + R.degree(shift + mask))
        bk = b.keys
        bc = b.coeffs
        for i in range(1, len(bk)):
            nk = bk[i] + shift
            old = h.get(nk)
            if old is None:
                nc = (-c * bc[i]) % p
                h[nk] = nc
                heapq.heappush(heap, -nk)
            else:
                nc = (old - c * bc[i]) % p
                if nc:
                    h[nk] = nc
                else:
                    del h[nk]
    return rem, sugar


def _spoly(a: _Poly, b: _Poly, lcm: int, R: _Ring) -> tuple[dict, int]:
    p = R.p
    sa = lcm - a.keys[0]
    sb = lcm - b.keys[0]
    d: dict = {}
    for k, c in zip(a.keys[1:], a.coeffs[1:]):
        d[k + sa] = c
    for k, c in zip(b.keys[1:], b.coeffs[1:]):
        nk = k + sb
        v = (d.get(nk, 0) - c) % p
        if v:
            d[nk] = v
        else:
            d.pop(nk, None)
    deg_l = R.degree(lcm)
    sugar = max(a.sugar + deg_l - R.degree(a.keys[0]), b.sugar + deg_l - R.degree(b.keys[0]))
    return d, sugar


class _PairSet:
    """Critical pairs with Gebauer-Moeller bookkeeping."""

    def __init__(self, R: _Ring):
        self.R = R
        self.pairs: dict = {}      # (i, j) -> (lcm, sugar)

    def update(self, polys: list, active: list, h_idx: int, stats: GroebnerStats):
        R = self.R
        h = polys[h_idx]
        hlm = h.keys[0]
        hE = h.E
        cand = []
        for j in active:
            g = polys[j]
            l = R.lcm(hlm, g.keys[0])
            coprime = R.degree(l) == R.degree(hlm) + R.degree(g.keys[0])
            sug = max(h.sugar + R.degree(l) - R.degree(hlm), g.sugar + R.degree(l) - R.degree(g.keys[0]))
            cand.append((j, l, coprime, sug))
        # chain criterion among the new pairs (divisibility tests inlined for speed)
        mask = R.mask
        guard = R.guard
        fields = [mask - (l & mask) for _, l, _, _ in cand]
        kept = []
        for idx, (j, l, coprime, sug) in enumerate(cand):
            if coprime:
                kept.append((j, l, coprime, sug))
                continue
            El = fields[idx] | guard
            dominated = False
            for idx2, (j2, l2, c2, _s2) in enumerate(cand):
                if idx2 == idx:
                    continue
                if l2 == l:
                    # equal lcms: keep the first one (or a coprime one) only
                    if c2 or idx2 < idx:
                        dominated = True
                        break
                    continue
                if (El - fields[idx2]) & guard == guard:
                    dominated = True
                    break
            if not dominated:
                kept.append((j, l, coprime, sug))
            else:
                stats.pairs_skipped += 1
        # drop old pairs (i, j) whose lcm is strictly divisible via h
        doomed = []
        for key, (l, _) in self.pairs.items():
            if ((mask - (l & mask)) | guard) - hE & guard != guard:
                continue
            i, j = key
            if R.lcm(polys[i].keys[0], hlm) != l and R.lcm(polys[j].keys[0], hlm) != l:
                doomed.append(key)
        for key in doomed:
            del self.pairs[key]
        stats.pairs_skipped += len(doomed)
        for j, l, coprime, sug in kept:
            if coprime:
                stats.pairs_skipped += 1
                continue
            self.pairs[(j, h_idx)] = (l, sug)

    def pop(self):
        R = self.R
        best = min(self.pairs.items(), key=lambda kv: (R.degree(kv[1][0]), kv[1][1], kv[1][0], kv[0]))
        del self.pairs[best[0]]
        return best[0], best[1][0]

    def pop_lowest_degree(self):
        """Remove and return every pair whose lcm has the minimal degree."""
        R = self.R
        d = min(R.degree(l) for l, _ in self.pairs.values())
        batch = sorted((key, l) for key, (l, _) in self.pairs.items() if R.degree(l) == d)
        for key, _ in batch:
            del self.pairs[key]
        return batch

    def __bool__(self):
        return bool(self.pairs)


def _buchberger(gens: list[MultiPoly], stop_on_unit: bool):
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].nvars
    p = gens[0].modulus
    if p is None:
        raise ValueError("Groebner bases are computed over F_p only; reduce the generators first")
    for g in gens:
        if g.nvars != n or g.modulus != p:
            raise ValueError("generators must share variables and field")
    R = _Ring(n, p)
    stats = GroebnerStats()
    polys: list[_Poly] = []
    active: list[int] = []     # indices of basis elements not made redundant

    def add(d: dict, sugar: int) -> bool:
        """Install a nonzero reduced polynomial; True if it is a unit."""
        h = _make_monic(d, R, sugar)
        polys.append(h)
        idx = len(polys) - 1
        stats.max_degree = max(stats.max_degree, R.degree(h.keys[0]))
        if R.degree(h.keys[0]) == 0:
            active[:] = [idx]
            return True
        pairs.update(polys, active, idx, stats)
        active[:] = [j for j in active if not R.divides(h.E, polys[j].E)] + [idx]
        return False

    pairs = _PairSet(R)
    # seed with the generators, lowest degree first, each reduced by the earlier ones
    ordered = sorted((f for f in gens if f.terms), key=lambda f: (f.degree(), len(f.terms)))
    for f in ordered:
        d = _to_internal(f, R)
        rem, sug = _reduce(d, f.degree(), [polys[j] for j in active], R)
        if rem:
            if add(rem, sug) and stop_on_unit:
                return R, polys, active, stats, True
    while pairs:
        (i, j), l = pairs.pop()
        stats.pairs_considered += 1
        d, sug = _spoly(polys[i], polys[j], l, R)
        rem, sug = _reduce(d, sug, [polys[k] for k in active], R)
        if not rem:
            stats.reductions_to_zero += 1
            continue
        if add(rem, sug) and stop_on_unit:
            return R, polys, active, stats, True
    unit = any(R.degree(polys[j].keys[0]) == 0 for j in active)
    return R, polys, active, stats, unit


def _interreduce(R: _Ring, basis: list[_Poly]) -> list[_Poly]:
    basis = sorted(basis, key=lambda b: b.keys[0])
    out: list[_Poly] = []
    for i, b in enumerate(basis):
        others = basis[:i] + basis[i + 1:]
        d = dict(zip(b.keys, b.coeffs))
        rem, sug = _reduce(d, b.sugar, others, R)
        if rem:
            out.append(_make_monic(rem, R, sug))
    return sorted(out, key=lambda b: b.keys[0])


def _engine(method: str, p: int | None = None):
    if method == "buchberger":
        return _buchberger
    if method == "f4":
        from .f4 import _MAX_PRIME, _f4
        # the matrix engine works in floating point; very large primes use Buchberger
        if p is not None and p >= _MAX_PRIME:
            return _buchberger
        return _f4
    raise ValueError(f"unknown method {method!r}; expected 'f4' or 'buchberger'")


def groebner(gens: list[MultiPoly], order: str = "grevlex", stats: GroebnerStats | None = None,
             method: str = "f4") -> list[MultiPoly]:
    """Reduced Groebner basis over F_p (monic, sorted by increasing leading monomial)."""
    if order != "grevlex":
        raise ValueError("only grevlex is supported")
    gens = [g for g in gens if g.terms]
    if not gens:
        return []
    R, polys, active, st, unit = _engine(method, gens[0].modulus if gens else None)(gens, stop_on_unit=False)
    if unit:
        basis = [MultiPoly.constant(1, R.n, R.p)]
    else:
        # minimal basis: active already excludes elements with divisible lms
        red = _interreduce(R, [polys[j] for j in active])
        basis = [_from_internal(dict(zip(b.keys, b.coeffs)), R) for b in red]
    if stats is not None:
        stats.__dict__.update(st.__dict__)
        stats.basis_size = len(basis)
    return basis


def is_unit_ideal(gens: list[MultiPoly], stats: GroebnerStats | None = None,
                  method: str = "f4") -> bool:
    """True iff the generators have no common zero over the algebraic closure of F_p."""
    gens = [g for g in gens if g.terms]
    if not gens:
        return False
    R, polys, active, st, unit = _engine(method, gens[0].modulus if gens else None)(gens, stop_on_unit=True)
    if stats is not None:
        stats.__dict__.update(st.__dict__)
        stats.basis_size = len(active)
    return unit


def normal_form(f: MultiPoly, basis: list[MultiPoly]) -> MultiPoly:
    """Fully reduced remainder of ``f`` modulo ``basis`` (any finite set of polynomials)."""
    if f.modulus is None:
        raise ValueError("normal forms are computed over F_p only")
    R = _Ring(f.nvars, f.modulus)
    internal = []
    for b in basis:
        if b.terms:
            internal.append(_make_monic(_to_internal(b, R), R, b.degree()))
    rem, _ = _reduce(_to_internal(f, R), f.degree(), internal, R)
    return _from_internal(rem, R)


def s_polynomial(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    R = _Ring(f.nvars, f.modulus)
    a = _make_monic(_to_internal(f, R), R, f.degree())
    b = _make_monic(_to_internal(g, R), R, g.degree())
    d, _ = _spoly(a, b, R.lcm(a.keys[0], b.keys[0]), R)
    return _from_internal(d, R)
