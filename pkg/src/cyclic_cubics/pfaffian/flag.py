"""Pfaffian flags (phi0, Z) and the shipped example dataset.

Coordinates follow the example dataset: x0..x4 are coordinates on Z (the
branch-locus side) and x5 is the coordinate along phi0 (the covering
direction).  A flag therefore gives the skew form
M(x) = x0 Z_0 + ... + x4 Z_4 + x5 phi0, the cubic F = Pf(M) on P(W),
W = <phi0> + Z, and its restriction f = F|_{x5=0} on P(Z).  In the
decomposition Pf(t phi0 + phi) = t^3 + t^2 h(phi) + t q(phi) + Pf(phi) the
variable t is x5.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources

from ..lattice import intmat as im
from ..poly.multipoly import MultiPoly
from ..poly.text import PolyParseError, format_poly, parse_poly
from ..poly.wedge import PAIRS, SkewForm, WedgeElement, pf_form, pfaffian

SCHEMA = "cyclic-cubics/flag/1"
NZ = 5          # dim Z
NVARS = 6


class DatasetCorrupt(ValueError):
    pass


def _int_form(w: WedgeElement) -> list:
    return [Fraction(c) for c in w.upper()]


@dataclass(frozen=True)
class PfaffianFlag:
    phi0: WedgeElement
    Z_basis: tuple                       # 5 constant 2-forms
    expected_pfaffian: MultiPoly | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.Z_basis) != NZ:
            raise ValueError(f"Z must be spanned by {NZ} two-forms")

    @property
    def W_basis(self) -> tuple:
        """Basis of W in coordinate order: Z_0..Z_4 then phi0 (matching x0..x5)."""
        return tuple(self.Z_basis) + (self.phi0,)

    @cached_property
    def skew_form(self) -> SkewForm:
        xs = MultiPoly.variables(NVARS)
        upper = []
        for a in range(len(PAIRS)):
            entry = MultiPoly.zero(NVARS)
            for k, w in enumerate(self.W_basis):
                c = w.upper()[a]
                if c:
                    entry = entry + xs[k] * c
            upper.append(entry)
        return SkewForm(NVARS, tuple(upper))

    @cached_property
    def F(self) -> MultiPoly:
        return pfaffian(self.skew_form)

    @cached_property
    def f(self) -> MultiPoly:
        """F restricted to x5 = 0, as a polynomial in x0..x4."""
        terms = {e[:NZ]: c for e, c in self.F.terms.items() if e[NZ] == 0}
        return MultiPoly(NZ, terms)

    def pf_phi0(self):
        return pf_form(self.phi0)

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA,
            "phi0": [str(c) for c in _int_form(self.phi0)],
            "Z_basis": [[str(c) for c in _int_form(z)] for z in self.Z_basis],
            "skew_form": self.skew_form.to_json()["upper"],
        }
        return out

    @classmethod
    def from_json(cls, d: dict) -> "PfaffianFlag":
        try:
            phi0 = WedgeElement.two_form([Fraction(c) for c in d["phi0"]])
            Z = tuple(WedgeElement.two_form([Fraction(c) for c in z]) for z in d["Z_basis"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise DatasetCorrupt(f"bad flag JSON: {exc}") from exc
        return cls(phi0, Z)


def flag_from_skew_form(M: SkewForm, expected: MultiPoly | None = None) -> PfaffianFlag:
    """Split a skew form linear in x0..x5 as M = x5 phi0 + sum_{k<5} x_k Z_k."""
    if M.nvars != NVARS:
        raise DatasetCorrupt(f"expected forms in {NVARS} variables")
    for u in M.upper:
        if not u.is_homogeneous(1) and not u.is_zero():
            raise DatasetCorrupt(f"entry {format_poly(u)} is not a linear form")
    forms = M.coefficient_forms()
    return PfaffianFlag(forms[NZ], tuple(forms[:NZ]), expected)


# --------------------------------------------------------------------------
# the shipped dataset

_SECTION = re.compile(r"^\[(\w+)\]$")


def _parse_sections(text: str) -> dict:
    sections: dict = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _SECTION.match(line.strip())
        if m:
            current = m.group(1)
            sections[current] = []
        elif current is None:
            raise DatasetCorrupt(f"content before the first section: {raw!r}")
        else:
            sections[current].append(line)
    return sections


def parse_dataset(text: str) -> PfaffianFlag:
    sec = _parse_sections(text)
    for name in ("forms", "entries", "covering"):
        if name not in sec:
            raise DatasetCorrupt(f"missing section [{name}]")
    try:
        forms = {}
        for line in sec["forms"]:
            name, _, rhs = line.partition("=")
            forms[name.strip()] = parse_poly(rhs, NVARS)
        pos = {}
        for line in sec["entries"]:
            name, i, j = line.split()
            pos[(int(i), int(j))] = name
        cover = [tuple(int(t) for t in line.split()) for line in sec["covering"]]
        expected = (parse_poly(" ".join(s.strip() for s in sec["pfaffian"]), NVARS)
                    if "pfaffian" in sec else None)
    except (PolyParseError, ValueError) as exc:
        raise DatasetCorrupt(str(exc)) from exc
    if sorted(pos) != list(PAIRS):
        raise DatasetCorrupt("entries must cover each upper-triangular position exactly once")
    if set(pos.values()) != set(forms):
        raise DatasetCorrupt("entries and forms name different linear forms")
    for f in forms.values():
        if f.uses_variable(NZ):
            raise DatasetCorrupt("the forms u_k must not involve the covering variable x5")
    x5 = MultiPoly.variable(NZ, NVARS)
    upper = []
    for P in PAIRS:
        entry = forms[pos[P]]
        for i, j, c in cover:
            if (i, j) == P:
                entry = entry + x5 * c
        upper.append(entry)
    return flag_from_skew_form(SkewForm(NVARS, tuple(upper)), expected)


def dataset_text() -> str:
    return resources.files("cyclic_cubics.data").joinpath("appendix_flag.txt").read_text()


def load_appendix(text: str | None = None) -> PfaffianFlag:
    """Load the example flag; checks Pf(phi0) = 1 and that Z has dimension 5."""
    flag = parse_dataset(dataset_text() if text is None else text)
    if flag.pf_phi0() != 1:
        raise DatasetCorrupt(f"Pf(phi0) = {flag.pf_phi0()}, expected 1")
    if im.rank([_int_form(z) for z in flag.Z_basis]) != NZ:
        raise DatasetCorrupt("the x0..x4 coefficient forms are linearly dependent")
    return flag
