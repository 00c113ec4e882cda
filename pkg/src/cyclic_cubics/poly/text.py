"""Text format for polynomials: ``c*x0^a0*...*x5^a5`` terms joined by + and -.

Coefficients may be integers or fractions ``p/q``.  Terms are printed in
descending grevlex order, so ``parse_poly(format_poly(f)) == f`` exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .multipoly import MultiPoly

_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


class PolyParseError(ValueError):
    pass


def _monomial_str(e):
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i}")
        elif k > 1:
            parts.append(f"x{i}^{k}")
    return "*".join(parts)


def format_poly(f: MultiPoly) -> str:
    if not f.terms:
        return "0"
    out = []
    for e in f.monomials():
        c = f.terms[e]
        if f.modulus is not None and c > f.modulus // 2:
            c = c - f.modulus
        neg = c < 0
        a = -c if neg else c
        mono = _monomial_str(e)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def parse_poly(text: str, nvars: int, modulus: int | None = None) -> MultiPoly:
    s = text.replace(" ", "")
    if not s:
        raise PolyParseError("empty polynomial")
    if s == "0":
        return MultiPoly.zero(nvars, modulus)
    # split on +/- that are not inside a fraction (fractions never carry signs)
    tokens = re.findall(r"[+-]?[^+-]+", s)
    if "".join(tokens) != s:
        raise PolyParseError(f"cannot tokenize {text!r}")
    terms: dict = {}
    for tok in tokens:
        sign = -1 if tok[0] == "-" else 1
        tok = tok.lstrip("+-")
        coeff = Fraction(1)
        exps = [0] * nvars
        for fac in tok.split("*"):
            m = _FACTOR.match(fac)
            if m:
                i = int(m.group(1))
                if i >= nvars:
                    raise PolyParseError(f"variable x{i} out of range for {nvars} variables")
                exps[i] += int(m.group(2) or 1)
                continue
            try:
                coeff *= Fraction(fac)
            except (ValueError, ZeroDivisionError) as exc:
                raise PolyParseError(f"bad factor {fac!r} in {text!r}") from exc
        e = tuple(exps)
        terms[e] = terms.get(e, 0) + sign * coeff
    return MultiPoly(nvars, terms, modulus)
