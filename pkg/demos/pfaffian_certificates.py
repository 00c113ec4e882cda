"""Certify the shipped cyclic Pfaffian flag stage by stage, and show why prime 7 cannot certify
the absence of triple lines.

Run:  python3 demos/pfaffian_certificates.py          (enumeration mode, a few seconds)
      python3 demos/pfaffian_certificates.py --gb     (Groebner charts, about two minutes)
"""

import sys

from cyclic_cubics.pfaffian.flag import load_appendix
from cyclic_cubics.pfaffian.lines import triple_lines
from cyclic_cubics.pfaffian.pipeline import verify_appendix
from cyclic_cubics.poly.multipoly import MultiPoly
from cyclic_cubics.poly.text import format_poly


def main():
    mode = "gb" if "--gb" in sys.argv else "enum"
    bundle = verify_appendix(mode=mode)
    for name, cert in bundle.stages:
        print(f"{'PASS' if cert.verdict else 'FAIL'}  {name:<18} {cert.method:<22} p={cert.primes}")
    print(f"verdict: {bundle.verdict} ({bundle.seconds:.1f} s)\n")

    f = load_appendix().f
    for p in (5, 7, 11, 13):
        cert = triple_lines(f, p, "enumeration")
        tl = cert.payload["triple_lines"]
        print(f"p = {p:>2}: {cert.payload['lines_on_cubic']:>3} rational lines on C, {len(tl)} triple")

    # the mod-7 triple line: restrict f to the plane through the line and alpha
    line = [[1, 0, 6, 3, 5], [0, 1, 5, 1, 3]]
    alpha = [0, 0, 1, 4, 0]
    u, v, t = MultiPoly.variables(3)
    g = f.compose([u * line[0][k] + v * line[1][k] + t * alpha[k] for k in range(5)])
    print("\nf on the plane through the mod-7 triple line, reduced mod 7:", format_poly(g.reduce_mod(7)))


if __name__ == "__main__":
    main()
