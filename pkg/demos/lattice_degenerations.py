"""Walk through the explicit order-3 lattice model and its two kinds of root degenerations.

Run:  python3 demos/lattice_degenerations.py
"""

from collections import Counter

from cyclic_cubics.lattice import intmat as im
from cyclic_cubics.order3.model import DELTA1, build_reference_model, model_checks
from cyclic_cubics.order3.roots import block_of, classify_root, degenerate, sample_roots


def main():
    model = build_reference_model()
    print("model checks:")
    for name, expected, got in model_checks(model):
        print(f"  {'ok ' if expected == got else 'BAD'} {name}")

    roots = sample_roots(model, 60, seed=0)
    kinds = Counter((block_of(r), classify_root(model, r).kind) for r in roots)
    print("\nsampled roots by block and kind:")
    for (block, kind), n in sorted(kinds.items()):
        print(f"  {block:<10} {kind:<8} {n}")

    for label, i in (("chordal (delta1)", DELTA1), ("nodal (E8 root)", 4)):
        delta = tuple(int(j == i) for j in range(22))
        rep = degenerate(model, delta)
        print(f"\n{label}: index {rep.T_index}, |det T| = {abs(im.det(rep.T_delta.gram))}, "
              f"checks {'all pass' if rep.passed else 'FAIL'}")
        print(f"  T_delta Gram: {rep.T_delta.gram}")


if __name__ == "__main__":
    main()
