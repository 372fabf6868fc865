"""Apolarity of v = f0f1f2 + f0f3f4 + f1f3f5 in ^3 C^6, then its rank-3 decomposition."""

from skewrank.apolarity import annihilator
from skewrank.atlas.classify import classify6
from skewrank.exterior import Multivector
from skewrank.scalars import format_scalar


def main():
    n = 6
    v = sum((Multivector.basis_element(n, idx) for idx in ((0, 1, 2), (0, 3, 4), (1, 3, 5))),
            Multivector.zero(n, 3))
    print("v =", v)
    ann = annihilator(v)
    for s, piece in sorted(ann.pieces.items()):
        print(f"dim ker C^{{{s},{3 - s}}} = {piece.dim}")
    print("minimal generators per degree:", ann.generator_counts())

    label, rank, dec = classify6(v)
    print(f"orbit {label}, rank {rank}")
    for c, vs in dec.terms:
        print("  ", format_scalar(c), " ^ ".join(str([format_scalar(x) for x in u]) for u in vs))
    assert dec.expand() == v


if __name__ == "__main__":
    main()
