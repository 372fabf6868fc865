"""Orbits VI-X in C^7: rank of B, GF(p) decomposable-l counts, and decompositions."""

import sys

from skewrank.atlas.classify import classify7
from skewrank.atlas.invariants import b_rank, detB
from skewrank.atlas.sampling import orbit_sample
from skewrank.atlas.signature import locus_counts
from skewrank.decomposition import verify_decomposition


def main(seed=0):
    for label in ("VI", "VII", "VIII", "IX", "X"):
        t = orbit_sample(label, seed)
        res = classify7(t, seed=seed)
        rep = verify_decomposition(t, res.decomposition)
        counts = locus_counts(t) if label != "X" else ()
        kind = "exact" if rep["exact"] else "numeric"
        print(f"{label:>4}: rank B {b_rank(t)}, detB {'!= 0' if detB(t) else '= 0'}, "
              f"locus {[(p, c) for p, c, _ in counts]}, "
              f"-> {res.label} rank {res.rank}, {kind} residual {rep['residual']}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
