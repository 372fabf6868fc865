"""classify8 over the thirteen 8-variable orbits, one seeded sample each."""

import sys

from skewrank.atlas.classify import classify8
from skewrank.atlas.labels import LABELS_8
from skewrank.atlas.sampling import orbit_sample


def main(seed=0):
    for label in LABELS_8:
        res = classify8(orbit_sample(label, seed), seed=seed)
        cands = "/".join(str(c) for c in res.candidates)
        extra = f", {len(res.decomposition)} exact terms" if res.decomposition else ""
        print(f"{str(label):>6}: candidates {cands}, rank {res.rank}{extra}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
