import random

import numpy as np
import pytest
from gmpy2 import mpq

from conftest import e, rand_multivector
from skewrank.exterior import ContractViolation, apply_linear_map, catalecticant, wedge
from skewrank.linalg import BadPrime, batched_rank_mod_p, det, modp, rank
from skewrank.polys import degree, squarefree_part
from skewrank.atlas.invariants import (b_form, b_matrix, b_rank, decomposable_l_locus, detB, detB_on_line,
                                       good_model, good_prime, projective_points, wedge_kernel, wedge_square_class)
from skewrank.atlas.labels import LABELS_6, LABELS_7, normal_form, random_invertible
from skewrank.atlas.sampling import orbit_sample


def test_b_matrix_symmetric():
    t = orbit_sample("X", 3)
    B = b_matrix(t)
    assert all(B[i][j] == B[j][i] for i in range(7) for j in range(7))
    unit = lambda i: [int(k == i) for k in range(7)]
    assert B[2][5] == b_form(t, unit(2), unit(5))


@pytest.mark.parametrize("label", [str(x) for x in LABELS_6 + LABELS_7])
def test_detB_zero_pattern(label):
    t = normal_form(label, dim=7)
    if label == "X":
        assert detB(t) != 0
    else:
        assert detB(t) == 0


def test_b_rank_by_orbit():
    ranks = {lab: b_rank(normal_form(lab)) for lab in ("VI", "VII", "VIII", "IX", "X")}
    assert ranks == {"VI": 1, "VII": 1, "VIII": 2, "IX": 4, "X": 7}


def test_detB_covariance():
    # detB(g t) = det(g)^9 detB(t)
    t = normal_form("X")
    for seed in range(3):
        g = random_invertible(7, random.Random(seed), -2, 2)
        assert detB(apply_linear_map(g, t)) == det(g) ** 9 * detB(t)


def test_detB_on_line_degree7():
    # detB is a cube of a degree-7 form, so a general line sees 7 distinct roots
    rng = random.Random(7)
    t = orbit_sample("X", 1)
    w = rand_multivector(rng, 7, 3, density=1.0)
    f = detB_on_line(t, w)
    assert degree(f) == 21
    assert degree(squarefree_part(f)) == 7


def test_wedge_square_class():
    assert wedge_square_class(normal_form("V")) == 2
    assert wedge_square_class(e(6, 0, 1, 2) + e(6, 0, 3, 4) + e(6, 1, 3, 5)) == 0
    for seed in range(5):
        assert wedge_square_class(orbit_sample("V", seed)) != 0
        assert wedge_square_class(orbit_sample("IV", seed)) == 0
    with pytest.raises(ContractViolation):
        wedge_square_class(normal_form("IX"))


def test_wedge_kernel():
    assert wedge_kernel(normal_form("VI")).dim == 1
    assert wedge_kernel(normal_form("VII")).dim == 0


def brute_force_locus(t, p):
    """Count l in P^{n-1}(GF(p)) with rank C^{1,3}(l ^ t) <= 4, with no quadric screen."""
    n = t.dim
    parts = []
    for i in range(n):
        C = catalecticant(wedge(e(n, i), t), 1).matrix()
        parts.append(np.array([[modp(x, p) for x in row] for row in C], dtype=np.int64))
    P = projective_points(n, p)
    stack = np.einsum("ki,irc->krc", P, np.array(parts)) % p
    return int((batched_rank_mod_p(stack, p) <= 4).sum())


@pytest.mark.parametrize("label,count", [("VI", 1), ("VII", 1), ("VIII", 2), ("IX", 0)])
def test_locus_matches_brute_force(label, count):
    for seed in (0, 1):
        t = orbit_sample(label, seed)
        for p in (5, 7):
            if not good_prime(t, p) or rank([[modp(x, p) for x in r] for r in b_matrix(t)]) != b_rank(t):
                continue
            sols, _ = decomposable_l_locus(t, p)
            assert len(sols) == brute_force_locus(t, p) == count


def test_locus_normal_forms():
    sols, kdim = decomposable_l_locus(normal_form("VI"), 5)
    assert kdim == 1 and sols == [(0, 0, 0, 1, 0, 0, 0)]     # p ^ t = 0
    sols, kdim = decomposable_l_locus(normal_form("VII"), 7)
    assert kdim == 0 and len(sols) == 1
    assert len(decomposable_l_locus(normal_form("VIII"), 5)[0]) == 2


def test_bad_prime():
    t = normal_form("IX") * mpq(1, 5)
    assert not good_prime(t, 5)
    with pytest.raises(BadPrime):
        decomposable_l_locus(t, 5)


def test_good_model_repairs_reduction():
    # seeds where p | det g sends the reduction into a smaller orbit
    bad = [(lab, s, p) for lab in ("VII", "VIII") for s in range(12) for p in (5, 7)
           if not good_prime(orbit_sample(lab, s), p)]
    assert bad
    for lab, s, p in bad[:4]:
        t = orbit_sample(lab, s)
        m = good_model(t, p)
        assert good_prime(m, p) and b_rank(m) == b_rank(t)
        assert len(decomposable_l_locus(m, p)[0]) == {"VII": 1, "VIII": 2}[lab]
    with pytest.raises(ContractViolation):
        good_model(normal_form("VI", dim=8), 5)
