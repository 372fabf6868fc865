import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import e, rand_pure, segre
from skewrank.apolarity import annihilator, apolarity_check, essential_space, point_ideal
from skewrank.exterior import ContractViolation, Multivector, decomposable, wedge_all
from skewrank.linalg import Subspace
from skewrank.atlas.labels import normal_form

seeds = st.integers(0, 10**6)


def vec(n, *idx):
    return [int(k in idx) for k in range(n)]


def dual_form(n, *vectors):
    return wedge_all([Multivector.vector(v, dual=True) for v in vectors])


def span_of(forms):
    return Subspace(len(forms[0].coordinates()), [f.coordinates() for f in forms])


# the nine generators listed for the Segre example's ker C^{2,1}
def segre_kernel_generators():
    f = lambda *i: e(6, *i, dual=True)
    return [f(0, 2) + f(3, 5), f(0, 4) - f(1, 5), f(0, 5), f(1, 2) - f(3, 4),
            f(1, 4), f(2, 3), f(2, 4), f(2, 5), f(4, 5)]


def test_segre_golden():
    ann = annihilator(segre())
    assert ann.pieces[1].dim == 0
    assert ann.pieces[2].dim == 9
    assert ann.pieces[2] == span_of(segre_kernel_generators())
    # the RREF basis is frozen bit for bit
    assert ann.pieces[2].basis == span_of(segre_kernel_generators()).basis


def test_annihilator_examples():
    t = e(4, 0, 1, 2)
    ann = annihilator(t)
    assert ann.pieces[1] == Subspace(4, [vec(4, 3)])
    zero = annihilator(Multivector.zero(5, 3))
    assert all(P.dim == comb(5, s) for s, P in zero.pieces.items())


def test_annihilator_generator_counts():
    t = e(5, 0, 1, 2) + e(5, 0, 3, 4)
    counts = annihilator(t).generator_counts()
    assert counts[1] == 0 and counts[2] == 5 and sum(counts.values()) == 5


def test_four_points_n3_d2():
    n = 4
    v = [e(n, 0, 1), e(n, 2, 3),
         decomposable([vec(n, 0, 2), vec(n, 1, 3)]), decomposable([vec(n, 0, 3), vec(n, 1, 2)])]
    assert v[2] == e(n, 0, 1) + e(n, 0, 3) - e(n, 1, 2) + e(n, 2, 3)
    assert v[3] == e(n, 0, 1) + e(n, 0, 2) - e(n, 1, 3) - e(n, 2, 3)
    f = lambda *i: e(n, *i, dual=True)
    listed = {
        2: [f(0, 2), f(0, 3), f(1, 2), f(1, 3)],
        3: [f(0, 2), f(0, 3) + f(1, 2), f(1, 3)],
        4: [f(0, 2) + f(1, 3), f(0, 3) + f(1, 2)],
    }
    for k, gens in listed.items():
        rep = point_ideal(v[:k])
        assert rep.generator_degrees() == [2]
        assert rep.generator_counts[2] == len(gens)
        assert rep.pieces[2] == span_of(gens)


def test_four_points_n5_d4():
    n = 6
    v = [e(n, 0, 1, 2, 3), e(n, 0, 1, 4, 5), e(n, 2, 3, 4, 5),
         decomposable([vec(n, 0, 2), vec(n, 1, 3), vec(n, 0, 4), vec(n, 1, 5)])]
    two = point_ideal(v[:2], max_degree=n)
    f = lambda *i: e(n, *i, dual=True)
    assert two.generator_degrees() == [2]
    assert two.pieces[2] == span_of([f(2, 4), f(2, 5), f(3, 4), f(3, 5)])
    three = point_ideal(v[:3], max_degree=n)
    assert three.generator_degrees() == [3] and three.generator_counts[3] == 8
    assert three.pieces[3] == span_of([f(i, j, k) for i in (0, 1) for j in (2, 3) for k in (4, 5)])
    four = point_ideal(v, max_degree=n)
    # computed: 4 generators in degree 3 and 2 in degree 4 (the prose says 2 and 5)
    assert four.generator_counts[3] == 4 and four.generator_counts[4] == 2
    assert four.generator_degrees() == [3, 4]
    # both displayed degree-3 forms lie in the ideal
    assert four.pieces[3].contains(f(0, 2, 4).coordinates())
    assert four.pieces[3].contains(f(1, 3, 5).coordinates())
    # a displayed degree-4 form that does not vanish on v1
    g = dual_form(n, vec(n, 0), vec(n, 1), vec(n, 2), vec(n, 3, 5))
    assert not four.pieces[4].contains(g.coordinates())


@pytest.mark.parametrize("d,r,n", [(3, 2, 6), (2, 2, 4), (3, 2, 7), (2, 3, 7), (2, 2, 5)])
def test_general_points_ideal(d, r, n):
    rng = random.Random(d * 100 + r * 10 + n)
    pts = [rand_pure(rng, n, d) for _ in range(r)]
    rep = point_ideal(pts)
    if r * d < n:
        assert rep.generator_degrees() == [1, 2]
        assert rep.generator_counts[1] == n - r * d
    else:
        assert rep.generator_degrees() == [2]


def two_planes(n, d):
    # 0-based: shared e_0..e_{k-1}, k = 2d - n
    k = 2 * d - n
    v1 = e(n, *range(d))
    v2 = e(n, *range(k), *range(d, n))
    return v1, v2


@pytest.mark.parametrize("n,d", [(7, 4), (8, 5), (5, 3), (6, 4)])
def test_two_intersecting_planes(n, d):
    v1, v2 = two_planes(n, d)
    k = 2 * d - n
    # the points' ideal is generated in degree 2 only
    assert point_ideal([v1, v2], max_degree=n).generator_degrees() == [2]
    # the example's degree-(n - d) form annihilates the sum, not each point
    g = e(n, *range(k, d), dual=True) - e(n, *range(d, n), dual=True)
    assert g.degree == n - d
    ideal = point_ideal([v1, v2], max_degree=n)
    assert not ideal.pieces[n - d].contains(g.coordinates())
    ann = annihilator(v1 + v2)
    assert ann.pieces[n - d].contains(g.coordinates())
    counts = ann.generator_counts()
    expected = {2, n - d}
    assert {s for s, c in counts.items() if c} == expected


@pytest.mark.parametrize("n,d", [(6, 4), (7, 5)])
def test_three_intersecting_planes(n, d):
    a, b = 3 * d - 2 * n, 2 * d - n        # shared block sizes
    head, mid1, mid2, tail = (list(range(a)), list(range(a, b)), list(range(b, d)), list(range(d, n)))
    v1 = e(n, *head, *mid1, *mid2)
    v2 = e(n, *head, *mid1, *tail)
    v3 = e(n, *head, *mid2, *tail)
    rep = point_ideal([v1, v2, v3], max_degree=n)
    assert rep.generator_degrees() == [3]
    gens = [e(n, i, j, k, dual=True) for i in mid1 for j in mid2 for k in tail]
    assert rep.pieces[3] == span_of(gens)


def test_point_ideal_rejects_non_decomposable():
    with pytest.raises(ContractViolation):
        point_ideal([e(6, 0, 1, 2) + e(6, 3, 4, 5)])


@given(seeds, st.integers(2, 4), st.integers(5, 7))
def test_single_point_dimensions(seed, d, n):
    v = rand_pure(random.Random(seed), n, d)
    rep = point_ideal([v], max_degree=d)
    for s in range(d + 1):
        assert rep.dims[s] == comb(n, s) - comb(d, s)


def test_apolarity_check():
    rng = random.Random(3)
    v1, v2 = rand_pure(rng, 6, 3), rand_pure(rng, 6, 3)
    res = apolarity_check(v1 + v2, [v1, v2])
    assert res.holds and res.coefficients == [1, 1] and res.ideal_condition
    parts = [e(6, 0, 1, 2), e(6, 0, 3, 4), e(6, 1, 3, 5)]
    assert apolarity_check(segre(), parts).holds
    tries = 0
    while True:
        tries += 1
        res = apolarity_check(segre(), [rand_pure(rng, 6, 3), rand_pure(rng, 6, 3)])
        if not res.holds:
            break
        assert tries < 5
    assert res.coefficients is None


@given(seeds)
def test_decomposition_ideal_in_annihilator(seed):
    rng = random.Random(seed)
    pts = [rand_pure(rng, 7, 3) for _ in range(3)]
    t = pts[0] * 2 - pts[1] + pts[2] * 3
    rep = point_ideal(pts, max_degree=3)
    ann = annihilator(t)
    for s in range(4):
        assert ann.pieces[s].contains_space(rep.pieces[s])


def test_essential_space_examples():
    E = essential_space(e(8, 0, 1, 2))
    assert E.dim == 3 and E.tensor == e(3, 0, 1, 2)
    assert essential_space(normal_form("III", dim=7)).dim == 5
    assert essential_space(normal_form("XV")).dim == 8
    with pytest.raises(ContractViolation):
        essential_space(Multivector.zero(5, 3))


@given(seeds)
def test_essential_space_idempotent(seed):
    rng = random.Random(seed)
    t = rand_pure(rng, 8, 3) + rand_pure(rng, 8, 3)
    E = essential_space(t)
    again = essential_space(E.tensor)
    assert again.dim == E.dim and again.tensor == E.tensor
    # lifting the rewritten tensor gives t back
    lifted = Multivector.zero(8, 3)
    for idx, c in E.tensor.coeffs.items():
        lifted = lifted + decomposable(E.lift_vectors([vec(E.dim, i) for i in idx]), c)
    assert lifted == t
