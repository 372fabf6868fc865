import random
from math import comb

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from conftest import e, rand_multivector, rand_pure, rand_vectors, segre
from skewrank.exterior import (ContractViolation, Multivector, apply_linear_map, basis, catalecticant,
                               contract, decomposable, mask_of, pair, sort_sign, top_pairing_scalar,
                               tuple_of, wedge)
from skewrank.linalg import Subspace, image, kernel, rank
from skewrank.atlas.labels import random_invertible

seeds = st.integers(0, 10**6)


def test_mask_roundtrip():
    for tup in basis(7, 3):
        m = mask_of(tup)
        assert tuple_of(m) == tup and bin(m).count("1") == 3
    assert sort_sign([2, 0, 1]) == (1, (0, 1, 2))
    assert sort_sign([1, 0]) == (-1, (0, 1))


def test_wedge_examples():
    n = 4
    assert wedge(e(n, 0), e(n, 0)).is_zero()
    assert wedge(e(n, 1), e(n, 0)) == -e(n, 0, 1)
    lhs = wedge(e(n, 0) + e(n, 2), e(n, 1) + e(n, 3))
    assert lhs == e(n, 0, 1) + e(n, 0, 3) - e(n, 1, 2) + e(n, 2, 3)


def test_wedge_past_top_is_zero():
    w = wedge(e(4, 0, 1, 2), e(4, 1, 3))
    assert w.is_zero() and w.degree == 4


def test_wedge_rejects_mismatch():
    with pytest.raises(ContractViolation):
        wedge(e(4, 0), e(5, 1))
    with pytest.raises(ContractViolation):
        wedge(e(4, 0), e(4, 1, dual=True))


def test_pair_examples():
    n = 3
    assert pair(e(n, 0, 1, dual=True), e(n, 0, 1)) == 1
    assert pair(e(n, 0, 1, dual=True), e(n, 0, 2)) == 0
    h = wedge(e(n, 0, dual=True) + e(n, 1, dual=True), e(n, 2, dual=True))
    assert pair(h, e(n, 1, 2)) == 1
    with pytest.raises(ContractViolation):
        pair(e(n, 0, dual=True), e(n, 0, 1))


def test_contract_examples():
    assert contract(e(3, 0, dual=True), e(3, 0, 1, 2)) == e(3, 1, 2)
    assert contract(e(3, 1, dual=True), e(3, 0, 1, 2)) == -e(3, 0, 2)
    assert contract(e(4, 0, 1, dual=True), e(4, 2, 3)).is_zero()
    with pytest.raises(ContractViolation):
        contract(e(4, 0, 1, 2, dual=True), e(4, 0, 1))


def test_contract_roles_swapped():
    # a vector contracting a dual 3-form uses the same formula
    assert contract(e(3, 0), e(3, 0, 1, 2, dual=True)) == e(3, 1, 2, dual=True)


def test_contract_proper_intersection(rng):
    # h-perp meets the factor space of v in a (d-s)-space: the result spans it
    n, d, s = 6, 3, 1
    v = rand_pure(rng, n, d)
    h = Multivector.vector([mpq(rng.randint(-3, 3)) for _ in range(n)], dual=True)
    out = contract(h, v)
    from skewrank.grassmann import is_decomposable
    cert = is_decomposable(out)
    assert cert is not None and cert.space().dim == d - s
    fv = is_decomposable(v).space()
    for f in cert.factors:
        assert fv.contains(f)
        assert sum(a * b for a, b in zip(h.coordinates(), f)) == 0


def test_pair_is_top_contraction(rng):
    for _ in range(10):
        h = rand_multivector(rng, 6, 3, dual=True)
        v = rand_multivector(rng, 6, 3)
        c = contract(h, v)
        assert c.degree == 0
        assert c.mask_coeffs().get(0, 0) == pair(h, v)


def test_top_pairing_scalar():
    assert top_pairing_scalar(e(6, 0, 1, 2), e(6, 3, 4, 5)) == 1
    # odd degree: t ^ t = -t ^ t, so this vanishes for every trivector
    v = e(6, 0, 1, 2) + e(6, 3, 4, 5)
    assert top_pairing_scalar(v, v) == 0
    assert top_pairing_scalar(segre(), segre()) == 0
    with pytest.raises(ContractViolation):
        top_pairing_scalar(v, e(6, 0, 1))


def test_catalecticant_shapes_and_columns(rng):
    t = rand_multivector(rng, 6, 3)
    for s in range(4):
        C = catalecticant(t, s)
        assert C.shape == (comb(6, 3 - s), comb(6, s))
        for j, idx in enumerate(C.col_basis):
            col = [row[j] for row in C.rows]
            assert col == contract(e(6, *idx, dual=True), t).coordinates()
    with pytest.raises(ContractViolation):
        catalecticant(t, 4)


def test_catalecticant_examples():
    C = catalecticant(decomposable([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]), 1)
    assert C.shape == (15, 6) and rank(C.matrix()) == 3
    assert rank(catalecticant(Multivector.zero(6, 3), 1).matrix()) == 0
    C2 = catalecticant(segre(), 2)
    assert C2.shape == (6, 15) and 15 - rank(C2.matrix()) == 9


@given(seeds, st.sampled_from([2, 3, 4]), st.integers(5, 8))
def test_kerimg_dimensions(seed, d, n):
    rng = random.Random(seed)
    vs = rand_vectors(rng, n, d)
    v = decomposable(vs)
    if v.is_zero():
        return
    for s in range(d + 1):
        C = catalecticant(v, s).matrix()
        assert kernel(C, comb(n, s)).dim == comb(n, s) - comb(d, s)
        # image is the (d-s)-th power of the factor space
        if s == d:
            assert image(C).dim == 1
            continue
        powers = [decomposable([vs[i] for i in idx]).coordinates() for idx in basis(d, d - s)]
        assert image(C) == Subspace(comb(n, d - s), powers)


@given(seeds, st.integers(0, 3), st.integers(0, 3), st.integers(0, 5))
def test_composition_sign_law(seed, s1, s2, d):
    # contract(h1, contract(h2, v)) = contract(h2 ^ h1, v), sign +1 in every degree
    if s1 + s2 > d:
        return
    rng = random.Random(seed)
    n = 6
    h1 = rand_multivector(rng, n, s1, dual=True)
    h2 = rand_multivector(rng, n, s2, dual=True)
    v = rand_multivector(rng, n, d)
    assert contract(h1, contract(h2, v)) == contract(wedge(h2, h1), v)


@given(seeds)
def test_wedge_associative_and_graded(seed):
    rng = random.Random(seed)
    n = 7
    a, b, c = (rand_multivector(rng, n, k) for k in (1, 2, 3))
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    assert wedge(a, c) == wedge(c, a) * (-1) ** (1 * 3)
    assert wedge(b, c) == wedge(c, b)


@given(seeds)
def test_gl_equivariance(seed):
    rng = random.Random(seed)
    n = 5
    g = random_invertible(n, rng, -3, 3)
    h = rand_multivector(rng, n, 2, dual=True)
    v = rand_multivector(rng, n, 3)
    w = rand_multivector(rng, n, 2)
    gh, gv = apply_linear_map(g, h), apply_linear_map(g, v)
    assert pair(gh, apply_linear_map(g, w)) == pair(h, w)
    assert contract(gh, gv) == apply_linear_map(g, contract(h, v))
