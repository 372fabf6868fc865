import pytest

from conftest import e
from skewrank.apolarity import essential_space
from skewrank.decomposition import verify_decomposition
from skewrank.grassmann import is_decomposable
from skewrank.atlas.labels import (ALL_LABELS, LABELS_8, TABLE, as_label, letter_map, normal_form,
                                   standard_decomposition)
from skewrank.atlas.invariants import wedge_square_class

EXPLICIT = {"XII": 4, "XIV": 4, "XV": 5, "XVIII": 4, "XX": 4, "XXII": 4}
EXPECTED = {"II": (3, 1), "III": (5, 2), "IV": (6, 3), "V": (6, 2), "VI": (7, 3), "VII": (7, 3),
            "VIII": (7, 3), "IX": (7, 3), "X": (7, 4), "XI": (8, 4), "XII": (8, 4), "XIII": (8, 4),
            "XIV": (8, 4), "XV": (8, 5), "XVI": (8, 3), "XVII": (8, 4), "XVIII": (8, 4),
            "XIX": (8, 3), "XX": (8, 4), "XXI": (8, 4), "XXII": (8, 4), "XXIII": (8, 4)}


def test_label_table():
    assert [str(x) for x in ALL_LABELS] == list(EXPECTED)
    for lab, (amb, ssr) in EXPECTED.items():
        info = TABLE[as_label(lab)]
        assert (info.ambient, info.table_rank) == (amb, ssr)
    # the one certified rank that departs from the table
    assert [str(x) for x in ALL_LABELS if TABLE[x].rank != TABLE[x].table_rank] == ["VII"]
    assert as_label(" xv ") == as_label("XV")


@pytest.mark.parametrize("label", [str(x) for x in ALL_LABELS])
def test_normal_form_essential_dimension(label):
    t = normal_form(label)
    assert t.dim == TABLE[as_label(label)].ambient
    assert essential_space(t).dim == t.dim


def test_normal_form_ix():
    n = 7
    want = e(n, 0, 1, 2) + e(n, 4, 5, 6) + e(n, 0, 4, 3) + e(n, 1, 5, 3)
    assert normal_form("IX") == want
    assert letter_map("IX") == dict(a=0, b=1, c=2, p=3, q=4, r=5, s=6)


def test_normal_form_ii_and_xv():
    assert normal_form("II") == e(3, 0, 1, 2)
    assert len(normal_form("XV")) == 6
    assert normal_form("II", dim=7).dim == 7
    with pytest.raises(ValueError):
        normal_form("XV", dim=7)


def test_iv_printed_form_is_orbit_iii():
    # the tabulated string collapses to two terms on five essential variables
    printed = normal_form("IV", printed=True)
    assert essential_space(printed).dim == 5
    assert essential_space(normal_form("IV")).dim == 6
    assert wedge_square_class(normal_form("IV")) == 0
    assert wedge_square_class(normal_form("V")) == 2


@pytest.mark.parametrize("label,terms", list(EXPLICIT.items()))
def test_explicit_decompositions_expand_exactly(label, terms):
    dec = standard_decomposition(label)
    rep = verify_decomposition(normal_form(label), dec)
    assert rep["ok"] and rep["residual"] == 0 and rep["term_count"] == terms


def test_xii_decomposition_terms():
    # first term (a - s) ^ q ^ p with a b c p q r s t = e0 .. e7
    dec = standard_decomposition("XII")
    unit = lambda i: [int(k == i) for k in range(8)]
    a_minus_s = [1, 0, 0, 0, 0, 0, -1, 0]
    assert dec.terms[0][1] == [a_minus_s, unit(4), unit(3)]
    assert len(dec) == 4


def test_xx_printed_sign_leaves_residual():
    dec = standard_decomposition("XX", printed=True)
    diff = dec.expand() - normal_form("XX")
    idx = letter_map("XX")
    b, c, r, t = (idx[ch] for ch in "bcrt")
    assert diff == e(8, b, r, t) * 2 - e(8, c, r, t) * 2


@pytest.mark.parametrize("label", [str(x) for x in ALL_LABELS])
def test_every_table_row_has_pure_terms(label):
    for seed in (0, 1):
        dec = standard_decomposition(label, seed=seed)
        assert len(dec) == TABLE[as_label(label)].table_rank
        for term in dec.term_tensors():
            assert not term.is_zero() and is_decomposable(term) is not None


def test_labels_8():
    assert len(LABELS_8) == 13
