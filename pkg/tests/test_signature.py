import random

import pytest

from skewrank.exterior import ContractViolation, apply_linear_map
from skewrank.atlas.labels import LABELS_8, normal_form, random_invertible
from skewrank.atlas.sampling import orbit_sample
from skewrank.atlas.signature import (Signature, build_signature_table, load_signature_table, locus_counts,
                                      match_signature, signature)


@pytest.mark.parametrize("label", ["IV", "V", "VII", "IX", "XII", "XVII"])
def test_signature_gl_invariant(label):
    rng = random.Random(label)
    t = orbit_sample(label, 3)
    g = random_invertible(t.dim, rng, -3, 3)
    assert signature(apply_linear_map(g, t)).key() == signature(t).key()


def test_signature_round_trip():
    sig = signature(normal_form("VIII"), counts=True)
    assert sig.locus and all(c == 2 for _p, c, _k in sig.locus)
    assert Signature.from_dict(sig.to_dict()) == sig


def test_locus_counts_by_orbit():
    counts = {lab: {c for _p, c, _k in locus_counts(orbit_sample(lab, 2))} for lab in ("VI", "VII", "VIII", "IX")}
    assert counts == {"VI": {1}, "VII": {1}, "VIII": {2}, "IX": {0}}


def test_shipped_table_separates_labels():
    table = load_signature_table()
    assert {e["label"] for e in table["entries"]} >= {str(x) for x in LABELS_8}
    found = {str(x): {str(c) for c in match_signature(signature(normal_form(x)), table)} for x in LABELS_8}
    for lab, cands in found.items():
        assert lab in cands
        assert len(cands) == 1 or cands in ({"XIII", "XXI"}, {"XXII", "XXIII"})


def test_built_table_matches_normal_forms():
    table = build_signature_table(["III", "VI"], seeds=range(2))
    assert [str(c) for c in match_signature(signature(normal_form("VI")), table)] == ["VI"]
    assert match_signature(signature(normal_form("IX")), table) == []


def test_signature_rejects():
    with pytest.raises(ContractViolation):
        signature(normal_form("II").__class__.zero(4, 2))
