import json

import pytest
from gmpy2 import mpq

from conftest import e
from skewrank.decomposition import Decomposition
from skewrank.io import (TensorParseError, decomposition_from_term_docs, dump_tensor, dumps, numeric_coefficients,
                         parse_tensor, tensor_from_dict, tensor_to_dict, term_files)
from skewrank.scalars import QuadNumber
from skewrank.atlas.labels import normal_form, standard_decomposition


def doc(terms, dim=4, degree=2, **extra):
    return {"dim": dim, "degree": degree, "terms": terms, **extra}


def test_round_trip():
    t = normal_form("XV")
    assert parse_tensor(dump_tensor(t)) == t
    assert tensor_from_dict(tensor_to_dict(t * mpq(-3, 7))) == t * mpq(-3, 7)


def test_unsorted_indices_carry_sign():
    t = tensor_from_dict(doc([{"coeff": "2", "indices": [3, 1]}, {"indices": [0, 2]}]))
    assert t == e(4, 1, 3) * -2 + e(4, 0, 2)


def test_quadratic_coefficients():
    t = tensor_from_dict(doc([{"coeff": "1+sqrt(5)", "indices": [0, 1]}], ext={"D": 5}))
    (c,) = t.coeffs.values()
    assert isinstance(c, QuadNumber) and c.D == 5
    assert tensor_to_dict(t)["ext"] == {"D": 5}
    assert parse_tensor(dump_tensor(t)) == t


@pytest.mark.parametrize("bad", [
    "not json",
    json.dumps([1, 2]),
    json.dumps({"dim": 4, "terms": []}),
    json.dumps(doc([{"indices": [0, 0]}])),
    json.dumps(doc([{"indices": [0, 4]}])),
    json.dumps(doc([{"indices": [0]}])),
    json.dumps(doc([{"coeff": "1/0", "indices": [0, 1]}])),
    json.dumps(doc([{"coeff": "sqrt(2)", "indices": [0, 1]}])),
    json.dumps(doc([], dim=17)),
    json.dumps(doc([], dim=4, degree=5)),
    json.dumps({"dim": True, "degree": 1, "terms": []}),
])
def test_rejections(bad):
    with pytest.raises(TensorParseError):
        parse_tensor(bad)


def test_dumps_layout():
    text = dump_tensor(e(4, 0, 1) + e(4, 2, 3))
    assert text.count("\n") == 9 and json.loads(text)["dim"] == 4


def test_term_files_exact_round_trip():
    dec = standard_decomposition("XX")
    docs = term_files(dec)
    assert len(docs) == 4 and all("factors" in d for d in docs)
    back = decomposition_from_term_docs([json.loads(dumps(d)) for d in docs])
    assert back.expand() == normal_form("XX")
    # without factors the terms are factored again
    stripped = [{k: v for k, v in d.items() if k != "factors"} for d in docs]
    assert decomposition_from_term_docs(stripped).expand() == normal_form("XX")


def test_term_files_numeric():
    dec = Decomposition([], 4, 2, exact=False)
    dec.append(2j, [[1, 0, 0, 0], [0, 1, 0, 0]])
    dec.append(1.0, [[0, 0, 1, 0], [0, 0, 0, 1j]])
    docs = term_files(dec)
    assert docs[0]["numeric"] and abs(numeric_coefficients(docs[0])[0] - 2j) < 1e-12
    back = decomposition_from_term_docs(docs)
    assert not back.exact and abs(back.expand_numeric() - dec.expand_numeric()).max() < 1e-12


def test_term_file_mismatch():
    docs = term_files(standard_decomposition("XII"))
    docs[1]["factors"][0][0] = "7"
    with pytest.raises(TensorParseError):
        decomposition_from_term_docs(docs)
    with pytest.raises(TensorParseError):
        decomposition_from_term_docs([])
    with pytest.raises(TensorParseError):
        decomposition_from_term_docs([tensor_to_dict(e(6, 0, 1, 2) + e(6, 3, 4, 5))])
