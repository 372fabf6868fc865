"""TensorFile text format (JSON) for multivectors and decomposition terms.

    {"dim": 6, "degree": 3, "dual": false,
     "terms": [{"coeff": "1", "indices": [0, 1, 2]}, ...],
     "ext": {"D": 5}}                       # only when coefficients lie in Q(sqrt 5)

Term files written by decompose carry the factor vectors as well, so a term
can be checked for decomposability without factoring it again.  Numeric terms
use [re, im] pairs and "numeric": true.
"""

from __future__ import annotations

import json

import numpy as np

from .decomposition import Decomposition, complex_term
from .exterior import ContractViolation, Multivector, basis, decomposable, sort_sign
from .scalars import QuadNumber, common_field, format_scalar, parse_scalar


class TensorParseError(ValueError):
    pass


def _require(doc, key, kind):
    if key not in doc:
        raise TensorParseError(f"missing field {key!r}")
    val = doc[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise TensorParseError(f"field {key!r} must be an integer")
    if kind is list and not isinstance(val, list):
        raise TensorParseError(f"field {key!r} must be a list")
    return val


def tensor_from_dict(doc):
    if not isinstance(doc, dict):
        raise TensorParseError("a tensor file is a JSON object")
    dim = _require(doc, "dim", int)
    degree = _require(doc, "degree", int)
    dual = doc.get("dual", False)
    if not isinstance(dual, bool):
        raise TensorParseError("field 'dual' must be true or false")
    if not 1 <= dim <= 16:
        raise TensorParseError(f"dim {dim} outside 1..16")
    if not 0 <= degree <= dim:
        raise TensorParseError(f"degree {degree} outside 0..{dim}")
    D = 0
    if "ext" in doc:
        ext = doc["ext"]
        if not isinstance(ext, dict) or not isinstance(ext.get("D"), int):
            raise TensorParseError("field 'ext' must be {\"D\": integer}")
        D = ext["D"]
    coeffs = {}
    for k, term in enumerate(_require(doc, "terms", list)):
        if not isinstance(term, dict):
            raise TensorParseError(f"term {k} is not an object")
        idx = _require(term, "indices", list)
        if len(idx) != degree or not all(isinstance(i, int) and not isinstance(i, bool) for i in idx):
            raise TensorParseError(f"term {k}: expected {degree} integer indices")
        if any(not 0 <= i < dim for i in idx):
            raise TensorParseError(f"term {k}: index out of range 0..{dim - 1}")
        if len(set(idx)) != len(idx):
            raise TensorParseError(f"term {k}: repeated index")
        raw = term.get("coeff", "1")
        try:
            c = parse_scalar(str(raw), D)
        except (ValueError, ZeroDivisionError) as exc:
            raise TensorParseError(f"term {k}: bad coefficient {raw!r} ({exc})") from None
        if isinstance(c, QuadNumber) and not D:
            raise TensorParseError(f"term {k}: radical coefficient needs an 'ext' field")
        sign, key = sort_sign(idx)
        coeffs[key] = coeffs.get(key, 0) + sign * c
    try:
        return Multivector(dim, degree, coeffs, dual)
    except ContractViolation as exc:
        raise TensorParseError(str(exc)) from None


def parse_tensor(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorParseError(f"not JSON: {exc}") from None
    return tensor_from_dict(doc)


def load_tensor(path):
    try:
        with open(path) as fh:
            return parse_tensor(fh.read())
    except OSError as exc:
        raise TensorParseError(f"cannot read {path}: {exc.strerror}") from None


def tensor_to_dict(t):
    doc = {"dim": t.dim, "degree": t.degree, "dual": t.dual,
           "terms": [{"coeff": format_scalar(c), "indices": list(k)} for k, c in t.terms()]}
    D = t.field()
    if D:
        doc["ext"] = {"D": D}
    return doc


def dumps(doc):
    """JSON with one line per field and per term."""
    enc = lambda v: json.dumps(v, ensure_ascii=False)
    lines = []
    for k, v in doc.items():
        if k in ("terms", "factors") and v:
            inner = ",\n".join(f"  {enc(x)}" for x in v)
            lines.append(f" {enc(k)}: [\n{inner}\n ]")
        else:
            lines.append(f" {enc(k)}: {enc(v)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def dump_tensor(t):
    return dumps(tensor_to_dict(t))


# ------------------------------------------------------------------ decomposition terms

def _cpair(z):
    z = complex(z)
    return [z.real, z.imag]


def term_files(dec):
    """One document per term of a Decomposition."""
    out = []
    for c, vs in dec.terms:
        if dec.exact:
            vs = [[c * x for x in vs[0]]] + vs[1:]      # coefficient folded into a factor
            doc = tensor_to_dict(decomposable(vs))
            doc["factors"] = [[format_scalar(x) for x in v] for v in vs]
            D = common_field([x for v in vs for x in v])
            if D:
                doc["ext"] = {"D": D}
        else:
            coords = complex_term(c, vs, dec.dim)
            doc = {"dim": dec.dim, "degree": dec.degree, "dual": False, "numeric": True,
                   "terms": [{"coeff": _cpair(z), "indices": list(k)}
                             for k, z in zip(basis(dec.dim, dec.degree), coords) if z != 0],
                   "factors": [[_cpair(x) for x in v] for v in ([[c * y for y in vs[0]]] + vs[1:])]}
        out.append(doc)
    return out


def decomposition_from_term_docs(docs):
    """Inverse of term_files: factors when present, else the term itself is factored."""
    from .grassmann import is_decomposable
    if not docs:
        raise TensorParseError("no terms")
    numeric = any(d.get("numeric") for d in docs)
    dim, degree = docs[0].get("dim"), docs[0].get("degree")
    dec = Decomposition([], dim, degree, exact=not numeric)
    for k, doc in enumerate(docs):
        if doc.get("dim") != dim or doc.get("degree") != degree:
            raise TensorParseError(f"term file {k}: shape differs from the first")
        if numeric:
            fs = doc.get("factors")
            if not isinstance(fs, list) or len(fs) != degree:
                raise TensorParseError(f"term file {k}: numeric terms need {degree} factors")
            try:
                dec.append(complex(1), [[complex(a, b) for a, b in v] for v in fs])
            except (TypeError, ValueError):
                raise TensorParseError(f"term file {k}: factors must be [re, im] pairs") from None
            continue
        t = tensor_from_dict(doc)
        if "factors" in doc:
            D = doc.get("ext", {}).get("D", 0)
            try:
                vs = [[parse_scalar(str(x), D) for x in v] for v in doc["factors"]]
            except (ValueError, ZeroDivisionError, TypeError):
                raise TensorParseError(f"term file {k}: bad factors") from None
            if len(vs) != degree or any(len(v) != dim for v in vs):
                raise TensorParseError(f"term file {k}: factors do not match dim/degree")
            if decomposable(vs) != t:
                raise TensorParseError(f"term file {k}: factors do not expand to the term")
            dec.append(1, vs)
        else:
            cert = is_decomposable(t)
            if cert is None:
                raise TensorParseError(f"term file {k}: term is not decomposable")
            dec.append(cert.scale, cert.factors)
    return dec.refresh_field()


def numeric_coefficients(doc):
    """Coordinates of a numeric term document as a complex vector."""
    dim, degree = doc["dim"], doc["degree"]
    index = {k: i for i, k in enumerate(basis(dim, degree))}
    out = np.zeros(len(index), dtype=complex)
    for term in doc["terms"]:
        out[index[tuple(term["indices"])]] += complex(*term["coeff"])
    return out
