"""skewrank command line.

Exit codes: 0 ok, 1 verification failed, 2 unreadable or rejected input,
3 unsupported (essential) dimension, 4 no exact decomposition found,
5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io
from .exterior import ContractViolation, catalecticant, basis

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_DIM, EXIT_EXACT, EXIT_INTERNAL = 0, 1, 2, 3, 4, 5


class CommandError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


# ------------------------------------------------------------------ output

def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v) if v else "-"
    if v is None:
        return "-"
    return str(v)


def _emit(report, fmt, out=None):
    """report: list of (key, value); text prints `key: value` lines, json one object."""
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(_jsonable(dict(report)), sort_keys=False) + "\n")
        return
    for k, v in report:
        if isinstance(v, dict):
            for k2, v2 in v.items():
                out.write(f"{k}.{k2}: {_fmt(v2)}\n")
        elif isinstance(v, list) and v and isinstance(v[0], list):
            out.write(f"{k}: {len(v)}\n")
            for row in v:
                out.write(f"  {_fmt(row)}\n")
        else:
            out.write(f"{k}: {_fmt(v)}\n")


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return str(v)


def _scal(x):
    from .scalars import format_scalar
    return format_scalar(x)


def _load(path):
    if path == "-":
        return io.parse_tensor(sys.stdin.read())
    return io.load_tensor(path)


def _trivector(path):
    t = _load(path)
    if t.degree != 3:
        raise CommandError(EXIT_PARSE, f"{path}: degree {t.degree}, classification needs trivectors")
    if t.is_zero():
        raise CommandError(EXIT_PARSE, f"{path}: the zero tensor has rank 0 and no orbit")
    return t


# ------------------------------------------------------------------ classify / decompose

def _classification_report(path, t, cls):
    from .atlas.signature import signature
    sig = cls.signature or signature(t)
    rep = [("file", path)]
    if cls.label is not None:
        rep.append(("label", str(cls.label)))
    if len(cls.candidates) > 1:
        rep.append(("candidates", [str(c) for c in cls.candidates]))
    rep += [("rank", cls.rank), ("essential_dim", cls.essential_dim),
            ("signature", sig.to_dict())]
    if cls.note:
        rep.append(("note", cls.note))
    return rep


def _classify_one(args):
    path, seed, tolerance = args
    from .atlas.classify import classify
    t = _trivector(path)
    return _classification_report(path, t, classify(t, seed=seed, tolerance=tolerance))


def _run_batch(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            futures = [ex.submit(_guarded, fn, x) for x in items]
            return [f.result() for f in futures]
    return [_guarded(fn, x) for x in items]


def _guarded(fn, x):
    try:
        return EXIT_OK, fn(x)
    except Exception as exc:            # mapped to an exit code per input
        return _code_for(exc), str(exc)


def cmd_classify(a):
    results = _run_batch(_classify_one, [(p, a.seed, a.tolerance) for p in a.files], a.jobs)
    worst = EXIT_OK
    for path, (code, rep) in zip(a.files, results):
        if code:
            _emit([("file", path), ("error", rep), ("exit", code)], a.format)
            worst = max(worst, code)
        else:
            _emit(rep, a.format)
        if a.format == "text" and len(a.files) > 1:
            sys.stdout.write("\n")
    return worst


def cmd_decompose(a):
    from .atlas.classify import classify
    from .decomposition import verify_decomposition
    t = _trivector(a.file)
    cls = classify(t, seed=a.seed, tolerance=a.tolerance)
    rep = _classification_report(a.file, t, cls)
    dec = cls.decomposition
    if dec is None:
        rep.append(("decomposition", "unavailable"))
        _emit(rep, a.format)
        return EXIT_EXACT
    check = verify_decomposition(t, dec, a.tolerance)
    docs = io.term_files(dec)
    rep += [("terms", len(dec)), ("exact", dec.exact), ("field_D", dec.field),
            ("residual", check["residual"]), ("verified", check["ok"])]
    if a.out:
        os.makedirs(a.out, exist_ok=True)
        paths = []
        for k, doc in enumerate(docs):
            p = os.path.join(a.out, f"term_{k}.json")
            with open(p, "w") as fh:
                fh.write(io.dumps(doc))
            paths.append(p)
        rep.append(("term_files", paths))
    else:
        rep.append(("term_factors", [[[str(x) if not dec.exact else _scal(x) for x in v]
                                      for v in vs] for _c, vs in dec.terms]))
        if dec.exact:
            rep.append(("term_coefficients", [_scal(c) for c, _vs in dec.terms]))
    _emit(rep, a.format)
    return EXIT_OK if check["ok"] else EXIT_INTERNAL


# ------------------------------------------------------------------ apolarity queries

def cmd_catalecticant(a):
    t = _load(a.file)
    if not 0 <= a.s <= t.degree:
        raise CommandError(EXIT_PARSE, f"--s must lie in 0..{t.degree}")
    C = catalecticant(t, a.s)
    M = C.matrix()
    rep = [("rows", len(M)), ("cols", len(C.col_basis)),
           ("row_basis", [list(k) for k in basis(t.dim, t.degree - a.s)]),
           ("col_basis", [list(k) for k in C.col_basis]),
           ("matrix", [[_scal(x) for x in row] for row in M])]
    _emit(rep, a.format)
    return EXIT_OK


def _form_rows(P):
    return [[_scal(x) for x in row] for row in P.basis]


def cmd_annihilator(a):
    from .apolarity import annihilator
    t = _load(a.file)
    ann = annihilator(t)
    rep = [("dims", {str(s): d for s, d in ann.dims().items()}),
           ("generator_counts", {str(s): c for s, c in ann.generator_counts().items()})]
    for s, P in sorted(ann.pieces.items()):
        rep.append((f"degree_{s}", _form_rows(P)))
    _emit(rep, a.format)
    return EXIT_OK


def cmd_essential(a):
    from .apolarity import essential_space
    t = _load(a.file)
    if t.is_zero():
        raise CommandError(EXIT_PARSE, "the zero tensor has no essential space")
    E = essential_space(t)
    _emit([("dim", E.dim), ("basis", _form_rows(E.space))], a.format)
    return EXIT_OK


def cmd_ideal(a):
    from .apolarity import point_ideal
    points = [_load(p) for p in a.points]
    rep = point_ideal(points, max_degree=a.max_degree)
    out = [("points", len(points)),
           ("dims", {str(s): d for s, d in sorted(rep.dims.items())}),
           ("generator_counts", {str(s): c for s, c in sorted(rep.generator_counts.items())})]
    for s in sorted(rep.generators):
        if rep.generators[s]:
            out.append((f"generators_{s}", [[_scal(x) for x in row] for row in rep.generators[s]]))
    _emit(out, a.format)
    return EXIT_OK


# ------------------------------------------------------------------ catalog

def _label(text):
    from .atlas.labels import as_label
    try:
        return as_label(text)
    except ValueError:
        raise CommandError(EXIT_PARSE, f"unknown orbit label {text!r}") from None


def cmd_normal_form(a):
    from .atlas.labels import normal_form
    sys.stdout.write(io.dump_tensor(normal_form(_label(a.label), a.dim)))
    return EXIT_OK


def cmd_sample(a):
    from .atlas.sampling import orbit_sample
    sys.stdout.write(io.dump_tensor(orbit_sample(_label(a.label), a.seed, a.dim)))
    return EXIT_OK


def cmd_table_decomposition(a):
    from .atlas.labels import standard_decomposition
    dec = standard_decomposition(_label(a.label), seed=a.seed, dim=a.dim)
    os.makedirs(a.out, exist_ok=True)
    paths = []
    for k, doc in enumerate(io.term_files(dec)):
        p = os.path.join(a.out, f"term_{k}.json")
        with open(p, "w") as fh:
            fh.write(io.dumps(doc))
        paths.append(p)
    _emit([("label", str(_label(a.label))), ("terms", len(dec)), ("term_files", paths)], a.format)
    return EXIT_OK


def cmd_verify(a):
    from .decomposition import verify_decomposition
    t = _load(a.tensor)
    docs = []
    for p in a.terms:
        try:
            with open(p) as fh:
                docs.append(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise CommandError(EXIT_PARSE, f"{p}: {exc}") from None
    dec = io.decomposition_from_term_docs(docs)
    if (dec.dim, dec.degree) != (t.dim, t.degree):
        raise CommandError(EXIT_PARSE, "terms and tensor differ in dim or degree")
    check = verify_decomposition(t, dec, a.tolerance)
    _emit([("terms", check["term_count"]), ("exact", check["exact"]), ("field_D", check["field"]),
           ("residual", check["residual"]), ("ok", check["ok"])], a.format)
    return EXIT_OK if check["ok"] else EXIT_VERIFY


def cmd_signature_table(a):
    from .atlas.labels import LABELS_8
    from .atlas.signature import build_signature_table, save_signature_table
    labels = [_label(x) for x in a.labels] if a.labels else LABELS_8
    table = build_signature_table(labels, seeds=range(a.seeds), jobs=a.jobs)
    save_signature_table(table, a.out)
    _emit([("out", a.out), ("labels", [e["label"] for e in table["entries"]]),
           ("variants", {e["label"]: len(e["signatures"]) for e in table["entries"]})], a.format)
    return EXIT_OK


# ------------------------------------------------------------------ entry

def _code_for(exc):
    from .atlas.classify import ExactUnavailable, InternalInvariantError, UnsupportedDimension
    if isinstance(exc, CommandError):
        return exc.code
    if isinstance(exc, (io.TensorParseError, json.JSONDecodeError)):
        return EXIT_PARSE
    if isinstance(exc, UnsupportedDimension):
        return EXIT_DIM
    if isinstance(exc, ExactUnavailable):
        return EXIT_EXACT
    if isinstance(exc, InternalInvariantError):
        return EXIT_INTERNAL
    if isinstance(exc, ContractViolation):
        return EXIT_PARSE
    return EXIT_INTERNAL


def build_parser():
    ap = argparse.ArgumentParser(prog="skewrank", description="Skew-symmetric rank of trivectors.")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        return p

    p = add("classify", cmd_classify, "orbit label, rank and signature")
    p.add_argument("files", nargs="+")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--jobs", type=int, default=1)

    p = add("decompose", cmd_decompose, "minimal decomposition, verified")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out", help="directory for term files")

    p = add("catalecticant", cmd_catalecticant, "matrix of C^{s,d-s}")
    p.add_argument("file")
    p.add_argument("--s", type=int, default=1)

    p = add("annihilator", cmd_annihilator, "graded annihilator dimensions and bases")
    p.add_argument("file")

    p = add("essential", cmd_essential, "essential subspace")
    p.add_argument("file")

    p = add("ideal", cmd_ideal, "ideal of a set of Grassmannian points")
    p.add_argument("--points", nargs="+", required=True)
    p.add_argument("--max-degree", type=int, default=None)

    p = add("normal-form", cmd_normal_form, "normal form of an orbit label")
    p.add_argument("--label", required=True)
    p.add_argument("--dim", type=int, default=None)

    p = add("sample", cmd_sample, "seeded random element of an orbit")
    p.add_argument("--label", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=None)

    p = add("table-decomposition", cmd_table_decomposition, "tabulated decomposition as term files")
    p.add_argument("--label", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--out", required=True)

    p = add("verify", cmd_verify, "check term files against a tensor")
    p.add_argument("--tensor", required=True, help="tensor file, or - for stdin")
    p.add_argument("--terms", nargs="+", required=True)
    p.add_argument("--tolerance", type=float, default=1e-9)

    p = add("signature-table", cmd_signature_table, "regenerate the 8-variable signature table")
    p.add_argument("--out", required=True)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--labels", nargs="*")
    p.add_argument("--jobs", type=int, default=1)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return a.fn(a)
    except Exception as exc:
        code = _code_for(exc)
        msg = str(exc) or type(exc).__name__
        if code == EXIT_INTERNAL:
            msg = f"internal error ({type(exc).__name__}): {msg}"
        sys.stderr.write(f"skewrank: {msg}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
