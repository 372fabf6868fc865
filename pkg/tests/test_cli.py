import json

import pytest

from conftest import e, segre
from skewrank import io
from skewrank.cli import EXIT_DIM, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, main
from skewrank.atlas.labels import normal_form


def write(tmp_path, name, t):
    p = tmp_path / name
    p.write_text(io.dump_tensor(t))
    return str(p)


def run_json(capsys, argv):
    code = main(["--format", "json", *argv])
    return code, json.loads(capsys.readouterr().out)


def test_classify_ix(tmp_path, capsys):
    code, rep = run_json(capsys, ["classify", write(tmp_path, "ix.json", normal_form("IX"))])
    assert code == EXIT_OK and rep["label"] == "IX" and rep["rank"] == 3


def test_classify_text_and_batch(tmp_path, capsys):
    a = write(tmp_path, "a.json", normal_form("V"))
    b = write(tmp_path, "b.json", normal_form("XIII"))
    assert main(["classify", a, b]) == EXIT_OK
    out = capsys.readouterr().out
    assert "label: V" in out and "XXI" in out


def test_decompose_with_out(tmp_path, capsys):
    path = write(tmp_path, "xii.json", normal_form("XII"))
    code, rep = run_json(capsys, ["decompose", path, "--out", str(tmp_path / "terms")])
    assert code == EXIT_OK and rep["terms"] == 4 and rep["residual"] == 0 and rep["verified"]
    code, rep = run_json(capsys, ["verify", "--tensor", path, "--terms", *rep["term_files"]])
    assert code == EXIT_OK and rep["ok"] and rep["terms"] == 4


def test_annihilator_segre(tmp_path, capsys):
    code, rep = run_json(capsys, ["annihilator", write(tmp_path, "s.json", segre())])
    assert code == EXIT_OK and rep["dims"]["1"] == 0 and rep["dims"]["2"] == 9
    assert len(rep["degree_2"]) == 9


def test_ideal_four_points(tmp_path, capsys):
    pts = [e(4, 0, 1), e(4, 2, 3), e(4, 0, 1) + e(4, 0, 3) - e(4, 1, 2) + e(4, 2, 3),
           e(4, 0, 1) + e(4, 0, 2) - e(4, 1, 3) - e(4, 2, 3)]
    paths = [write(tmp_path, f"p{k}.json", v) for k, v in enumerate(pts)]
    code, rep = run_json(capsys, ["ideal", "--points", *paths])
    assert code == EXIT_OK and rep["generator_counts"]["2"] == 2 and rep["generator_counts"]["1"] == 0


def test_table_decomposition_then_verify(tmp_path, capsys):
    out = tmp_path / "xv"
    code, rep = run_json(capsys, ["table-decomposition", "--label", "XV", "--out", str(out)])
    assert code == EXIT_OK and rep["terms"] == 5
    nf = tmp_path / "xv.json"
    assert main(["normal-form", "--label", "XV"]) == EXIT_OK
    nf.write_text(capsys.readouterr().out)
    code, rep = run_json(capsys, ["verify", "--tensor", str(nf), "--terms", *rep["term_files"]])
    assert code == EXIT_OK and rep["exact"] and rep["terms"] == 5 and rep["residual"] == 0
    # dropping a term breaks the check
    code, rep = run_json(capsys, ["verify", "--tensor", str(nf), "--terms", str(out / "term_0.json")])
    assert code == EXIT_VERIFY and not rep["ok"]


def test_sample_and_catalecticant(tmp_path, capsys):
    assert main(["sample", "--label", "VII", "--seed", "3"]) == EXIT_OK
    p = tmp_path / "vii.json"
    p.write_text(capsys.readouterr().out)
    code, rep = run_json(capsys, ["catalecticant", str(p), "--s", "1"])
    assert code == EXIT_OK and rep["rows"] == 21 and rep["cols"] == 7
    code, rep = run_json(capsys, ["essential", str(p)])
    assert rep["dim"] == 7


@pytest.mark.parametrize("text,code", [
    ("{bad", EXIT_PARSE),
    (json.dumps({"dim": 5, "degree": 3, "terms": []}), EXIT_PARSE),
    (json.dumps({"dim": 5, "degree": 3, "terms": [{"indices": [0, 1, 1]}]}), EXIT_PARSE),
    (json.dumps({"dim": 5, "degree": 2, "terms": [{"indices": [0, 1]}]}), EXIT_PARSE),
])
def test_exit_codes_parse(tmp_path, capsys, text, code):
    p = tmp_path / "bad.json"
    p.write_text(text)
    assert main(["classify", str(p)]) == code
    assert "error" in capsys.readouterr().out


def test_exit_code_dimension(tmp_path, capsys):
    t = e(9, 0, 1, 2) + e(9, 3, 4, 5) + e(9, 6, 7, 8) + e(9, 0, 3, 6)
    assert main(["classify", write(tmp_path, "nine.json", t)]) == EXIT_DIM
    capsys.readouterr()


def test_unknown_label_and_usage(capsys):
    assert main(["normal-form", "--label", "XXIV"]) == EXIT_PARSE
    assert main([]) == EXIT_PARSE
    capsys.readouterr()
