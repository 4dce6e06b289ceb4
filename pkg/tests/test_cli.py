import io
import json
import subprocess
import sys

import numpy as np
import pytest

from design_forge.cli import main, verify_document
from design_forge.corpus import fixture, random_mu_getf
from design_forge.document import (DocumentError, document_from_groups, document_to_dict, dump_document,
                                   load_document, parse_document)

from conftest import mub_qubit_groups


def run(argv, stdin=None, monkeypatch=None, capsys=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cli(monkeypatch, capsys):
    return lambda argv, stdin=None: run(argv, stdin, monkeypatch, capsys)


def write_doc(tmp_path, name, groups):
    path = tmp_path / name
    path.write_text(dump_document(document_from_groups(groups)))
    return str(path)


def test_fixtures_list(cli):
    code, out, _ = cli(["fixtures", "list"])
    assert code == 0
    assert out.split() == ["example1", "example2", "example3"]


def test_fixtures_unknown(cli):
    code, _, err = cli(["fixtures", "dump", "nope"])
    assert code == 2
    assert "UNKNOWN-FIXTURE" in err


@pytest.mark.parametrize("name,expected_code,verdict", [("example1", 1, "NotPsd"), ("example3", 0, "ConicalDesign")])
def test_fixture_pipe_into_verify(cli, name, expected_code, verdict):
    _, dumped, _ = cli(["fixtures", "dump", name])
    code, out, _ = cli(["verify", "-", "--mode", "conical", "--format", "json"], stdin=dumped)
    assert code == expected_code
    rep = json.loads(out)
    assert rep["conical"]["verdict"] == verdict
    assert rep["conical"]["kappa_plus"] == pytest.approx(1 / 3, abs=1e-11)
    assert rep["conical"]["kappa_minus"] == pytest.approx(1 / 6, abs=1e-11)


def test_verify_mubs(cli, tmp_path):
    path = write_doc(tmp_path, "mubs_d2.json", mub_qubit_groups())
    code, out, _ = cli(["verify", path, "--mode", "mu-getf", "--format", "json"])
    assert code == 0
    rep = json.loads(out)["mu_getf"]
    assert rep["f"] == 0.5 and rep["S"] == 1.0


def test_construct_getf_round_trip(cli, tmp_path):
    out_path = str(tmp_path / "sic.json")
    code, _, _ = cli(["construct", "getf", "--d", "2", "--m", "4", "--gamma", "1", "--b", "1", "--out", out_path])
    assert code == 0
    code, out, _ = cli(["verify", out_path, "--mode", "getf", "--format", "json"])
    assert code == 0
    p = json.loads(out)["getf"][0]
    assert (p["gamma"], p["a"], p["b"], p["c"]) == pytest.approx((1, 0.5, 1, 1 / 3), abs=1e-11)


def test_construct_mu_getf_round_trip(cli, tmp_path):
    out_path = str(tmp_path / "mu.json")
    code, _, _ = cli(["construct", "mu-getf", "--d", "2", "--sizes", "2,3", "--s", "0.3", "--out", out_path])
    assert code == 0
    code, out, _ = cli(["verify", out_path, "--mode", "mu-getf", "--format", "json"])
    assert code == 0
    rep = json.loads(out)["mu_getf"]
    assert rep["maximal"] and rep["equidistant"] and rep["S"] == pytest.approx(0.3)
    code, _, _ = cli(["verify", out_path, "--mode", "conical"])
    assert code == 0


@pytest.mark.parametrize("argv,code_name", [
    (["construct", "getf", "--d", "2", "--m", "4", "--b", "0.4"], "B-RANGE"),
    (["construct", "mu-getf", "--d", "2", "--sizes", "2,3", "--s", "0.5"], "S-RANGE"),
    (["construct", "getf", "--d", "3", "--m", "9", "--b", "1", "--seed", "0"], "INFEASIBLE"),
])
def test_construct_errors(cli, argv, code_name):
    code, _, err = cli(argv)
    assert code == 1
    assert code_name in err


def test_construct_seeded_is_deterministic(cli, tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    for p in (a, b):
        assert cli(["construct", "getf", "--d", "3", "--m", "9", "--b", "0.5", "--seed", "0", "--out", p])[0] == 0
    assert open(a).read() == open(b).read()


def test_parse_errors(cli, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli(["verify", str(bad)])[0] == 2
    doc = document_to_dict(document_from_groups(mub_qubit_groups()))
    doc["groups"][0]["operators"][0][0][1] = [0.5, 0.3]
    bad.write_text(json.dumps(doc))
    code, _, err = cli(["verify", str(bad)])
    assert code == 2 and "not Hermitian" in err
    assert cli(["verify", str(tmp_path / "missing.json")])[0] == 2


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(format="other/1"),
    lambda d: d.update(dimension=0),
    lambda d: d.update(dimension=True),
    lambda d: d.update(groups=[]),
    lambda d: d["groups"][0]["operators"][0].pop(),
    lambda d: d["groups"][0]["operators"][0][0].__setitem__(0, [1.0]),
    lambda d: d["groups"][0]["operators"][0][0].__setitem__(0, [float("nan"), 0.0]),
    lambda d: d["groups"][0].update(gamma="one"),
])
def test_parse_document_rejects(mutate):
    doc = document_to_dict(document_from_groups(mub_qubit_groups()))
    mutate(doc)
    with pytest.raises(DocumentError):
        parse_document(doc)


def test_dump_load_bit_exact():
    fam = random_mu_getf(3, [3, 3, 3, 3], 4)
    doc = document_from_groups([g.elements for g in fam.groups], gammas=list(fam.gammas))
    back = load_document(io.StringIO(dump_document(doc)))
    for g0, g1 in zip(doc.groups, back.groups):
        assert np.array_equal(g0.operators, g1.operators)
        assert g0.gamma == g1.gamma


def test_text_and_json_carry_same_data(cli, tmp_path):
    path = write_doc(tmp_path, "ex3.json", fixture("example3").groups)
    _, js, _ = cli(["verify", path, "--format", "json"])
    _, text, _ = cli(["verify", path, "--format", "text"])
    rep = json.loads(js)

    def leaves(obj):
        if isinstance(obj, dict):
            for v in obj.values():
                yield from leaves(v)
        elif isinstance(obj, list):
            for v in obj:
                yield from leaves(v)
        else:
            yield obj

    for value in leaves(rep):
        assert str(value) in text


def test_verify_document_modes():
    doc = document_from_groups(fixture("example3").groups)
    ok, rep = verify_document(doc, "auto")
    assert ok
    assert set(rep) >= {"getf", "mu_getf", "conical"}
    ok, rep = verify_document(doc, "mu-getf")
    assert not ok
    ok, rep = verify_document(doc, "getf")
    assert not ok and rep["getf"][0]["status"] == "GETF" and rep["getf"][1]["status"] == "FAIL"


def test_gamma_mismatch_flagged():
    groups = mub_qubit_groups()
    doc = document_from_groups(groups, gammas=[1.0, 2.0, 1.0])
    ok, rep = verify_document(doc, "getf")
    assert not ok
    assert rep["getf"][1]["violation"] == "GAMMA-MISMATCH"


def test_multiple_paths_ordered(cli, tmp_path):
    p1 = write_doc(tmp_path, "a.json", fixture("example3").groups)
    p2 = write_doc(tmp_path, "b.json", [fixture("example1").operators])
    code, out, _ = cli(["verify", p1, p2, "--mode", "conical", "--format", "json"])
    assert code == 1
    reps = json.loads(out)
    assert [r["path"] for r in reps] == [p1, p2]


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "design_forge", "fixtures", "list"], capture_output=True, text=True)
    assert res.returncode == 0 and "example3" in res.stdout


def test_help_states_defaults(cli):
    with pytest.raises(SystemExit):
        main(["verify", "--help"])
