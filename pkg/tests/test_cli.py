import json
import subprocess
import sys

import jsonschema
import pytest

from tetravol.cli import main
from tetravol.exact import Configuration
from tetravol.identities import Identity
from tetravol.schemas import ALL


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def eq9_files(tmp_path, capsys):
    code, out, _ = run(capsys, "builtin", "--eq9", "--out-dir", tmp_path)
    assert code == 0
    return json.loads(out)["files"]


def test_builtin_then_prove(eq9_files, capsys):
    assert len(eq9_files) == 3
    for path in eq9_files:
        doc = json.loads(open(path).read())
        jsonschema.validate(doc, ALL["identity"])
        code, out, _ = run(capsys, "prove", "--identity", path)
        assert code == 0
        assert json.loads(out) == {"schema": 1, "provenance": doc["provenance"], "zero": True,
                                   "terms_after_cancellation": 0}


def test_prove_dump(eq9_files, tmp_path, capsys):
    dump = tmp_path / "p.txt"
    code, _, _ = run(capsys, "prove", "--identity", eq9_files[0], "--dump", dump, "--fix-origin")
    assert code == 0 and dump.read_text() == "0\n"


def _corrupt(path, tmp_path):
    doc = json.loads(open(path).read())
    doc["terms"][0]["coeff"] = str(-int(doc["terms"][0]["coeff"]))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    return bad


def test_verify(eq9_files, tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--identity", eq9_files[1], "--trials", 5,
                       "--coord-bound", 1000, "--seed", 3)
    report = json.loads(out)
    assert code == 0 and report["residuals"] == ["0"] * 5 and report["pass"]
    code, out, _ = run(capsys, "verify", "--identity", _corrupt(eq9_files[1], tmp_path), "--trials", 5)
    assert code == 1 and json.loads(out)["nonzero"] == 5


def test_prove_corrupted(eq9_files, tmp_path, capsys):
    code, out, _ = run(capsys, "prove", "--identity", _corrupt(eq9_files[0], tmp_path))
    assert code == 1 and json.loads(out)["terms_after_cancellation"] > 0


def test_volume(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 6, "points": {
        "A": ["0", "0", "0"], "B": ["2", "0", "0"], "C": ["0", "3", "0"], "D": ["0", "0", "5"],
        "E": ["1/2", "1", "1"], "F": ["7", "-1", "2"]}}))
    jsonschema.validate(json.loads(cfg.read_text()), ALL["configuration"])
    code, out, _ = run(capsys, "volume", "--config", cfg, "--tetra", "ABCD")
    assert code == 0 and json.loads(out)["volume"] == "5"
    code, out, _ = run(capsys, "volume", "--config", cfg, "--tetra", "BACD")
    assert json.loads(out)["volume"] == "-5"
    code, _, err = run(capsys, "volume", "--config", cfg, "--tetra", "ABAD")
    assert code == 2 and json.loads(err)["error"] == "InvalidTetra"


def test_discover(tmp_path, capsys, eq9_files):
    out_file = tmp_path / "set.json"
    code, out, _ = run(capsys, "discover", "--n", 6, "--degree", 3, "--profile", "balanced",
                       "--coord-bound", 1000, "--seed", 1, "--out", out_file)
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert json.loads(out) == doc
    jsonschema.validate(doc, ALL["identity-set"])
    assert doc["kernel_dim"] >= 3 and doc["certified"] == "symbolic"
    from tetravol.discovery import MonomialSpace, enumerate_monomials, identity_vector
    from tetravol.linalg import in_span
    monos = enumerate_monomials(MonomialSpace(6, 3))
    basis = [identity_vector(Identity.from_json(d), monos) for d in doc["identities"]]
    for path in eq9_files:
        assert in_span(basis, identity_vector(Identity.from_json(json.load(open(path))), monos))


def test_discover_byte_identical(capsys):
    outs = [run(capsys, "discover", "--n", 6, "--degree", 3, "--seed", 4)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_discover_too_large(capsys):
    code, out, _ = run(capsys, "discover", "--n", 7, "--degree", 7)
    assert code == 0 and json.loads(out)["status"] == "too_large"


def test_discover_bad_profile(capsys):
    code, _, err = run(capsys, "discover", "--n", 6, "--degree", 1)
    assert code == 2 and json.loads(err)["error"] == "InfeasibleProfile"
    code, _, err = run(capsys, "discover", "--n", 6, "--degree", 3, "--profile", "weird")
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_orbit(eq9_files, tmp_path, capsys):
    out_file = tmp_path / "orbit.json"
    code, out, _ = run(capsys, "orbit", "--identity", eq9_files[0], "--out", out_file)
    assert code == 0 and json.loads(out)["size"] == 45
    doc = json.loads(out_file.read_text())
    jsonschema.validate(doc, ALL["orbit"])
    images = [Identity.from_json(d) for d in doc["identities"]]
    assert len(set(images)) == 45
    assert Identity.from_json(json.load(open(eq9_files[0]))) in images


@pytest.mark.parametrize("eq,extra", [(2, ["--samples", 10]), (4, ["--samples", 16, "--configs", 3]),
                                      (5, ["--samples", 8])])
def test_diffcheck(capsys, eq, extra):
    code, out, _ = run(capsys, "diffcheck", "--eq", eq, "--seed", 1, *extra)
    report = json.loads(out)
    jsonschema.validate(report, ALL["diffcheck"])
    assert code == 0 and report["pass"] and report["check"] == f"eq{eq}"


def test_diffcheck_failure_exit_code(capsys):
    # at h = 1e-3 the truncation spread is ~1e-5, far above a 1e-8 tolerance
    code, out, _ = run(capsys, "diffcheck", "--eq", 2, "--h", 1e-3, "--samples", 50,
                       "--tolerance", 1e-8)
    assert code == 3 and not json.loads(out)["pass"]


def test_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and json.loads(err)["error"] == "usage"
    code, _, err = run(capsys, "prove", "--identity", tmp_path / "missing.json")
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_config_json_schema_round_trip():
    cfg = Configuration(((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))
    doc = cfg.to_json()
    jsonschema.validate(doc, ALL["configuration"])
    assert Configuration.from_json(json.loads(json.dumps(doc))) == cfg


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "tetravol", "builtin", "--eq9", "--out-dir",
                           str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0 and (tmp_path / "eq9-1.json").exists()
