import io
import json
import subprocess
import sys

import pytest

from skewlab.cli import run
from skewlab.expr import SpecError
from skewlab.specfile import load, parse_spec

from conftest import SPEC_DIR

FIXTURES = sorted(SPEC_DIR.glob("*.spec"))


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--json")
    return code, json.loads(out)


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_fixture_round_trip(path):
    spec = parse_spec(path.read_text())
    again = parse_spec(spec.pretty())
    assert again == spec
    assert again.pretty() == spec.pretty()


@pytest.mark.parametrize(
    "text,kind",
    [
        ("field Fp(4)\nring poly(x)\nauto x -> x", "semantic"),
        ("field Q\nring poly(x,y)\nauto x -> z\nauto y -> y", "semantic"),
        ("field Q\nring poly(x)\nauto x -> (x", "syntax"),
        ("field Q\nring poly(x)\nauto x -> x $ 1", "lexical"),
    ],
)
def test_parse_errors(text, kind):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.kind == kind and info.value.line >= 1


def test_parse_error_position():
    with pytest.raises(SpecError) as info:
        parse_spec("field Q\nring poly(x, y)\nauto x -> y\nauto y -> x + w")
    assert info.value.line == 4


def test_build_henon():
    ctx = load("field Q\nring poly(x,y)\nauto x -> y\nauto y -> x + y^2")
    assert ctx.alpha.tag.kind == "henon"


def test_decide_henon():
    code, rep = call_json("decide", SPEC_DIR / "henon.spec")
    assert code == 0 and rep["result"]["verdict"] == "Unknown(qn4)"
    assert rep["warnings"] and rep["exit_status"] == 0


def test_cycles_f2():
    code, rep = call_json("cycles", SPEC_DIR / "henon.spec", "--prime", 2)
    assert code == 0 and rep["result"]["histogram"] == {"1": 1, "3": 1}


def test_cycles_csv():
    code, out, _ = call("cycles", SPEC_DIR / "henon.spec", "--prime", 3, "--csv")
    assert code == 0 and "length,count" in out


def test_verify_matrix_units():
    code, rep = call_json("verify-matrix-units", "--n", 3)
    assert code == 0 and rep["result"]["ok"] is True


def test_order_and_classify():
    assert "Finite(4)" in call("order", SPEC_DIR / "rotation.spec")[1]
    assert "henon" in call("classify", SPEC_DIR / "henon.spec")[1]


def test_curve_points_file(tmp_path):
    pts = tmp_path / "pts.txt"
    pts.write_text("0, 0\n1, 1\n# comment\n2, 4\n")
    code, rep = call_json("curve", "--degree", 2, "--points", pts)
    assert code == 0 and rep["result"]["curve"] == "x^2 - y"
    pts.write_text("0,0\n1,0\n0,1\n")
    code, rep = call_json("curve", "--degree", 1, "--points", pts)
    assert code == 0 and rep["result"]["curve"] is None


def test_special_probe():
    code, rep = call_json("special", SPEC_DIR / "quantum_plane.spec", "--a", "a", "--ideal", "cube", "--ideal", "(x^2)")
    assert code == 0
    assert [h["least_n"] for h in rep["result"]["hits"]] == [3, 2]


def test_modlab_commands():
    qp = SPEC_DIR / "quantum_plane.spec"
    assert call("modlab", "chain", qp, "--rho", "x", "--max", 5)[0] == 0
    code, rep = call_json("modlab", "essential", qp, "--rho", "x", "--elem", "m")
    assert code == 0 and rep["result"]["found"] is True
    assert call("modlab", "lattice", qp, "--gens", "x^2")[0] == 0


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text("field Fp(4)\nring poly(x)\nauto x -> x\n")
    assert call("order", bad)[0] == 1
    assert call("order", tmp_path / "missing.spec")[0] == 1
    assert call("nonsense")[0] == 1
    assert call("cycles", SPEC_DIR / "henon.spec")[0] == 1
    nonauto = tmp_path / "square.spec"
    nonauto.write_text("field Q\nring poly(x)\nauto x -> x^2\n")
    assert call("order", nonauto)[0] == 2
    assert call("cycles", SPEC_DIR / "henon.spec", "--prime", 4)[0] == 1
    assert call("modlab", "chain", SPEC_DIR / "quantum_plane.spec", "--rho", "3")[0] == 2


def test_error_report_is_json(tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text("field Q\nring poly(x)\nauto x -> y\n")
    code, rep = call_json("order", bad)
    assert code == 1 and rep["exit_status"] == 1 and "error" in rep


def test_json_digest_ignores_json_flag_but_not_inputs():
    a = call_json("order", SPEC_DIR / "rotation.spec")[1]["inputs_sha256"]
    b = call_json("order", SPEC_DIR / "rotation.spec", "--bound", 10)[1]["inputs_sha256"]
    c = call_json("order", SPEC_DIR / "reflection.spec")[1]["inputs_sha256"]
    assert len({a, b, c}) == 3


def test_stamp_only_on_request():
    assert "timestamp" not in call_json("order", SPEC_DIR / "rotation.spec")[1]
    code, out, _ = call("order", SPEC_DIR / "rotation.spec", "--json", "--stamp")
    assert "timestamp" in json.loads(out)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "skewlab", "order", str(SPEC_DIR / "rotation.spec")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "Finite(4)" in proc.stdout
