import json

import pytest

from doubleloop import parse_iter, parse_ring
from doubleloop.cli import main

E = "Q[e]/(e^2)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def field(out, key):
    for line in out.splitlines():
        if line.startswith(key + ": "):
            return line[len(key) + 2:]
    raise KeyError(key)


def test_reduce_loop_grassmannian_example(capsys):
    code, out, _ = run(capsys, "reduce", "--group", "gm", "--quotient", "grL", "--ring", E,
                       "--expr", "1 - e*(1+t^-1)*s^-1", "--t-prec", "8", "--s-prec", "8")
    assert code == 0
    assert field(out, "verification") == "verified"
    ring = parse_ring(E)
    assert parse_iter(field(out, "sigma_minus"), ring) == parse_iter("1 - e*t^-1*s^-1", ring)


def test_decompose_product_ring(capsys):
    code, out, _ = run(capsys, "decompose", "--ring", "QxQ", "--expr", "(1,0) + (0,1)*t")
    assert code == 0
    assert "group 0:" in out and "group 1:" in out and "group 2:" not in out
    assert field(out, "check") == "verified"


def test_fiber_tag(capsys):
    code, out, _ = run(capsys, "fiber", "--tag", "Zhat_aff")
    assert (code, out) == (0, "JJ / R[[x,y]]\n")


def test_fiber_geometric_caveat(capsys):
    code, out, _ = run(capsys, "fiber", "--geom", "geomLoopGr")
    assert code == 0 and "-> GRL" in out and "caveat:" in out


@pytest.mark.parametrize("argv", [
    ("reduce", "--quotient", "GR1D", "--ring", E, "--expr", "e*t"),
    ("reduce", "--quotient", "GRJ", "--ring", E, "--expr", "e + t*s"),
])
def test_non_unit_exits_one(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 1 and "NotInvertible" in out


@pytest.mark.parametrize("argv", [
    ("reduce", "--quotient", "GR1D", "--ring", "Zz", "--expr", "1"),
    ("reduce", "--quotient", "GR1D", "--ring", "Q", "--expr", "1 +* t"),
    ("reduce", "--quotient", "GR7", "--ring", "Q", "--expr", "1"),
    ("frobnicate",),
    (),
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_truncated_one_variable_input_is_rejected(capsys):
    code, out, _ = run(capsys, "reduce", "--quotient", "GR1D", "--ring", E,
                       "--expr", "1 + e*t^-1 + O(t^1)")
    assert code == 1 and field(out, "error").startswith("ValueError")


def test_json_document(capsys):
    argv = ("reduce", "--quotient", "GRJ", "--ring", E, "--expr", "1 + (t^-1 + t)*s", "--format", "json")
    code, out, _ = run(capsys, *argv)
    doc = json.loads(out)
    assert code == 0
    assert doc["schema_version"] == 1 and doc["command"] == "reduce"
    assert doc["verification"]["verdict"] == "verified"


@pytest.mark.parametrize("argv", [
    ("reduce", "--quotient", "GR2", "--ring", "F3[e1,e2]/(e1^2,e2^2)", "--expr", "1 + e1*t^-1*s^-1 + e2*t*s^2"),
    ("reduce", "--group", "tower", "--quotient", "LGR", "--ring", E, "--expr", "(t, 1 + e*s^-1, t^-1)"),
    ("decompose", "--ring", "QxQ", "--expr", "(1,2) + (0,1)*t^-1", "--format", "json"),
])
def test_output_is_byte_stable(capsys, argv):
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.txt"
    code, out, _ = run(capsys, "coset-eq", "--quotient", "GR1D", "--ring", E, "--expr", "1 + e*t^-1 + t",
                       "--expr2", "1 + e*t^-1", "--out", str(path))
    assert code == 0 and field(out, "equal") == "true"
    assert path.read_text(encoding="utf-8") == out


def test_coset_eq_distinct(capsys):
    code, out, _ = run(capsys, "coset-eq", "--quotient", "GR1D", "--ring", "Q", "--expr", "t", "--expr2", "t^2")
    assert field(out, "equal") == "false"


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--ring", E, "--eps", "e*t^-1")
    assert code == 0 and field(out, "M") == "6" and field(out, "vanishes") == "yes"


def test_verify_additive(capsys):
    code, out, _ = run(capsys, "verify", "--group", "ga", "--quotient", "GRL", "--ring", "Q", "--expr", "t^-2 + t")
    assert code == 0 and field(out, "verification") == "verified"


def test_xy_aliases(capsys):
    a = run(capsys, "reduce", "--quotient", "GRBIG", "--ring", E, "--expr", "1 + e*x^-1*y")
    b = run(capsys, "reduce", "--quotient", "GRBIG", "--ring", E, "--expr", "1 + e*t^-1*s")
    assert a[0] == b[0] == 0
    assert field(a[1], "representative") == field(b[1], "representative")


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
