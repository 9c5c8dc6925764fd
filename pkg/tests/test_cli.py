import json
import subprocess
import sys

import pytest

from symdet.cli import main

CURVES = {
    "klein.curve": "field: Q\nX0^3*X1 + X1^3*X2 + X2^3*X0\n",
    "fermat4.curve": "field: Q\nX0^4 + X1^4 + X2^4\n",
    "cusp.curve": "field: Q\nX0^2*X2 - X1^3\n",
    "quintic_f5.curve": "field: F5\nX0^5 + X1^5 + X2^5 + X0*X1^4\n",
    "conic.curve": "field: Q\nX0^2 + X1^2 - X2^2\n",
    "conic_f3.curve": "field: F3\nX0^2 + X1^2 + X2^2\n",
    "bad.curve": "field: Q\nX0^2 + Y1\n",
    "conic.pencil": "field: Q\nn: 2\na: -1\nM0:\n1 0\n0 -1\nM1:\n0 1\n1 0\nM2:\n1 0\n0 1\n",
    "wrong.pencil": "field: Q\nn: 2\na: 1\nM0:\n1 0\n0 -1\nM1:\n0 1\n1 0\nM2:\n1 0\n0 1\n",
}


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    for name, text in CURVES.items():
        (d / name).write_text(text)
    return d


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def strip_time(text):
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("# time:"))


def test_klein_identity(capsys):
    code, out = run(capsys, "verify", "klein-identity")
    assert code == 0 and "verdict: pass" in out
    assert "det = -X0^3*X1 - X0*X2^3 - X1^3*X2" in out
    assert out.splitlines()[-1].startswith("# time:")


def test_conic_identity(capsys):
    code, out = run(capsys, "verify", "conic-identity")
    assert code == 0 and "det = -X0^2 - X1^2 + X2^2" in out


def test_fermat7_two_torsion_and_cert_file(capsys, tmp_path):
    path = tmp_path / "f7.cert"
    code, out = run(capsys, "verify", "fermat7-two-torsion", "--emit-cert", str(path))
    assert code == 0
    assert "support size of D: 21" in out
    assert "Bezout numerator: 28 of 28 (complete)" in out
    assert "Bezout denominator: 28 of 28 (complete)" in out
    assert "multiplicity of X2 at R_0..R_6: [1, 1, 1, 1, 1, 1, 1]" in out
    code, out = run(capsys, "check", "two-torsion", "--cert", str(path))
    assert code == 0
    # tamper: drop a numerator candidate -> incomplete section, error
    text = path.read_text().splitlines()
    idx = text.index("candidates-numerator:")
    del text[idx + 1]
    path.write_text("\n".join(text) + "\n")
    code, out = run(capsys, "check", "two-torsion", "--cert", str(path))
    assert code == 2 and "IncompleteSection" in out


def test_fermat7_effective(capsys):
    code, out = run(capsys, "verify", "fermat7-effective")
    assert code == 0 and "effective: True" in out
    assert "Galois-invariant under 12 automorphisms" in out


def test_bitangent(capsys, files):
    code, out = run(capsys, "verify", "bitangent", "--curve", str(files / "klein.curve"), "--line", "1,1,1")
    assert code == 0 and "local multiplicity 2" in out
    code, out = run(capsys, "verify", "bitangent", "--curve", str(files / "fermat4.curve"), "--line", "0 0 1")
    assert code == 1
    code, out = run(capsys, "verify", "bitangent", "--curve", str(files / "klein.curve"), "--line", "1,1")
    assert code == 2


def test_identities(capsys):
    assert run(capsys, "verify", "quotient-map", "-p", "7", "-s", "2")[0] == 0
    assert run(capsys, "verify", "quotient-map", "-p", "7", "-s", "0")[0] == 2
    assert run(capsys, "verify", "klein-birational")[0] == 0
    code, out = run(capsys, "verify", "group-ring", "-p", "3")
    assert code == 0 and "left: -2 + A*B^2 + A^2*B" in out
    assert run(capsys, "verify", "group-ring", "-p", "2")[0] == 2


def test_check_pencil(capsys, files):
    args = ["check", "pencil", "--curve", str(files / "conic.curve")]
    assert run(capsys, *args, "--pencil", str(files / "conic.pencil"))[0] == 0
    assert run(capsys, *args, "--pencil", str(files / "wrong.pencil"))[0] == 1
    code, _ = run(capsys, "check", "pencil", "--curve", str(files / "klein.curve"), "--pencil", str(files / "conic.pencil"))
    assert code == 2


def test_search(capsys, files):
    code, out = run(capsys, "search", "ff", "--curve", str(files / "conic_f3.curve"), "--n", "2")
    assert code == 0
    lines = out.splitlines()
    start = lines.index("  --- summary (json) ---")
    summary = json.loads(lines[start + 1])
    assert summary["classes"] == 1 and summary["found"] > 0
    code, out = run(capsys, "search", "ff", "--curve", str(files / "conic_f3.curve"), "--n", "2", "--budget", "5")
    assert code == 2 and "BudgetExceeded" in out


def test_conic(capsys):
    code, out = run(capsys, "conic", "qpoint", "1", "1", "1")
    assert code == 0 and "rational point: no" in out and "obstructions: inf" in out
    code, out = run(capsys, "conic", "qpoint", "1", "1", "-1")
    assert code == 0 and "witness: (1, 0, 1)" in out
    assert run(capsys, "conic", "qpoint", "1", "-1", "0")[0] == 2
    assert run(capsys, "conic", "qpoint", "1", "x", "0")[0] == 2


def test_smooth(capsys, files):
    assert run(capsys, "smooth", "--curve", str(files / "klein.curve"))[0] == 0
    assert run(capsys, "smooth", "--curve", str(files / "cusp.curve"))[0] == 1
    code, out = run(capsys, "smooth", "--curve", str(files / "quintic_f5.curve"))
    assert code == 2 and "smoothness-undecidable" in out


def test_malformed_inputs(capsys, files):
    code, out = run(capsys, "smooth", "--curve", str(files / "bad.curve"))
    assert code == 2 and "ParseError" in out
    assert run(capsys, "smooth", "--curve", str(files / "missing.curve"))[0] == 2
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_deterministic_output(capsys, files):
    a = run(capsys, "verify", "fermat7-effective")[1]
    b = run(capsys, "verify", "fermat7-effective")[1]
    assert strip_time(a) == strip_time(b)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symdet", "verify", "klein-identity"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verdict: pass" in proc.stdout
