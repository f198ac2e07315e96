import io
import subprocess
import sys
from pathlib import Path

import pytest

from polylist.cli import main
from polylist.instancefile import SAMPLE, parse_instance, InstanceFileError

SAMPLE_PATH = Path(__file__).resolve().parent.parent / "samples" / "sample.inst"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, text):
    p = tmp_path / "case.inst"
    p.write_text(text)
    return str(p)


def test_sample_file_matches_builtin():
    assert SAMPLE_PATH.read_text() == SAMPLE


def test_adjoint_sample():
    code, out, _ = run("adjoint", str(SAMPLE_PATH))
    assert code == 0
    assert "h(p) = [a,b]\nh(q) = []\nh(r) = [a]\n" in out
    assert "EXISTENCE PASS" in out
    assert "UNIQUENESS PASS (1 solution)" in out
    assert "1 of 8 candidates" in out


def test_adjoint_deterministic_subprocess():
    cmd = [sys.executable, "-m", "polylist", "adjoint", str(SAMPLE_PATH)]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout


def test_missing_g_entry(tmp_path):
    text = SAMPLE.replace("(1, p) -> b, ", "")
    code, out, err = run("adjoint", write(tmp_path, text))
    assert code == 2
    assert "g(1, p) is missing" in err
    assert "line 4" in err
    assert out == ""


def test_extra_g_entry(tmp_path):
    text = SAMPLE + "g: (2, p) -> a\n"
    code, _, err = run("adjoint", write(tmp_path, text))
    assert code == 2
    assert "g(2, p)" in err and "line 6, column 4" in err


def test_syntax_error_location(tmp_path):
    text = SAMPLE.replace("lA: p -> 2", "lA: p => 2")
    code, _, err = run("adjoint", write(tmp_path, text))
    assert code == 2
    assert "line 4, column 8" in err


@pytest.mark.parametrize("text,msg", [
    ("X = {a}\nA = {p}\nlA: p -> 0\nlA: p -> 1\n", "duplicate length"),
    ("X = {a, a}\nA = {p}\nlA: p -> 0\n", "duplicate element"),
    ("X = {a}\nA = {p}\nlA: p -> 0\nY = {b}\n", "unknown declaration"),
    ("X = {a}\nA = {p}\nlA: p -> 1\ng: (0, p) -> z\n", "not in X"),
    ("X = {a}\nA = {p}\n", "no length"),
    ("X = {a}\nlA: p -> 0\n", "no declaration of A"),
])
def test_instance_file_errors(text, msg):
    with pytest.raises(InstanceFileError, match=msg):
        parse_instance(text)


def test_missing_file():
    code, _, err = run("adjoint", "/nonexistent/file.inst")
    assert code == 2 and "cannot read" in err


def test_budget_overflow():
    code, out, err = run("adjoint", str(SAMPLE_PATH), "--card-cap", "4")
    assert code == 3
    assert "8 candidates" in err and out == ""


def test_laws_pass_and_deterministic():
    a = run("laws", "--nat-max", "4", "--card-x", "1", "--samples", "20")
    b = run("laws", "--nat-max", "4", "--card-x", "1", "--samples", "20")
    assert a[0] == 0
    assert a[1] == b[1]
    assert a[1].startswith("# seed 0")
    assert " FAIL" not in a[1]


def test_laws_bad_budget():
    code, _, err = run("laws", "--nat-max", "-1")
    assert code == 2 and "negative" in err


@pytest.mark.parametrize("k,n,total", [(2, 3, 15), (0, 3, 1), (1, 5, 6)])
def test_poly(k, n, total):
    code, out, _ = run("poly", "--card-x", str(k), "--max-len", str(n))
    assert code == 0
    assert f"total {total}\n" in out
    assert f"BIJECTION PASS ({total} sections, {total} lists)" in out


def test_poly_cap():
    code, _, _ = run("poly", "--card-x", "3", "--max-len", "4", "--card-cap", "10")
    assert code == 3


@pytest.mark.parametrize("argv,expected", [
    (["monus(3, 5)"], "0"),
    (["idUntil(7, 3)"], "2"),
    (["[a, b]", "--atoms", "X=a,b"], "[a,b]"),
    (["nthDef(x, 1, [a,b,c])", "--atoms", "X=a,b,c", "--ctx", "x: X", "--set", "x=a"], "b"),
    (["add(m, n)", "--ctx", "m: N, n: N", "--set", "m=2", "--set", "n=3"], "5"),
])
def test_eval(argv, expected):
    code, out, _ = run("eval", *argv)
    assert code == 0 and out.strip() == expected


def test_eval_errors():
    assert run("eval", "add(1")[0] == 2
    assert run("eval", "cons(1, 1)")[0] == 2
    assert run("eval", "x", "--ctx", "x: N")[0] == 2
    code, _, err = run("eval", "x", "--ctx", "x: N, y: N | x < y", "--set", "x=3", "--set", "y=1")
    assert code == 2


def test_laws_documented_flags():
    code, out, _ = run("laws", "--nat-max", "8", "--len-max", "3", "--card-x", "2", "--seed", "7")
    assert code == 0
    assert out.splitlines()[0] == "# seed 7, nat-max 8, len-max 3, card-x 2"
    assert out.splitlines()[-1].endswith("laws passed")
