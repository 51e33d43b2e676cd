import io
import json

import pytest

from dialectica import cli


def run(tmp_path, args, text=None):
    if text is not None:
        path = tmp_path / "in.lam"
        path.write_text(text, encoding="utf-8")
        args = args + ["--in", str(path)]
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(args, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_translate_identity(tmp_path):
    code, out, _ = run(tmp_path, ["--cmd", "translate"], r"\(x:real). x")
    assert code == 0
    assert r"<\x. x, \π. [π^2]>" in out
    assert "(real -> real) * (real * real -> M[real])" in out


def test_translate_open_term_json(tmp_path):
    code, out, _ = run(tmp_path, ["--cmd", "translate", "--format", "json"], "x : real, y : real |- mul x y")
    recs = records(out)
    assert code == 0 and [r["record"] for r in recs] == ["witness", "counter", "counter"]
    assert recs[1]["var"] == "x" and recs[1]["counter"] == r"\π. [mul (d1_mul x y) π]"


def test_grad(tmp_path):
    code, out, _ = run(tmp_path, ["--cmd", "grad", "--point", "3.0", "--format", "json"], r"\(x:real). sq (sq x)")
    (rec,) = records(out)
    assert code == 0
    assert rec["gradient"] == [108.0] and rec["value"] == 81.0
    assert rec["max_rel_err_forward"] <= 1e-9 and rec["max_rel_err_fd"] <= 1e-4


def test_grad_tolerance_violation(tmp_path):
    code, _, _ = run(tmp_path, ["--cmd", "grad", "--point", "3.0", "--tol-fd", "1e-15"], r"\(x:real). sq (sq x)")
    assert code == cli.EXIT_FAILED


def test_typecheck_and_normalize(tmp_path):
    code, out, _ = run(tmp_path, ["--cmd", "typecheck"], r"\(f:real->real) (x:real). f (f x)")
    assert code == 0 and out.strip().endswith("(real -> real) -> real -> real")
    code, out, _ = run(tmp_path, ["--cmd", "normalize"], r"[3.0] >>= \z. [z] + 0")
    assert code == 0 and out.strip() == "[3.0] : M[real]"


@pytest.mark.parametrize(
    "args, text, code",
    [
        (["--cmd", "typecheck"], r"\(x:real). (x", cli.EXIT_PARSE),
        (["--cmd", "typecheck"], r"\(x:real). x x", cli.EXIT_TYPE),
        (["--cmd", "grad"], r"\(x:real). x", cli.EXIT_USAGE),  # no --point
        (["--cmd", "grad", "--point", "1,2"], r"\(x:real). x", cli.EXIT_USAGE),
        (["--cmd", "grad", "--point", "1"], r"\x. x", cli.EXIT_TYPE),
        (["--cmd", "translate"], None, cli.EXIT_USAGE),
        (["--cmd", "nonsense"], None, cli.EXIT_USAGE),
        (["--cmd", "grad", "--tol-ad", "-1"], None, cli.EXIT_USAGE),
    ],
)
def test_exit_codes(tmp_path, args, text, code, capsys):
    assert run(tmp_path, args, text)[0] == code


def test_missing_file(tmp_path):
    code, _, err = run(tmp_path, ["--cmd", "typecheck", "--in", str(tmp_path / "nope.lam")])
    assert code == cli.EXIT_IO and "cannot read" in err


def test_errors_are_structured_in_json(tmp_path):
    code, out, _ = run(tmp_path, ["--cmd", "typecheck", "--format", "json"], r"\(x:real). (x")
    (rec,) = records(out)
    assert rec["record"] == "error" and rec["kind"] == "parse" and rec["exit_code"] == code == 4
    assert rec["line"] == 1 and rec["col"] > 1


def test_laws_are_deterministic(tmp_path):
    code, first, _ = run(tmp_path, ["--cmd", "laws", "--seed", "0", "--format", "json"])
    _, second, _ = run(tmp_path, ["--cmd", "laws", "--seed", "0", "--format", "json"])
    assert code == 0 and first == second
    assert all(r["passed"] for r in records(first))


def test_soundness_suite(tmp_path):
    code, out, _ = run(tmp_path, ["--cmd", "soundness-suite", "--seed", "3"])
    assert code == 0 and out.startswith("PASS")
