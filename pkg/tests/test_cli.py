"""Command-line interface and concrete syntax round trips."""

import pytest
from hypothesis import given, settings, strategies as st

from cochoice.cli import main
from cochoice.compiler import compile_expr
from cochoice.harness import gen_typed_source
from cochoice.parser import ParseError, parse
from cochoice.printer import format_expr, format_type, format_effect
from cochoice.syntax import alpha_eq


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse/file errors exit directly
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def term_file(tmp_path, text, name="term.txt"):
    f = tmp_path / name
    f.write_text(text)
    return str(f)


def test_src_check_and_eval(tmp_path, capsys):
    f = term_file(tmp_path, "(\\x:nat. add x 1) (3 || 5)")
    code, out, _ = run(capsys, "src-check", f)
    assert code == 0 and out.strip() == "nat"
    code, out, _ = run(capsys, "src-eval", f)
    assert code == 0 and out.strip() == "(4 || 6)"


def test_src_check_failure_exit_code(tmp_path, capsys):
    f = term_file(tmp_path, "1 2")
    code, _, err = run(capsys, "src-check", f)
    assert code == 1 and "type error" in err


def test_parse_error_exit_code(tmp_path, capsys):
    f = term_file(tmp_path, "\\x:nat")
    code, _, err = run(capsys, "src-check", f)
    assert code == 2 and "parse error" in err


def test_src_step(tmp_path, capsys):
    f = term_file(tmp_path, "(\\x:nat. x) 1")
    code, out, _ = run(capsys, "src-step", f)
    assert code == 0 and out.strip() == "SR-Beta: 1"


def test_tgt_check(tmp_path, capsys):
    f = term_file(tmp_path, "(1 ||{o b} 2)")
    code, out, _ = run(capsys, "tgt-check", f)
    assert code == 0 and out.strip() == "nat & o b"


def test_tgt_check_failure(tmp_path, capsys):
    f = term_file(tmp_path, "((1 ||{o} 2) ||{o} 3)")
    code, _, err = run(capsys, "tgt-check", f)
    assert code == 1 and "type error" in err


def test_tgt_eval_with_world(tmp_path, capsys):
    f = term_file(tmp_path, "(1 ||{o} 2)")
    code, out, _ = run(capsys, "tgt-eval", f, "--delta", "o+")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "tgt-eval", f, "--delta", "o-")
    assert code == 0 and out.strip() == "2"


def test_tgt_eval_nc(tmp_path, capsys):
    f = term_file(tmp_path, "(\\x:nat. x) (1 ||{o} 2)")
    code, out, _ = run(capsys, "tgt-eval-nc", f)
    assert code == 0 and out.strip() == "(1 ||{o} 2)"


def test_compile_erase_pseudo(tmp_path, capsys):
    f = term_file(tmp_path, "(1 || 2)")
    code, out, _ = run(capsys, "compile", f, "--seed-var", "al")
    assert code == 0 and out.strip() == "(1 ||{al b} 2)"
    code, out, _ = run(capsys, "compile", f, "--seed-var", "al", "--seed", "o o")
    assert code == 0 and out.strip() == "(1 ||{al o o b} 2)"

    g = term_file(tmp_path, out.strip(), "compiled.txt")
    code, out, _ = run(capsys, "erase", g)
    assert code == 0 and out.strip() == "(1 || 2)"
    code, out, _ = run(capsys, "pseudo", f)
    assert code == 0 and out.strip() == "(1 || 2)"


def test_bisim_and_end2end(tmp_path, capsys):
    f = term_file(tmp_path, "((1 || 2) || 3)")
    code, out, _ = run(capsys, "compile", f)
    m = term_file(tmp_path, out.strip().replace("a ", "").replace("{a", "{"),
                  "target.txt")
    code, out, _ = run(capsys, "end2end", f)
    assert code == 0 and "status=OK" in out


def test_bisim_precondition_exit_code(tmp_path, capsys):
    f = term_file(tmp_path, "1")
    g = term_file(tmp_path, "2", "tgt.txt")
    code, _, err = run(capsys, "bisim", f, g)
    assert code == 1 and "precondition" in err


def test_suite_line_format(capsys):
    code, out, _ = run(capsys, "suite", "--n", "2", "--seed", "7", "--size", "8")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 10  # 2 cases x 5 checks
    for line in lines:
        assert line.startswith("case=")
        assert " check=" in line
        parts = dict(p.split("=", 1) for p in line.split())
        assert parts["status"] in {"OK", "FUEL", "FAIL"}
        assert parts["status"] != "FAIL"


def test_effect_subcommands(capsys):
    code, out, _ = run(capsys, "effect", "member", "o b", "o (o+b)*")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "effect", "includes", "o o", "o*")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "effect", "disjoint", "o*", "b b*")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "effect", "quotient", "o", "o (o+b)")
    assert code == 0 and out.strip() == "b + o"
    code, _, err = run(capsys, "effect", "quotient", "o", "b")
    assert code == 1 and "coverage error" in err


def test_stdin_input(capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO("(1 || 2)"))
    code, out, _ = run(capsys, "src-eval", "-")
    assert code == 0 and out.strip() == "(1 || 2)"


# ------------------------------------------------- concrete syntax round trip

terms = st.builds(
    lambda seed, size: gen_typed_source(seed, size),
    st.integers(0, 10**6),
    st.integers(1, 16),
)


@settings(max_examples=100, deadline=None)
@given(terms)
def test_format_parse_round_trip_both_calculi(e):
    assert alpha_eq(parse("src", format_expr(e)), e)
    m = compile_expr(e, "a", ("o",))
    assert alpha_eq(parse("tgt", format_expr(m)), m)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse("src", "(1 ||")
    assert exc.value.line >= 1 and exc.value.column >= 1
