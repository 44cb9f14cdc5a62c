"""Source calculus: typing, non-collapse stepping, and evaluation."""

import pytest
from hypothesis import given, settings, strategies as st

from cochoice.parser import parse
from cochoice.printer import format_expr
from cochoice.source import (
    src_typecheck, src_step_all, src_eval, choice_leaves,
    UnboundVariable, TypeMismatch, NonFunctionApplication, FixBodyNotLambda,
)
from cochoice.syntax import (
    NAT, Arrow, Var, App, Lam, Fix, Choice, Num, ADD, alpha_eq,
)
from cochoice.harness import gen_typed_source


def src(text):
    return parse("src", text)


def nums(result):
    return sorted(n.value for n in result.normal_forms)


# ---------------------------------------------------------------- typing

def test_typecheck_examples():
    assert src_typecheck(Num(3)) == NAT
    assert src_typecheck(Lam("x", NAT, Var("x"))) == Arrow(NAT, NAT)
    assert src_typecheck(App(App(ADD, Num(1)), Num(2))) == NAT
    assert src_typecheck(Choice(Num(1), Num(2))) == NAT
    assert src_typecheck(src("fix f:nat->nat. \\x:nat. f x")) == Arrow(NAT, NAT)


def test_typecheck_rejections():
    with pytest.raises(UnboundVariable):
        src_typecheck(Var("x"))
    with pytest.raises(TypeMismatch):
        src_typecheck(App(Lam("x", NAT, Var("x")), Lam("y", NAT, Var("y"))))
    with pytest.raises(TypeMismatch):
        src_typecheck(Choice(Num(1), Lam("x", NAT, Var("x"))))
    with pytest.raises(NonFunctionApplication):
        src_typecheck(App(Num(1), Num(2)))
    with pytest.raises(FixBodyNotLambda):
        src_typecheck(Fix("f", Arrow(NAT, NAT), Var("f")))


# --------------------------------------------------------------- stepping

def test_beta_step():
    e = App(Lam("x", NAT, Var("x")), Num(7))
    assert [(r, t) for r, t in src_step_all(e)] == [("SR-Beta", Num(7))]


def test_choice_does_not_collapse():
    # arguments distribute over choices instead of picking a branch
    e = App(Lam("x", NAT, Var("x")), Choice(Num(1), Num(2)))
    succs = {format_expr(t) for _, t in src_step_all(e)}
    assert succs == {"((\\x:nat. x) 1 || (\\x:nat. x) 2)"}


def test_function_choice_distributes():
    e = App(Choice(Lam("x", NAT, Var("x")), Lam("x", NAT, Num(9))), Num(1))
    rules = {r for r, _ in src_step_all(e)}
    assert "SR-DistAppL" in rules


def test_branches_step_independently():
    e = Choice(App(Lam("x", NAT, Var("x")), Num(1)), Num(2))
    assert [(r, format_expr(t)) for r, t in src_step_all(e)] == [
        ("SR-ChoiceL", "(1 || 2)")
    ]


def test_add_delta_rule():
    e = App(App(ADD, Num(2)), Num(3))
    assert [(r, t) for r, t in src_step_all(e)] == [("SR-Add", Num(5))]


# --------------------------------------------------------------- evaluation

def test_eval_demo_leaves():
    e = src("(\\x:nat. (add x 1 || add x 3)) (3 || 5)")
    res = src_eval(e)
    assert not res.exhausted and not res.stuck
    assert len(res.normal_forms) == 1
    leaves = sorted(n.value for n in choice_leaves(res.normal_forms[0]))
    assert leaves == [4, 6, 6, 8]


def test_eval_shared_argument_demo():
    # the two occurrences of the bound variable share the same choice
    e = src("(\\x:nat. add x x) (1 || 2)")
    res = src_eval(e)
    leaves = sorted(n.value for n in choice_leaves(res.normal_forms[0]))
    assert leaves == [2, 4]


def test_divergent_term_exhausts():
    e = src("(fix f:nat->nat. \\x:nat. f x) 0")
    res = src_eval(e, fuel=200)
    assert res.exhausted
    assert res.normal_forms == []


def test_stuck_term_reported():
    res = src_eval(App(Num(1), Num(2)))
    assert res.stuck


# --------------------------------------------------------------- properties

terms = st.builds(
    lambda seed, size: gen_typed_source(seed, size),
    st.integers(0, 10**6),
    st.integers(1, 16),
)


@settings(max_examples=150, deadline=None)
@given(terms)
def test_source_subject_reduction(e):
    ty = src_typecheck(e)
    for _, e2 in src_step_all(e):
        assert src_typecheck(e2) == ty


@settings(max_examples=100, deadline=None)
@given(terms)
def test_values_do_not_step(e):
    res = src_eval(e, fuel=300)
    for nf in res.normal_forms:
        assert src_step_all(nf) == []


@settings(max_examples=100, deadline=None)
@given(terms)
def test_print_parse_round_trip(e):
    assert alpha_eq(src(format_expr(e)), e)
