"""Term syntax: substitution, free variables, and alpha-equivalence."""

import random

from hypothesis import given, settings, strategies as st

from cochoice.effects import Lit, cat, star, alt
from cochoice.syntax import (
    NAT, Arrow, TNAT, TArrow, TForall,
    Var, App, Lam, Fix, Choice, Num, Add, ADD,
    TVar, TApp, TLam, TNameApp, TNameAbs, TFix, TChoice, TNum,
    is_src_value, is_tgt_value, size_of, free_vars, free_name_vars,
    fresh, subst_term, name_subst, alpha_eq, canon_key,
)
from cochoice.harness import gen_typed_source
from cochoice.compiler import compile_expr


def test_values():
    assert is_src_value(Num(3))
    assert is_src_value(Lam("x", NAT, Var("x")))
    assert is_src_value(App(ADD, Num(1)))  # partially applied builtin
    assert not is_src_value(App(Lam("x", NAT, Var("x")), Num(1)))
    assert not is_src_value(Choice(Num(1), Num(2)))
    assert is_tgt_value(TNameAbs("al", TNum(7)))
    assert not is_tgt_value(TNameApp(TNameAbs("al", TNum(7)), ("o",)))
    assert not is_tgt_value(TChoice(TNum(1), ("o",), TNum(2)))


def test_free_vars():
    e = Lam("x", NAT, App(Var("x"), Var("y")))
    assert free_vars(e) == {"y"}
    m = TLam("x", TNAT, TApp(TVar("x"), TVar("y")))
    assert free_vars(m) == {"y"}


def test_free_name_vars():
    m = TNameAbs("al", TChoice(TVar("x"), ("al", "be"), TVar("y")))
    assert free_name_vars(m) == {"be"}
    t = TForall("al", Lit(("al", "g7")), TNAT)
    assert free_name_vars(t) == {"g7"}


def test_fresh_avoids():
    assert fresh("x", {"x", "x1"}) not in {"x", "x1"}
    assert fresh("x", set()) == "x"


def test_subst_capture_avoiding():
    # (\y. x y)[x := y]  must not capture the free y
    e = Lam("y", NAT, App(Var("x"), Var("y")))
    s = subst_term(e, "x", Var("y"))
    assert isinstance(s, Lam) and s.var != "y"
    assert free_vars(s) == {"y"}
    assert alpha_eq(s, Lam("z", NAT, App(Var("y"), Var("z"))))


def test_subst_shadowed_binder_is_untouched():
    e = Lam("x", NAT, Var("x"))
    assert subst_term(e, "x", Num(1)) == e


def test_name_subst_on_terms_and_types():
    m = TChoice(TNum(1), ("al",), TNum(2))
    assert name_subst(m, "al", ("o", "b")) == TChoice(TNum(1), ("o", "b"), TNum(2))
    t = TForall("al", Lit(("al",)), TNAT)
    # bound name variable is untouched
    assert alpha_eq(name_subst(t, "al", ("o",)), t)
    t2 = TForall("be", Lit(("al",)), TNAT)
    assert name_subst(t2, "al", ("o",)) == TForall("be", Lit(("o",)), TNAT)


def test_name_subst_avoids_name_capture():
    # (/\be. x @ al)[al := be] must rename the binder
    m = TNameAbs("be", TNameApp(TVar("x"), ("al",)))
    s = name_subst(m, "al", ("be",))
    assert isinstance(s, TNameAbs) and s.var != "be"
    assert free_name_vars(s) == {"be"}


def test_alpha_eq_examples():
    assert alpha_eq(Lam("x", NAT, Var("x")), Lam("y", NAT, Var("y")))
    assert not alpha_eq(Lam("x", NAT, Var("x")), Lam("x", Arrow(NAT, NAT), Var("x")))
    assert alpha_eq(
        TNameAbs("al", TChoice(TNum(1), ("al",), TNum(2))),
        TNameAbs("be", TChoice(TNum(1), ("be",), TNum(2))),
    )
    assert not alpha_eq(TVar("x"), TVar("y"))  # free variables by name
    assert not alpha_eq(
        TNameApp(TVar("x"), ("al",)), TNameApp(TVar("x"), ("be",))
    )


def test_alpha_eq_modulo_effect_canonicalization():
    a = TForall("a", alt(Lit(("o",)), Lit(("b",))), TNAT)
    b = TForall("c", alt(Lit(("b",)), Lit(("o",))), TNAT)
    assert alpha_eq(a, b)


def test_size_of():
    assert size_of(Num(1)) == 1
    assert size_of(App(Var("x"), Var("y"))) == 3


terms = st.builds(
    lambda seed, size: gen_typed_source(seed, size),
    st.integers(0, 10**6),
    st.integers(1, 14),
)


@settings(max_examples=100, deadline=None)
@given(terms)
def test_alpha_eq_reflexive_and_stable_under_renaming(e):
    assert alpha_eq(e, e)
    m = compile_expr(e, "al", ())
    assert alpha_eq(m, m)
    assert canon_key(m) == canon_key(name_subst(m, "zz", ("o",)))


@settings(max_examples=100, deadline=None)
@given(terms, st.sampled_from(["x", "y", "f"]))
def test_identity_substitution(e, x):
    assert alpha_eq(subst_term(e, x, Var(x)), e)


@settings(max_examples=100, deadline=None)
@given(terms)
def test_name_subst_identity_on_closed(e):
    m = compile_expr(e, "al", ())
    assert free_name_vars(m) <= {"al"}
    assert alpha_eq(name_subst(m, "be", ("o",)), m)
