"""Abstract syntax shared by both calculi.

Source terms are the plain-choice calculus; target terms add name
abstraction/application and named choices.  All nodes are immutable.
Substitution is capture-avoiding for both term and name binders, and
``alpha_eq``/``canon_key`` compare terms up to consistent renaming of bound
variables and name normalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import effects as eff
from .names import is_name_var, name_vars, normalize_name, word_subst


# ---------------------------------------------------------------------------
# types

class SrcType:
    __slots__ = ()


@dataclass(frozen=True)
class Nat(SrcType):
    pass


@dataclass(frozen=True)
class Arrow(SrcType):
    arg: SrcType
    res: SrcType


NAT = Nat()


class TgtType:
    __slots__ = ()


@dataclass(frozen=True)
class TNat(TgtType):
    pass


@dataclass(frozen=True)
class TArrow(TgtType):
    arg: TgtType
    latent: eff.Effect
    res: TgtType


@dataclass(frozen=True)
class TForall(TgtType):
    var: str
    latent: eff.Effect
    body: TgtType


TNAT = TNat()


# ---------------------------------------------------------------------------
# expressions

class SrcExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(SrcExpr):
    name: str


@dataclass(frozen=True)
class App(SrcExpr):
    fn: SrcExpr
    arg: SrcExpr


@dataclass(frozen=True)
class Lam(SrcExpr):
    var: str
    ann: SrcType
    body: SrcExpr


@dataclass(frozen=True)
class Fix(SrcExpr):
    var: str
    ann: SrcType
    body: SrcExpr


@dataclass(frozen=True)
class Choice(SrcExpr):
    left: SrcExpr
    right: SrcExpr


@dataclass(frozen=True)
class Num(SrcExpr):
    value: int


@dataclass(frozen=True)
class Add(SrcExpr):
    """Demo builtin of type nat -> nat -> nat; rejected by the compiler."""


ADD = Add()


class TgtExpr:
    __slots__ = ()


@dataclass(frozen=True)
class TVar(TgtExpr):
    name: str


@dataclass(frozen=True)
class TApp(TgtExpr):
    fn: TgtExpr
    arg: TgtExpr


@dataclass(frozen=True)
class TLam(TgtExpr):
    var: str
    ann: TgtType
    body: TgtExpr


@dataclass(frozen=True)
class TNameApp(TgtExpr):
    fn: TgtExpr
    name: tuple


@dataclass(frozen=True)
class TNameAbs(TgtExpr):
    var: str
    body: TgtExpr


@dataclass(frozen=True)
class TFix(TgtExpr):
    var: str
    ann: TgtType
    body: TgtExpr


@dataclass(frozen=True)
class TChoice(TgtExpr):
    left: TgtExpr
    name: tuple
    right: TgtExpr


@dataclass(frozen=True)
class TNum(TgtExpr):
    value: int


@dataclass(frozen=True)
class TAdd(TgtExpr):
    """Demo builtin mirroring the source one."""


TADD = TAdd()


def is_src_value(e: SrcExpr) -> bool:
    if isinstance(e, (Lam, Num, Add)):
        return True
    # partial application of the demo builtin
    return isinstance(e, App) and isinstance(e.fn, Add) and isinstance(e.arg, Num)


def is_tgt_value(m: TgtExpr) -> bool:
    if isinstance(m, (TLam, TNameAbs, TNum, TAdd)):
        return True
    return isinstance(m, TApp) and isinstance(m.fn, TAdd) and isinstance(m.arg, TNum)


def size_of(e) -> int:
    if isinstance(e, (Var, Num, Add, TVar, TNum, TAdd)):
        return 1
    if isinstance(e, (App, TApp)):
        return 1 + size_of(e.fn) + size_of(e.arg)
    if isinstance(e, (Lam, Fix, TLam, TFix, TNameAbs)):
        return 1 + size_of(e.body)
    if isinstance(e, (Choice, TChoice)):
        return 1 + size_of(e.left) + size_of(e.right)
    if isinstance(e, TNameApp):
        return 1 + size_of(e.fn)
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# free variables

@lru_cache(maxsize=None)
def free_vars(e) -> frozenset:
    if isinstance(e, (Var, TVar)):
        return frozenset({e.name})
    if isinstance(e, (Num, Add, TNum, TAdd)):
        return frozenset()
    if isinstance(e, (App, TApp)):
        return free_vars(e.fn) | free_vars(e.arg)
    if isinstance(e, (Lam, Fix, TLam, TFix)):
        return free_vars(e.body) - {e.var}
    if isinstance(e, TNameAbs):
        return free_vars(e.body)
    if isinstance(e, (Choice, TChoice)):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, TNameApp):
        return free_vars(e.fn)
    raise TypeError(f"not an expression: {e!r}")


@lru_cache(maxsize=None)
def free_name_vars(x) -> frozenset:
    """Free name variables of a name, effect, target type, or target expression."""
    if isinstance(x, tuple):
        return name_vars(x)
    if isinstance(x, eff.Effect):
        return eff.effect_vars(x)
    if isinstance(x, TNat):
        return frozenset()
    if isinstance(x, TArrow):
        return free_name_vars(x.arg) | free_name_vars(x.latent) | free_name_vars(x.res)
    if isinstance(x, TForall):
        return (free_name_vars(x.latent) | free_name_vars(x.body)) - {x.var}
    if isinstance(x, (TVar, TNum, TAdd)):
        return frozenset()
    if isinstance(x, TApp):
        return free_name_vars(x.fn) | free_name_vars(x.arg)
    if isinstance(x, TLam):
        return free_name_vars(x.ann) | free_name_vars(x.body)
    if isinstance(x, TFix):
        return free_name_vars(x.ann) | free_name_vars(x.body)
    if isinstance(x, TNameApp):
        return free_name_vars(x.fn) | name_vars(x.name)
    if isinstance(x, TNameAbs):
        return free_name_vars(x.body) - {x.var}
    if isinstance(x, TChoice):
        return free_name_vars(x.left) | name_vars(x.name) | free_name_vars(x.right)
    raise TypeError(f"no name variables in: {x!r}")


def fresh(base: str, avoid) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


# ---------------------------------------------------------------------------
# substitution

def subst_term(body, x: str, repl):
    """Capture-avoiding substitution body[x := repl], in either calculus."""
    if isinstance(body, SrcExpr):
        if not isinstance(repl, SrcExpr):
            raise TypeError("replacement is not a source expression")
        return _subst_src(body, x, repl)
    if isinstance(body, TgtExpr):
        if not isinstance(repl, TgtExpr):
            raise TypeError("replacement is not a target expression")
        return _subst_tgt(body, x, repl)
    raise TypeError(f"not an expression: {body!r}")


def _subst_src(e, x, r):
    if isinstance(e, Var):
        return r if e.name == x else e
    if isinstance(e, (Num, Add)):
        return e
    if isinstance(e, App):
        return App(_subst_src(e.fn, x, r), _subst_src(e.arg, x, r))
    if isinstance(e, Choice):
        return Choice(_subst_src(e.left, x, r), _subst_src(e.right, x, r))
    if isinstance(e, (Lam, Fix)):
        cls = type(e)
        if e.var == x:
            return e
        if e.var in free_vars(r) and x in free_vars(e.body):
            y = fresh(e.var, free_vars(r) | free_vars(e.body) | {x})
            body = _subst_src(e.body, e.var, Var(y))
            return cls(y, e.ann, _subst_src(body, x, r))
        return cls(e.var, e.ann, _subst_src(e.body, x, r))
    raise TypeError(f"not a source expression: {e!r}")


def _subst_tgt(m, x, r):
    if isinstance(m, TVar):
        return r if m.name == x else m
    if isinstance(m, (TNum, TAdd)):
        return m
    if isinstance(m, TApp):
        return TApp(_subst_tgt(m.fn, x, r), _subst_tgt(m.arg, x, r))
    if isinstance(m, TNameApp):
        return TNameApp(_subst_tgt(m.fn, x, r), m.name)
    if isinstance(m, TChoice):
        return TChoice(_subst_tgt(m.left, x, r), m.name, _subst_tgt(m.right, x, r))
    if isinstance(m, (TLam, TFix)):
        cls = type(m)
        if m.var == x:
            return m
        if m.var in free_vars(r) and x in free_vars(m.body):
            y = fresh(m.var, free_vars(r) | free_vars(m.body) | {x})
            body = _subst_tgt(m.body, m.var, TVar(y))
            return cls(y, m.ann, _subst_tgt(body, x, r))
        return cls(m.var, m.ann, _subst_tgt(m.body, x, r))
    if isinstance(m, TNameAbs):
        # the replacement's free name variables must not be captured
        if m.var in free_name_vars(r) and x in free_vars(m.body):
            g = fresh(m.var, free_name_vars(r) | free_name_vars(m.body))
            body = name_subst(m.body, m.var, (g,))
            return TNameAbs(g, _subst_tgt(body, x, r))
        return TNameAbs(m.var, _subst_tgt(m.body, x, r))
    raise TypeError(f"not a target expression: {m!r}")


def name_subst(entity, alpha: str, phi):
    """Substitute the name ``phi`` for the name variable ``alpha``.

    Works on names, effects, target types, and target expressions;
    capture-avoiding with respect to Forall/name-abstraction binders.
    """
    phi = normalize_name(phi)
    if isinstance(entity, tuple):
        return word_subst(entity, alpha, phi)
    if isinstance(entity, eff.Effect):
        return eff.effect_subst(entity, alpha, phi)
    if isinstance(entity, TgtType):
        return _nsubst_type(entity, alpha, phi)
    if isinstance(entity, TgtExpr):
        return _nsubst_expr(entity, alpha, phi)
    raise TypeError(f"cannot name-substitute in: {entity!r}")


def _nsubst_type(t, alpha, phi):
    if isinstance(t, TNat):
        return t
    if isinstance(t, TArrow):
        return TArrow(
            _nsubst_type(t.arg, alpha, phi),
            eff.effect_subst(t.latent, alpha, phi),
            _nsubst_type(t.res, alpha, phi),
        )
    if isinstance(t, TForall):
        if t.var == alpha:
            return t
        if t.var in name_vars(phi):
            g = fresh(t.var, set(name_vars(phi)) | set(free_name_vars(t)) | {alpha})
            t = TForall(
                g,
                eff.effect_subst(t.latent, t.var, (g,)),
                _nsubst_type(t.body, t.var, (g,)),
            )
        return TForall(
            t.var,
            eff.effect_subst(t.latent, alpha, phi),
            _nsubst_type(t.body, alpha, phi),
        )
    raise TypeError(f"not a target type: {t!r}")


def _nsubst_expr(m, alpha, phi):
    if isinstance(m, (TVar, TNum, TAdd)):
        return m
    if isinstance(m, TApp):
        return TApp(_nsubst_expr(m.fn, alpha, phi), _nsubst_expr(m.arg, alpha, phi))
    if isinstance(m, TLam):
        return TLam(m.var, _nsubst_type(m.ann, alpha, phi), _nsubst_expr(m.body, alpha, phi))
    if isinstance(m, TFix):
        return TFix(m.var, _nsubst_type(m.ann, alpha, phi), _nsubst_expr(m.body, alpha, phi))
    if isinstance(m, TNameApp):
        return TNameApp(_nsubst_expr(m.fn, alpha, phi), word_subst(m.name, alpha, phi))
    if isinstance(m, TChoice):
        return TChoice(
            _nsubst_expr(m.left, alpha, phi),
            word_subst(m.name, alpha, phi),
            _nsubst_expr(m.right, alpha, phi),
        )
    if isinstance(m, TNameAbs):
        if m.var == alpha:
            return m
        if m.var in name_vars(phi):
            g = fresh(m.var, set(name_vars(phi)) | set(free_name_vars(m)) | {alpha})
            m = TNameAbs(g, _nsubst_expr(m.body, m.var, (g,)))
        return TNameAbs(m.var, _nsubst_expr(m.body, alpha, phi))
    raise TypeError(f"not a target expression: {m!r}")


# ---------------------------------------------------------------------------
# alpha equivalence via canonical keys

@lru_cache(maxsize=None)
def canon_key(x):
    """A hashable key equal for alpha-equivalent entities.

    Bound term and name variables are numbered by binding depth; names are
    normalized; effect concatenations and literals are flattened and
    alternations sorted, so the key is stable under associativity of
    concatenation.
    """
    return _ck(x, {}, 0, {}, 0)


def alpha_eq(a, b) -> bool:
    return canon_key(a) == canon_key(b)


def _ck_atom(a, nenv):
    if is_name_var(a):
        return nenv.get(a, ("f", a))
    return a


def _ck_name(word, nenv):
    return ("name",) + tuple(_ck_atom(a, nenv) for a in normalize_name(word))


def _ck_eff_items(e, nenv):
    if isinstance(e, eff.Empty):
        # normally unreachable inside a canonical Cat, but handle raw trees
        return [("empty",)]
    if isinstance(e, eff.Lit):
        return [_ck_atom(a, nenv) for a in e.word]
    if isinstance(e, eff.Cat):
        return _ck_eff_items(e.left, nenv) + _ck_eff_items(e.right, nenv)
    if isinstance(e, eff.Alt):
        parts = sorted((_ck_eff(p, nenv) for p in e.parts), key=repr)
        return [("alt",) + tuple(parts)]
    if isinstance(e, eff.Star):
        return [("star", _ck_eff(e.inner, nenv))]
    raise TypeError(f"not an effect: {e!r}")


def _ck_eff(e, nenv):
    if isinstance(e, eff.Empty):
        return ("empty",)
    return ("cat",) + tuple(_ck_eff_items(e, nenv))


def _ck(x, tenv, tn, nenv, nn):
    # names
    if isinstance(x, tuple):
        return _ck_name(x, nenv)
    if isinstance(x, eff.Effect):
        return _ck_eff(x, nenv)
    # types
    if isinstance(x, Nat):
        return ("nat",)
    if isinstance(x, Arrow):
        return ("arrow", _ck(x.arg, tenv, tn, nenv, nn), _ck(x.res, tenv, tn, nenv, nn))
    if isinstance(x, TNat):
        return ("tnat",)
    if isinstance(x, TArrow):
        return (
            "tarrow",
            _ck(x.arg, tenv, tn, nenv, nn),
            _ck_eff(x.latent, nenv),
            _ck(x.res, tenv, tn, nenv, nn),
        )
    if isinstance(x, TForall):
        nenv2 = {**nenv, x.var: ("n", nn)}
        return (
            "forall",
            _ck_eff(x.latent, nenv2),
            _ck(x.body, tenv, tn, nenv2, nn + 1),
        )
    # expressions
    if isinstance(x, (Var, TVar)):
        return ("var", tenv.get(x.name, ("f", x.name)))
    if isinstance(x, (Num, TNum)):
        return ("num", x.value)
    if isinstance(x, (Add, TAdd)):
        return ("add",)
    if isinstance(x, (App, TApp)):
        return ("app", _ck(x.fn, tenv, tn, nenv, nn), _ck(x.arg, tenv, tn, nenv, nn))
    if isinstance(x, (Lam, TLam)):
        tenv2 = {**tenv, x.var: ("t", tn)}
        return (
            "lam",
            _ck(x.ann, tenv, tn, nenv, nn),
            _ck(x.body, tenv2, tn + 1, nenv, nn),
        )
    if isinstance(x, (Fix, TFix)):
        tenv2 = {**tenv, x.var: ("t", tn)}
        return (
            "fix",
            _ck(x.ann, tenv, tn, nenv, nn),
            _ck(x.body, tenv2, tn + 1, nenv, nn),
        )
    if isinstance(x, Choice):
        return (
            "choice",
            ("name",),
            _ck(x.left, tenv, tn, nenv, nn),
            _ck(x.right, tenv, tn, nenv, nn),
        )
    if isinstance(x, TChoice):
        return (
            "choice",
            _ck_name(x.name, nenv),
            _ck(x.left, tenv, tn, nenv, nn),
            _ck(x.right, tenv, tn, nenv, nn),
        )
    if isinstance(x, TNameApp):
        return ("nameapp", _ck(x.fn, tenv, tn, nenv, nn), _ck_name(x.name, nenv))
    if isinstance(x, TNameAbs):
        nenv2 = {**nenv, x.var: ("n", nn)}
        return ("nameabs", _ck(x.body, tenv, tn, nenv2, nn + 1))
    raise TypeError(f"cannot canonicalize: {x!r}")
