"""Convenience constructors for common logical forms."""

from ..errors import NotExistential
from . import consts
from .consts import (
    choice_instance,
    equality_instance,
    exists_instance,
    forall_instance,
    instance_arg_type,
)
from .terms import App, Const, Lam
from .types import PROP

TRUE = Const(consts.TRUE)
FALSE = Const(consts.FALSE)
NOT = Const(consts.NOT)
IMPLIES = Const(consts.IMPLIES)


def mk_not(a):
    return App(NOT, a)


def mk_implies(a, b):
    return App(App(IMPLIES, a), b)


def mk_and(a, b):
    return App(App(Const(consts.AND), a), b)


def mk_or(a, b):
    return App(App(Const(consts.OR), a), b)


def mk_eq(tau, a, b):
    return App(App(Const(consts.EQUALITY, equality_instance(tau)), a), b)


def mk_elem(a, b):
    return App(App(Const(consts.ELEM), a), b)


def mk_forall(tau, body):
    """Universal quantification over a body with Var 0 as the bound variable."""
    return App(Const(consts.FORALL, forall_instance(tau)), Lam(tau, body))


def mk_exists(tau, body):
    return App(Const(consts.EXISTS, exists_instance(tau)), Lam(tau, body))


def mk_choice(tau, pred):
    return App(Const(consts.CHOICE, choice_instance(tau)), pred)


def match_forall(t):
    """Decompose `forall` applied to a predicate; returns (tau, pred) or None."""
    if (
        isinstance(t, App)
        and isinstance(t.fun, Const)
        and t.fun.name == consts.FORALL
    ):
        tau = instance_arg_type(consts.FORALL, t.fun.instance)
        if tau is not None:
            return tau, t.arg
    return None


def match_exists(t):
    if (
        isinstance(t, App)
        and isinstance(t.fun, Const)
        and t.fun.name == consts.EXISTS
    ):
        tau = instance_arg_type(consts.EXISTS, t.fun.instance)
        if tau is not None:
            return tau, t.arg
    return None


def match_implies(t):
    """Returns (antecedent, consequent) or None."""
    if (
        isinstance(t, App)
        and isinstance(t.fun, App)
        and isinstance(t.fun.fun, Const)
        and t.fun.fun.name == consts.IMPLIES
    ):
        return t.fun.arg, t.arg
    return None


def strip_exists_prefix(t, limit):
    """Peel up to `limit` leading exists binders.

    Returns (binder_types, body).  An eta-contracted predicate (exists applied
    to a non-lambda) is re-expanded so the binder can still be peeled.  Raises
    NotExistential when no binder can be peeled at all.
    """
    from ._dispatch import shift_constants

    binders = []
    while len(binders) < limit:
        m = match_exists(t)
        if m is None:
            break
        tau, pred = m
        binders.append(tau)
        if isinstance(pred, Lam):
            t = pred.body
        else:
            from .terms import Var

            t = App(shift_constants(pred, 1), Var(0))
    if not binders:
        raise NotExistential("the proposition has no leading existential binder")
    return binders, t
