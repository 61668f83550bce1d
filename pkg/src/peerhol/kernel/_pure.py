"""Pure-Python term operations: the reference implementation of the hot path.

A compiled twin of this module lives in _speedup.pyx; kernel._dispatch picks
one at import time.  Both must agree exactly, which the test suite checks by
running the documented examples against whichever backend got selected and by
cross-comparing the two when the extension is available.
"""

from ..errors import DanglingConstant, KernelLimitError, TermTypeError
from .consts import FALSE, IMPLIES, NOT, TRUE, instance_arg_type
from .terms import App, Const, Lam, Var
from .types import Fun

MAX_BETA_STEPS = 10**6
MAX_NORM_DEPTH = 10_000

_NOT = Const(NOT)
_TRUE = Const(TRUE)
_FALSE = Const(FALSE)


def typecheck(term, const_stack):
    """Type of `term` against a cumulative constant-type stack (newest first).

    Raises TermTypeError when the term is ill-typed, an index dangles, or a
    polymorphic-natured constant lacks its instance type.
    """
    return _typecheck(term, tuple(const_stack), ())


def _typecheck(t, stack, lams):
    if isinstance(t, Var):
        i = t.index
        if i < len(lams):
            return lams[i]
        j = i - len(lams)
        if j < len(stack):
            return stack[j]
        raise TermTypeError(f"variable index {i} dangles past the constant stack")
    if isinstance(t, Const):
        info_type = _const_type(t)
        return info_type
    if isinstance(t, Lam):
        body = _typecheck(t.body, stack, (t.domain,) + lams)
        return Fun(t.domain, body)
    fun_type = _typecheck(t.fun, stack, lams)
    arg_type = _typecheck(t.arg, stack, lams)
    if not isinstance(fun_type, Fun):
        raise TermTypeError(f"cannot apply a term of type {fun_type!r}")
    if fun_type.dom != arg_type:
        raise TermTypeError(
            f"application mismatch: expected {fun_type.dom!r}, got {arg_type!r}"
        )
    return fun_type.cod


def _const_type(t):
    from .consts import SIGNATURE

    info = SIGNATURE[t.name]
    if info.fixed_type is not None:
        return info.fixed_type
    if t.instance is None:
        raise TermTypeError(f"{t.name} needs an explicit instance type")
    if instance_arg_type(t.name, t.instance) is None:
        raise TermTypeError(f"malformed instance for {t.name}: {t.instance!r}")
    return t.instance


def shift(t, cutoff, delta):
    """Add delta to every Var index >= cutoff; cutoff grows under binders.

    Raises DanglingConstant when a negative delta would push an affected index
    below the cutoff, i.e. past the end of the target constant stack.
    """
    if isinstance(t, Var):
        i = t.index
        if i < cutoff:
            return t
        if i + delta < cutoff:
            raise DanglingConstant(
                f"index {i} cannot be shifted by {delta}: the term mentions a "
                "constant that does not exist in the target context"
            )
        return Var(i + delta)
    if isinstance(t, Const):
        return t
    if isinstance(t, Lam):
        body = shift(t.body, cutoff + 1, delta)
        return t if body is t.body else Lam(t.domain, body)
    f = shift(t.fun, cutoff, delta)
    a = shift(t.arg, cutoff, delta)
    if f is t.fun and a is t.arg:
        return t
    return App(f, a)


def shift_constants(t, k):
    """Move a term k constants deeper (k > 0) or shallower (k < 0)."""
    if k == 0:
        return t
    return shift(t, 0, k)


def substitute(body, arg):
    """Capture-avoiding substitution of arg for Var 0 of body."""
    return _subst(body, 0, arg)


def _subst(t, j, arg):
    if isinstance(t, Var):
        i = t.index
        if i == j:
            return shift(arg, 0, j) if j else arg
        if i > j:
            return Var(i - 1)
        return t
    if isinstance(t, Const):
        return t
    if isinstance(t, Lam):
        return Lam(t.domain, _subst(t.body, j + 1, arg))
    return App(_subst(t.fun, j, arg), _subst(t.arg, j, arg))


def _mentions(t, target):
    """Does Var(target) occur free in t (target counted at t's own depth)?"""
    if isinstance(t, Var):
        return t.index == target
    if isinstance(t, Const):
        return False
    if isinstance(t, Lam):
        return _mentions(t.body, target + 1)
    return _mentions(t.fun, target) or _mentions(t.arg, target)


def _mk_not(x):
    # x is already normal; keeps the negation rules closed under each other
    if x == _TRUE:
        return _FALSE
    if x == _FALSE:
        return _TRUE
    if isinstance(x, App) and x.fun == _NOT:
        return x.arg
    return App(_NOT, x)


def normalize(t):
    """Fixpoint of beta, eta, and the four negation rules.

    Alpha-equivalence is the identity under de Bruijn indices.  Terminates on
    well-typed input; divergent reduction hits either the step budget or the
    depth ceiling and reports KernelLimitError instead of hanging or blowing
    the stack.
    """
    budget = [MAX_BETA_STEPS]
    try:
        return _norm(t, budget, 0)
    except RecursionError:
        raise KernelLimitError(
            "normalization exceeded the depth ceiling"
        ) from None


def _norm(t, budget, depth):
    if depth > MAX_NORM_DEPTH:
        raise KernelLimitError("normalization exceeded the depth ceiling")
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, Lam):
        body = _norm(t.body, budget, depth + 1)
        if (
            isinstance(body, App)
            and isinstance(body.arg, Var)
            and body.arg.index == 0
            and not _mentions(body.fun, 0)
        ):
            return shift(body.fun, 0, -1)
        if body is t.body:
            return t
        return Lam(t.domain, body)
    fun = _norm(t.fun, budget, depth + 1)
    arg = _norm(t.arg, budget, depth + 1)
    # head redexes spin in place so self-application burns budget, not stack
    while isinstance(fun, Lam):
        budget[0] -= 1
        if budget[0] < 0:
            raise KernelLimitError("normalization exceeded the beta step ceiling")
        red = substitute(fun.body, arg)
        if isinstance(red, App):
            fun = _norm(red.fun, budget, depth + 1)
            arg = _norm(red.arg, budget, depth + 1)
            t = red
            continue
        return _norm(red, budget, depth)
    if fun == _NOT:
        return _mk_not(arg)
    if arg == _FALSE and isinstance(fun, App) and isinstance(fun.fun, Const) and fun.fun.name == IMPLIES:
        return _mk_not(fun.arg)
    if fun is t.fun and arg is t.arg:
        return t
    return App(fun, arg)


def equal_terms(a, b):
    """Structural equality after normalization (instance types included)."""
    if a is b:
        return True
    return normalize(a) == normalize(b)
