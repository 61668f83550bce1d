# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of kernel._pure for the hot term operations.

Same data representation (the Python Term classes), same algorithms, same
exceptions; the win comes from C call frames and typed index arithmetic in
the recursion.  kernel._dispatch prefers this module when it imported.
"""

from peerhol.errors import DanglingConstant, KernelLimitError, TermTypeError
from peerhol.kernel.consts import SIGNATURE, instance_arg_type
from peerhol.kernel.terms import App, Const, Lam, Var
from peerhol.kernel.types import Fun

cdef object _App = App
cdef object _Const = Const
cdef object _Lam = Lam
cdef object _Var = Var
cdef object _FunType = Fun

cdef object _NOT = Const("not")
cdef object _TRUE = Const("true")
cdef object _FALSE = Const("false")

cdef long MAX_BETA_STEPS = 10 ** 6
cdef long MAX_NORM_DEPTH = 10_000

MAX_BETA_STEPS_PY = MAX_BETA_STEPS
MAX_NORM_DEPTH_PY = MAX_NORM_DEPTH


def typecheck(term, const_stack):
    """Type of `term` against a cumulative constant-type stack (newest first)."""
    return _typecheck(term, tuple(const_stack), [])


cdef object _typecheck(object t, tuple stack, list lams):
    cdef Py_ssize_t i, j, depth
    cdef object tt = type(t)
    if tt is _Var:
        i = t.index
        depth = len(lams)
        if i < depth:
            return lams[i]
        j = i - depth
        if j < len(stack):
            return stack[j]
        raise TermTypeError(f"variable index {i} dangles past the constant stack")
    if tt is _Const:
        return _const_type(t)
    if tt is _Lam:
        lams.insert(0, t.domain)
        body = _typecheck(t.body, stack, lams)
        del lams[0]
        return _FunType(t.domain, body)
    fun_type = _typecheck(t.fun, stack, lams)
    arg_type = _typecheck(t.arg, stack, lams)
    if type(fun_type) is not _FunType:
        raise TermTypeError(f"cannot apply a term of type {fun_type!r}")
    if fun_type.dom != arg_type:
        raise TermTypeError(
            f"application mismatch: expected {fun_type.dom!r}, got {arg_type!r}"
        )
    return fun_type.cod


cdef object _const_type(object t):
    info = SIGNATURE[t.name]
    if info.fixed_type is not None:
        return info.fixed_type
    if t.instance is None:
        raise TermTypeError(f"{t.name} needs an explicit instance type")
    if instance_arg_type(t.name, t.instance) is None:
        raise TermTypeError(f"malformed instance for {t.name}: {t.instance!r}")
    return t.instance


cdef object _shift(object t, long cutoff, long delta):
    cdef long i
    cdef object tt = type(t)
    if tt is _Var:
        i = t.index
        if i < cutoff:
            return t
        if i + delta < cutoff:
            raise DanglingConstant(
                f"index {i} cannot be shifted by {delta}: the term mentions a "
                "constant that does not exist in the target context"
            )
        return _Var(i + delta)
    if tt is _Const:
        return t
    if tt is _Lam:
        body = _shift(t.body, cutoff + 1, delta)
        if body is t.body:
            return t
        return _Lam(t.domain, body)
    f = _shift(t.fun, cutoff, delta)
    a = _shift(t.arg, cutoff, delta)
    if f is t.fun and a is t.arg:
        return t
    return _App(f, a)


def shift(t, cutoff, delta):
    return _shift(t, cutoff, delta)


def shift_constants(t, k):
    if k == 0:
        return t
    return _shift(t, 0, k)


cdef object _subst(object t, long j, object arg):
    cdef long i
    cdef object tt = type(t)
    if tt is _Var:
        i = t.index
        if i == j:
            return _shift(arg, 0, j) if j else arg
        if i > j:
            return _Var(i - 1)
        return t
    if tt is _Const:
        return t
    if tt is _Lam:
        return _Lam(t.domain, _subst(t.body, j + 1, arg))
    return _App(_subst(t.fun, j, arg), _subst(t.arg, j, arg))


def substitute(body, arg):
    return _subst(body, 0, arg)


cdef bint _mentions(object t, long target):
    cdef object tt = type(t)
    if tt is _Var:
        return t.index == target
    if tt is _Const:
        return False
    if tt is _Lam:
        return _mentions(t.body, target + 1)
    return _mentions(t.fun, target) or _mentions(t.arg, target)


cdef object _mk_not(object x):
    if x == _TRUE:
        return _FALSE
    if x == _FALSE:
        return _TRUE
    if type(x) is _App and x.fun == _NOT:
        return x.arg
    return _App(_NOT, x)


cdef object _norm(object t, long* budget, long depth):
    cdef object tt = type(t)
    cdef object body, fun, arg, red
    if depth > MAX_NORM_DEPTH:
        raise KernelLimitError("normalization exceeded the depth ceiling")
    if tt is _Var or tt is _Const:
        return t
    if tt is _Lam:
        body = _norm(t.body, budget, depth + 1)
        if (
            type(body) is _App
            and type(body.arg) is _Var
            and body.arg.index == 0
            and not _mentions(body.fun, 0)
        ):
            return _shift(body.fun, 0, -1)
        if body is t.body:
            return t
        return _Lam(t.domain, body)
    fun = _norm(t.fun, budget, depth + 1)
    arg = _norm(t.arg, budget, depth + 1)
    # head redexes spin in place so self-application burns budget, not stack
    while type(fun) is _Lam:
        budget[0] -= 1
        if budget[0] < 0:
            raise KernelLimitError("normalization exceeded the beta step ceiling")
        red = _subst(fun.body, 0, arg)
        if type(red) is _App:
            fun = _norm(red.fun, budget, depth + 1)
            arg = _norm(red.arg, budget, depth + 1)
            t = red
            continue
        return _norm(red, budget, depth)
    if fun == _NOT:
        return _mk_not(arg)
    if arg == _FALSE and type(fun) is _App and type(fun.fun) is _Const and fun.fun.name == "implies":
        return _mk_not(fun.arg)
    if fun is t.fun and arg is t.arg:
        return t
    return _App(fun, arg)


def normalize(t):
    cdef long budget = MAX_BETA_STEPS
    return _norm(t, &budget, 0)


def equal_terms(a, b):
    if a is b:
        return True
    return normalize(a) == normalize(b)
