"""De Bruijn terms over the built-in signature plus context constants.

One index space covers both binding forms: a Var whose index is below the
enclosing lambda depth is lambda-bound; subtracting the depth from any larger
index yields a position into the home context's constant stack, counted
newest-first.  This is what makes the context-move shift rule a plain
increment.
"""

from ..errors import TermTypeError
from .consts import POLYMORPHIC, SIGNATURE, instance_arg_type
from .types import LogicType


class Term:
    __slots__ = ()

    def __setattr__(self, name, value):
        raise AttributeError("terms are immutable")


class Const(Term):
    __slots__ = ("name", "instance")
    __match_args__ = ("name", "instance")

    def __init__(self, name, instance=None):
        info = SIGNATURE.get(name)
        if info is None:
            raise ValueError(f"unknown constant {name!r}")
        if instance is not None and name not in POLYMORPHIC:
            raise ValueError(f"{name} takes no instance type")
        if instance is not None and instance_arg_type(name, instance) is None:
            raise TermTypeError(f"malformed instance type for {name}: {instance!r}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "instance", instance)

    def __repr__(self):
        if self.instance is None:
            return f"Const({self.name})"
        return f"Const({self.name}, {self.instance!r})"

    def __eq__(self, other):
        return (
            type(other) is Const
            and self.name == other.name
            and self.instance == other.instance
        )

    def __hash__(self):
        return hash((Const, self.name, self.instance))


class Var(Term):
    __slots__ = ("index",)
    __match_args__ = ("index",)

    def __init__(self, index):
        if not isinstance(index, int) or index < 0:
            raise ValueError("de Bruijn index must be a non-negative int")
        object.__setattr__(self, "index", index)

    def __repr__(self):
        return f"Var({self.index})"

    def __eq__(self, other):
        return type(other) is Var and self.index == other.index

    def __hash__(self):
        return hash((Var, self.index))


class Lam(Term):
    __slots__ = ("domain", "body")
    __match_args__ = ("domain", "body")

    def __init__(self, domain, body):
        if not isinstance(domain, LogicType):
            raise ValueError("lambda domain must be a logical type")
        if not isinstance(body, Term):
            raise ValueError("lambda body must be a term")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "body", body)

    def __repr__(self):
        return f"Lam({self.domain!r}, {self.body!r})"

    def __eq__(self, other):
        return (
            type(other) is Lam
            and self.domain == other.domain
            and self.body == other.body
        )

    def __hash__(self):
        return hash((Lam, self.domain, self.body))


class App(Term):
    __slots__ = ("fun", "arg")
    __match_args__ = ("fun", "arg")

    def __init__(self, fun, arg):
        if not isinstance(fun, Term) or not isinstance(arg, Term):
            raise ValueError("application expects two terms")
        object.__setattr__(self, "fun", fun)
        object.__setattr__(self, "arg", arg)

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"

    def __eq__(self, other):
        return type(other) is App and self.fun == other.fun and self.arg == other.arg

    def __hash__(self):
        return hash((App, self.fun, self.arg))


def apps(fun, *args):
    """Left-nested application chain."""
    term = fun
    for a in args:
        term = App(term, a)
    return term


def term_size(t):
    if isinstance(t, (Const, Var)):
        return 1
    if isinstance(t, Lam):
        return 1 + term_size(t.body)
    return 1 + term_size(t.fun) + term_size(t.arg)
