"""The script value universe.

Every value carries exactly one type tag.  Sets and maps keep their elements
in a canonical order so that printing and persistence are deterministic.
Functions never go inside sets or map keys.
"""

from .errors import ScriptError
from .kernel.terms import Term
from .kernel.theorems import Theorem


class ScriptValue:
    __slots__ = ()


class ThmVal(ScriptValue):
    __slots__ = ("thm",)

    def __init__(self, thm):
        assert isinstance(thm, Theorem)
        self.thm = thm

    def __repr__(self):
        return f"ThmVal({self.thm.proposition!r})"


class CtxVal(ScriptValue):
    __slots__ = ("ref",)

    def __init__(self, ref):
        self.ref = ref

    def __repr__(self):
        return f"CtxVal({self.ref})"


class TermVal(ScriptValue):
    """A term plus the context its indices are relative to."""

    __slots__ = ("term", "ref")

    def __init__(self, term, ref):
        assert isinstance(term, Term)
        self.term = term
        self.ref = ref

    def __repr__(self):
        return f"TermVal({self.term!r})"


class TypeVal(ScriptValue):
    __slots__ = ("ty",)

    def __init__(self, ty):
        self.ty = ty

    def __repr__(self):
        return f"TypeVal({self.ty!r})"


class IntVal(ScriptValue):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = int(value)

    def __repr__(self):
        return f"IntVal({self.value})"


class StrVal(ScriptValue):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __repr__(self):
        return f"StrVal({self.value!r})"


class BoolVal(ScriptValue):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = bool(value)

    def __repr__(self):
        return f"BoolVal({self.value})"


class ListVal(ScriptValue):
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = tuple(items)

    def __repr__(self):
        return f"ListVal({list(self.items)!r})"


class VectorVal(ScriptValue):
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = tuple(items)

    def __repr__(self):
        return f"VectorVal({list(self.items)!r})"


class SetVal(ScriptValue):
    __slots__ = ("items",)

    def __init__(self, items):
        seen = {}
        for v in items:
            seen[order_key(v)] = v
        self.items = tuple(seen[k] for k in sorted(seen))

    def __repr__(self):
        return f"SetVal({list(self.items)!r})"


class MapVal(ScriptValue):
    __slots__ = ("pairs",)

    def __init__(self, pairs):
        seen = {}
        for k, v in pairs:
            seen[order_key(k)] = (k, v)
        self.pairs = tuple(seen[k] for k in sorted(seen))

    def get(self, key):
        want = order_key(key)
        for k, v in self.pairs:
            if order_key(k) == want:
                return v
        return None

    def __repr__(self):
        return f"MapVal({list(self.pairs)!r})"


class FunVal(ScriptValue):
    __slots__ = ("name", "params", "body", "captured", "group", "ctx_ref",
                 "source", "bound")

    def __init__(self, name, params, body, captured, group, ctx_ref,
                 source="", bound=()):
        self.name = name
        self.params = tuple(params)
        self.body = body  # expression AST; None until hydrated from source
        self.captured = captured  # dict snapshot at definition time
        self.group = group  # dict shared across one def group
        self.ctx_ref = ctx_ref
        self.source = source
        self.bound = tuple(bound)  # arguments received so far

    def __repr__(self):
        return f"FunVal({self.name}/{len(self.bound)}:{len(self.params)})"


_TYPE_NAMES = {
    ThmVal: "theorem",
    CtxVal: "context",
    TermVal: "term",
    TypeVal: "type",
    IntVal: "integer",
    StrVal: "string",
    BoolVal: "boolean",
    ListVal: "list",
    VectorVal: "vector",
    SetVal: "set",
    MapVal: "map",
    FunVal: "function",
}

_ORDER_RANK = {
    BoolVal: 0,
    IntVal: 1,
    StrVal: 2,
    TermVal: 3,
    TypeVal: 4,
    ThmVal: 5,
    CtxVal: 6,
    VectorVal: 7,
    ListVal: 8,
    SetVal: 9,
    MapVal: 10,
}


def type_name(v):
    return _TYPE_NAMES.get(type(v), "value")


def order_key(v):
    """Total order over non-function values, used for set/map canonicalization."""
    rank = _ORDER_RANK.get(type(v))
    if rank is None:
        raise ScriptError("functions cannot be ordered or used in sets/maps")
    if isinstance(v, (BoolVal, IntVal, StrVal)):
        return (rank, v.value)
    if isinstance(v, TermVal):
        return (rank, repr(v.term))
    if isinstance(v, TypeVal):
        return (rank, repr(v.ty))
    if isinstance(v, ThmVal):
        return (rank, repr(v.thm.proposition), _ref_key(v.thm.context_ref))
    if isinstance(v, CtxVal):
        return (rank, _ref_key(v.ref))
    if isinstance(v, (VectorVal, ListVal, SetVal)):
        return (rank, tuple(order_key(x) for x in v.items))
    if isinstance(v, MapVal):
        return (rank, tuple((order_key(k), order_key(x)) for k, x in v.pairs))
    raise ScriptError(f"cannot order {type_name(v)} values")


def _ref_key(ref):
    if ref is None:
        return ("", -1)
    return (ref.entity, ref.index)


def contains_theorem(v):
    """Deep scan for theorems, including ones hidden in captured environments."""
    if isinstance(v, ThmVal):
        return True
    if isinstance(v, (ListVal, VectorVal, SetVal)):
        return any(contains_theorem(x) for x in v.items)
    if isinstance(v, MapVal):
        return any(
            contains_theorem(k) or contains_theorem(x) for k, x in v.pairs
        )
    if isinstance(v, FunVal):
        return any(contains_theorem(x) for x in v.captured.values())
    return False
