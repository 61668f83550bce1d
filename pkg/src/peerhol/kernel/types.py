"""Logical types: set, prop, and function types.

Finite trees only; there are no type variables and no way to declare a new
type, so structural equality is the whole story.
"""


class LogicType:
    __slots__ = ()


class SetType(LogicType):
    __slots__ = ()

    def __repr__(self):
        return "set"

    def __eq__(self, other):
        return type(other) is SetType

    def __hash__(self):
        return hash(SetType)


class PropType(LogicType):
    __slots__ = ()

    def __repr__(self):
        return "prop"

    def __eq__(self, other):
        return type(other) is PropType

    def __hash__(self):
        return hash(PropType)


class Fun(LogicType):
    __slots__ = ("dom", "cod")

    def __init__(self, dom, cod):
        if not isinstance(dom, LogicType) or not isinstance(cod, LogicType):
            raise ValueError("Fun expects two logical types")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)

    def __setattr__(self, name, value):
        raise AttributeError("logical types are immutable")

    def __repr__(self):
        return f"({self.dom!r} -> {self.cod!r})"

    def __eq__(self, other):
        return type(other) is Fun and self.dom == other.dom and self.cod == other.cod

    def __hash__(self):
        return hash((Fun, self.dom, self.cod))


SET = SetType()
PROP = PropType()


def fun(*types):
    """Right-nested function type: fun(a, b, c) == a -> (b -> c)."""
    if not types:
        raise ValueError("fun needs at least one type")
    result = types[-1]
    for t in reversed(types[:-1]):
        result = Fun(t, result)
    return result
