"""The built-in constant signature.

A closed table: no user-defined constants live here (those come from contexts).
Four constants are polymorphic in nature (equality, forall, exists, choice);
every occurrence of them in a term carries one concrete monomorphic instance
type, validated by `instance_arg_type`.
"""

from .types import PROP, SET, Fun, fun

EQUALITY = "equality"
FORALL = "forall"
EXISTS = "exists"
CHOICE = "choice"
IMPLIES = "implies"
AND = "and"
OR = "or"
NOT = "not"
TRUE = "true"
FALSE = "false"
ELEM = "elem"
EMPTYSET = "emptyset"
POWERSET = "powerset"
BIGUNION = "bigunion"
BIGINTERSECT = "bigintersect"
UNION = "union"
INTERSECT = "intersect"
SUBSET = "subset"
SINGLETON = "singleton"
SEPARATION = "separation"
REPLACEMENT = "replacement"


class ConstInfo:
    __slots__ = ("name", "glyph", "ascii_name", "fixed_type")

    def __init__(self, name, glyph, ascii_name, fixed_type):
        self.name = name
        self.glyph = glyph  # None when there is no notation beyond the ascii name
        self.ascii_name = ascii_name
        self.fixed_type = fixed_type  # None for the four polymorphic-natured ones

    @property
    def polymorphic(self):
        return self.fixed_type is None


# name -> (glyph, ascii, type); binary set operators note: the big operators
# bigunion/bigintersect print as n-ary glyphs distinct from union/intersect.
SIGNATURE = {
    info.name: info
    for info in [
        ConstInfo(EQUALITY, "=", "=", None),
        ConstInfo(FORALL, "∀", "_all", None),
        ConstInfo(EXISTS, "∃", "_exists", None),
        ConstInfo(CHOICE, "ε", "_choose", None),
        ConstInfo(IMPLIES, "⟶", "-->", fun(PROP, PROP, PROP)),
        ConstInfo(AND, "∧", "_and", fun(PROP, PROP, PROP)),
        ConstInfo(OR, "∨", "_or", fun(PROP, PROP, PROP)),
        ConstInfo(NOT, "¬", "_not", Fun(PROP, PROP)),
        ConstInfo(TRUE, "true", "true", PROP),
        ConstInfo(FALSE, "false", "false", PROP),
        ConstInfo(ELEM, "∈", "_elem", fun(SET, SET, PROP)),
        ConstInfo(EMPTYSET, "∅", "_emptyset", SET),
        ConstInfo(POWERSET, "\U0001d4ab", "_powerset", Fun(SET, SET)),
        ConstInfo(BIGUNION, "⋃", "_Union", Fun(SET, SET)),
        ConstInfo(BIGINTERSECT, "⋂", "_Intersect", Fun(SET, SET)),
        ConstInfo(UNION, "∪", "_union", fun(SET, SET, SET)),
        ConstInfo(INTERSECT, "∩", "_intersect", fun(SET, SET, SET)),
        ConstInfo(SUBSET, "⊆", "_subset", fun(SET, SET, PROP)),
        ConstInfo(SINGLETON, None, "_Singleton", Fun(SET, SET)),
        ConstInfo(SEPARATION, None, "_Separation", Fun(SET, Fun(Fun(SET, PROP), SET))),
        ConstInfo(REPLACEMENT, None, "_Replacement", Fun(SET, Fun(Fun(SET, SET), SET))),
    ]
}

POLYMORPHIC = frozenset(n for n, i in SIGNATURE.items() if i.polymorphic)


def instance_arg_type(name, instance):
    """Validate a polymorphic constant's instance type and return its tau.

    equality at tau has instance tau -> tau -> prop; forall/exists at tau have
    (tau -> prop) -> prop; choice at tau has (tau -> prop) -> tau.  Returns None
    when the instance does not have the required shape.
    """
    if name == EQUALITY:
        if (
            isinstance(instance, Fun)
            and isinstance(instance.cod, Fun)
            and instance.cod.cod == PROP
            and instance.dom == instance.cod.dom
        ):
            return instance.dom
        return None
    if name in (FORALL, EXISTS):
        if (
            isinstance(instance, Fun)
            and isinstance(instance.dom, Fun)
            and instance.dom.cod == PROP
            and instance.cod == PROP
        ):
            return instance.dom.dom
        return None
    if name == CHOICE:
        if (
            isinstance(instance, Fun)
            and isinstance(instance.dom, Fun)
            and instance.dom.cod == PROP
            and instance.cod == instance.dom.dom
        ):
            return instance.dom.dom
        return None
    return None


def equality_instance(tau):
    return fun(tau, tau, PROP)


def forall_instance(tau):
    return Fun(Fun(tau, PROP), PROP)


def exists_instance(tau):
    return Fun(Fun(tau, PROP), PROP)


def choice_instance(tau):
    return Fun(Fun(tau, PROP), tau)
