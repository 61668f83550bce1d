"""Theorems and the theorem-producing application rule.

In LCF tradition a Theorem can only come out of this kernel or out of the
context machinery built on it; there is no public constructor.  Everything
else in the system merely passes theorems around.
"""

from ..errors import NotApplicable, TermTypeError
from ._dispatch import equal_terms, normalize, typecheck
from .build import match_forall, match_implies
from .terms import App, Term
from .types import PROP

_MINT_TOKEN = object()


class Theorem:
    """A proposition certified to hold in its home context."""

    __slots__ = ("proposition", "context_ref")

    def __init__(self, *args, **kwargs):
        raise TypeError(
            "theorems cannot be constructed directly; they are produced by "
            "kernel and context operations only"
        )

    def __repr__(self):
        return f"<theorem {self.proposition!r} @ {self.context_ref}>"

    def __eq__(self, other):
        return (
            isinstance(other, Theorem)
            and self.context_ref == other.context_ref
            and self.proposition == other.proposition
        )

    def __hash__(self):
        return hash((Theorem, self.context_ref, self.proposition))


def _mint(proposition, context_ref):
    """Internal: create a Theorem.  Callers certify the proposition holds."""
    thm = object.__new__(Theorem)
    object.__setattr__(thm, "proposition", proposition)
    object.__setattr__(thm, "context_ref", context_ref)
    return thm


def alpha_beta_eta_equal(a, b, const_stack=None):
    """Equality of terms up to normalization.

    When a constant stack is supplied both terms are typechecked against it
    first and a type mismatch raises TermTypeError.
    """
    if const_stack is not None:
        ta = typecheck(a, const_stack)
        tb = typecheck(b, const_stack)
        if ta != tb:
            raise TermTypeError(f"cannot compare terms of types {ta!r} and {tb!r}")
    return equal_terms(a, b)


def apply_theorem(f, g, const_stack):
    """Modus ponens or universal instantiation, depending on f's shape.

    f's proposition must normalize to an implication (g then being a theorem
    of the antecedent, in the same context) or to a universal quantification
    (g then being a term of the bound variable's type).  Both inputs must
    already live in the same context; callers move them there first.
    """
    nf = normalize(f.proposition)

    imp = match_implies(nf)
    if imp is not None:
        if not isinstance(g, Theorem):
            raise NotApplicable(
                "an implication must be applied to a theorem of its antecedent"
            )
        if g.context_ref != f.context_ref:
            raise NotApplicable("theorems live in different contexts; move them first")
        h, p = imp
        if not equal_terms(g.proposition, h):
            raise NotApplicable(
                "the argument theorem does not match the antecedent"
            )
        return _mint(p, f.context_ref)

    fa = match_forall(nf)
    if fa is not None:
        if not isinstance(g, Term):
            raise NotApplicable(
                "a universal quantification must be applied to a term"
            )
        tau, pred = fa
        arg_type = typecheck(g, const_stack)
        if arg_type != tau:
            raise NotApplicable(
                f"quantifier expects a term of type {tau!r}, got {arg_type!r}"
            )
        return _mint(normalize(App(pred, g)), f.context_ref)

    raise NotApplicable(
        "the theorem is neither an implication nor a universal quantification"
    )
