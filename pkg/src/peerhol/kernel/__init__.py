"""The trusted core: types, terms, theorems, and the term operations.

Nothing outside this package and the context tree can construct a Theorem.
"""

from ._dispatch import (
    BACKEND,
    equal_terms,
    normalize,
    shift_constants,
    substitute,
    typecheck,
)
from .build import (
    FALSE,
    IMPLIES,
    NOT,
    TRUE,
    match_exists,
    match_forall,
    match_implies,
    mk_and,
    mk_choice,
    mk_elem,
    mk_eq,
    mk_exists,
    mk_forall,
    mk_implies,
    mk_not,
    mk_or,
    strip_exists_prefix,
)
from .consts import (
    POLYMORPHIC,
    SIGNATURE,
    choice_instance,
    equality_instance,
    exists_instance,
    forall_instance,
    instance_arg_type,
)
from .indices import const_positions, remap_free
from .terms import App, Const, Lam, Term, Var, apps, term_size
from .theorems import Theorem, alpha_beta_eta_equal, apply_theorem
from .types import PROP, SET, Fun, LogicType, fun

__all__ = [
    "BACKEND",
    "PROP",
    "SET",
    "Fun",
    "LogicType",
    "fun",
    "App",
    "Const",
    "Lam",
    "Term",
    "Var",
    "apps",
    "term_size",
    "Theorem",
    "typecheck",
    "normalize",
    "shift_constants",
    "substitute",
    "equal_terms",
    "alpha_beta_eta_equal",
    "apply_theorem",
    "SIGNATURE",
    "POLYMORPHIC",
    "instance_arg_type",
    "equality_instance",
    "forall_instance",
    "exists_instance",
    "choice_instance",
    "const_positions",
    "remap_free",
    "mk_not",
    "mk_implies",
    "mk_and",
    "mk_or",
    "mk_eq",
    "mk_elem",
    "mk_forall",
    "mk_exists",
    "mk_choice",
    "match_forall",
    "match_exists",
    "match_implies",
    "strip_exists_prefix",
    "TRUE",
    "FALSE",
    "NOT",
    "IMPLIES",
]
