"""Abstract syntax for proof scripts.

Statements either extend the current context (fix, assume, define, obtain,
have, let, unbind) or manage the script environment (val, def groups, bare
expressions).  Control forms are expressions; in statement position they
thread the proof state, in value position they run isolated and only their
value escapes.
"""

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class Node:
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


# ------------------------------------------------------------- expressions


@dataclass
class Expr(Node):
    pass


@dataclass
class EInt(Expr):
    value: int = 0


@dataclass
class EStr(Expr):
    value: str = ""


@dataclass
class EBool(Expr):
    value: bool = False


@dataclass
class ETermLit(Expr):
    """Single-quoted term source, parsed against the context at use time."""

    source: str = ""


@dataclass
class EIdent(Expr):
    name: str = ""


@dataclass
class ERoot(Expr):
    pass


@dataclass
class EThis(Expr):
    pass


@dataclass
class EAtRef(Expr):
    """Reference to a published context: @name, @user:name, @user:name:version
    or @"entitykey/index"."""

    user: Optional[str] = None
    name: Optional[str] = None
    version: Optional[int] = None
    key: Optional[str] = None


@dataclass
class EDot(Expr):
    base: Expr = None
    name: str = ""


@dataclass
class EApply(Expr):
    fun: Expr = None
    arg: Expr = None


@dataclass
class EBinOp(Expr):
    op: str = ""
    left: Expr = None
    right: Expr = None


@dataclass
class ENeg(Expr):
    operand: Expr = None


@dataclass
class EList(Expr):
    items: list = field(default_factory=list)


@dataclass
class EVector(Expr):
    items: list = field(default_factory=list)


@dataclass
class ESet(Expr):
    items: list = field(default_factory=list)


@dataclass
class EMap(Expr):
    pairs: list = field(default_factory=list)


@dataclass
class EBlock(Expr):
    body: list = field(default_factory=list)


@dataclass
class EIf(Expr):
    cond: Expr = None
    then_body: list = field(default_factory=list)
    else_body: Optional[list] = None


@dataclass
class EFor(Expr):
    var: str = ""
    items: Expr = None
    body: list = field(default_factory=list)


@dataclass
class EWhile(Expr):
    cond: Expr = None
    body: list = field(default_factory=list)


@dataclass
class EMatch(Expr):
    subject: Expr = None
    cases: list = field(default_factory=list)  # [(Pattern, [Statement])]


@dataclass
class EWith(Expr):
    context: Expr = None
    body: list = field(default_factory=list)


# ---------------------------------------------------------------- patterns


@dataclass
class Pattern(Node):
    pass


@dataclass
class PLit(Pattern):
    value: object = None


@dataclass
class PName(Pattern):
    name: str = ""


@dataclass
class PWild(Pattern):
    pass


@dataclass
class PVector(Pattern):
    items: list = field(default_factory=list)


# -------------------------------------------------------------- statements


@dataclass
class Statement(Node):
    pass


@dataclass
class SFix(Statement):
    label: Optional[str] = None
    payload: Expr = None


@dataclass
class SAssume(Statement):
    label: Optional[str] = None
    payload: Expr = None


@dataclass
class SDefine(Statement):
    name: str = ""
    payload: Expr = None


@dataclass
class SObtain(Statement):
    names: list = field(default_factory=list)
    payload: Expr = None


@dataclass
class SHave(Statement):
    label: Optional[str] = None
    guard: Expr = None
    proof: Expr = None


@dataclass
class SLet(Statement):
    name: str = ""
    payload: Expr = None


@dataclass
class SUnbind(Statement):
    name: str = ""


@dataclass
class SVal(Statement):
    name: str = ""
    payload: Expr = None


@dataclass
class SDefFun(Statement):
    name: str = ""
    params: list = field(default_factory=list)
    body: Expr = None
    source: str = field(default="", compare=False)


@dataclass
class SDefGroup(Statement):
    """A contiguous run of def statements; its members see each other."""

    funs: list = field(default_factory=list)


@dataclass
class SExpr(Statement):
    expr: Expr = None
