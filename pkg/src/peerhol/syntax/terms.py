"""Concrete syntax for types and terms.

One lexer serves both sub-languages.  Operator spellings come in a glyph form
and an ascii form; both parse, and the printer picks one family by mode.
Binding forms (lambda, the quantifiers, set comprehensions) manage a binder
name stack so that the de Bruijn indices of the result line up with the
surrounding constant stack.

Precedence, loosest to tightest: ascription, binders, implication
(right-assoc), disjunction, conjunction, negation, comparisons (non-assoc),
binary union (left), binary intersection (left), application (left).
"""

from ..errors import ParseError, TermTypeError, UnknownNameError
from ..kernel import consts
from ..kernel.consts import POLYMORPHIC, SIGNATURE, instance_arg_type
from ..kernel.terms import App, Const, Lam, Term, Var
from ..kernel.types import PROP, SET, Fun, LogicType
from ..kernel._dispatch import typecheck
from .names import RESERVED_TERM_NAMES, NameEnvironment

# ---------------------------------------------------------------- lexing

_MULTI_SYMS = ("-->", "->", "<>")
_SINGLE_SYMS = set("(){}|,.:=λ\\∀∃ε¬∈⊆∪∩⋃⋂∅∧∨⟶→≠") | {"\U0001d4ab"}

_ASCII_WORDS = {
    info.ascii_name
    for info in SIGNATURE.values()
    if info.ascii_name.startswith("_")
}


class Tok:
    __slots__ = ("kind", "val", "line", "col")

    def __init__(self, kind, val, line, col):
        self.kind = kind  # "ident" | "rawidx" | "sym" | "end"
        self.val = val
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Tok({self.kind}, {self.val!r})"


def lex_term(source):
    toks = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        hit = None
        for m in _MULTI_SYMS:
            if source.startswith(m, i):
                hit = m
                break
        if hit:
            toks.append(Tok("sym", hit, line, col))
            i += len(hit)
            col += len(hit)
            continue
        if ch in _SINGLE_SYMS:
            toks.append(Tok("sym", ch, line, col))
            i += 1
            col += 1
            continue
        if ch == "#":
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("expected digits after #", line, col)
            toks.append(Tok("rawidx", int(source[i + 1 : j]), line, col))
            col += j - i
            i = j
            continue
        if ch == "_" or (ch.isalpha() and ch not in _SINGLE_SYMS):
            j = i
            while j < n:
                c = source[j]
                if c in _SINGLE_SYMS or not (c.isalnum() or c == "_"):
                    break
                j += 1
            word = source[i:j]
            width = j - i
            if word.startswith("_"):
                if word not in _ASCII_WORDS:
                    raise ParseError(f"unknown builtin name {word!r}", line, col)
                toks.append(Tok("sym", word, line, col))
            else:
                disamb = 0
                if j < n and source[j] == "#" and j + 1 < n and source[j + 1].isdigit():
                    k = j + 1
                    while k < n and source[k].isdigit():
                        k += 1
                    disamb = int(source[j + 1 : k])
                    width = k - i
                    j = k
                toks.append(Tok("ident", (word, disamb), line, col))
            i = j
            col += width
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Tok("end", None, line, col))
    return toks


# Spelling families, keyed by the role they play in the grammar.
_BINDERS = {
    "λ": "lambda",
    "\\": "lambda",
    "∀": consts.FORALL,
    "_all": consts.FORALL,
    "∃": consts.EXISTS,
    "_exists": consts.EXISTS,
    "ε": consts.CHOICE,
    "_choose": consts.CHOICE,
}
_IMPLIES = {"⟶", "→", "-->"}
_OR = {"∨", "_or"}
_AND = {"∧", "_and"}
_NOT = {"¬", "_not"}
_CMP = {
    "=": "eq",
    "≠": "neq",
    "<>": "neq",
    "∈": "elem",
    "_elem": "elem",
    "⊆": "subset",
    "_subset": "subset",
}
_UNION = {"∪", "_union"}
_INTER = {"∩", "_intersect"}
_ATOM_CONSTS = {
    "∅": consts.EMPTYSET,
    "_emptyset": consts.EMPTYSET,
    "\U0001d4ab": consts.POWERSET,
    "_powerset": consts.POWERSET,
    "⋃": consts.BIGUNION,
    "_Union": consts.BIGUNION,
    "⋂": consts.BIGINTERSECT,
    "_Intersect": consts.BIGINTERSECT,
    "_Singleton": consts.SINGLETON,
    "_Separation": consts.SEPARATION,
    "_Replacement": consts.REPLACEMENT,
}
# Operator spellings usable as a parenthesised constant, e.g. (∧) or
# (= : set -> set -> prop).
_OP_CONSTS = {}
for _s in _IMPLIES:
    _OP_CONSTS[_s] = consts.IMPLIES
for _s in _OR:
    _OP_CONSTS[_s] = consts.OR
for _s in _AND:
    _OP_CONSTS[_s] = consts.AND
for _s in _NOT:
    _OP_CONSTS[_s] = consts.NOT
for _s, _r in _CMP.items():
    if _r == "eq":
        _OP_CONSTS[_s] = consts.EQUALITY
    elif _r == "elem":
        _OP_CONSTS[_s] = consts.ELEM
    elif _r == "subset":
        _OP_CONSTS[_s] = consts.SUBSET
for _s in _UNION:
    _OP_CONSTS[_s] = consts.UNION
for _s in _INTER:
    _OP_CONSTS[_s] = consts.INTERSECT
for _s in ("∀", "_all"):
    _OP_CONSTS[_s] = consts.FORALL
for _s in ("∃", "_exists"):
    _OP_CONSTS[_s] = consts.EXISTS
for _s in ("ε", "_choose"):
    _OP_CONSTS[_s] = consts.CHOICE
del _s, _r


class _Parser:
    def __init__(self, toks, env):
        self.toks = toks
        self.pos = 0
        self.env = env
        self.bnames = []  # innermost first
        self.btypes = []

    # -- token plumbing

    def peek(self, k=0):
        j = min(self.pos + k, len(self.toks) - 1)
        return self.toks[j]

    def advance(self):
        t = self.toks[self.pos]
        if t.kind != "end":
            self.pos += 1
        return t

    def at_sym(self, *texts):
        t = self.peek()
        return t.kind == "sym" and t.val in texts

    def eat_sym(self, *texts):
        if self.at_sym(*texts):
            return self.advance()
        return None

    def expect_sym(self, text):
        t = self.peek()
        if t.kind != "sym" or t.val != text:
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, msg):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)

    def full_stack(self):
        return tuple(self.btypes) + self.env.stack

    # -- types

    def p_type(self):
        left = self.p_type_atom()
        if self.eat_sym("->", "→"):
            return Fun(left, self.p_type())
        return left

    def p_type_atom(self):
        t = self.peek()
        if t.kind == "ident":
            name, disamb = t.val
            if disamb == 0 and name == "set":
                self.advance()
                return SET
            if disamb == 0 and name == "prop":
                self.advance()
                return PROP
            self.fail(f"expected a type, got {name!r}")
        if self.eat_sym("("):
            ty = self.p_type()
            self.expect_sym(")")
            return ty
        self.fail("expected a type")

    # -- terms, loosest level first

    def p_term(self):
        return self.p_ascribe()

    def p_ascribe(self):
        t = self.p_quant()
        while self.at_sym(":"):
            tok = self.advance()
            ty = self.p_type()
            t = self.check_ascription(t, ty, tok)
        return t

    def check_ascription(self, t, ty, tok):
        if isinstance(t, Const) and t.name in POLYMORPHIC and t.instance is None:
            if instance_arg_type(t.name, ty) is None:
                raise TermTypeError(
                    f"{_surface(t.name, False)} cannot have instance type {print_type(ty)}"
                )
            return Const(t.name, ty)
        actual = typecheck(t, list(self.full_stack()))
        if actual != ty:
            raise TermTypeError(
                f"term has type {print_type(actual)}, not {print_type(ty)} "
                f"(line {tok.line})"
            )
        return t

    def p_quant(self):
        t = self.peek()
        if t.kind == "sym" and t.val in _BINDERS:
            role = _BINDERS[t.val]
            if role == "lambda" or self.binder_follows():
                return self.p_binder(role)
        return self.p_imp()

    def binder_follows(self):
        one, two = self.peek(1), self.peek(2)
        return one.kind == "ident" and two.kind == "sym" and two.val in (":", ".")

    def p_binder(self, role):
        self.advance()
        t = self.peek()
        if t.kind != "ident":
            self.fail("expected a binder name")
        name, disamb = t.val
        if disamb != 0:
            self.fail("binder names cannot carry #")
        if name in RESERVED_TERM_NAMES:
            self.fail(f"{name!r} is reserved")
        self.advance()
        ty = SET
        if self.eat_sym(":"):
            ty = self.p_type()
        self.expect_sym(".")
        self.bnames.insert(0, name)
        self.btypes.insert(0, ty)
        try:
            body = self.p_quant()
        finally:
            self.bnames.pop(0)
            self.btypes.pop(0)
        lam = Lam(ty, body)
        if role == "lambda":
            return lam
        if role == consts.CHOICE:
            return App(Const(consts.CHOICE, consts.choice_instance(ty)), lam)
        return App(Const(role, consts.forall_instance(ty)), lam)

    def p_imp(self):
        left = self.p_or()
        if self.at_sym(*_IMPLIES):
            self.advance()
            right = self.p_quant()
            return App(App(Const(consts.IMPLIES), left), right)
        return left

    def p_or(self):
        left = self.p_and()
        if self.at_sym(*_OR):
            self.advance()
            return App(App(Const(consts.OR), left), self.p_or())
        return left

    def p_and(self):
        left = self.p_not()
        if self.at_sym(*_AND):
            self.advance()
            return App(App(Const(consts.AND), left), self.p_and())
        return left

    def p_not(self):
        if self.at_sym(*_NOT):
            self.advance()
            return App(Const(consts.NOT), self.p_not())
        return self.p_cmp()

    def p_cmp(self):
        left = self.p_union()
        t = self.peek()
        if t.kind == "sym" and t.val in _CMP:
            role = _CMP[t.val]
            self.advance()
            right = self.p_union()
            if role == "elem":
                return App(App(Const(consts.ELEM), left), right)
            if role == "subset":
                return App(App(Const(consts.SUBSET), left), right)
            tau = typecheck(left, list(self.full_stack()))
            eq = Const(consts.EQUALITY, consts.equality_instance(tau))
            out = App(App(eq, left), right)
            if role == "neq":
                return App(Const(consts.NOT), out)
            return out
        return left

    def p_union(self):
        t = self.p_inter()
        while self.at_sym(*_UNION):
            self.advance()
            t = App(App(Const(consts.UNION), t), self.p_inter())
        return t

    def p_inter(self):
        t = self.p_app()
        while self.at_sym(*_INTER):
            self.advance()
            t = App(App(Const(consts.INTERSECT), t), self.p_app())
        return t

    def starts_atom(self):
        t = self.peek()
        if t.kind in ("ident", "rawidx"):
            return True
        return t.kind == "sym" and (t.val in _ATOM_CONSTS or t.val in ("(", "{"))

    def p_app(self):
        t = self.p_atom()
        while self.starts_atom():
            t = App(t, self.p_atom())
        return t

    def p_atom(self):
        t = self.peek()
        if t.kind == "ident":
            name, disamb = t.val
            self.advance()
            if name in RESERVED_TERM_NAMES:
                return Const(consts.TRUE if name == "true" else consts.FALSE)
            try:
                index, _ = self.env.resolve(name, disamb, self.bnames)
            except UnknownNameError as e:
                raise UnknownNameError(f"{e} (line {t.line}, column {t.col})") from None
            return Var(index)
        if t.kind == "rawidx":
            self.advance()
            return Var(t.val)
        if t.kind == "sym":
            if t.val in _ATOM_CONSTS:
                self.advance()
                return Const(_ATOM_CONSTS[t.val])
            if t.val == "(":
                one, two = self.peek(1), self.peek(2)
                if (
                    one.kind == "sym"
                    and one.val in _OP_CONSTS
                    and two.kind == "sym"
                    and two.val in (")", ":")
                ):
                    return self.p_op_const()
                self.advance()
                inner = self.p_ascribe()
                self.expect_sym(")")
                return inner
            if t.val == "{":
                return self.p_braces()
        self.fail("expected a term")

    def p_op_const(self):
        self.expect_sym("(")
        sym = self.advance()
        cid = _OP_CONSTS[sym.val]
        if cid in POLYMORPHIC:
            c = Const(cid, None)
        else:
            c = Const(cid)
        if self.at_sym(":"):
            tok = self.advance()
            ty = self.p_type()
            c = self.check_ascription(c, ty, tok)
        if isinstance(c, Const) and c.name in POLYMORPHIC and c.instance is None:
            self.fail(f"{sym.val} needs an instance type, e.g. ({sym.val} : ...)")
        self.expect_sym(")")
        return c

    def p_braces(self):
        """Brace notation: {a, b}, {x ∈ X | P}, {F | x ∈ X}."""
        open_tok = self.expect_sym("{")
        # Find the | belonging to this brace pair, if any.
        depth, bar = 0, None
        j = self.pos
        while j < len(self.toks):
            tk = self.toks[j]
            if tk.kind == "sym" and tk.val in ("(", "{"):
                depth += 1
            elif tk.kind == "sym" and tk.val in (")", "}"):
                if depth == 0 and tk.val == "}":
                    break
                depth -= 1
            elif tk.kind == "sym" and tk.val == "|" and depth == 0:
                bar = j
                break
            elif tk.kind == "end":
                break
            j += 1
        if bar is None:
            elems = [self.p_term()]
            while self.eat_sym(","):
                elems.append(self.p_term())
            self.expect_sym("}")
            out = App(Const(consts.SINGLETON), elems[-1])
            for e in reversed(elems[:-1]):
                out = App(App(Const(consts.UNION), App(Const(consts.SINGLETON), e)), out)
            return out
        one, two = self.peek(), self.peek(1)
        if (
            one.kind == "ident"
            and two.kind == "sym"
            and two.val in ("∈", "_elem")
        ):
            # {x ∈ X | P}: x binds inside P only.
            name = one.val[0]
            if one.val[1] != 0:
                self.fail("binder names cannot carry #")
            self.advance()
            self.advance()
            domain = self.p_term()
            self.expect_sym("|")
            self.bnames.insert(0, name)
            self.btypes.insert(0, SET)
            try:
                body = self.p_term()
            finally:
                self.bnames.pop(0)
                self.btypes.pop(0)
            self.expect_sym("}")
            return App(App(Const(consts.SEPARATION), domain), Lam(SET, body))
        # {F | x ∈ X}: x binds inside F only.
        bar_tok = self.toks[bar]
        tail = self.toks[bar + 1 :]
        if not (
            len(tail) >= 2
            and tail[0].kind == "ident"
            and tail[1].kind == "sym"
            and tail[1].val in ("∈", "_elem")
        ):
            raise ParseError(
                "expected {x ∈ X | P} or {F | x ∈ X}", bar_tok.line, bar_tok.col
            )
        name = tail[0].val[0]
        if tail[0].val[1] != 0:
            self.fail("binder names cannot carry #")
        self.bnames.insert(0, name)
        self.btypes.insert(0, SET)
        try:
            image = self.p_term()
        finally:
            self.bnames.pop(0)
            self.btypes.pop(0)
        self.expect_sym("|")
        self.advance()  # binder name
        self.advance()  # elem symbol
        domain = self.p_term()
        self.expect_sym("}")
        return App(App(Const(consts.REPLACEMENT), domain), Lam(SET, image))


def parse_type(source):
    p = _Parser(lex_term(source), NameEnvironment())
    ty = p.p_type()
    if p.peek().kind != "end":
        p.fail("trailing input after type")
    return ty


def parse_term(source, env=None):
    """Parse and typecheck one term against a name environment."""
    env = env if env is not None else NameEnvironment()
    p = _Parser(lex_term(source), env)
    t = p.p_term()
    if p.peek().kind != "end":
        p.fail("trailing input after term")
    typecheck(t, list(env.stack))
    return t


# ---------------------------------------------------------------- printing

def print_type(ty, ascii=False):
    if ty == SET:
        return "set"
    if ty == PROP:
        return "prop"
    dom = print_type(ty.dom, ascii)
    if isinstance(ty.dom, Fun):
        dom = f"({dom})"
    arrow = " -> " if ascii else " → "
    return dom + arrow + print_type(ty.cod, ascii)


_ASCRIBE, _QUANT, _IMP, _LOR, _LAND, _LNOT, _CMPL, _UNI, _INT, _APPL, _ATOM = range(11)

_INFIX = {
    consts.IMPLIES: (_IMP, _LOR, _IMP),
    consts.OR: (_LOR, _LAND, _LOR),
    consts.AND: (_LAND, _LNOT, _LAND),
    consts.EQUALITY: (_CMPL, _UNI, _UNI),
    consts.ELEM: (_CMPL, _UNI, _UNI),
    consts.SUBSET: (_CMPL, _UNI, _UNI),
    consts.UNION: (_UNI, _UNI, _INT),
    consts.INTERSECT: (_INT, _INT, _APPL),
}

_POOLS = {
    "set": ("x", "y", "z", "u", "v", "w", "s", "t"),
    "prop": ("p", "q", "r"),
    "fun": ("f", "g", "h", "P", "Q", "R"),
}


def _surface(cid, ascii):
    info = SIGNATURE[cid]
    if ascii or info.glyph is None:
        return info.ascii_name
    return info.glyph


def _spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def _enum_elems(t):
    """Match right-nested unions of singletons; returns element list or None."""
    if (
        isinstance(t, App)
        and isinstance(t.fun, Const)
        and t.fun.name == consts.SINGLETON
    ):
        return [t.arg]
    if (
        isinstance(t, App)
        and isinstance(t.fun, App)
        and isinstance(t.fun.fun, Const)
        and t.fun.fun.name == consts.UNION
    ):
        head = t.fun.arg
        if (
            isinstance(head, App)
            and isinstance(head.fun, Const)
            and head.fun.name == consts.SINGLETON
        ):
            rest = _enum_elems(t.arg)
            if rest is not None:
                return [head.arg] + rest
    return None


class _Printer:
    def __init__(self, env, ascii):
        self.env = env
        self.ascii = ascii
        self.binders = []  # innermost first
        self.taken = set(env.names)

    def fresh(self, domain):
        if domain == SET:
            pool = _POOLS["set"]
        elif domain == PROP:
            pool = _POOLS["prop"]
        else:
            pool = _POOLS["fun"]
        for base in pool:
            if base not in self.taken:
                return base
        i = 1
        while True:
            for base in pool:
                cand = f"{base}{i}"
                if cand not in self.taken:
                    return cand
            i += 1

    def var(self, i):
        if i < len(self.binders):
            return self.binders[i]
        pos = i - len(self.binders)
        if pos >= len(self.env.entries):
            return f"#{i}"
        return self.env.name_at(pos, self.binders)

    def under(self, name, fn):
        self.binders.insert(0, name)
        self.taken.add(name)
        try:
            return fn()
        finally:
            self.binders.pop(0)
            self.taken.discard(name)

    def binder_txt(self, sym, dom, body_lam, spaced):
        name = self.fresh(dom)
        body = self.under(name, lambda: self.pr(body_lam.body, _QUANT))
        ann = "" if dom == SET else f" : {print_type(dom, self.ascii)}"
        sep = " " if spaced else ""
        return f"{sym}{sep}{name}{ann}. {body}"

    def wrap(self, txt, level, need):
        return f"({txt})" if level < need else txt

    def pr(self, t, need):
        if isinstance(t, Var):
            return self.var(t.index)
        if isinstance(t, Const):
            return self.const_txt(t, need)
        if isinstance(t, Lam):
            sym = "\\" if self.ascii else "λ"
            return self.wrap(self.binder_txt(sym, t.domain, t, False), _QUANT, need)
        head, args = _spine(t)
        enum = _enum_elems(t)
        if enum is not None:
            inner = ", ".join(self.pr(e, _ASCRIBE) for e in enum)
            return "{" + inner + "}"
        if isinstance(head, Const):
            out = self.const_app(head, args, need)
            if out is not None:
                return out
        parts = [self.pr(head, _APPL)] + [self.pr(a, _ATOM) for a in args]
        return self.wrap(" ".join(parts), _APPL, need)

    def const_txt(self, c, need):
        info = SIGNATURE[c.name]
        if c.name in (consts.TRUE, consts.FALSE):
            return info.ascii_name
        word = self.ascii or info.glyph is None
        sym = info.ascii_name if word else info.glyph
        if c.name in POLYMORPHIC:
            inst = print_type(c.instance, self.ascii) if c.instance else "?"
            return f"({sym} : {inst})"
        if c.name in _ATOM_CONSTS.values():
            return sym
        return f"({sym})"

    def const_app(self, head, args, need):
        """Sugared application forms; None when no sugar applies."""
        cid = head.name
        if cid in (consts.FORALL, consts.EXISTS, consts.CHOICE):
            if len(args) >= 1 and isinstance(args[0], Lam):
                sym = {
                    consts.FORALL: "∀",
                    consts.EXISTS: "∃",
                    consts.CHOICE: "ε",
                }[cid]
                if self.ascii:
                    sym = SIGNATURE[cid].ascii_name
                txt = self.binder_txt(sym, args[0].domain, args[0], True)
                if len(args) == 1:
                    return self.wrap(txt, _QUANT, need)
                parts = [f"({txt})"] + [self.pr(a, _ATOM) for a in args[1:]]
                return self.wrap(" ".join(parts), _APPL, need)
            return None
        if cid == consts.NOT and len(args) == 1:
            inner = self.pr(args[0], _LNOT)
            txt = f"_not {inner}" if self.ascii else f"¬{inner}"
            return self.wrap(txt, _LNOT, need)
        if cid in _INFIX and len(args) == 2:
            level, lneed, rneed = _INFIX[cid]
            sym = _surface(cid, self.ascii)
            lhs = self.pr(args[0], lneed)
            rhs = self.pr(args[1], rneed)
            return self.wrap(f"{lhs} {sym} {rhs}", level, need)
        if cid == consts.SEPARATION and len(args) == 2 and isinstance(args[1], Lam):
            name = self.fresh(SET)
            domain = self.pr(args[0], _ASCRIBE)
            body = self.under(name, lambda: self.pr(args[1].body, _ASCRIBE))
            el = "_elem" if self.ascii else "∈"
            return "{" + f"{name} {el} {domain} | {body}" + "}"
        if cid == consts.REPLACEMENT and len(args) == 2 and isinstance(args[1], Lam):
            name = self.fresh(SET)
            domain = self.pr(args[0], _ASCRIBE)
            image = self.under(name, lambda: self.pr(args[1].body, _ASCRIBE))
            el = "_elem" if self.ascii else "∈"
            return "{" + f"{image} | {name} {el} {domain}" + "}"
        return None


def print_term(t, env=None, ascii=False):
    """Render a term so that parse_term(print_term(t, env), env) == t."""
    env = env if env is not None else NameEnvironment()
    if not isinstance(t, Term):
        raise TypeError(f"not a term: {t!r}")
    return _Printer(env, ascii).pr(t, _ASCRIBE)
