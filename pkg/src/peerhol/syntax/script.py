"""Lexer and parser for proof scripts.

Newlines separate statements.  A line continues when it obviously cannot end
there: inside brackets, or right after an operator or a connective keyword
(`by`, `then`, `else`, `do`, `in`, `case`).  Comments run from `//` to the
end of the line.
"""

from ..errors import ParseError
from . import ast

KEYWORDS = {
    "fix", "assume", "define", "obtain", "have", "let", "unbind", "val",
    "def", "if", "then", "else", "end", "for", "in", "do", "while", "match",
    "case", "with", "begin", "root", "this", "true", "false", "by",
}

_CONTINUE_KWS = {"by", "then", "else", "do", "in", "case"}

_OPS = (
    "==", "<>", "<=", ">=", "->", "=>",
    "=", "<", ">", "+", "-", "*",
    "(", ")", "[", "]", "{", "}", ",", ".",
)

_OPENERS = {"(", "[", "{"}
_CLOSERS = {")", "]", "}"}


class Tok:
    __slots__ = ("kind", "val", "line", "col")

    def __init__(self, kind, val, line, col):
        self.kind = kind
        self.val = val
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Tok({self.kind}, {self.val!r})"


def _lex_string(src, i, line, col):
    """Double-quoted string starting at src[i]; returns (text, next_i, width)."""
    j = i + 1
    out = []
    while j < len(src):
        c = src[j]
        if c == '"':
            return "".join(out), j + 1, j + 1 - i
        if c == "\n":
            break
        if c == "\\":
            if j + 1 >= len(src):
                break
            esc = src[j + 1]
            rep = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc)
            if rep is None:
                raise ParseError(f"bad escape \\{esc}", line, col + (j - i))
            out.append(rep)
            j += 2
            continue
        out.append(c)
        j += 1
    raise ParseError("unterminated string literal", line, col)


def _lex_atref(src, i, line, col):
    """@name, @user:name, @user:name:version, or @\"key\"."""
    j = i + 1
    if j < len(src) and src[j] == '"':
        text, j2, _ = _lex_string(src, j, line, col + 1)
        return Tok("atref", {"key": text}, line, col), j2
    parts = []
    while j < len(src):
        start = j
        while j < len(src) and (src[j].isalnum() or src[j] == "_"):
            j += 1
        if j == start:
            raise ParseError("malformed @ reference", line, col)
        parts.append(src[start:j])
        if j < len(src) and src[j] == ":" and len(parts) < 3:
            j += 1
            continue
        break
    ref = {}
    if len(parts) == 1:
        ref = {"name": parts[0]}
    elif len(parts) == 2:
        ref = {"user": parts[0], "name": parts[1]}
    else:
        if not parts[2].isdigit():
            raise ParseError("@ reference version must be a number", line, col)
        ref = {"user": parts[0], "name": parts[1], "version": int(parts[2])}
    return Tok("atref", ref, line, col), j


def lex_script(source):
    toks = []
    i, line, col = 0, 1, 1
    n = len(source)
    depth = 0

    def prev_continues():
        if not toks:
            return True  # leading blank lines
        t = toks[-1]
        if t.kind == "newline":
            return True
        if t.kind == "op" and t.val not in _CLOSERS:
            return True
        if t.kind == "kw" and t.val in _CONTINUE_KWS:
            return True
        return False

    while i < n:
        ch = source[i]
        if ch == "\n":
            if depth == 0 and not prev_continues():
                toks.append(Tok("newline", None, line, col))
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch == '"':
            text, j, width = _lex_string(source, i, line, col)
            toks.append(Tok("string", text, line, col))
            i = j
            col += width
            continue
        if ch == "'":
            j = i + 1
            while j < n and source[j] != "'":
                j += 1
            if j >= n:
                raise ParseError("unterminated term literal", line, col)
            toks.append(Tok("termlit", source[i + 1 : j], line, col))
            nl = source.count("\n", i, j)
            if nl:
                line += nl
                col = j - source.rfind("\n", i, j)
            else:
                col += j + 1 - i
            i = j + 1
            continue
        if ch == "@":
            tok, j = _lex_atref(source, i, line, col)
            toks.append(tok)
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and (source[j].isalpha() or source[j] == "_"):
                raise ParseError("malformed number", line, col)
            toks.append(Tok("int", int(source[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if word == "_":
                toks.append(Tok("op", "_", line, col))
            elif word in KEYWORDS:
                toks.append(Tok("kw", word, line, col))
            else:
                toks.append(Tok("ident", word, line, col))
            col += j - i
            i = j
            continue
        hit = None
        for op in _OPS:
            if source.startswith(op, i):
                hit = op
                break
        if hit:
            if hit in _OPENERS:
                depth += 1
            elif hit in _CLOSERS:
                depth = max(0, depth - 1)
            toks.append(Tok("op", hit, line, col))
            i += len(hit)
            col += len(hit)
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Tok("end", None, line, col))
    return toks


_ATOM_STARTERS_KW = {"root", "this", "true", "false"}
_CONTROL_KW = {"begin", "if", "for", "while", "match", "with"}


class _ScriptParser:
    def __init__(self, toks, source=""):
        self.toks = toks
        self.pos = 0
        self.source = source
        starts = [0]
        for k, ch in enumerate(source):
            if ch == "\n":
                starts.append(k + 1)
        self.line_starts = starts

    def offset_of(self, tok):
        if tok.line - 1 >= len(self.line_starts):
            return len(self.source)
        return self.line_starts[tok.line - 1] + tok.col - 1

    def slice_from(self, start_tok):
        a = self.offset_of(start_tok)
        b = self.offset_of(self.peek())
        return self.source[a:b].rstrip()

    def peek(self, k=0):
        j = min(self.pos + k, len(self.toks) - 1)
        return self.toks[j]

    def advance(self):
        t = self.toks[self.pos]
        if t.kind != "end":
            self.pos += 1
        return t

    def fail(self, msg, tok=None):
        t = tok or self.peek()
        raise ParseError(msg, t.line, t.col)

    def at_kw(self, *words):
        t = self.peek()
        return t.kind == "kw" and t.val in words

    def at_op(self, *ops):
        t = self.peek()
        return t.kind == "op" and t.val in ops

    def eat_kw(self, word):
        if self.at_kw(word):
            return self.advance()
        return None

    def eat_op(self, op):
        if self.at_op(op):
            return self.advance()
        return None

    def expect_kw(self, word):
        if not self.at_kw(word):
            self.fail(f"expected {word!r}")
        return self.advance()

    def expect_op(self, op):
        if not self.at_op(op):
            self.fail(f"expected {op!r}")
        return self.advance()

    def expect_ident(self):
        t = self.peek()
        if t.kind != "ident":
            self.fail("expected a name")
        return self.advance()

    def skip_newlines(self):
        while self.peek().kind == "newline":
            self.advance()

    # -- statements

    def parse_statements(self, enders):
        """Parse statements until a keyword in `enders` or end of input."""
        out = []
        while True:
            self.skip_newlines()
            t = self.peek()
            if t.kind == "end":
                break
            if t.kind == "kw" and t.val in enders:
                break
            stmt = self.parse_statement()
            if isinstance(stmt, ast.SDefFun) and out and isinstance(out[-1], ast.SDefGroup):
                out[-1].funs.append(stmt)
            elif isinstance(stmt, ast.SDefFun):
                out.append(ast.SDefGroup(funs=[stmt], line=stmt.line, col=stmt.col))
            else:
                out.append(stmt)
            t = self.peek()
            if t.kind == "newline":
                continue
            if t.kind == "end" or (t.kind == "kw" and t.val in enders):
                continue
            self.fail("expected end of statement")
        return out

    def parse_statement(self):
        t = self.peek()
        if t.kind == "kw":
            w = t.val
            if w == "fix":
                self.advance()
                label = self.opt_label()
                return ast.SFix(label=label, payload=self.p_expr(),
                                line=t.line, col=t.col)
            if w == "assume":
                self.advance()
                label = self.opt_label()
                return ast.SAssume(label=label, payload=self.p_expr(),
                                   line=t.line, col=t.col)
            if w == "define":
                self.advance()
                name = self.expect_ident().val
                self.expect_op("=")
                return ast.SDefine(name=name, payload=self.p_expr(),
                                   line=t.line, col=t.col)
            if w == "obtain":
                self.advance()
                names = [self.expect_ident().val]
                while self.eat_op(","):
                    names.append(self.expect_ident().val)
                self.expect_op("=")
                return ast.SObtain(names=names, payload=self.p_expr(),
                                   line=t.line, col=t.col)
            if w == "have":
                self.advance()
                label = self.opt_label()
                guard = self.p_expr()
                self.expect_kw("by")
                return ast.SHave(label=label, guard=guard, proof=self.p_expr(),
                                 line=t.line, col=t.col)
            if w == "let":
                self.advance()
                name = self.expect_ident().val
                self.expect_op("=")
                return ast.SLet(name=name, payload=self.p_expr(),
                                line=t.line, col=t.col)
            if w == "unbind":
                self.advance()
                return ast.SUnbind(name=self.expect_ident().val,
                                   line=t.line, col=t.col)
            if w == "val":
                self.advance()
                name = self.expect_ident().val
                self.expect_op("=")
                return ast.SVal(name=name, payload=self.p_expr(),
                                line=t.line, col=t.col)
            if w == "def":
                self.advance()
                name = self.expect_ident().val
                params = []
                while self.peek().kind == "ident":
                    params.append(self.advance().val)
                self.expect_op("=")
                body = self.p_expr()
                return ast.SDefFun(name=name, params=params, body=body,
                                   source=self.slice_from(t),
                                   line=t.line, col=t.col)
            if w in _CONTROL_KW or w in _ATOM_STARTERS_KW:
                return ast.SExpr(expr=self.p_expr(), line=t.line, col=t.col)
            self.fail(f"unexpected keyword {w!r}")
        return ast.SExpr(expr=self.p_expr(), line=t.line, col=t.col)

    def opt_label(self):
        if self.peek().kind == "ident" and self.peek(1).kind == "op" \
                and self.peek(1).val == "=":
            label = self.advance().val
            self.advance()
            return label
        return None

    # -- expressions

    def p_expr(self):
        left = self.p_add()
        if self.at_op("==", "<>", "<", "<=", ">", ">="):
            op = self.advance()
            right = self.p_add()
            return ast.EBinOp(op=op.val, left=left, right=right,
                              line=op.line, col=op.col)
        return left

    def p_add(self):
        t = self.p_mul()
        while self.at_op("+", "-"):
            op = self.advance()
            t = ast.EBinOp(op=op.val, left=t, right=self.p_mul(),
                           line=op.line, col=op.col)
        return t

    def p_mul(self):
        t = self.p_unary()
        while self.at_op("*"):
            op = self.advance()
            t = ast.EBinOp(op=op.val, left=t, right=self.p_unary(),
                           line=op.line, col=op.col)
        return t

    def p_unary(self):
        if self.at_op("-"):
            op = self.advance()
            return ast.ENeg(operand=self.p_unary(), line=op.line, col=op.col)
        return self.p_app()

    def starts_atom(self):
        t = self.peek()
        if t.kind in ("ident", "int", "string", "termlit", "atref"):
            return True
        if t.kind == "kw" and t.val in _ATOM_STARTERS_KW:
            return True
        return t.kind == "op" and t.val in ("(", "[", "{")

    def p_app(self):
        t = self.p_postfix()
        while self.starts_atom():
            arg = self.p_postfix()
            t = ast.EApply(fun=t, arg=arg, line=t.line, col=t.col)
        return t

    def p_postfix(self):
        t = self.p_atom()
        while self.at_op("."):
            self.advance()
            name = self.expect_ident()
            t = ast.EDot(base=t, name=name.val, line=name.line, col=name.col)
        return t

    def p_atom(self):
        t = self.peek()
        if t.kind == "int":
            self.advance()
            return ast.EInt(value=t.val, line=t.line, col=t.col)
        if t.kind == "string":
            self.advance()
            return ast.EStr(value=t.val, line=t.line, col=t.col)
        if t.kind == "termlit":
            self.advance()
            return ast.ETermLit(source=t.val, line=t.line, col=t.col)
        if t.kind == "atref":
            self.advance()
            return ast.EAtRef(line=t.line, col=t.col, **t.val)
        if t.kind == "ident":
            self.advance()
            return ast.EIdent(name=t.val, line=t.line, col=t.col)
        if t.kind == "kw":
            w = t.val
            if w == "true" or w == "false":
                self.advance()
                return ast.EBool(value=(w == "true"), line=t.line, col=t.col)
            if w == "root":
                self.advance()
                return ast.ERoot(line=t.line, col=t.col)
            if w == "this":
                self.advance()
                return ast.EThis(line=t.line, col=t.col)
            if w == "begin":
                self.advance()
                body = self.parse_statements({"end"})
                self.expect_kw("end")
                return ast.EBlock(body=body, line=t.line, col=t.col)
            if w == "if":
                self.advance()
                cond = self.p_expr()
                self.expect_kw("then")
                then_body = self.parse_statements({"else", "end"})
                else_body = None
                if self.eat_kw("else"):
                    else_body = self.parse_statements({"end"})
                self.expect_kw("end")
                return ast.EIf(cond=cond, then_body=then_body,
                               else_body=else_body, line=t.line, col=t.col)
            if w == "for":
                self.advance()
                var = self.expect_ident().val
                self.expect_kw("in")
                items = self.p_expr()
                self.expect_kw("do")
                body = self.parse_statements({"end"})
                self.expect_kw("end")
                return ast.EFor(var=var, items=items, body=body,
                                line=t.line, col=t.col)
            if w == "while":
                self.advance()
                cond = self.p_expr()
                self.expect_kw("do")
                body = self.parse_statements({"end"})
                self.expect_kw("end")
                return ast.EWhile(cond=cond, body=body, line=t.line, col=t.col)
            if w == "match":
                self.advance()
                subject = self.p_expr()
                cases = []
                self.skip_newlines()
                while self.at_kw("case"):
                    self.advance()
                    pat = self.p_pattern()
                    self.expect_op("=>")
                    body = self.parse_statements({"case", "end"})
                    cases.append((pat, body))
                if not cases:
                    self.fail("match needs at least one case")
                self.expect_kw("end")
                return ast.EMatch(subject=subject, cases=cases,
                                  line=t.line, col=t.col)
            if w == "with":
                self.advance()
                context = self.p_expr()
                self.expect_kw("do")
                body = self.parse_statements({"end"})
                self.expect_kw("end")
                return ast.EWith(context=context, body=body,
                                 line=t.line, col=t.col)
        if t.kind == "op":
            if t.val == "(":
                self.advance()
                if self.eat_op(")"):
                    return ast.EVector(items=[], line=t.line, col=t.col)
                first = self.p_expr()
                if self.at_op(","):
                    items = [first]
                    while self.eat_op(","):
                        items.append(self.p_expr())
                    self.expect_op(")")
                    return ast.EVector(items=items, line=t.line, col=t.col)
                self.expect_op(")")
                return first
            if t.val == "[":
                self.advance()
                items = []
                if not self.at_op("]"):
                    items.append(self.p_expr())
                    while self.eat_op(","):
                        items.append(self.p_expr())
                self.expect_op("]")
                return ast.EList(items=items, line=t.line, col=t.col)
            if t.val == "{":
                self.advance()
                if self.eat_op("}"):
                    return ast.ESet(items=[], line=t.line, col=t.col)
                first = self.p_expr()
                if self.at_op("->"):
                    self.advance()
                    pairs = [(first, self.p_expr())]
                    while self.eat_op(","):
                        k = self.p_expr()
                        self.expect_op("->")
                        pairs.append((k, self.p_expr()))
                    self.expect_op("}")
                    return ast.EMap(pairs=pairs, line=t.line, col=t.col)
                items = [first]
                while self.eat_op(","):
                    items.append(self.p_expr())
                self.expect_op("}")
                return ast.ESet(items=items, line=t.line, col=t.col)
        self.fail("expected an expression")

    def p_pattern(self):
        t = self.peek()
        if t.kind == "int":
            self.advance()
            return ast.PLit(value=t.val, line=t.line, col=t.col)
        if t.kind == "op" and t.val == "-" and self.peek(1).kind == "int":
            self.advance()
            v = self.advance()
            return ast.PLit(value=-v.val, line=t.line, col=t.col)
        if t.kind == "string":
            self.advance()
            return ast.PLit(value=t.val, line=t.line, col=t.col)
        if t.kind == "kw" and t.val in ("true", "false"):
            self.advance()
            return ast.PLit(value=(t.val == "true"), line=t.line, col=t.col)
        if t.kind == "op" and t.val == "_":
            self.advance()
            return ast.PWild(line=t.line, col=t.col)
        if t.kind == "ident":
            self.advance()
            return ast.PName(name=t.val, line=t.line, col=t.col)
        if t.kind == "op" and t.val == "(":
            self.advance()
            items = []
            if not self.at_op(")"):
                items.append(self.p_pattern())
                while self.eat_op(","):
                    items.append(self.p_pattern())
            self.expect_op(")")
            return ast.PVector(items=items, line=t.line, col=t.col)
        self.fail("expected a pattern")


def parse_script(source):
    """Parse a whole script into a statement list."""
    p = _ScriptParser(lex_script(source), source)
    stmts = p.parse_statements(set())
    t = p.peek()
    if t.kind != "end":
        p.fail("unexpected trailing input", t)
    return stmts
