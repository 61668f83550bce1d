"""The proof script evaluator.

A script runs against a state (current context, environment).  Statements
thread that state; expressions are evaluated against it.  Control forms play
both roles: in statement position they thread the state through their
bodies, in value position they run on a scratch environment and only their
value escapes.  Name lookup goes through script-local bindings first, then
the context's accumulated V/U components.
"""

from ..errors import (
    AmbiguousChronicle,
    NotApplicable,
    PeerHolError,
    ScriptError,
    UnknownChronicle,
)
from ..kernel import alpha_beta_eta_equal, apply_theorem
from ..kernel._dispatch import shift_constants, typecheck
from ..kernel.build import mk_elem
from ..kernel.terms import Var
from ..kernel.types import PROP, SET
from ..refs import ContextRef
from ..syntax import ast
from ..syntax.script import parse_script
from ..syntax.terms import lex_term, parse_term, parse_type
from .. import values as V

DEFAULT_RECURSION_LIMIT = 10_000


class Interpreter:
    def __init__(self, tree, chronicles, user, root_ref,
                 assignment=None, recursion_limit=DEFAULT_RECURSION_LIMIT):
        self.tree = tree
        self.chronicles = chronicles
        self.user = user
        self.root_ref = root_ref
        if assignment is None and chronicles is not None:
            assignment = chronicles.default_assignment()
        self.assignment = assignment or {}
        self.recursion_limit = recursion_limit
        self.created = []
        self._depth = 0

    # ------------------------------------------------------------- plumbing

    def run(self, stmts, start_ctx):
        """Execute a whole script; returns (final context, environment)."""
        env = {}
        ctx = self.exec_statements(stmts, start_ctx, env)
        return ctx, env

    def _create(self, parent, kind, payload):
        ctx = self.tree.create_child(parent, kind, payload, owner=self.user)
        self.created.append(ctx.ref)
        return ctx

    def _err(self, node, message, cause=None):
        return ScriptError(message, node.line, node.col, cause=cause)

    def _wrap(self, node, fn):
        try:
            return fn()
        except ScriptError:
            raise
        except PeerHolError as e:
            raise ScriptError(str(e), node.line, node.col, cause=e) from e
        except (TypeError, ValueError) as e:
            raise ScriptError(str(e), node.line, node.col, cause=e) from e

    # ----------------------------------------------------------- statements

    def exec_statements(self, stmts, ctx, env):
        for stmt in stmts:
            ctx = self.exec_statement(stmt, ctx, env)
        return ctx

    def exec_statement(self, stmt, ctx, env):
        return self._wrap(stmt, lambda: self._exec(stmt, ctx, env))

    def _exec(self, stmt, ctx, env):
        if isinstance(stmt, ast.SFix):
            return self.exec_fix(stmt, ctx, env)
        if isinstance(stmt, ast.SAssume):
            prop = self.as_prop(self.eval_expr(stmt.payload, ctx, env), ctx, stmt)
            return self._create(ctx, "assume", (prop, stmt.label))
        if isinstance(stmt, ast.SDefine):
            d = self.as_term(self.eval_expr(stmt.payload, ctx, env), ctx, stmt)
            return self._create(ctx, "define", (stmt.name, d))
        if isinstance(stmt, ast.SObtain):
            thm = self.as_theorem(self.eval_expr(stmt.payload, ctx, env), stmt)
            thm = self.tree.move_theorem(thm, ctx)
            return self._create(ctx, "obtain", (stmt.names, thm))
        if isinstance(stmt, ast.SHave):
            return self.exec_have(stmt, ctx, env)
        if isinstance(stmt, ast.SLet):
            value = self.eval_expr(stmt.payload, ctx, env)
            return self._create(ctx, "bind", (stmt.name, value))
        if isinstance(stmt, ast.SUnbind):
            return self._create(ctx, "unbind", stmt.name)
        if isinstance(stmt, ast.SVal):
            env[stmt.name] = self.eval_expr(stmt.payload, ctx, env)
            return ctx
        if isinstance(stmt, ast.SDefGroup):
            group = {}
            captured = dict(env)
            for f in stmt.funs:
                fv = V.FunVal(f.name, f.params, f.body, captured, group,
                              ctx.ref, source=f.source)
                group[f.name] = fv
                env[f.name] = fv
            return ctx
        if isinstance(stmt, ast.SExpr):
            e = stmt.expr
            if isinstance(e, (ast.EBlock, ast.EIf, ast.EFor, ast.EWhile,
                              ast.EMatch, ast.EWith)):
                ctx, _ = self.exec_control(e, ctx, env)
                return ctx
            self.eval_expr(e, ctx, env)
            return ctx
        raise self._err(stmt, f"cannot execute {type(stmt).__name__}")

    def exec_fix(self, stmt, ctx, env):
        v = self.eval_expr(stmt.payload, ctx, env)
        label = stmt.label
        if isinstance(v, V.StrVal):
            toks = lex_term(v.value)
            if len(toks) >= 2 and toks[0].kind == "ident" \
                    and toks[1].kind == "sym" and toks[1].val == ":":
                if label is not None:
                    raise self._err(
                        stmt, "a plain fix introduces no assumption to label"
                    )
                name = toks[0].val[0]
                colon = v.value.index(":")
                ty = parse_type(v.value[colon + 1:])
                return self._create(ctx, "fix", (name, ty))
            if len(toks) >= 2 and toks[0].kind == "ident" \
                    and toks[1].kind == "sym" and toks[1].val in ("∈", "_elem"):
                name = toks[0].val[0]
                inner = self._create(ctx, "fix", (name, SET))
                prop = parse_term(v.value, self.tree.name_env(inner))
                out = self._create(inner, "assume", (prop, label))
                env["fact"] = out.V["fact"]
                if label is not None:
                    env[label] = out.V["fact"]
                return out
            raise self._err(stmt, "fix expects \"x : type\" or \"x ∈ D\"")
        if isinstance(v, V.VectorVal) and len(v.items) == 2:
            head, snd = v.items
            if not isinstance(head, V.StrVal):
                raise self._err(stmt, "fix pair must start with a name string")
            name = head.value
            if isinstance(snd, V.TypeVal):
                if label is not None:
                    raise self._err(
                        stmt, "a plain fix introduces no assumption to label"
                    )
                return self._create(ctx, "fix", (name, snd.ty))
            if isinstance(snd, V.TermVal):
                d = self.as_term(snd, ctx, stmt)
                if typecheck(d, self.tree.const_stack(ctx)) != SET:
                    raise self._err(stmt, "fix membership needs a term of type set")
                inner = self._create(ctx, "fix", (name, SET))
                prop = mk_elem(Var(0), shift_constants(d, 1))
                out = self._create(inner, "assume", (prop, label))
                env["fact"] = out.V["fact"]
                if label is not None:
                    env[label] = out.V["fact"]
                return out
            raise self._err(stmt, "fix pair must carry a type or a set-typed term")
        raise self._err(stmt, f"fix cannot use a {V.type_name(v)} value")

    def exec_have(self, stmt, ctx, env):
        guard = self.as_prop(self.eval_expr(stmt.guard, ctx, env), ctx, stmt)
        proved = self.as_theorem(self.eval_expr(stmt.proof, ctx, env), stmt)
        moved = self.tree.move_theorem(proved, ctx)
        have = self._create(ctx, "have", (guard, moved))
        if stmt.label is not None:
            env[stmt.label] = have.V["fact"]
            return self._create(have, "bind", (stmt.label, have.V["fact"]))
        return have

    # ---------------------------------------------------------- expressions

    def eval_expr(self, e, ctx, env):
        return self._wrap(e, lambda: self._eval(e, ctx, env))

    def _eval(self, e, ctx, env):
        if isinstance(e, ast.EInt):
            return V.IntVal(e.value)
        if isinstance(e, ast.EStr):
            return V.StrVal(e.value)
        if isinstance(e, ast.EBool):
            return V.BoolVal(e.value)
        if isinstance(e, ast.ETermLit):
            # Quoted source is a logical type when it reads as one (the type
            # names are not term names, so the two readings never overlap).
            try:
                return V.TypeVal(parse_type(e.source))
            except PeerHolError:
                pass
            term = parse_term(e.source, self.tree.name_env(ctx))
            return V.TermVal(term, ctx.ref)
        if isinstance(e, ast.EIdent):
            if e.name in env:
                return env[e.name]
            return self.tree.resolve(ctx, e.name)
        if isinstance(e, ast.ERoot):
            return V.CtxVal(self.root_ref)
        if isinstance(e, ast.EThis):
            return V.CtxVal(ctx.ref)
        if isinstance(e, ast.EAtRef):
            return self.resolve_reference(e)
        if isinstance(e, ast.EDot):
            base = self.eval_expr(e.base, ctx, env)
            if not isinstance(base, V.CtxVal):
                raise self._err(e, f"cannot read .{e.name} of a "
                                   f"{V.type_name(base)} value")
            return self.tree.resolve(self.tree.load(base.ref), e.name)
        if isinstance(e, ast.EApply):
            f = self.eval_expr(e.fun, ctx, env)
            g = self.eval_expr(e.arg, ctx, env)
            return self.apply(f, g, ctx, e)
        if isinstance(e, ast.EBinOp):
            return self.binop(e, ctx, env)
        if isinstance(e, ast.ENeg):
            v = self.eval_expr(e.operand, ctx, env)
            if not isinstance(v, V.IntVal):
                raise self._err(e, f"cannot negate a {V.type_name(v)} value")
            return V.IntVal(-v.value)
        if isinstance(e, ast.EList):
            return V.ListVal([self.eval_expr(x, ctx, env) for x in e.items])
        if isinstance(e, ast.EVector):
            return V.VectorVal([self.eval_expr(x, ctx, env) for x in e.items])
        if isinstance(e, ast.ESet):
            return V.SetVal([self.eval_expr(x, ctx, env) for x in e.items])
        if isinstance(e, ast.EMap):
            return V.MapVal(
                [
                    (self.eval_expr(k, ctx, env), self.eval_expr(x, ctx, env))
                    for k, x in e.pairs
                ]
            )
        if isinstance(e, (ast.EBlock, ast.EIf, ast.EFor, ast.EWhile,
                          ast.EMatch, ast.EWith)):
            _, value = self.exec_control(e, ctx, dict(env))
            return value
        raise self._err(e, f"cannot evaluate {type(e).__name__}")

    def exec_control(self, e, ctx, env):
        """Run a control form; returns (final context, value).

        The caller decides what to keep: statement position threads the
        context and passes the environment straight through, value position
        hands in a scratch environment and keeps only the value.
        """
        if isinstance(e, ast.EBlock):
            return self.block_value(e.body, ctx, env)
        if isinstance(e, ast.EIf):
            cond = self.eval_expr(e.cond, ctx, env)
            if not isinstance(cond, V.BoolVal):
                raise self._err(e, "if condition must be a boolean")
            if cond.value:
                return self.block_value(e.then_body, ctx, env)
            if e.else_body is not None:
                return self.block_value(e.else_body, ctx, env)
            return ctx, V.CtxVal(ctx.ref)
        if isinstance(e, ast.EFor):
            items = self.eval_expr(e.items, ctx, env)
            if not isinstance(items, (V.ListVal, V.VectorVal, V.SetVal)):
                raise self._err(e, f"cannot iterate a {V.type_name(items)} value")
            value = V.CtxVal(ctx.ref)
            missing = object()
            saved = env.get(e.var, missing)
            for item in items.items:
                env[e.var] = item
                ctx, value = self.block_value(e.body, ctx, env)
            if saved is missing:
                env.pop(e.var, None)
            else:
                env[e.var] = saved
            return ctx, value
        if isinstance(e, ast.EWhile):
            value = V.CtxVal(ctx.ref)
            while True:
                cond = self.eval_expr(e.cond, ctx, env)
                if not isinstance(cond, V.BoolVal):
                    raise self._err(e, "while condition must be a boolean")
                if not cond.value:
                    return ctx, value
                ctx, value = self.block_value(e.body, ctx, env)
        if isinstance(e, ast.EMatch):
            subject = self.eval_expr(e.subject, ctx, env)
            for pat, body in e.cases:
                binds = match_pattern(pat, subject)
                if binds is None:
                    continue
                missing = object()
                saved = {n: env.get(n, missing) for n in binds}
                env.update(binds)
                try:
                    return self.block_value(body, ctx, env)
                finally:
                    for n, old in saved.items():
                        if old is missing:
                            env.pop(n, None)
                        else:
                            env[n] = old
            raise self._err(e, "no case matched the value")
        if isinstance(e, ast.EWith):
            target = self.eval_expr(e.context, ctx, env)
            if not isinstance(target, V.CtxVal):
                raise self._err(e, "with needs a context to start from")
            start = self.tree.load(target.ref)
            return self.block_value(e.body, start, env)
        raise self._err(e, f"cannot execute {type(e).__name__}")

    def block_value(self, body, ctx, env):
        """Statement list semantics: value of the trailing expression, or a
        reference to the context the statements arrived at."""
        if body and isinstance(body[-1], ast.SExpr):
            ctx = self.exec_statements(body[:-1], ctx, env)
            value = self.eval_expr(body[-1].expr, ctx, env)
            return ctx, value
        ctx = self.exec_statements(body, ctx, env)
        return ctx, V.CtxVal(ctx.ref)

    # -------------------------------------------------------------- calling

    def apply(self, f, g, ctx, node):
        if isinstance(f, V.FunVal):
            return self.call_function(f, g, ctx, node)
        if isinstance(f, V.ThmVal):
            return self.apply_theorem_value(f, g, ctx, node)
        raise NotApplicable(f"a {V.type_name(f)} value cannot be applied")

    def call_function(self, f, g, ctx, node):
        if f.body is None and f.source:
            f = self._hydrate(f, node)
        bound = f.bound + (g,)
        if len(bound) < len(f.params):
            return V.FunVal(f.name, f.params, f.body, f.captured, f.group,
                            f.ctx_ref, source=f.source, bound=bound)
        if len(bound) > len(f.params):
            raise self._err(node, f"{f.name or 'function'} takes "
                                  f"{len(f.params)} argument(s)")
        if self._depth >= self.recursion_limit:
            raise self._err(node, "recursion limit exceeded")
        call_env = dict(f.captured)
        call_env.update(f.group)
        call_env.update(zip(f.params, bound))
        self._depth += 1
        try:
            return self.eval_expr(f.body, ctx, call_env)
        finally:
            self._depth -= 1

    def _hydrate(self, f, node):
        """Rebuild a function loaded from storage out of its script text."""
        stmts = parse_script(f.source)
        if len(stmts) != 1 or not isinstance(stmts[0], ast.SDefGroup):
            raise self._err(node, "stored function text is not a definition")
        fun = stmts[0].funs[0]
        return V.FunVal(fun.name, fun.params, fun.body, {}, {},
                        f.ctx_ref, source=f.source, bound=f.bound)

    def apply_theorem_value(self, f, g, ctx, node):
        moved = self.tree.move_theorem(f.thm, ctx)
        stack = self.tree.const_stack(ctx)
        if isinstance(g, V.ThmVal):
            g_moved = self.tree.move_theorem(g.thm, ctx)
            return V.ThmVal(apply_theorem(moved, g_moved, stack))
        if isinstance(g, (V.TermVal, V.StrVal)):
            u = self.as_term(g, ctx, node)
            return V.ThmVal(apply_theorem(moved, u, stack))
        raise NotApplicable(f"cannot apply a theorem to a "
                            f"{V.type_name(g)} value")

    # ------------------------------------------------------------ operators

    def binop(self, e, ctx, env):
        a = self.eval_expr(e.left, ctx, env)
        b = self.eval_expr(e.right, ctx, env)
        op = e.op
        if op == "==":
            return V.BoolVal(self.values_equal(a, b, ctx, e))
        if op == "<>":
            return V.BoolVal(not self.values_equal(a, b, ctx, e))
        if op in ("<", "<=", ">", ">="):
            if isinstance(a, V.IntVal) and isinstance(b, V.IntVal):
                x, y = a.value, b.value
            elif isinstance(a, V.StrVal) and isinstance(b, V.StrVal):
                x, y = a.value, b.value
            else:
                raise self._err(e, f"cannot order {V.type_name(a)} and "
                                   f"{V.type_name(b)} values")
            out = {
                "<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y,
            }[op]
            return V.BoolVal(out)
        if op == "+":
            if isinstance(a, V.IntVal) and isinstance(b, V.IntVal):
                return V.IntVal(a.value + b.value)
            if isinstance(a, V.StrVal) and isinstance(b, V.StrVal):
                return V.StrVal(a.value + b.value)
            if isinstance(a, V.ListVal) and isinstance(b, V.ListVal):
                return V.ListVal(a.items + b.items)
            raise self._err(e, f"cannot add {V.type_name(a)} and "
                               f"{V.type_name(b)} values")
        if op in ("-", "*"):
            if not (isinstance(a, V.IntVal) and isinstance(b, V.IntVal)):
                raise self._err(e, f"{op} needs integers")
            return V.IntVal(a.value - b.value if op == "-" else
                            a.value * b.value)
        raise self._err(e, f"unknown operator {op}")

    def values_equal(self, a, b, ctx, node):
        if isinstance(a, V.FunVal) or isinstance(b, V.FunVal):
            raise self._err(node, "functions cannot be compared")
        if type(a) is not type(b):
            return False
        if isinstance(a, (V.IntVal, V.StrVal, V.BoolVal)):
            return a.value == b.value
        if isinstance(a, V.TypeVal):
            return a.ty == b.ty
        if isinstance(a, V.CtxVal):
            return a.ref == b.ref
        if isinstance(a, V.TermVal):
            x = self.tree.move_term(a.term, self.tree.load(a.ref), ctx)
            y = self.tree.move_term(b.term, self.tree.load(b.ref), ctx)
            return alpha_beta_eta_equal(x, y, self.tree.const_stack(ctx))
        if isinstance(a, V.ThmVal):
            x = self.tree.move_theorem(a.thm, ctx)
            y = self.tree.move_theorem(b.thm, ctx)
            return alpha_beta_eta_equal(x.proposition, y.proposition,
                                        self.tree.const_stack(ctx))
        if isinstance(a, (V.ListVal, V.VectorVal)):
            return len(a.items) == len(b.items) and all(
                self.values_equal(x, y, ctx, node)
                for x, y in zip(a.items, b.items)
            )
        if isinstance(a, (V.SetVal, V.MapVal)):
            return V.order_key(a) == V.order_key(b)
        return False

    # ------------------------------------------------------------ coercions

    def as_term(self, v, ctx, node):
        if isinstance(v, V.TermVal):
            return self.tree.move_term(v.term, self.tree.load(v.ref), ctx)
        if isinstance(v, V.StrVal):
            return parse_term(v.value, self.tree.name_env(ctx))
        raise self._err(node, f"expected a term, got a {V.type_name(v)} value")

    def as_prop(self, v, ctx, node):
        t = self.as_term(v, ctx, node)
        if typecheck(t, self.tree.const_stack(ctx)) != PROP:
            raise self._err(node, "expected a proposition")
        return t

    def as_theorem(self, v, node):
        if isinstance(v, V.ThmVal):
            return v.thm
        if isinstance(v, V.CtxVal):
            fact = self.tree.resolve(self.tree.load(v.ref), "fact")
            if isinstance(fact, V.ThmVal):
                return fact.thm
            raise self._err(node, "context's fact is not a theorem")
        raise self._err(node, f"expected a theorem, got a "
                              f"{V.type_name(v)} value")

    # ------------------------------------------------------------ references

    def resolve_reference(self, e):
        if e.key is not None:
            ref = ContextRef.parse(e.key)
            wrapper = self.tree.import_context(ref, owner=self.user)
            self.created.append(wrapper.ref)
            return V.CtxVal(wrapper.ref)
        if e.user is not None:
            chron = self.chronicles.require(e.user, e.name)
        else:
            mine = self.chronicles.get(self.user, e.name)
            if mine is not None:
                chron = mine
            else:
                named = [
                    c for c in self.chronicles.all_chronicles()
                    if c.name == e.name
                ]
                if not named:
                    raise UnknownChronicle(f"no chronicle named {e.name}")
                if len(named) > 1:
                    owners = ", ".join(c.owner for c in named)
                    raise AmbiguousChronicle(
                        f"{e.name} is owned by {owners}; qualify it"
                    )
                chron = named[0]
        if e.version is not None:
            version = self.chronicles.version(chron.key, e.version)
            if version is None:
                raise UnknownChronicle(
                    f"{chron.owner}:{chron.name} has no version {e.version}"
                )
        else:
            vid = self.assignment.get(chron.key)
            version = (
                self.chronicles.version(chron.key, vid)
                if vid is not None
                else chron.newest
            )
            if version is None:
                raise UnknownChronicle(
                    f"{chron.owner}:{chron.name} has no versions"
                )
        wrapper = self.tree.import_context(version.final, owner=self.user)
        self.created.append(wrapper.ref)
        return V.CtxVal(wrapper.ref)


def match_pattern(pat, value):
    if isinstance(pat, ast.PWild):
        return {}
    if isinstance(pat, ast.PName):
        return {pat.name: value}
    if isinstance(pat, ast.PLit):
        lit = pat.value
        if isinstance(lit, bool):
            return {} if isinstance(value, V.BoolVal) and value.value == lit \
                else None
        if isinstance(lit, int):
            return {} if isinstance(value, V.IntVal) and value.value == lit \
                else None
        if isinstance(lit, str):
            return {} if isinstance(value, V.StrVal) and value.value == lit \
                else None
        return None
    if isinstance(pat, ast.PVector):
        if not isinstance(value, V.VectorVal) or \
                len(value.items) != len(pat.items):
            return None
        out = {}
        for p, v in zip(pat.items, value.items):
            got = match_pattern(p, v)
            if got is None:
                return None
            out.update(got)
        return out
    return None
