"""The immutable context tree and the term/theorem movement algebra.

Contexts live in the store; this module decodes them into Context objects,
caches cumulative constant stacks, and implements creation of the eight
kinds (root, fix, assume, define, obtain, have, bind, unbind) plus the
import wrapper used by @-references.
"""

from ..errors import (
    GuardMismatch,
    NotAncestor,
    NotExistential,
    TermTypeError,
    UnknownNameError,
)
from ..kernel import build
from ..kernel._dispatch import normalize, shift_constants, typecheck
from ..kernel.indices import const_positions, remap_free
from ..kernel.terms import Var
from ..kernel.theorems import Theorem, _mint, alpha_beta_eta_equal
from ..kernel.types import PROP
from ..syntax.names import RESERVED_TERM_NAMES, NameEnvironment
from ..values import ScriptValue, ThmVal, contains_theorem

KINDS = frozenset(
    {"root", "fix", "assume", "define", "obtain", "have", "bind", "unbind", "import"}
)


class Context:
    __slots__ = ("ref", "parent_ref", "owner", "kind", "C", "A", "V", "U", "depth")

    def __init__(self, ref, parent_ref, owner, kind, C, A, V, U, depth):
        self.ref = ref
        self.parent_ref = parent_ref
        self.owner = owner
        self.kind = kind
        self.C = tuple(C)
        self.A = tuple(A)
        self.V = dict(V)
        self.U = frozenset(U)
        self.depth = depth

    def __repr__(self):
        return f"Context({self.kind}@{self.ref})"


def _check_constant_name(name):
    if not name or not (name[0].isalpha()) or not all(
        c.isalnum() or c == "_" for c in name
    ):
        raise ValueError(f"invalid constant name {name!r}")
    if name in RESERVED_TERM_NAMES:
        raise ValueError(f"{name!r} is reserved")


class ContextTree:
    """Read/write view of the context tree over one entity store.

    cycle_guard, when set, is called with the parent ContextRef before any
    context creation; chronicle generation uses it to veto dependency cycles.
    """

    def __init__(self, store):
        self.store = store
        self._cache = {}
        self._entries = {}  # ref -> cumulative (name, type) tuple, newest first
        self.cycle_guard = None

    # ------------------------------------------------------------- loading

    def load(self, ref):
        ctx = self._cache.get(ref)
        if ctx is not None:
            return ctx
        kind, C, A, V, U, parent_ref, owner = self.store.load_context(ref)
        if parent_ref is None:
            depth = 0
        else:
            depth = self.load(parent_ref).depth + 1
        ctx = Context(ref, parent_ref, owner, kind, C, A, V, U, depth)
        self._cache[ref] = ctx
        return ctx

    def parent(self, ctx):
        if ctx.parent_ref is None:
            return None
        return self.load(ctx.parent_ref)

    def entries(self, ctx):
        """Cumulative constant list, newest first."""
        got = self._entries.get(ctx.ref)
        if got is not None:
            return got
        own = tuple(reversed(ctx.C))
        if ctx.parent_ref is None:
            out = own
        else:
            out = own + self.entries(self.load(ctx.parent_ref))
        self._entries[ctx.ref] = out
        return out

    def const_stack(self, ctx):
        return [ty for _, ty in self.entries(ctx)]

    def name_env(self, ctx):
        return NameEnvironment(self.entries(ctx))

    # ------------------------------------------------------------ creation

    def _spawn(self, parent, owner, kind, C=(), A=(), V=None, U=()):
        if parent is not None and self.cycle_guard is not None:
            self.cycle_guard(parent.ref)
        ref = self.store.append_context(
            None if parent is None else parent.ref,
            owner,
            kind,
            C,
            A,
            V or {},
            U,
        )
        depth = 0 if parent is None else parent.depth + 1
        ctx = Context(ref, None if parent is None else parent.ref, owner,
                      kind, C, A, V or {}, U, depth)
        self._cache[ref] = ctx
        return ctx

    def create_root(self, owner):
        return self._spawn(None, owner, "root")

    def create_child(self, parent, kind, payload, owner=None):
        """One new context of the given kind under parent.

        Payloads: fix (name, type); assume (prop, label|None); define
        (name, term); obtain (names, Theorem); have (prop, Theorem); bind
        (name, value); unbind name; import ContextRef.
        """
        owner = owner if owner is not None else parent.owner
        if kind == "fix":
            name, ty = payload
            _check_constant_name(name)
            return self._spawn(parent, owner, "fix", C=((name, ty),))

        if kind == "assume":
            prop, label = payload
            if typecheck(prop, self.const_stack(parent)) != PROP:
                raise TermTypeError("assumptions must be propositions")
            ctx = self._spawn(parent, owner, "assume", A=(prop,), V={})
            thm = ThmVal(_mint(prop, ctx.ref))
            ctx.V["fact"] = thm
            if label is not None:
                ctx.V[label] = thm
            return self._rewrite(ctx)

        if kind == "define":
            name, d = payload
            _check_constant_name(name)
            tau = typecheck(d, self.const_stack(parent))
            eq = build.mk_eq(tau, Var(0), shift_constants(d, 1))
            ctx = self._spawn(parent, owner, "define", C=((name, tau),), V={})
            ctx.V["fact"] = ThmVal(_mint(eq, ctx.ref))
            return self._rewrite(ctx)

        if kind == "obtain":
            names, thm = payload
            if not isinstance(thm, Theorem):
                raise TypeError("obtain needs a theorem")
            if thm.context_ref != parent.ref:
                raise ValueError("obtain theorem must live in the parent context")
            for n in names:
                _check_constant_name(n)
            taus, body = build.strip_exists_prefix(
                normalize(thm.proposition), len(names)
            )
            if len(taus) < len(names):
                raise NotExistential(
                    f"theorem provides {len(taus)} existential binder(s), "
                    f"{len(names)} name(s) given"
                )
            C = tuple(zip(names, taus))
            ctx = self._spawn(parent, owner, "obtain", C=C, V={})
            ctx.V["fact"] = ThmVal(_mint(body, ctx.ref))
            return self._rewrite(ctx)

        if kind == "have":
            prop, thm = payload
            if not isinstance(thm, Theorem):
                raise TypeError("have needs a theorem")
            if thm.context_ref != parent.ref:
                raise ValueError("have theorem must live in the parent context")
            stack = self.const_stack(parent)
            if not alpha_beta_eta_equal(prop, thm.proposition, stack):
                raise GuardMismatch("stated proposition does not match the theorem")
            ctx = self._spawn(parent, owner, "have", V={})
            ctx.V["fact"] = ThmVal(_mint(thm.proposition, ctx.ref))
            return self._rewrite(ctx)

        if kind == "bind":
            name, value = payload
            if not isinstance(value, ScriptValue):
                raise TypeError("bind needs a script value")
            return self._spawn(parent, owner, "bind", V={name: value})

        if kind == "unbind":
            return self._spawn(parent, owner, "unbind", U=(payload,))

        if kind == "import":
            target = self.load(payload)
            return self._spawn(target, owner, "import")

        raise ValueError(f"unknown context kind {kind!r}")

    def _rewrite(self, ctx):
        """Persist V entries minted against the context's own ref; the fact
        theorem can only be built after the append assigned that ref."""
        self.store.replace_context(ctx.ref, ctx.kind, ctx.C, ctx.A, ctx.V, ctx.U)
        return ctx

    # ----------------------------------------------------------- resolution

    def resolve(self, ctx, name):
        cur = ctx
        while cur is not None:
            if name in cur.V:
                return cur.V[name]
            if name in cur.U:
                raise UnknownNameError(f"{name!r} has been unbound")
            cur = self.parent(cur)
        raise UnknownNameError(f"{name!r} is not bound in this context")

    def bindings(self, ctx):
        """All visible V bindings after masking, oldest shadowed out."""
        out = {}
        masked = set()
        cur = ctx
        chain = []
        while cur is not None:
            chain.append(cur)
            cur = self.parent(cur)
        for c in chain:  # newest first
            for name, val in c.V.items():
                if name not in out and name not in masked:
                    out[name] = val
            masked |= c.U
        return out

    # ------------------------------------------------------------ movement

    def common_ancestor(self, a, b):
        while a.depth > b.depth:
            a = self.parent(a)
        while b.depth > a.depth:
            b = self.parent(b)
        while a.ref != b.ref:
            a = self.parent(a)
            b = self.parent(b)
        return a

    def constants_between(self, ancestor, descendant):
        k = 0
        cur = descendant
        while cur.ref != ancestor.ref:
            if cur.parent_ref is None:
                raise NotAncestor(f"{ancestor.ref} is not an ancestor of "
                                  f"{descendant.ref}")
            k += len(cur.C)
            cur = self.parent(cur)
        return k

    def move_term(self, t, frm, to):
        ca = self.common_ancestor(frm, to)
        up = self.constants_between(ca, frm)
        down = self.constants_between(ca, to)
        return shift_constants(shift_constants(t, -up), down)

    def close_over(self, ctx, t):
        """Proposition of a theorem in ctx, restated in ctx's parent."""
        v_prime = {
            n: v
            for n, v in ctx.V.items()
            if contains_theorem(v)
            and not (isinstance(v, ThmVal) and v.thm.proposition in ctx.A)
        }
        if not v_prime:
            for a in reversed(ctx.A):
                t = build.mk_implies(a, t)
            for _, ty in reversed(ctx.C):
                t = build.mk_forall(ty, t)
            return t
        assert not ctx.A, "no context mixes theorem bindings with axioms"
        n = len(ctx.C)
        occurring = sorted(p for p in const_positions(t) if p < n)
        rank = {p: r for r, p in enumerate(occurring)}
        m = len(occurring)

        def f(p):
            if p < n:
                return rank[p]
            return m + (p - n)

        t = remap_free(t, f)
        # occurring[0] is the newest constant, bound innermost.
        kept = [ctx.C[n - 1 - p] for p in occurring]  # newest first
        for _, ty in kept:
            t = build.mk_exists(ty, t)
        return t

    def move_theorem(self, th, to):
        frm = self.load(th.context_ref)
        ca = self.common_ancestor(frm, to)
        prop = th.proposition
        cur = frm
        while cur.ref != ca.ref:
            prop = self.close_over(cur, prop)
            cur = self.parent(cur)
        prop = shift_constants(prop, self.constants_between(ca, to))
        return _mint(prop, to.ref)

    def import_context(self, target_ref, owner):
        if not self.store.context_exists(target_ref):
            from ..errors import UnknownContext

            raise UnknownContext(f"no context {target_ref}")
        return self.create_child(None, "import", target_ref, owner=owner)
