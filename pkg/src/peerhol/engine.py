"""Everything behind the API: one store, one context tree, the chronicle
registry, users and sessions, and script execution.

The first open of an empty store runs the bundled root theory and registers
it as the system-owned "root" chronicle; the visible root context is that
chronicle's newest final context.  Reopening an existing store replays the
log and changes nothing, so a restart is byte-identical.
"""

import hashlib
import importlib.resources
import threading

from .chronicle import Chronicles
from .context import ContextTree
from .errors import AuthFailure, UnknownChronicle, UnknownContext
from .interp import Interpreter
from .refs import ContextRef
from .store import EntityStore, FileBackend, MemoryBackend
from .syntax import parse_script, print_term, print_type
from . import values as V

SESSION_IDLE_MS = 24 * 60 * 60 * 1000

# scrypt cost parameters; salts come from the store's rng so a seeded engine
# is fully reproducible
_SCRYPT = dict(n=2**14, r=8, p=1, dklen=32)

SYSTEM_USER = "system"
ROOT_CHRONICLE = "root"


def default_bootstrap_source():
    return (
        importlib.resources.files("peerhol")
        .joinpath("data/bootstrap.ps")
        .read_text(encoding="utf-8")
    )


class Session:
    __slots__ = ("sid", "login", "created", "last_seen")

    def __init__(self, sid, login, now):
        self.sid = sid
        self.login = login
        self.created = now
        self.last_seen = now


class Engine:
    def __init__(self, backend=None, rng=None, clock=None, bootstrap=None):
        self.store = EntityStore(
            backend if backend is not None else MemoryBackend(),
            rng=rng, clock=clock,
        )
        self.tree = ContextTree(self.store)
        self.chronicles = Chronicles(self.store)
        self._lock = threading.RLock()
        self._sessions = {}          # sid -> Session
        self._by_login = {}          # login -> sid
        self._init_root(bootstrap)

    @classmethod
    def open(cls, path, **kw):
        return cls(backend=FileBackend(path), **kw)

    def close(self):
        close = getattr(self.store.backend, "close", None)
        if close:
            close()

    # ------------------------------------------------------------ bootstrap

    def _init_root(self, bootstrap):
        meta = self.store.get_meta("root")
        if meta is not None:
            self.root_ref = ContextRef.parse(meta["final"])
            return
        source = bootstrap if bootstrap is not None else default_bootstrap_source()
        if SYSTEM_USER not in self.store.list_users():
            self.store.put_user({
                "login": SYSTEM_USER, "salt": "", "hash": "",
                "created": self.store.clock(),
            })
        bare = self.tree.create_root(SYSTEM_USER)
        interp = Interpreter(self.tree, self.chronicles, SYSTEM_USER, bare.ref)
        final, _env = interp.run(parse_script(source), bare)
        owned = frozenset([bare.ref, *interp.created])
        self.chronicles.register_version(
            SYSTEM_USER, ROOT_CHRONICLE, owned, final.ref, source, {}
        )
        self.store.put_meta("root", {"final": str(final.ref),
                                     "bare": str(bare.ref)})
        self.root_ref = final.ref

    @property
    def root(self):
        return self.tree.load(self.root_ref)

    # ----------------------------------------------------- users & sessions

    def create_user(self, login, password):
        if not login or not login.isidentifier():
            raise ValueError("login must be a plain identifier")
        if login == SYSTEM_USER or self.store.get_user(login) is not None:
            raise ValueError(f"login {login!r} is taken")
        salt = self.store.rng.getrandbits(128).to_bytes(16, "big")
        digest = hashlib.scrypt(password.encode(), salt=salt, **_SCRYPT)
        self.store.put_user({
            "login": login,
            "salt": salt.hex(),
            "hash": digest.hex(),
            "created": self.store.clock(),
        })
        return login

    def _verify(self, login, password):
        record = self.store.get_user(login)
        if record is None or not record.get("salt"):
            raise AuthFailure("unknown login or wrong password")
        digest = hashlib.scrypt(
            password.encode(), salt=bytes.fromhex(record["salt"]), **_SCRYPT
        )
        if digest.hex() != record["hash"]:
            raise AuthFailure("unknown login or wrong password")

    def login(self, login, password):
        self._verify(login, password)
        with self._lock:
            now = self.store.clock()
            sid = self._by_login.get(login)
            if sid is not None:
                session = self._sessions.get(sid)
                if session is not None and now - session.last_seen <= SESSION_IDLE_MS:
                    session.last_seen = now
                    return sid
                self._drop(sid)
            sid = f"{self.store.rng.getrandbits(128):032x}"
            self._sessions[sid] = Session(sid, login, now)
            self._by_login[login] = sid
            return sid

    def logout(self, sid):
        with self._lock:
            self._drop(sid)

    def _drop(self, sid):
        session = self._sessions.pop(sid, None)
        if session is not None and self._by_login.get(session.login) == sid:
            del self._by_login[session.login]

    def authenticate(self, sid):
        with self._lock:
            session = self._sessions.get(sid) if sid else None
            if session is None:
                raise AuthFailure("invalid session")
            now = self.store.clock()
            if now - session.last_seen > SESSION_IDLE_MS:
                self._drop(sid)
                raise AuthFailure("session expired")
            session.last_seen = now
            return session.login

    # ------------------------------------------------------------ execution

    def _run(self, owner, source, assignment=None, guard_key=None):
        stmts = parse_script(source)
        interp = Interpreter(self.tree, self.chronicles, owner, self.root_ref,
                             assignment=assignment)
        self.tree.cycle_guard = (
            self.chronicles.make_guard(guard_key) if guard_key else None
        )
        try:
            ctx, env = interp.run(stmts, self.root)
        finally:
            self.tree.cycle_guard = None
        return ctx, env, interp

    def execute(self, login, source, chronicle=None, assignment=None,
                ascii=False):
        """Run a script as the given user; publish when a chronicle is named.

        Returns the execution report.  Script problems raise ScriptError or
        ParseError; the caller maps those to its own error surface.
        """
        with self._lock:
            guard_key = (login, chronicle) if chronicle else None
            ctx, env, interp = self._run(
                login, source, assignment=assignment, guard_key=guard_key
            )
            report = {
                "ok": True,
                "final": str(ctx.ref),
                "created": [str(r) for r in interp.created],
                "bindings": {
                    name: self.render_value(value, ascii=ascii)
                    for name, value in env.items()
                },
                "published": None,
                "repair": None,
            }
            if chronicle:
                version = self.chronicles.register_version(
                    login, chronicle, frozenset(interp.created), ctx.ref,
                    source, dict(interp.assignment),
                )
                report["published"] = {
                    "owner": login,
                    "name": chronicle,
                    "version": version.version_id,
                }
                report["repair"] = self.repair()
            return report

    def repair(self):
        """Regenerate every out-of-date chronicle from its newest script."""
        with self._lock:
            return self.chronicles.repair_sweep(self._regenerate)

    def _regenerate(self, chron, assignment):
        ctx, _env, interp = self._run(
            chron.owner, chron.newest.script,
            assignment=assignment, guard_key=chron.key,
        )
        return frozenset(interp.created), ctx.ref

    # ------------------------------------------------------------ rendering

    def render_value(self, v, ascii=False):
        if isinstance(v, V.IntVal):
            return str(v.value)
        if isinstance(v, V.BoolVal):
            return "true" if v.value else "false"
        if isinstance(v, V.StrVal):
            return '"' + v.value + '"'
        if isinstance(v, V.TypeVal):
            return print_type(v.ty, ascii=ascii)
        if isinstance(v, V.TermVal):
            env = self.tree.name_env(self.tree.load(v.ref))
            return "'" + print_term(v.term, env, ascii=ascii) + "'"
        if isinstance(v, V.ThmVal):
            env = self.tree.name_env(self.tree.load(v.thm.context_ref))
            lead = "|- " if ascii else "⊢ "
            return lead + print_term(v.thm.proposition, env, ascii=ascii)
        if isinstance(v, V.CtxVal):
            return f"<context {v.ref}>"
        if isinstance(v, V.FunVal):
            return f"<function {v.name or '?'}/{len(v.params)}>"
        if isinstance(v, V.ListVal):
            inner = ", ".join(self.render_value(x, ascii) for x in v.items)
            return "[" + inner + "]"
        if isinstance(v, V.VectorVal):
            inner = ", ".join(self.render_value(x, ascii) for x in v.items)
            return "(" + inner + ")"
        if isinstance(v, V.SetVal):
            inner = ", ".join(self.render_value(x, ascii) for x in v.items)
            return "{" + inner + "}"
        if isinstance(v, V.MapVal):
            inner = ", ".join(
                f"{self.render_value(k, ascii)} -> {self.render_value(x, ascii)}"
                for k, x in v.pairs
            )
            return "{" + inner + "}"
        return f"<{V.type_name(v)}>"

    def context_document(self, key, index, ascii=False):
        ref = ContextRef(key, index)
        if not self.store.context_exists(ref):
            raise UnknownContext(str(ref))
        ctx = self.tree.load(ref)
        env = self.tree.name_env(ctx)
        return {
            "ref": str(ref),
            "kind": ctx.kind,
            "parent": str(ctx.parent_ref) if ctx.parent_ref else None,
            "owner": ctx.owner,
            "depth": ctx.depth,
            "constants": [
                {"name": n, "type": print_type(ty, ascii=ascii)}
                for n, ty in ctx.C
            ],
            "assumptions": [print_term(a, env, ascii=ascii) for a in ctx.A],
            "bindings": {
                n: self.render_value(v, ascii=ascii)
                for n, v in sorted(ctx.V.items())
            },
            "masked": sorted(ctx.U),
        }

    # ----------------------------------------------------------- chronicles

    def chronicle_list(self):
        out = []
        for c in sorted(self.chronicles.all_chronicles(),
                        key=lambda c: (c.owner, c.name)):
            newest = c.newest
            out.append({
                "owner": c.owner,
                "name": c.name,
                "status": self.chronicles.status(c),
                "failed": c.regeneration_failed,
                "versions": len(c.versions),
                "newest": newest.version_id if newest else None,
            })
        return out

    def chronicle_document(self, owner, name, version=None):
        c = self.chronicles.get(owner, name)
        if c is None:
            raise UnknownChronicle(f"{owner}:{name}")
        versions = c.versions
        if version is not None:
            v = self.chronicles.version(c.key, version)
            if v is None:
                raise UnknownChronicle(f"{owner}:{name} version {version}")
            versions = [v]
        return {
            "owner": c.owner,
            "name": c.name,
            "status": self.chronicles.status(c),
            "failed": c.regeneration_failed,
            "versions": [self._version_document(v) for v in versions],
        }

    def _version_document(self, v):
        return {
            "id": v.version_id,
            "final": str(v.final),
            "owned": sorted(str(r) for r in v.owned),
            "script": v.script,
            "assignment": {
                f"{o}:{n}": vid for (o, n), vid in sorted(v.assignment.items())
            },
            "dependencies": sorted(
                f"{o}:{n}:{vid}"
                for (o, n), vid in self.chronicles.direct_dependencies(v)
            ),
        }
