"""Batch runner, REPL, and admin commands.

Runs scripts either against an embedded engine (optionally file-backed) or
a remote server speaking the same API.  Reports print identically in both
modes so output can be diffed across them.
"""

import argparse
import json
import os
import sys
import urllib.error
import urllib.request

from .engine import Engine
from .errors import ParseError, PeerHolError, ScriptError
from .service.app import load_config, script_error_payload
from .store import FileBackend
from .syntax import lex_script, parse_script

_OPENERS = {"begin", "if", "for", "while", "match", "with"}

PROMPT = "peerhol> "
CONTINUE = "   ....> "


class CliError(Exception):
    def __init__(self, message, code=1):
        super().__init__(message)
        self.code = code


# ------------------------------------------------------------------ clients


class EmbeddedClient:
    """Direct engine access; the auth layer is skipped on purpose."""

    def __init__(self, store_path=None, login="local"):
        backend = FileBackend(store_path) if store_path else None
        self.engine = Engine(backend=backend)
        self.login = login

    def execute(self, script, chronicle=None, ascii=False):
        return self.engine.execute(self.login, script,
                                   chronicle=chronicle, ascii=ascii)

    def chronicles(self):
        return self.engine.chronicle_list()

    def repair(self):
        return self.engine.repair()

    def close(self):
        self.engine.close()


class RemoteClient:
    def __init__(self, url, login, password, ascii=False):
        if not login or password is None:
            raise CliError(
                "remote mode needs credentials: set PEERHOL_LOGIN and "
                "PEERHOL_PASSWORD (or login/password in the config file)",
                code=2,
            )
        self.url = url.rstrip("/")
        self.login = login
        self._register(login, password)
        self.sid = self._call("POST", "/api/login",
                              {"login": login, "password": password},
                              auth=False)["sessionId"]

    def _register(self, login, password):
        try:
            self._call("POST", "/api/user",
                       {"login": login, "password": password}, auth=False)
        except CliError as e:
            if "409" not in str(e):
                raise

    def _call(self, method, path, body=None, auth=True, query=""):
        req = urllib.request.Request(
            self.url + path + query, method=method,
            data=None if body is None else json.dumps(body).encode(),
            headers={"Content-Type": "application/json"},
        )
        if auth:
            req.add_header("X-Session-Id", self.sid)
        try:
            with urllib.request.urlopen(req) as resp:
                return json.loads(resp.read().decode())
        except urllib.error.HTTPError as e:
            payload = e.read().decode()
            try:
                detail = json.loads(payload).get("detail", payload)
            except json.JSONDecodeError:
                detail = payload
            if isinstance(detail, dict):
                raise CliError(_format_error(detail)) from e
            raise CliError(f"server error {e.code}: {detail}") from e
        except urllib.error.URLError as e:
            raise CliError(f"cannot reach {self.url}: {e.reason}",
                           code=2) from e

    def execute(self, script, chronicle=None, ascii=False):
        return self._call(
            "POST", "/api/execute",
            {"script": script, "chronicle": chronicle},
            query="?ascii=1" if ascii else "",
        )

    def chronicles(self):
        return self._call("GET", "/api/chronicles")["chronicles"]

    def repair(self):
        return self._call("POST", "/api/repair")

    def close(self):
        pass


# ----------------------------------------------------------------- printing


def _format_error(detail):
    where = ""
    if detail.get("line") is not None:
        where = f" line {detail['line']}"
        if detail.get("column") is not None:
            where += f", column {detail['column']}"
    return f"error [{detail.get('error', '?')}]{where}: {detail.get('message', '')}"


def print_report(report, out=None):
    out = out if out is not None else sys.stdout
    for name, rendered in report.get("bindings", {}).items():
        print(f"{name} = {rendered}", file=out)
    print(f"final context: {report['final']}", file=out)
    print(f"created {len(report.get('created', []))} context(s)", file=out)
    published = report.get("published")
    if published:
        print(
            f"published {published['owner']}:{published['name']} "
            f"version {published['version']}",
            file=out,
        )
        repair = report.get("repair") or {}
        for item in repair.get("regenerated", []):
            print(f"regenerated {item['owner']}:{item['name']}", file=out)
        for item in repair.get("failed", []):
            print(f"regeneration failed {item['owner']}:{item['name']}: "
                  f"{item['error']}", file=out)


def print_chronicle_list(rows, out=None):
    out = out if out is not None else sys.stdout
    if not rows:
        print("no chronicles", file=out)
        return
    for c in rows:
        flag = " failed" if c.get("failed") else ""
        print(f"{c['owner']}:{c['name']} v{c['newest']} {c['status']}{flag}",
              file=out)


# -------------------------------------------------------------------- batch


def run_batch(client, files, publish=None, ascii=False, out=None):
    out = out if out is not None else sys.stdout
    for i, path in enumerate(files):
        try:
            with open(path, encoding="utf-8") as f:
                source = f.read()
        except OSError as e:
            raise CliError(f"cannot read {path}: {e}", code=2)
        chronicle = None
        if publish is not None and i == len(files) - 1:
            chronicle = publish[1]
        print(f"== {path}", file=out)
        try:
            report = client.execute(source, chronicle=chronicle, ascii=ascii)
        except (ScriptError, ParseError) as e:
            print(_format_error(script_error_payload(e)), file=out)
            raise CliError(f"{path} failed")
        print_report(report, out=out)
    return 0


# --------------------------------------------------------------------- repl


_HANGING_KWS = {"by", "then", "else", "do", "in", "case"}


def statement_complete(buffer):
    """A buffer is ready once it lexes, blocks and brackets balance, and the
    last token doesn't promise a continuation."""
    try:
        toks = lex_script(buffer)
    except ParseError as e:
        if "unterminated" in str(e):
            return False
        return True  # let execution surface the error
    depth = 0
    brackets = 0
    last = None
    for t in toks:
        if t.kind == "kw":
            if t.val in _OPENERS:
                depth += 1
            elif t.val == "end":
                depth -= 1
        elif t.kind == "op":
            if t.val in "([{":
                brackets += 1
            elif t.val in ")]}":
                brackets -= 1
        if t.kind not in ("newline", "end"):
            last = t
    if depth > 0 or brackets > 0:
        return False
    if last is not None:
        if last.kind == "kw" and last.val in _HANGING_KWS:
            return False
        if last.kind == "op" and last.val not in ")]}":
            return False
    return True


def repl(client, ascii=False, stdin=None, out=None):
    stdin = stdin if stdin is not None else sys.stdin
    out = out if out is not None else sys.stdout
    if isinstance(client, EmbeddedClient):
        return _repl_embedded(client, ascii, stdin, out)
    return _repl_remote(client, ascii, stdin, out)


def _read_block(stdin, out):
    buffer = ""
    prompt = PROMPT
    while True:
        print(prompt, end="", flush=True, file=out)
        line = stdin.readline()
        if not line:
            return None if not buffer.strip() else buffer
        buffer += line
        if buffer.strip() and statement_complete(buffer):
            return buffer
        prompt = CONTINUE


def _repl_embedded(client, ascii, stdin, out):
    from .interp import Interpreter

    engine = client.engine
    interp = Interpreter(engine.tree, engine.chronicles, client.login,
                         engine.root_ref)
    ctx = engine.root
    env = {}
    while True:
        buffer = _read_block(stdin, out)
        if buffer is None:
            print("", file=out)
            return 0
        stripped = buffer.strip()
        if stripped == ":quit":
            return 0
        if stripped == ":env":
            for name in sorted(env):
                print(f"{name} = {engine.render_value(env[name], ascii)}",
                      file=out)
            continue
        if stripped == ":context":
            doc = engine.context_document(ctx.ref.entity, ctx.ref.index,
                                          ascii=ascii)
            print(json.dumps(doc, indent=2, ensure_ascii=ascii), file=out)
            continue
        before_env = dict(env)
        before_ctx = ctx
        try:
            stmts = parse_script(buffer)
            new_ctx = interp.exec_statements(stmts, ctx, env)
        except (ScriptError, ParseError) as e:
            env.clear()
            env.update(before_env)
            ctx = before_ctx
            print(_format_error(script_error_payload(e)), file=out)
            continue
        except PeerHolError as e:
            env.clear()
            env.update(before_env)
            ctx = before_ctx
            print(f"error [{type(e).__name__}]: {e}", file=out)
            continue
        for name, value in env.items():
            if name not in before_env or before_env[name] is not value:
                print(f"{name} = {engine.render_value(value, ascii)}",
                      file=out)
        if new_ctx.ref != ctx.ref:
            print(f"context: {new_ctx.ref} ({new_ctx.kind})", file=out)
        ctx = new_ctx


def _repl_remote(client, ascii, stdin, out):
    """The server only runs whole scripts, so the remote REPL accumulates
    the session's source and replays it, showing what changed."""
    history = ""
    shown = {}
    last_final = None
    while True:
        buffer = _read_block(stdin, out)
        if buffer is None:
            print("", file=out)
            return 0
        stripped = buffer.strip()
        if stripped == ":quit":
            return 0
        if stripped == ":env":
            for name in sorted(shown):
                print(f"{name} = {shown[name]}", file=out)
            continue
        if stripped == ":context":
            print(last_final or "(root)", file=out)
            continue
        candidate = history + buffer
        try:
            report = client.execute(candidate, ascii=ascii)
        except CliError as e:
            print(str(e), file=out)
            continue
        history = candidate
        for name, rendered in report.get("bindings", {}).items():
            if shown.get(name) != rendered:
                print(f"{name} = {rendered}", file=out)
        bindings = report.get("bindings", {})
        shown = dict(bindings)
        if report["final"] != last_final:
            print(f"context: {report['final']}", file=out)
            last_final = report["final"]


# --------------------------------------------------------------------- main


def _parse_publish(raw):
    owner, sep, name = raw.partition(":")
    if not sep or not owner or not name:
        raise CliError("--publish wants OWNER:NAME", code=2)
    return owner, name


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="peerhol",
        description="Run proof scripts against an embedded or remote prover.",
    )
    parser.add_argument("files", nargs="*", help="proof scripts to run")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--server", help="remote server URL")
    mode.add_argument("--store", help="embedded store file")
    parser.add_argument("--ascii", action="store_true",
                        help="ascii-only output")
    parser.add_argument("--publish", metavar="OWNER:NAME",
                        help="publish the (last) script as a chronicle version")
    parser.add_argument("--repair", action="store_true",
                        help="regenerate out-of-date chronicles")
    parser.add_argument("--list", action="store_true", dest="list_chronicles",
                        help="list chronicles with status")
    args = parser.parse_args(argv)

    try:
        cfg = load_config()
        publish = _parse_publish(args.publish) if args.publish else None
        if args.server:
            login = os.environ.get("PEERHOL_LOGIN") or cfg.get("login")
            password = os.environ.get("PEERHOL_PASSWORD") or cfg.get("password")
            if publish is not None and login and publish[0] != login:
                raise CliError("--publish owner must match the remote login",
                               code=2)
            client = RemoteClient(args.server, login, password)
        else:
            store = args.store or cfg.get("store")
            client = EmbeddedClient(store,
                                    login=publish[0] if publish else "local")
        try:
            did_admin = False
            if args.repair:
                report = client.repair()
                print(f"checked {report['checked']}, "
                      f"regenerated {len(report['regenerated'])}, "
                      f"failed {len(report['failed'])}")
                for item in report["failed"]:
                    print(f"  {item['owner']}:{item['name']}: {item['error']}")
                did_admin = True
            if args.list_chronicles:
                print_chronicle_list(client.chronicles())
                did_admin = True
            if args.files:
                run_batch(client, args.files, publish=publish,
                          ascii=args.ascii)
            elif not did_admin:
                return repl(client, ascii=args.ascii)
            return 0
        finally:
            client.close()
    except CliError as e:
        print(str(e), file=sys.stderr)
        return e.code
    except PeerHolError as e:
        print(f"error [{type(e).__name__}]: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
