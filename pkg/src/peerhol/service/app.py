"""HTTP surface over the engine.

Every mutation of logical state flows through script execution; no route
accepts a theorem, context component, or chronicle version as input, which
is what makes the consistency guarantee structural rather than checked.
Terms travel as printed text only.
"""

import argparse
import json
import logging
import os
from pathlib import Path
from typing import Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..engine import Engine
from ..errors import (
    AuthFailure,
    ParseError,
    PeerHolError,
    ScriptError,
    UnknownChronicle,
    UnknownContext,
)
from ..store import FileBackend

log = logging.getLogger("peerhol.service")

DEFAULT_PORT = 8350


class LoginBody(BaseModel):
    login: str
    password: str


class UserBody(BaseModel):
    login: str
    password: str


class ExecuteBody(BaseModel):
    script: str
    chronicle: Optional[str] = None
    assignment: Optional[dict] = None


def _parse_assignment(raw):
    if not raw:
        return None
    out = {}
    for key, vid in raw.items():
        owner, _, name = key.partition(":")
        if not owner or not name:
            raise HTTPException(422, detail={
                "error": "BadAssignment",
                "message": f"assignment keys look like owner:name, got {key!r}",
            })
        out[(owner, name)] = int(vid)
    return out


def script_error_payload(e):
    return {
        "error": getattr(e, "error_class", type(e).__name__),
        "message": getattr(e, "message", str(e)),
        "line": getattr(e, "line", None),
        "column": getattr(e, "column", None),
    }


def create_app(engine, frontend=None):
    app = FastAPI(title="peerhol", docs_url=None, redoc_url=None)
    app.state.engine = engine

    def require_login(x_session_id: Optional[str] = Header(default=None)):
        try:
            return engine.authenticate(x_session_id)
        except AuthFailure as e:
            raise HTTPException(401, detail=str(e))

    @app.middleware("http")
    async def request_log(request, call_next):
        response = await call_next(request)
        log.info("%s %s -> %s", request.method,
                 request.url.path, response.status_code)
        return response

    @app.post("/api/login")
    def login(body: LoginBody):
        try:
            sid = engine.login(body.login, body.password)
        except AuthFailure as e:
            raise HTTPException(401, detail=str(e))
        return {"sessionId": sid}

    @app.post("/api/logout")
    def logout(x_session_id: Optional[str] = Header(default=None)):
        engine.logout(x_session_id or "")
        return {"ok": True}

    @app.post("/api/user")
    def register(body: UserBody):
        try:
            engine.create_user(body.login, body.password)
        except ValueError as e:
            raise HTTPException(409, detail=str(e))
        return {"login": body.login}

    @app.post("/api/execute")
    def execute(body: ExecuteBody, login: str = Depends(require_login),
                ascii: int = Query(default=0)):
        try:
            return engine.execute(
                login, body.script,
                chronicle=body.chronicle,
                assignment=_parse_assignment(body.assignment),
                ascii=bool(ascii),
            )
        except (ScriptError, ParseError) as e:
            raise HTTPException(422, detail=script_error_payload(e))
        except PeerHolError as e:
            raise HTTPException(422, detail={
                "error": type(e).__name__, "message": str(e),
                "line": None, "column": None,
            })

    @app.get("/api/context/{key}/{index}")
    def get_context(key: str, index: int, login: str = Depends(require_login),
                    ascii: int = Query(default=0)):
        try:
            return engine.context_document(key, index, ascii=bool(ascii))
        except UnknownContext as e:
            raise HTTPException(404, detail=str(e))

    @app.get("/api/chronicles")
    def chronicles(login: str = Depends(require_login)):
        return {"chronicles": engine.chronicle_list()}

    @app.get("/api/chronicle/{owner}/{name}")
    def chronicle(owner: str, name: str, login: str = Depends(require_login)):
        try:
            return engine.chronicle_document(owner, name)
        except UnknownChronicle as e:
            raise HTTPException(404, detail=str(e))

    @app.get("/api/chronicle/{owner}/{name}/{version}")
    def chronicle_version(owner: str, name: str, version: int,
                          login: str = Depends(require_login)):
        try:
            return engine.chronicle_document(owner, name, version=version)
        except UnknownChronicle as e:
            raise HTTPException(404, detail=str(e))

    @app.post("/api/repair")
    def repair(login: str = Depends(require_login)):
        return engine.repair()

    if frontend and Path(frontend).is_dir():
        app.mount("/", StaticFiles(directory=frontend, html=True),
                  name="frontend")

    return app


# ----------------------------------------------------------- configuration


def load_config(path=None):
    """Config file plus PEERHOL_* environment overrides."""
    cfg = {
        "port": DEFAULT_PORT,
        "host": "127.0.0.1",
        "store": None,
        "bootstrap": None,
        "frontend": None,
    }
    path = path or os.environ.get("PEERHOL_CONFIG")
    if path:
        with open(path, encoding="utf-8") as f:
            cfg.update(json.load(f))
    env_map = {
        "PEERHOL_PORT": ("port", int),
        "PEERHOL_HOST": ("host", str),
        "PEERHOL_STORE": ("store", str),
        "PEERHOL_BOOTSTRAP": ("bootstrap", str),
        "PEERHOL_FRONTEND": ("frontend", str),
    }
    for var, (key, conv) in env_map.items():
        if os.environ.get(var):
            cfg[key] = conv(os.environ[var])
    return cfg


def build_engine(cfg):
    backend = FileBackend(cfg["store"]) if cfg.get("store") else None
    bootstrap = None
    if cfg.get("bootstrap"):
        bootstrap = Path(cfg["bootstrap"]).read_text(encoding="utf-8")
    return Engine(backend=backend, bootstrap=bootstrap)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="peerhol-server")
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--port", type=int)
    parser.add_argument("--host")
    parser.add_argument("--store", help="store file; in-memory when omitted")
    parser.add_argument("--bootstrap", help="root theory script")
    parser.add_argument("--frontend", help="static assets directory")
    args = parser.parse_args(argv)

    cfg = load_config(args.config)
    for key in ("port", "host", "store", "bootstrap", "frontend"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    engine = build_engine(cfg)
    app = create_app(engine, frontend=cfg.get("frontend"))

    import uvicorn

    uvicorn.run(app, host=cfg["host"], port=cfg["port"], log_level="warning")


if __name__ == "__main__":
    main()
