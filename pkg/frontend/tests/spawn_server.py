"""Start a throwaway server on a free port for the browser-client tests.

Prints PORT=<n> once the socket is bound, then serves until killed.  State
lives in a temp directory, so each run starts from a fresh bootstrap.
"""

import sys
import tempfile
from pathlib import Path

import uvicorn

from peerhol.engine import Engine
from peerhol.service.app import create_app


def main():
    frontend = sys.argv[1] if len(sys.argv) > 1 else None
    tmp = tempfile.mkdtemp(prefix="peerhol-e2e-")
    engine = Engine.open(Path(tmp) / "store.phs")
    app = create_app(engine, frontend=frontend)

    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)

    # report the bound port before blocking in serve()
    import asyncio

    async def run():
        task = asyncio.create_task(server.serve())
        while not server.started:
            await asyncio.sleep(0.01)
        port = server.servers[0].sockets[0].getsockname()[1]
        print(f"PORT={port}", flush=True)
        await task

    asyncio.run(run())


if __name__ == "__main__":
    main()
