"""Transports: newline-delimited JSON-RPC over stdio, and WebSocket via ASGI."""

# note: no postponed annotations here; FastAPI resolves the WebSocket
# parameter annotation eagerly from the enclosing scope

import logging
import sys
from pathlib import Path
from typing import IO

from .service import Engine

log = logging.getLogger("jsonlens.server")


def serve_stdio(engine: Engine, stdin: IO[str] | None = None, stdout: IO[str] | None = None) -> int:
    """Read one JSON-RPC request per line, write one response per line."""
    reader = stdin if stdin is not None else sys.stdin
    writer = stdout if stdout is not None else sys.stdout
    for line in reader:
        line = line.strip()
        if not line:
            continue
        response = engine.handle_line(line)
        if response is not None:
            writer.write(response + "\n")
            writer.flush()
    return 0


def build_app(engine: Engine, ui_dir: str | Path | None = None):
    """FastAPI app exposing the protocol at /rpc plus optional static UI."""
    from fastapi import FastAPI, WebSocket, WebSocketDisconnect
    from fastapi.responses import FileResponse

    app = FastAPI(title="jsonlens", docs_url=None, redoc_url=None)

    @app.websocket("/rpc")
    async def rpc(socket: WebSocket) -> None:
        await socket.accept()
        try:
            while True:
                line = await socket.receive_text()
                response = engine.handle_line(line)
                if response is not None:
                    await socket.send_text(response)
        except WebSocketDisconnect:
            log.debug("client disconnected")

    if ui_dir is not None:
        root = Path(ui_dir)
        from fastapi.staticfiles import StaticFiles

        @app.get("/")
        async def index() -> FileResponse:
            return FileResponse(root / "index.html")

        app.mount("/", StaticFiles(directory=root), name="ui")

    return app


def serve_websocket(engine: Engine, port: int, ui_dir: str | Path | None = None) -> int:
    import uvicorn

    app = build_app(engine, ui_dir)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
    return 0
