"""WebSocket wrapper around StreamingSession plus a health endpoint."""

from __future__ import annotations

import itertools

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse

from .exceptions import ProtocolError
from .online.network import ModelParams
from .session import StreamingSession


def create_app(
    params: ModelParams,
    sampling: str = "argmax",
    temperature: float = 1.0,
    seed: int = 0,
) -> FastAPI:
    """App with GET /healthz and the /v1/session WebSocket endpoint.

    Model parameters are shared read-only across sessions; each connection
    gets its own StreamingSession, so interleaved sessions stay isolated.
    """
    app = FastAPI(title="dancenotes")
    ids = itertools.count()

    @app.get("/healthz")
    def healthz():
        return PlainTextResponse("ok")

    @app.websocket("/v1/session")
    async def session_endpoint(ws: WebSocket):
        await ws.accept()
        session = StreamingSession(
            params,
            sampling=sampling,
            temperature=temperature,
            seed=seed,
            session_id=f"s{next(ids)}",
        )
        while True:
            try:
                msg = await ws.receive_json()
            except WebSocketDisconnect:
                return
            except Exception:
                await ws.send_json({"type": "error", "message": "expected a JSON text frame"})
                await ws.close()
                return
            try:
                replies = session.handle(msg)
            except ProtocolError as exc:
                await ws.send_json({"type": "error", "message": str(exc)})
                await ws.close()
                return
            for reply in replies:
                await ws.send_json(reply)
            if session.ended:
                await ws.close()
                return

    return app
