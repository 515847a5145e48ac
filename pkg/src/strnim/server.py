"""JSON-over-HTTP service exposing the engine to the browser UI.

Stateless by design: every request carries the position text, so the
only shared state is the transposition table, whose entries are
write-once per key and therefore safe under the threading server.
"""

from __future__ import annotations

import json
import mimetypes
import signal
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .position import Move, ParseError, Position, apply_move, legal_moves, parse, render
from .solver import (
    BudgetExhaustedError,
    DEFAULT_NODE_BUDGET,
    TranspositionTable,
    classify,
    grundy,
    winning_moves,
)


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _move_json(mv: Move) -> dict:
    return {"run": mv.run_index, "count": mv.count}


def _parse_move(payload) -> Move:
    if (
        not isinstance(payload, dict)
        or not isinstance(payload.get("run"), int)
        or not isinstance(payload.get("count"), int)
    ):
        raise ApiError(400, "move must be an object with integer 'run' and 'count'")
    try:
        return Move(payload["run"], payload["count"])
    except ValueError as exc:
        raise ApiError(422, str(exc)) from None


class GameService:
    """Solve helpers shared by all request threads."""

    def __init__(self, table: TranspositionTable | None = None, budget: int = DEFAULT_NODE_BUDGET):
        self.table = table if table is not None else TranspositionTable()
        self.budget = budget

    def _position(self, text) -> Position:
        if not isinstance(text, str):
            raise ApiError(400, "missing or non-string 'position'")
        try:
            return parse(text)
        except ParseError as exc:
            raise ApiError(400, f"bad position: {exc}") from None

    def classify_payload(self, text: str) -> dict:
        pos = self._position(text)
        value = grundy(pos, self.table, budget=self.budget)
        return {
            "verdict": "P" if value == 0 else "N",
            "grundy": value,
            "winning_moves": [
                _move_json(mv)
                for mv in winning_moves(pos, self.table, budget=self.budget)
            ],
        }

    def grundy_payload(self, text: str) -> dict:
        pos = self._position(text)
        return {"grundy": grundy(pos, self.table, budget=self.budget)}

    def successors_payload(self, text: str) -> dict:
        pos = self._position(text)
        seen = {}
        for mv in legal_moves(pos):
            result = apply_move(pos, mv)
            seen.setdefault(render(result), _move_json(mv))
        ordered = sorted(seen, key=lambda w: (len(w), w))
        return {"successors": [{"position": w, "move": seen[w]} for w in ordered]}

    def move_payload(self, text: str, move_payload) -> dict:
        pos = self._position(text)
        mv = _parse_move(move_payload)
        try:
            result = apply_move(pos, mv)
        except ValueError as exc:
            raise ApiError(422, str(exc)) from None
        value = grundy(result, self.table, budget=self.budget)
        return {
            "position": render(result),
            "verdict": "P" if value == 0 else "N",
            "grundy": value,
        }

    def engine_move_payload(self, text: str) -> dict:
        pos = self._position(text)
        if not pos:
            raise ApiError(422, "no legal moves: the game is over")
        verdict = classify(pos, self.table, budget=self.budget)
        mv = verdict.certificate if verdict.kind == "N" else legal_moves(pos)[0]
        result = apply_move(pos, mv)
        return {
            "move": _move_json(mv),
            "position": render(result),
            "verdict": classify(result, self.table, budget=self.budget).kind,
        }


class _Handler(BaseHTTPRequestHandler):
    server_version = "strnim"
    protocol_version = "HTTP/1.1"

    # Attached by make_server:
    service: GameService
    static_dir: Path | None = None
    quiet = True

    def log_message(self, fmt, *args):
        if not self.quiet:
            super().log_message(fmt, *args)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            payload = json.loads(raw or b"null")
        except json.JSONDecodeError as exc:
            raise ApiError(400, f"invalid JSON body: {exc}") from None
        if not isinstance(payload, dict):
            raise ApiError(400, "request body must be a JSON object")
        return payload

    def _api(self, fn) -> None:
        try:
            self._send_json(200, fn())
        except ApiError as exc:
            self._send_json(exc.status, {"error": exc.message})
        except BudgetExhaustedError as exc:
            self._send_json(422, {"error": str(exc)})

    def do_POST(self) -> None:  # noqa: N802 (http.server API)
        path = urlparse(self.path).path
        routes = {
            "/api/classify": lambda body: self.service.classify_payload(body.get("position")),
            "/api/grundy": lambda body: self.service.grundy_payload(body.get("position")),
            "/api/move": lambda body: self.service.move_payload(
                body.get("position"), body.get("move")
            ),
            "/api/engine-move": lambda body: self.service.engine_move_payload(
                body.get("position")
            ),
        }
        if path not in routes:
            self._send_json(404, {"error": f"unknown endpoint: {path}"})
            return
        self._api(lambda: routes[path](self._read_json()))

    def do_GET(self) -> None:  # noqa: N802
        url = urlparse(self.path)
        if url.path in ("/api/successors", "/api/grundy", "/api/classify"):
            query = parse_qs(url.query, keep_blank_values=True)
            values = query.get("position")
            text = values[0] if values else None
            handlers = {
                "/api/successors": self.service.successors_payload,
                "/api/grundy": self.service.grundy_payload,
                "/api/classify": self.service.classify_payload,
            }
            self._api(lambda: handlers[url.path](text))
            return
        if url.path.startswith("/api/"):
            self._send_json(404, {"error": f"unknown endpoint: {url.path}"})
            return
        self._serve_static(url.path)

    def _serve_static(self, path: str) -> None:
        if self.static_dir is None:
            self._send_json(404, {"error": "no static directory configured"})
            return
        relative = path.lstrip("/") or "index.html"
        target = (self.static_dir / relative).resolve()
        root = self.static_dir.resolve()
        if root not in target.parents and target != root:
            self._send_json(404, {"error": "not found"})
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        body = target.read_bytes()
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    port: int = 0,
    static_dir: str | None = None,
    table: TranspositionTable | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
    quiet: bool = True,
) -> ThreadingHTTPServer:
    """Build (but do not start) the threading HTTP server; port 0 picks a
    free port, readable afterwards as server.server_address[1]."""
    service = GameService(table, budget)

    class Handler(_Handler):
        pass

    Handler.service = service
    Handler.static_dir = Path(static_dir) if static_dir else None
    Handler.quiet = quiet
    server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
    server.daemon_threads = True
    return server


def serve(
    port: int,
    static_dir: str | None = None,
    table: TranspositionTable | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
    quiet: bool = False,
) -> None:
    """Run the service until interrupted (SIGINT/SIGTERM shut down cleanly)."""
    server = make_server(port, static_dir, table, budget, quiet)
    # shutdown() blocks until serve_forever returns, so hand it to a thread
    signal.signal(
        signal.SIGTERM,
        lambda *_: threading.Thread(target=server.shutdown, daemon=True).start(),
    )
    host, bound_port = server.server_address[:2]
    print(f"strnim service listening on http://{host}:{bound_port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
