"""WebSocket transport: one JSON text frame per message, one session per connection.

Sessions are fully independent; shared map documents are immutable so
serving many clients concurrently needs no locking. With a record
directory configured, every session's log is written as JSON Lines when
the connection closes.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from websockets.asyncio.server import Server, serve as ws_serve

from .map_model import MapDocument, parse_map
from .session import EngineConfig, Session, canonical_json

logger = logging.getLogger(__name__)

DEFAULT_MAP_ALIAS = "default"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    maps: dict[str, MapDocument] = field(default_factory=dict)
    engine: EngineConfig = field(default_factory=EngineConfig)
    record_dir: Path | None = None


def load_map_file(path: str | Path) -> MapDocument:
    return parse_map(Path(path).read_text(encoding="utf-8"))


def map_registry(paths: list[str | Path]) -> dict[str, MapDocument]:
    """Maps keyed by file stem; the first one is also aliased as "default"."""
    registry: dict[str, MapDocument] = {}
    for path in paths:
        doc = load_map_file(path)
        registry[Path(path).stem] = doc
        registry.setdefault(DEFAULT_MAP_ALIAS, doc)
    return registry


class MapService:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self._session_ids = itertools.count(1)
        if config.record_dir is not None:
            config.record_dir.mkdir(parents=True, exist_ok=True)

    async def handle_connection(self, ws) -> None:
        session = Session(maps=self.config.maps, config=self.config.engine)
        session_id = next(self._session_ids)
        logger.info("session %d opened from %s", session_id, ws.remote_address)
        try:
            async for frame in ws:
                for out in self._handle_frame(session, frame):
                    await ws.send(canonical_json(out))
        finally:
            self._write_record(session, session_id)
            logger.info("session %d closed", session_id)

    def _handle_frame(self, session: Session, frame: str | bytes) -> list[dict]:
        try:
            message = json.loads(frame)
        except (json.JSONDecodeError, UnicodeDecodeError):
            return [{"type": "error", "code": "bad-frame", "message": "frame is not valid JSON"}]
        try:
            return session.handle_client_message(message)
        except Exception:
            logger.exception("engine failure; session continues")
            return [{"type": "error", "code": "internal", "message": "internal engine error"}]

    def _write_record(self, session: Session, session_id: int) -> None:
        if self.config.record_dir is None or not session.log.records:
            return
        path = self.config.record_dir / f"session-{session_id:04d}.jsonl"
        path.write_text(session.log.to_jsonl(), encoding="utf-8")
        logger.info("session %d log written to %s", session_id, path)


async def serve(config: ServiceConfig) -> Server:
    """Start accepting connections; caller owns the returned server's lifetime."""
    service = MapService(config)
    server = await ws_serve(service.handle_connection, config.host, config.port)
    return server


def bound_port(server: Server) -> int:
    return server.sockets[0].getsockname()[1]  # type: ignore[index]


def run_forever(config: ServiceConfig) -> None:
    """Blocking entry point used by the CLI."""

    async def _main() -> None:
        server = await serve(config)
        logger.info("listening on ws://%s:%d", config.host, bound_port(server))
        await server.wait_closed()

    asyncio.run(_main())
