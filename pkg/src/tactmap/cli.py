"""Command line entry points: serve, replay, validate, export-fixture."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .map_model import (
    MapProfileError,
    Severity,
    fixture_city_map,
    parse_map,
    serialize_map,
    validate_map,
)
from .service import ServiceConfig, map_registry, run_forever
from .session import EngineConfig, SessionLog, render_transcript, replay_log


def _engine_config(path: str | None) -> EngineConfig:
    if path is None:
        return EngineConfig()
    return EngineConfig.from_json(Path(path).read_text(encoding="utf-8"))


def _cmd_serve(args: argparse.Namespace) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    config = ServiceConfig(
        host=args.host,
        port=args.port,
        maps=map_registry(args.map or []),
        engine=_engine_config(args.config),
        record_dir=Path(args.record) if args.record else None,
    )
    run_forever(config)
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    log = SessionLog.from_jsonl(Path(args.log).read_text(encoding="utf-8"))
    transcript = replay_log(log, maps=map_registry(args.map or []), config=_engine_config(args.config))
    Path(args.out).write_text(transcript, encoding="utf-8")
    if args.check:
        recorded = render_transcript(log.out_messages())
        if transcript != recorded:
            print("MISMATCH: replay transcript differs from recorded output", file=sys.stderr)
            return 1
        print("replay matches recorded output")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        doc = parse_map(Path(args.map).read_text(encoding="utf-8"))
    except MapProfileError as exc:
        print(f"unloadable ({exc.code}): {exc}", file=sys.stderr)
        return 2
    issues = validate_map(doc, _engine_config(args.config).validation)
    for issue in issues:
        where = issue.element_id or "-"
        print(f"{issue.severity.value}\t{issue.code}\t{where}\t{issue.message}")
    if any(i.severity == Severity.ERROR for i in issues):
        return 1
    if not issues:
        print(f"OK: {len(doc.elements)} elements, no issues")
    return 0


def _cmd_export_fixture(args: argparse.Namespace) -> int:
    Path(args.out).write_text(serialize_map(fixture_city_map()), encoding="utf-8")
    print(f"fixture map written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tactmap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve_p = sub.add_parser("serve", help="run the WebSocket session service")
    serve_p.add_argument("--map", action="append", help="SVG map file; first becomes 'default'")
    serve_p.add_argument("--port", type=int, default=8765)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--config", help="engine config JSON file")
    serve_p.add_argument("--record", help="directory for session logs")
    serve_p.set_defaults(func=_cmd_serve)

    replay_p = sub.add_parser("replay", help="re-run a recorded session log")
    replay_p.add_argument("--log", required=True)
    replay_p.add_argument("--out", required=True)
    replay_p.add_argument("--map", action="append", help="extra map files for map_id lookups")
    replay_p.add_argument("--config", help="engine config JSON file")
    replay_p.add_argument("--check", action="store_true", help="compare against recorded output")
    replay_p.set_defaults(func=_cmd_replay)

    validate_p = sub.add_parser("validate", help="check a map file against the profile and rules")
    validate_p.add_argument("--map", required=True)
    validate_p.add_argument("--config", help="engine config JSON file")
    validate_p.set_defaults(func=_cmd_validate)

    export_p = sub.add_parser("export-fixture", help="write the built-in fixture map as SVG")
    export_p.add_argument("--out", required=True)
    export_p.set_defaults(func=_cmd_export_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
