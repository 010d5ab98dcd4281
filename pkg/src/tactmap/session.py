"""Session engine: wire messages in, wire messages out, append-only log.

Client time is authoritative: every touch carries its own t_ms and the
engine never reads a wall clock, which is what makes recorded sessions
replayable byte for byte. A message that is rejected (bad frame, out of
order, no map loaded, ...) is answered with an error but written to the
log on neither side; the log holds exactly the accepted traffic, so its
invariants (monotone time, load_map first) hold by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from typing import Any, Iterable

from .controller import Announcement, Controller, Earcon, Speak
from .gestures import (
    DuplicateTouchDown,
    GestureConfig,
    OutOfOrderTimestamp,
    Recognizer,
    TooManyContacts,
    TouchPhase,
    TouchSample,
    UnknownTouchId,
)
from .map_model import (
    MapDocument,
    MapProfileError,
    ValidationRules,
    fixture_city_map,
    parse_map,
)
from .spatial import build_index
from .speech import SpeechQueue, drain

FIXTURE_MAP_ID = "fixture"

_PHASES = {p.value: p for p in TouchPhase}


class MalformedLog(Exception):
    pass


@dataclass(frozen=True)
class EngineConfig:
    """Tunable engine knobs; loadable from a flat JSON object."""

    gesture: GestureConfig = GestureConfig()
    hit_tolerance_mm: float = 5.0
    distance_pair_timeout_ms: int = 5000
    index_cell_mm: float = 10.0
    validation: ValidationRules = ValidationRules()

    @classmethod
    def from_dict(cls, raw: dict) -> "EngineConfig":
        gesture_keys = {f.name for f in fields(GestureConfig)}
        validation_keys = {f.name for f in fields(ValidationRules)}
        gesture: dict[str, Any] = {}
        validation: dict[str, Any] = {}
        top: dict[str, Any] = {}
        for key, value in raw.items():
            if key in gesture_keys:
                gesture[key] = value
            elif key in validation_keys:
                validation[key] = value
            elif key in ("hit_tolerance_mm", "distance_pair_timeout_ms", "index_cell_mm"):
                top[key] = value
            else:
                raise ValueError(f"unknown config key {key!r}")
        return cls(gesture=GestureConfig(**gesture), validation=ValidationRules(**validation), **top)

    @classmethod
    def from_json(cls, text: str) -> "EngineConfig":
        raw = json.loads(text)
        if not isinstance(raw, dict):
            raise ValueError("config JSON must be an object")
        return cls.from_dict(raw)


@dataclass(frozen=True)
class LogRecord:
    dir: str  # "in" | "out"
    t_ms: int
    msg: dict
    cause_seq: int | None = None

    def to_dict(self) -> dict:
        out: dict = {"dir": self.dir, "t_ms": self.t_ms, "msg": self.msg}
        if self.cause_seq is not None:
            out["cause_seq"] = self.cause_seq
        return out


class SessionLog:
    """Append-only JSON Lines record of one session's accepted traffic."""

    def __init__(self, records: Iterable[LogRecord] = ()):
        self.records: list[LogRecord] = list(records)

    def append_in(self, t_ms: int, msg: dict) -> int:
        """Append an in-record; returns its index for causal tagging."""
        self.records.append(LogRecord("in", t_ms, msg))
        return len(self.records) - 1

    def append_out(self, t_ms: int, msg: dict, cause_seq: int) -> None:
        self.records.append(LogRecord("out", t_ms, msg, cause_seq))

    def in_messages(self) -> list[dict]:
        return [r.msg for r in self.records if r.dir == "in"]

    def out_messages(self) -> list[dict]:
        return [r.msg for r in self.records if r.dir == "out"]

    def to_jsonl(self) -> str:
        return "".join(canonical_json(r.to_dict()) + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str) -> "SessionLog":
        records = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedLog(f"line {lineno}: not JSON: {exc}") from None
            if not isinstance(raw, dict):
                raise MalformedLog(f"line {lineno}: record must be an object")
            try:
                direction = raw["dir"]
                t_ms = raw["t_ms"]
                msg = raw["msg"]
            except KeyError as exc:
                raise MalformedLog(f"line {lineno}: missing {exc}") from None
            if direction not in ("in", "out"):
                raise MalformedLog(f"line {lineno}: bad dir {direction!r}")
            if not isinstance(t_ms, int) or isinstance(t_ms, bool):
                raise MalformedLog(f"line {lineno}: t_ms must be an integer")
            if not isinstance(msg, dict):
                raise MalformedLog(f"line {lineno}: msg must be an object")
            records.append(LogRecord(direction, t_ms, msg, raw.get("cause_seq")))
        log = cls(records)
        log.check()
        return log

    def check(self) -> None:
        """Raise MalformedLog unless structural invariants hold."""
        if not self.records:
            raise MalformedLog("log is empty")
        first = self.records[0]
        if first.dir != "in" or first.msg.get("type") != "load_map":
            raise MalformedLog("first record must be an inbound load_map")
        prev = None
        for i, record in enumerate(self.records):
            if prev is not None and record.t_ms < prev:
                raise MalformedLog(f"record {i}: t_ms decreases ({record.t_ms} < {prev})")
            prev = record.t_ms
            if record.dir == "out" and not isinstance(record.cause_seq, int):
                raise MalformedLog(f"record {i}: out-record lacks cause_seq")


def canonical_json(obj: dict) -> str:
    """The one JSON rendering used on the wire, in logs, and in transcripts."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def render_transcript(messages: Iterable[dict]) -> str:
    """Server messages as transcript text, one canonical JSON line each."""
    return "".join(canonical_json(m) + "\n" for m in messages)


class _Reject(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def _require_int(msg: dict, key: str, minimum: int | None = None) -> int:
    value = msg.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise _Reject("bad-frame", f"{key} must be an integer")
    if minimum is not None and value < minimum:
        raise _Reject("bad-frame", f"{key} must be >= {minimum}")
    return value


def _require_number(msg: dict, key: str) -> float:
    value = msg.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _Reject("bad-frame", f"{key} must be a number")
    value = float(value)
    if value != value or value in (float("inf"), float("-inf")):
        raise _Reject("bad-frame", f"{key} must be finite")
    return value


class Session:
    """One client's engine instance. Single-owner; messages arrive in order."""

    def __init__(
        self,
        maps: dict[str, MapDocument] | None = None,
        config: EngineConfig | None = None,
    ):
        self.config = config or EngineConfig()
        self.maps = {FIXTURE_MAP_ID: fixture_city_map()}
        if maps:
            self.maps.update(maps)
        self.log = SessionLog()
        self.ended = False
        self._clock = 0
        self._doc: MapDocument | None = None
        self._recognizer: Recognizer | None = None
        self._controller: Controller | None = None
        self._queue: SpeechQueue | None = None
        self._emissions: list[dict] = []

    @property
    def map_loaded(self) -> bool:
        return self._doc is not None

    def handle_client_message(self, message: object) -> list[dict]:
        """Process one decoded client message; returns server messages.

        Rejected messages yield a single error message and leave both the
        engine state and the log untouched.
        """
        try:
            msg_type, payload = self._validate(message)
        except _Reject as rej:
            return [_error(rej.code, rej.message)]

        record_t = payload["t_ms"] if msg_type == "touch" else self._clock
        cause = self.log.append_in(record_t, dict(message))  # type: ignore[arg-type]
        outs = self._apply(msg_type, payload)
        for out in outs:
            self.log.append_out(record_t, out, cause)
        return outs

    # -- validation -------------------------------------------------------

    def _validate(self, message: object) -> tuple[str, dict]:
        if not isinstance(message, dict):
            raise _Reject("bad-frame", "message must be a JSON object")
        msg_type = message.get("type")
        if msg_type not in ("load_map", "touch", "select_level", "end_session"):
            raise _Reject("bad-frame", f"unknown message type {msg_type!r}")
        if self.ended:
            raise _Reject("session-ended", "session already ended")
        if msg_type == "load_map":
            return msg_type, self._validate_load(message)
        if msg_type == "touch":
            return msg_type, self._validate_touch(message)
        if msg_type == "select_level":
            level = _require_int(message, "level", minimum=0)
            if not self.map_loaded:
                raise _Reject("no-map", "select_level before load_map")
            return msg_type, {"level": level}
        return msg_type, {}

    def _validate_load(self, message: dict) -> dict:
        has_id = "map_id" in message
        has_svg = "svg" in message
        if has_id == has_svg:
            raise _Reject("bad-frame", "load_map needs exactly one of map_id or svg")
        if has_id:
            map_id = message["map_id"]
            if not isinstance(map_id, str):
                raise _Reject("bad-frame", "map_id must be a string")
            doc = self.maps.get(map_id)
            if doc is None:
                raise _Reject("unknown-map", f"no map registered as {map_id!r}")
            return {"doc": doc}
        svg = message["svg"]
        if not isinstance(svg, str):
            raise _Reject("bad-frame", "svg must be a string")
        try:
            return {"doc": parse_map(svg)}
        except MapProfileError as exc:
            raise _Reject("map-parse", f"{exc.code}: {exc}") from None

    def _validate_touch(self, message: dict) -> dict:
        phase_raw = message.get("phase")
        phase = _PHASES.get(phase_raw) if isinstance(phase_raw, str) else None
        if phase is None:
            raise _Reject("bad-frame", f"phase must be one of down/move/up, got {phase_raw!r}")
        touch_id = _require_int(message, "touch_id", minimum=0)
        x = _require_number(message, "x")
        y = _require_number(message, "y")
        t_ms = _require_int(message, "t_ms", minimum=0)
        if not self.map_loaded:
            raise _Reject("no-map", "touch before load_map")
        if t_ms < self._clock:
            raise _Reject("out-of-order", f"t_ms {t_ms} is before session clock {self._clock}")
        assert self._doc is not None
        x = min(max(x, 0.0), self._doc.canvas_width_mm)
        y = min(max(y, 0.0), self._doc.canvas_height_mm)
        sample = TouchSample(phase, touch_id, x, y, t_ms)
        self._precheck_sample(sample)
        return {"sample": sample, "t_ms": t_ms}

    def _precheck_sample(self, sample: TouchSample) -> None:
        """Reject samples the recognizer would refuse, before anything mutates."""
        assert self._recognizer is not None
        rec = self._recognizer
        if sample.phase == TouchPhase.DOWN:
            if rec.has_contact(sample.touch_id):
                raise _Reject("duplicate-touch", f"touch {sample.touch_id} is already down")
            if rec.live_contacts >= rec.max_contacts:
                raise _Reject("too-many-contacts", f"more than {rec.max_contacts} contacts")
        elif not rec.has_contact(sample.touch_id):
            raise _Reject("unknown-touch", f"{sample.phase.value} without a down")

    # -- application ------------------------------------------------------

    def _apply(self, msg_type: str, payload: dict) -> list[dict]:
        if msg_type == "load_map":
            return self._apply_load(payload["doc"])
        if msg_type == "touch":
            return self._apply_touch(payload["sample"])
        if msg_type == "select_level":
            return self._apply_select_level(payload["level"])
        self.ended = True
        return []

    def _apply_load(self, doc: MapDocument) -> list[dict]:
        self._doc = doc
        index = build_index(doc, self.config.index_cell_mm)
        self._recognizer = Recognizer(self.config.gesture)
        self._controller = Controller(
            doc,
            index,
            hit_tolerance_mm=self.config.hit_tolerance_mm,
            distance_pair_timeout_ms=self.config.distance_pair_timeout_ms,
        )
        self._queue = SpeechQueue(on_emit=self._collect_emission)
        return [{"type": "map_loaded", "elements": len(doc.elements)}]

    def _apply_touch(self, sample: TouchSample) -> list[dict]:
        assert self._recognizer and self._controller and self._queue
        events = self._recognizer.feed_sample(sample)
        outs: list[dict] = []
        for event in events:
            announcements = self._controller.handle_gesture(event, now_ms=event.t_ms)
            outs.append(
                {
                    "type": "gesture",
                    "kind": event.kind.value,
                    "element_id": self._controller.last_resolved_id,
                }
            )
            outs.extend(self._voice(announcements, event.t_ms))
        self._clock = sample.t_ms
        return outs

    def _apply_select_level(self, level: int) -> list[dict]:
        assert self._controller and self._queue
        announcement = self._controller.select_level(level)
        return self._voice([announcement], self._clock)

    def _voice(self, announcements: list[Announcement], t_ms: int) -> list[dict]:
        """Run announcements through the speech queue; wire messages in emission order."""
        assert self._queue is not None
        self._emissions = []
        for a in announcements:
            self._queue.enqueue(a, t_ms)
        drain(self._queue, t_ms)
        emitted, self._emissions = self._emissions, []
        return emitted

    def _collect_emission(self, t_ms: int, payload: Announcement) -> None:
        if isinstance(payload, Earcon):
            self._emissions.append({"type": "earcon", "kind": payload.kind.value})
        else:
            assert isinstance(payload, Speak)
            self._emissions.append(
                {
                    "type": "speak",
                    "text": payload.text,
                    "priority": payload.priority.value,
                    "interrupt": payload.interrupt,
                }
            )


def replay_log(
    log: SessionLog | str,
    maps: dict[str, MapDocument] | None = None,
    config: EngineConfig | None = None,
) -> str:
    """Re-run a recorded session through a fresh engine.

    Returns the transcript: every produced server message as one
    canonical JSON line. Deterministic, and equal to the transcript of
    the recorded out-records for any log this engine produced under the
    same maps and config.
    """
    if isinstance(log, str):
        log = SessionLog.from_jsonl(log)
    else:
        log.check()
    session = Session(maps=maps, config=config)
    produced: list[dict] = []
    for msg in log.in_messages():
        produced.extend(session.handle_client_message(msg))
    return render_transcript(produced)
