"""Binds gestures to audio announcements.

Double-tap speaks the element name, lasso speaks the detail text for the
selected info level, and two tap-and-holds in a row speak the distance
between the two held elements. Beeps (earcons) confirm activations and
signal misses. Phrase templates and the distance rounding rule are fixed
constants here: they are part of the record/replay contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .geometry import Vec
from .gestures import GestureEvent, GestureKind
from .map_model import MapDocument, element_info
from .spatial import (
    DEFAULT_HIT_TOLERANCE_MM,
    SpatialIndex,
    distance_between,
    enclosed_element,
    resolve_point,
)

DEFAULT_DISTANCE_PAIR_TIMEOUT_MS = 5000

# Distances speak in 10 m steps; below this many meters, in 1 m steps.
FINE_ROUNDING_BELOW_M = 20.0

DISTANCE_PHRASE = "distance from {a} to {b}: {n} meters"
LEVEL_PHRASE = "level {level}: {label}"
LEVEL_LABEL_NAMES = "names"
LEVEL_LABEL_DETAILS = "additional information"


class NoMapLoaded(Exception):
    pass


class Priority(Enum):
    INFO = "info"
    DETAIL = "detail"
    ALERT = "alert"


class EarconKind(Enum):
    ACTIVATE = "activate"
    CONFIRM = "confirm"
    ERROR = "error"


@dataclass(frozen=True)
class Speak:
    text: str
    priority: Priority = Priority.INFO
    interrupt: bool = True

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("speak text must be non-empty")


@dataclass(frozen=True)
class Earcon:
    kind: EarconKind


Announcement = Speak | Earcon


def round_distance_m(meters: float) -> int:
    """Round half-up to 10 m, or to 1 m below FINE_ROUNDING_BELOW_M."""
    if meters < FINE_ROUNDING_BELOW_M:
        return int(math.floor(meters + 0.5))
    return 10 * int(math.floor(meters / 10.0 + 0.5))


def distance_phrase(name_a: str, name_b: str, meters: float) -> str:
    return DISTANCE_PHRASE.format(a=name_a, b=name_b, n=round_distance_m(meters))


def level_phrase(level: int) -> str:
    label = LEVEL_LABEL_NAMES if level == 0 else LEVEL_LABEL_DETAILS
    return LEVEL_PHRASE.format(level=level, label=label)


class Controller:
    """Per-session interaction state: current info level and distance pairing.

    Distance mode is a two-state machine (idle / armed with the first
    held element); an armed state expires after the pair timeout.
    """

    def __init__(
        self,
        doc: MapDocument | None = None,
        index: SpatialIndex | None = None,
        *,
        hit_tolerance_mm: float = DEFAULT_HIT_TOLERANCE_MM,
        distance_pair_timeout_ms: int = DEFAULT_DISTANCE_PAIR_TIMEOUT_MS,
        current_level: int = 1,
    ):
        self.doc = doc
        self.index = index
        self.hit_tolerance_mm = hit_tolerance_mm
        self.distance_pair_timeout_ms = distance_pair_timeout_ms
        self.current_level = current_level
        self.armed: tuple[str, int] | None = None  # (element_id, armed_at_ms)
        self.last_resolved_id: str | None = None

    def handle_gesture(self, g: GestureEvent, now_ms: int) -> list[Announcement]:
        """Announcements for one gesture event; updates controller state."""
        if self.doc is None or self.index is None:
            raise NoMapLoaded("a map must be loaded before handling gestures")
        if self.armed is not None and now_ms - self.armed[1] > self.distance_pair_timeout_ms:
            self.armed = None
        self.last_resolved_id = None

        if g.kind == GestureKind.DOUBLE_TAP:
            return self._on_double_tap(g.point)
        if g.kind == GestureKind.HOLD_ACTIVATE:
            return self._on_hold(g.point, g.t_ms)
        if g.kind == GestureKind.LASSO:
            return self._on_lasso(g.path)
        if g.kind == GestureKind.HOLD_RELEASE:
            return []
        raise ValueError(f"unhandled gesture kind: {g.kind}")

    def select_level(self, level: int) -> Announcement:
        """Set the info level used by lasso detail queries."""
        if level < 0:
            raise ValueError(f"level must be >= 0, got {level}")
        self.current_level = level
        return Speak(level_phrase(level), Priority.INFO, interrupt=True)

    def _on_double_tap(self, point: Vec) -> list[Announcement]:
        hit = resolve_point(self.index, point, self.hit_tolerance_mm)
        if hit is None:
            return [Earcon(EarconKind.ERROR)]
        self.last_resolved_id = hit.element_id
        return [Speak(self.doc.element(hit.element_id).name, Priority.INFO, interrupt=True)]

    def _on_hold(self, point: Vec, t_ms: int) -> list[Announcement]:
        hit = resolve_point(self.index, point, self.hit_tolerance_mm)
        if hit is None:
            return [Earcon(EarconKind.ERROR)]
        self.last_resolved_id = hit.element_id
        if self.armed is None:
            self.armed = (hit.element_id, t_ms)
            return [Earcon(EarconKind.ACTIVATE)]
        first_id, _ = self.armed
        self.armed = None
        meters = distance_between(self.doc, first_id, hit.element_id)
        phrase = distance_phrase(
            self.doc.element(first_id).name,
            self.doc.element(hit.element_id).name,
            meters,
        )
        return [Earcon(EarconKind.ACTIVATE), Speak(phrase, Priority.INFO, interrupt=True)]

    def _on_lasso(self, path: tuple[Vec, ...]) -> list[Announcement]:
        eid = enclosed_element(self.index, path)
        if eid is None:
            return [Earcon(EarconKind.ERROR)]
        self.last_resolved_id = eid
        text = element_info(self.doc, eid, self.current_level)
        return [Speak(text, Priority.DETAIL, interrupt=True)]
