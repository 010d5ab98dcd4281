"""Multi-touch gesture recognition for non-visual map exploration.

Raw contact streams from up to ten fingers come in as timestamped
samples; the recognizer emits only deliberate gestures (double-tap,
hold-activate/release, lasso) and stays silent for the exploratory
scanning movement that dominates tactile reading. Single taps are
deliberately inert: during hand exploration they happen constantly and
would trigger a stream of unintended feedback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .geometry import Vec, dist, polyline_length

MAX_CONTACTS = 10


class GestureError(Exception):
    pass


class InvalidConfig(GestureError):
    pass


class OutOfOrderTimestamp(GestureError):
    pass


class UnknownTouchId(GestureError):
    pass


class DuplicateTouchDown(GestureError):
    pass


class TooManyContacts(GestureError):
    pass


class TouchPhase(Enum):
    DOWN = "down"
    MOVE = "move"
    UP = "up"


@dataclass(frozen=True)
class TouchSample:
    phase: TouchPhase
    touch_id: int
    x: float
    y: float
    t_ms: int


@dataclass(frozen=True)
class GestureConfig:
    """Recognition thresholds at human motor scale; all configurable."""

    double_tap_max_interval_ms: int = 400
    tap_max_duration_ms: int = 250
    tap_max_drift_mm: float = 3.0
    double_tap_max_gap_mm: float = 5.0
    hold_min_duration_ms: int = 1000
    hold_max_drift_mm: float = 4.0
    lasso_closure_eps_mm: float = 10.0
    lasso_min_perimeter_mm: float = 25.0

    def check(self) -> None:
        for name in (
            "double_tap_max_interval_ms",
            "tap_max_duration_ms",
            "tap_max_drift_mm",
            "double_tap_max_gap_mm",
            "hold_min_duration_ms",
            "hold_max_drift_mm",
            "lasso_closure_eps_mm",
            "lasso_min_perimeter_mm",
        ):
            if getattr(self, name) <= 0:
                raise InvalidConfig(f"{name} must be strictly positive")
        if self.tap_max_duration_ms >= self.hold_min_duration_ms:
            raise InvalidConfig(
                "tap_max_duration_ms must be below hold_min_duration_ms "
                f"({self.tap_max_duration_ms} >= {self.hold_min_duration_ms})"
            )


class GestureKind(Enum):
    DOUBLE_TAP = "double_tap"
    HOLD_ACTIVATE = "hold_activate"
    HOLD_RELEASE = "hold_release"
    LASSO = "lasso"


@dataclass(frozen=True)
class GestureEvent:
    kind: GestureKind
    t_ms: int
    point: Vec | None = None
    touch_id: int | None = None
    path: tuple[Vec, ...] | None = None

    def to_dict(self) -> dict:
        """Stable serialization used by logs and determinism checks."""
        out: dict = {"kind": self.kind.value, "t_ms": self.t_ms}
        if self.point is not None:
            out["point"] = [self.point[0], self.point[1]]
        if self.touch_id is not None:
            out["touch_id"] = self.touch_id
        if self.path is not None:
            out["path"] = [[x, y] for x, y in self.path]
        return out


@dataclass
class _Contact:
    touch_id: int
    down_point: Vec
    down_t: int
    path: list[Vec] = field(default_factory=list)
    max_drift: float = 0.0
    hold_emitted: bool = False
    hold_dead: bool = False

    def observe(self, p: Vec) -> None:
        if p != self.path[-1]:
            self.path.append(p)
        drift = dist(p, self.down_point)
        if drift > self.max_drift:
            self.max_drift = drift


@dataclass(frozen=True)
class _PendingTap:
    down_point: Vec
    up_t: int


class Recognizer:
    """Single-owner state machine turning touch samples into gesture events.

    Classification on lift is exclusive and ordered: an activated hold
    releases, else a quick stationary contact is a tap (pairing into a
    double-tap), else a long closed loop is a lasso, else nothing.
    """

    def __init__(self, config: GestureConfig | None = None):
        self.config = config or GestureConfig()
        self.config.check()
        self._contacts: dict[int, _Contact] = {}
        self._pending_tap: _PendingTap | None = None
        self._last_t: int | None = None

    @property
    def live_contacts(self) -> int:
        return len(self._contacts)

    @property
    def max_contacts(self) -> int:
        return MAX_CONTACTS

    def has_contact(self, touch_id: int) -> bool:
        return touch_id in self._contacts

    def reset(self) -> None:
        """Drop all contact state and the session clock."""
        self._contacts.clear()
        self._pending_tap = None
        self._last_t = None

    def feed_sample(self, s: TouchSample) -> list[GestureEvent]:
        """Ingest one sample; returns any gestures it completes or matures."""
        # Validate fully before mutating, so a rejected sample leaves the
        # recognizer exactly as it was.
        if self._last_t is not None and s.t_ms < self._last_t:
            raise OutOfOrderTimestamp(f"sample at {s.t_ms} ms after {self._last_t} ms")
        if s.phase == TouchPhase.DOWN:
            if s.touch_id in self._contacts:
                raise DuplicateTouchDown(f"touch {s.touch_id} is already down")
            if len(self._contacts) >= MAX_CONTACTS:
                raise TooManyContacts(f"more than {MAX_CONTACTS} concurrent contacts")
        elif s.touch_id not in self._contacts:
            raise UnknownTouchId(f"{s.phase.value} for touch {s.touch_id} without a down")

        # Time implied by this sample may mature a pending hold first,
        # before the sample's own movement is applied.
        events = self._due_holds(s.t_ms)
        self._last_t = s.t_ms

        if s.phase == TouchPhase.DOWN:
            contact = _Contact(s.touch_id, (s.x, s.y), s.t_ms)
            contact.path.append((s.x, s.y))
            self._contacts[s.touch_id] = contact
            return events

        contact = self._contacts[s.touch_id]
        contact.observe((s.x, s.y))
        if contact.max_drift > self.config.hold_max_drift_mm:
            contact.hold_dead = True

        if s.phase == TouchPhase.MOVE:
            return events

        del self._contacts[s.touch_id]
        events.extend(self._classify_lift(contact, s.t_ms))
        return events

    def advance_time(self, now_ms: int) -> list[GestureEvent]:
        """Mature holds up to now_ms without any new contact data."""
        if self._last_t is not None and now_ms < self._last_t:
            raise OutOfOrderTimestamp(f"advance to {now_ms} ms after {self._last_t} ms")
        events = self._due_holds(now_ms)
        self._last_t = now_ms
        return events

    def _due_holds(self, now_ms: int) -> list[GestureEvent]:
        due = []
        for contact in self._contacts.values():
            if contact.hold_emitted or contact.hold_dead:
                continue
            matures_at = contact.down_t + self.config.hold_min_duration_ms
            if matures_at <= now_ms:
                contact.hold_emitted = True
                due.append(
                    GestureEvent(
                        GestureKind.HOLD_ACTIVATE,
                        t_ms=matures_at,
                        point=contact.down_point,
                        touch_id=contact.touch_id,
                    )
                )
        due.sort(key=lambda e: (e.t_ms, e.touch_id))
        return due

    def _classify_lift(self, contact: _Contact, up_t: int) -> list[GestureEvent]:
        cfg = self.config
        if contact.hold_emitted:
            return [GestureEvent(GestureKind.HOLD_RELEASE, t_ms=up_t, touch_id=contact.touch_id)]

        duration = up_t - contact.down_t
        if duration <= cfg.tap_max_duration_ms and contact.max_drift <= cfg.tap_max_drift_mm:
            return self._complete_tap(contact, up_t)

        path = tuple(contact.path)
        closes = dist(path[-1], path[0]) <= cfg.lasso_closure_eps_mm
        if closes and polyline_length(path) >= cfg.lasso_min_perimeter_mm:
            return [GestureEvent(GestureKind.LASSO, t_ms=up_t, path=path)]
        return []

    def _complete_tap(self, contact: _Contact, up_t: int) -> list[GestureEvent]:
        cfg = self.config
        pending = self._pending_tap
        if (
            pending is not None
            and contact.down_t - pending.up_t <= cfg.double_tap_max_interval_ms
            and dist(contact.down_point, pending.down_point) <= cfg.double_tap_max_gap_mm
        ):
            self._pending_tap = None
            center = (
                (pending.down_point[0] + contact.down_point[0]) / 2.0,
                (pending.down_point[1] + contact.down_point[1]) / 2.0,
            )
            return [GestureEvent(GestureKind.DOUBLE_TAP, t_ms=up_t, point=center)]
        self._pending_tap = _PendingTap(contact.down_point, up_t)
        return []


def new_recognizer(config: GestureConfig | None = None) -> Recognizer:
    """Fresh recognizer; raises InvalidConfig on bad thresholds."""
    return Recognizer(config)
