"""Audio-tactile map exploration engine.

Turns multi-touch event streams over a structured geographic map into
spoken announcements and earcons: double-tap for names, lasso for
point-of-interest details, tap-and-hold pairs for distances. Includes a
WebSocket session service with deterministic record/replay and a study
harness for landmark/route/survey scoring.
"""

from .controller import Announcement, Controller, Earcon, EarconKind, Priority, Speak
from .gestures import (
    GestureConfig,
    GestureEvent,
    GestureKind,
    Recognizer,
    TouchPhase,
    TouchSample,
    new_recognizer,
)
from .map_model import (
    ElementKind,
    InfoLayers,
    MapDocument,
    MapElement,
    MapProfileError,
    PointGeom,
    Polygon,
    Polyline,
    Severity,
    UnknownElement,
    ValidationIssue,
    ValidationRules,
    element_info,
    fixture_city_map,
    parse_map,
    serialize_map,
    validate_map,
)
from .session import (
    EngineConfig,
    MalformedLog,
    Session,
    SessionLog,
    canonical_json,
    render_transcript,
    replay_log,
)
from .spatial import (
    ElementHit,
    SpatialIndex,
    build_index,
    distance_between,
    enclosed_element,
    resolve_point,
)
from .speech import SpeechQueue, Utterance

__version__ = "0.1.0"

__all__ = [
    "Announcement",
    "Controller",
    "Earcon",
    "EarconKind",
    "ElementHit",
    "ElementKind",
    "EngineConfig",
    "GestureConfig",
    "GestureEvent",
    "GestureKind",
    "InfoLayers",
    "MalformedLog",
    "MapDocument",
    "MapElement",
    "MapProfileError",
    "PointGeom",
    "Polygon",
    "Polyline",
    "Priority",
    "Recognizer",
    "Session",
    "SessionLog",
    "Severity",
    "Speak",
    "SpatialIndex",
    "SpeechQueue",
    "TouchPhase",
    "TouchSample",
    "UnknownElement",
    "Utterance",
    "ValidationIssue",
    "ValidationRules",
    "build_index",
    "canonical_json",
    "distance_between",
    "element_info",
    "enclosed_element",
    "fixture_city_map",
    "new_recognizer",
    "parse_map",
    "render_transcript",
    "replay_log",
    "resolve_point",
    "serialize_map",
    "validate_map",
]
