"""Typed map documents and the constrained SVG profile they are stored in.

A map is a flat scene of streets (open polylines), buildings and water
(closed polygons) and points of interest (points), each carrying a name
and optional numbered layers of extra description. Coordinates are map
millimeters on a physical canvas; the document also carries the scale in
meters per map millimeter so distances can be announced in real units.

Profile contract: the root ``<svg>`` carries ``data-scale-m-per-mm`` and
``data-title``; every map element is a ``<path>`` (streets open,
buildings/water closed with ``Z``) or a ``<circle>`` (points of interest)
with ``data-id``, ``data-kind``, ``data-name`` and optional
``data-level-1..N``. Anything without ``data-kind`` is decoration and is
ignored. User units are millimeters.
"""

from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from xml.sax.saxutils import quoteattr

from . import geometry
from .geometry import Vec

A3_WIDTH_MM = 420.0
A3_HEIGHT_MM = 297.0

# Equality tolerance for geometry coordinates, in mm.
COORD_TOL_MM = 1e-6

NO_FURTHER_INFO = "no further information"


class MapProfileError(Exception):
    """A document that cannot be loaded under the map profile."""

    code = "profile-error"

    def __init__(self, message: str, element_id: str | None = None):
        super().__init__(message)
        self.element_id = element_id


class MalformedDocument(MapProfileError):
    code = "malformed-document"


class MissingScale(MapProfileError):
    code = "missing-scale"


class UnknownKind(MapProfileError):
    code = "unknown-kind"


class DuplicateId(MapProfileError):
    code = "duplicate-id"


class MissingId(MapProfileError):
    code = "missing-id"


class MissingName(MapProfileError):
    code = "missing-name"


class OpenPolygon(MapProfileError):
    code = "open-polygon"


class OutOfCanvas(MapProfileError):
    code = "out-of-canvas"


class GeometryMismatch(MapProfileError):
    code = "geometry-mismatch"


class SelfIntersectingPolygon(MapProfileError):
    code = "self-intersecting"


class InvalidLevels(MapProfileError):
    code = "invalid-levels"


class UnknownElement(KeyError):
    """Lookup of an element id that is not in the document."""


class ElementKind(Enum):
    STREET = "street"
    BUILDING = "building"
    POI = "poi"
    WATER = "water"


@dataclass(frozen=True)
class PointGeom:
    x: float
    y: float

    @property
    def vertices(self) -> tuple[Vec, ...]:
        return ((self.x, self.y),)


@dataclass(frozen=True)
class Polyline:
    """Open vertex chain; streets are polylines with at least 2 vertices."""

    vertices: tuple[Vec, ...]


@dataclass(frozen=True)
class Polygon:
    """Closed ring without a repeated final vertex; at least 3 vertices."""

    vertices: tuple[Vec, ...]


Geometry = PointGeom | Polyline | Polygon


@dataclass(frozen=True)
class InfoLayers:
    """Numbered extra descriptions, level 1 upward (level 0 is the name)."""

    entries: tuple[tuple[int, str], ...] = ()

    def get(self, level: int) -> str | None:
        for idx, text in self.entries:
            if idx == level:
                return text
        return None

    def issues(self) -> list[str]:
        problems = []
        prev = 0
        for pos, (idx, text) in enumerate(self.entries):
            if pos == 0 and idx != 1:
                problems.append(f"info levels must start at 1, got {idx}")
            if idx <= prev:
                problems.append(f"info level indices must be strictly increasing at {idx}")
            if not text.strip():
                problems.append(f"info level {idx} text is empty")
            prev = idx
        return problems


@dataclass(frozen=True)
class MapElement:
    id: str
    kind: ElementKind
    geometry: Geometry
    name: str
    levels: InfoLayers = field(default_factory=InfoLayers)

    @property
    def vertices(self) -> tuple[Vec, ...]:
        return self.geometry.vertices


@dataclass(frozen=True)
class MapDocument:
    canvas_width_mm: float
    canvas_height_mm: float
    scale_m_per_mm: float
    elements: tuple[MapElement, ...] = ()
    title: str = ""

    def element(self, element_id: str) -> MapElement:
        for el in self.elements:
            if el.id == element_id:
                return el
        raise UnknownElement(element_id)

    def has_element(self, element_id: str) -> bool:
        return any(el.id == element_id for el in self.elements)

    def elements_of_kind(self, kind: ElementKind) -> tuple[MapElement, ...]:
        return tuple(el for el in self.elements if el.kind == kind)


@dataclass(frozen=True)
class ValidationRules:
    """Tactile-design guideline thresholds. Stand-ins, deliberately configurable."""

    min_line_separation_mm: float = 3.0
    min_symbol_clearance_mm: float = 4.0
    min_street_width_mm: float = 1.0


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ValidationIssue:
    severity: Severity
    code: str
    element_id: str | None
    message: str


# --------------------------------------------------------------------------
# Parsing

_KINDS = {k.value: k for k in ElementKind}
_LEVEL_ATTR = re.compile(r"^data-level-([1-9][0-9]*)$")
_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def _strip_ns(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_number(raw: str, what: str, element_id: str | None = None) -> float:
    try:
        value = float(raw.strip())
    except ValueError:
        raise MalformedDocument(f"{what}: not a number: {raw!r}", element_id) from None
    if not math.isfinite(value):
        raise MalformedDocument(f"{what}: not finite: {raw!r}", element_id)
    return value


def _parse_length_mm(raw: str, what: str) -> float:
    cleaned = raw.strip()
    if cleaned.endswith("mm"):
        cleaned = cleaned[:-2]
    value = _parse_number(cleaned, what)
    if value <= 0:
        raise MalformedDocument(f"{what}: must be positive, got {value}")
    return value


def _path_points(d: str, element_id: str) -> tuple[tuple[Vec, ...], bool]:
    """Parse a profile path (M/L/H/V/Z, absolute or relative) into vertices.

    Returns (vertices, closed). Curves and arcs are outside the profile.
    """
    tokens = re.findall(r"[MmLlHhVvZzCcSsQqTtAa]|" + _NUMBER.pattern, d)
    points: list[Vec] = []
    closed = False
    cx = cy = 0.0
    cmd: str | None = None
    i = 0

    def need(n: int) -> list[float]:
        nonlocal i
        if i + n > len(tokens):
            raise MalformedDocument(f"path data truncated: {d!r}", element_id)
        try:
            vals = [float(tokens[i + k]) for k in range(n)]
        except ValueError:
            raise MalformedDocument(f"path data malformed: {d!r}", element_id) from None
        i += n
        return vals

    while i < len(tokens):
        tok = tokens[i]
        if tok.isalpha():
            if tok in "CcSsQqTtAa":
                raise MalformedDocument(
                    f"unsupported path command {tok!r} (profile allows M/L/H/V/Z)",
                    element_id,
                )
            cmd = tok
            i += 1
            if cmd in "Zz":
                if closed:
                    raise MalformedDocument("multiple Z commands in path", element_id)
                closed = True
                if i < len(tokens):
                    raise MalformedDocument(
                        "path data continues after Z (single subpath only)", element_id
                    )
                continue
        if cmd is None:
            raise MalformedDocument(f"path data must start with M: {d!r}", element_id)
        if cmd in "Mm":
            (x, y) = need(2)
            if cmd == "m" and points:
                x, y = cx + x, cy + y
            elif cmd == "m" and not points:
                pass  # first moveto is absolute even when written relative
            cx, cy = x, y
            points.append((cx, cy))
            # Subsequent pairs are implicit linetos.
            cmd = "L" if cmd == "M" else "l"
        elif cmd in "Ll":
            (x, y) = need(2)
            if cmd == "l":
                x, y = cx + x, cy + y
            cx, cy = x, y
            points.append((cx, cy))
        elif cmd in "Hh":
            (x,) = need(1)
            cx = cx + x if cmd == "h" else x
            points.append((cx, cy))
        elif cmd in "Vv":
            (y,) = need(1)
            cy = cy + y if cmd == "v" else y
            points.append((cx, cy))
    if not points:
        raise MalformedDocument("path has no coordinates", element_id)
    # Collapse exact consecutive duplicates, including a repeated closing point.
    deduped: list[Vec] = [points[0]]
    for p in points[1:]:
        if p != deduped[-1]:
            deduped.append(p)
    if closed and len(deduped) > 1 and deduped[-1] == deduped[0]:
        deduped.pop()
    return tuple(deduped), closed


def _element_levels(attrs: dict[str, str], element_id: str) -> InfoLayers:
    found: list[tuple[int, str]] = []
    for key, value in attrs.items():
        m = _LEVEL_ATTR.match(key)
        if m:
            found.append((int(m.group(1)), value))
    found.sort(key=lambda kv: kv[0])
    layers = InfoLayers(tuple(found))
    problems = layers.issues()
    if problems:
        raise InvalidLevels("; ".join(problems), element_id)
    return layers


def _parse_element(node: ET.Element, kind: ElementKind) -> MapElement:
    attrs = node.attrib
    element_id = attrs.get("data-id")
    if element_id is None or not element_id.strip():
        raise MissingId(f"map element <{_strip_ns(node.tag)}> lacks data-id")
    name = attrs.get("data-name", "")
    if not name.strip():
        raise MissingName(f"element {element_id!r} lacks a non-empty data-name", element_id)
    levels = _element_levels(attrs, element_id)

    tag = _strip_ns(node.tag)
    geom: Geometry
    if kind == ElementKind.POI:
        if tag != "circle":
            raise GeometryMismatch(
                f"poi {element_id!r} must be a <circle>, got <{tag}>", element_id
            )
        x = _parse_number(attrs.get("cx", "0"), "circle cx", element_id)
        y = _parse_number(attrs.get("cy", "0"), "circle cy", element_id)
        geom = PointGeom(x, y)
    else:
        if tag != "path":
            raise GeometryMismatch(
                f"{kind.value} {element_id!r} must be a <path>, got <{tag}>", element_id
            )
        d = attrs.get("d")
        if d is None:
            raise MalformedDocument(f"path {element_id!r} lacks d attribute", element_id)
        points, closed = _path_points(d, element_id)
        if kind == ElementKind.STREET:
            if closed:
                raise GeometryMismatch(
                    f"street {element_id!r} must be an open path", element_id
                )
            if len(points) < 2:
                raise GeometryMismatch(
                    f"street {element_id!r} needs at least 2 vertices", element_id
                )
            geom = Polyline(points)
        else:
            if not closed:
                raise OpenPolygon(
                    f"{kind.value} {element_id!r} path must close with Z", element_id
                )
            if len(points) < 3:
                raise GeometryMismatch(
                    f"{kind.value} {element_id!r} needs at least 3 vertices", element_id
                )
            if geometry.polygon_self_intersects(points):
                raise SelfIntersectingPolygon(
                    f"{kind.value} {element_id!r} ring self-intersects", element_id
                )
            if geometry.polygon_area(points) == 0.0:
                raise GeometryMismatch(
                    f"{kind.value} {element_id!r} ring has zero area", element_id
                )
            geom = Polygon(points)
    return MapElement(id=element_id, kind=kind, geometry=geom, name=name, levels=levels)


def parse_map(document_text: str) -> MapDocument:
    """Parse profile SVG text into a MapDocument, or raise one MapProfileError."""
    try:
        root = ET.fromstring(document_text)
    except ET.ParseError as exc:
        raise MalformedDocument(f"not well-formed XML: {exc}") from None
    if _strip_ns(root.tag) != "svg":
        raise MalformedDocument(f"root element must be <svg>, got <{_strip_ns(root.tag)}>")

    scale_raw = root.attrib.get("data-scale-m-per-mm")
    if scale_raw is None:
        raise MissingScale("root <svg> lacks data-scale-m-per-mm")
    scale = _parse_number(scale_raw, "data-scale-m-per-mm")
    if scale <= 0:
        raise MalformedDocument(f"data-scale-m-per-mm must be positive, got {scale}")

    width_raw = root.attrib.get("width")
    height_raw = root.attrib.get("height")
    if width_raw is not None and height_raw is not None:
        width = _parse_length_mm(width_raw, "svg width")
        height = _parse_length_mm(height_raw, "svg height")
    else:
        width, height = A3_WIDTH_MM, A3_HEIGHT_MM

    title = root.attrib.get("data-title", "")

    elements: list[MapElement] = []
    seen_ids: set[str] = set()
    for node in root.iter():
        kind_raw = node.attrib.get("data-kind")
        if kind_raw is None:
            continue  # decoration
        kind = _KINDS.get(kind_raw)
        if kind is None:
            raise UnknownKind(
                f"data-kind {kind_raw!r} is not one of {sorted(_KINDS)}",
                node.attrib.get("data-id"),
            )
        element = _parse_element(node, kind)
        if element.id in seen_ids:
            raise DuplicateId(f"duplicate element id {element.id!r}", element.id)
        seen_ids.add(element.id)
        for (x, y) in element.vertices:
            if not (0.0 <= x <= width and 0.0 <= y <= height):
                raise OutOfCanvas(
                    f"element {element.id!r} vertex ({x}, {y}) lies outside the "
                    f"{width} x {height} mm canvas",
                    element.id,
                )
        elements.append(element)

    return MapDocument(
        canvas_width_mm=width,
        canvas_height_mm=height,
        scale_m_per_mm=scale,
        elements=tuple(elements),
        title=title,
    )


# --------------------------------------------------------------------------
# Serialization

_STYLE = {
    ElementKind.STREET: 'fill="none" stroke="#1a1a1a" stroke-width="1"',
    ElementKind.BUILDING: 'fill="#d9d0c1" stroke="#1a1a1a" stroke-width="0.5"',
    ElementKind.WATER: 'fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"',
    ElementKind.POI: 'fill="#d62728"',
}


def _fmt(value: float) -> str:
    """Shortest decimal text that round-trips the exact float."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _attr(name: str, value: str) -> str:
    return f"{name}={quoteattr(value)}"


def _path_d(vertices: tuple[Vec, ...], closed: bool) -> str:
    parts = [f"M {_fmt(vertices[0][0])},{_fmt(vertices[0][1])}"]
    parts.extend(f"L {_fmt(x)},{_fmt(y)}" for x, y in vertices[1:])
    if closed:
        parts.append("Z")
    return " ".join(parts)


def serialize_map(doc: MapDocument) -> str:
    """Render a MapDocument as profile SVG; parse_map inverts this exactly."""
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_fmt(doc.canvas_width_mm)}mm" height="{_fmt(doc.canvas_height_mm)}mm" '
        f'viewBox="0 0 {_fmt(doc.canvas_width_mm)} {_fmt(doc.canvas_height_mm)}" '
        f"{_attr('data-scale-m-per-mm', _fmt(doc.scale_m_per_mm))} "
        f"{_attr('data-title', doc.title)}>"
    ]
    for el in doc.elements:
        meta = [
            _attr("data-id", el.id),
            _attr("data-kind", el.kind.value),
            _attr("data-name", el.name),
        ]
        meta.extend(_attr(f"data-level-{idx}", text) for idx, text in el.levels.entries)
        style = _STYLE[el.kind]
        if isinstance(el.geometry, PointGeom):
            out.append(
                f'  <circle cx="{_fmt(el.geometry.x)}" cy="{_fmt(el.geometry.y)}" '
                f'r="2.5" {" ".join(meta)} {style}/>'
            )
        else:
            closed = isinstance(el.geometry, Polygon)
            d = _path_d(el.geometry.vertices, closed)
            out.append(f'  <path d="{d}" {" ".join(meta)} {style}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# Validation

def _element_invariant_issues(doc: MapDocument) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []

    def err(code: str, element_id: str | None, message: str) -> None:
        issues.append(ValidationIssue(Severity.ERROR, code, element_id, message))

    if doc.canvas_width_mm <= 0 or doc.canvas_height_mm <= 0:
        err("bad-canvas", None, "canvas dimensions must be positive")
    if doc.scale_m_per_mm <= 0:
        err("bad-scale", None, "scale_m_per_mm must be positive")
    seen: set[str] = set()
    for el in doc.elements:
        if el.id in seen:
            err("duplicate-id", el.id, f"duplicate element id {el.id!r}")
        seen.add(el.id)
        if not el.name.strip():
            err("missing-name", el.id, "element name must be non-empty")
        for problem in el.levels.issues():
            err("invalid-levels", el.id, problem)
        geom = el.geometry
        if el.kind == ElementKind.POI and not isinstance(geom, PointGeom):
            err("geometry-mismatch", el.id, "poi must have point geometry")
        elif el.kind == ElementKind.STREET:
            if not isinstance(geom, Polyline) or len(geom.vertices) < 2:
                err("geometry-mismatch", el.id, "street must be a polyline with >= 2 vertices")
        elif el.kind in (ElementKind.BUILDING, ElementKind.WATER):
            if not isinstance(geom, Polygon) or len(geom.vertices) < 3:
                err("geometry-mismatch", el.id, f"{el.kind.value} must be a polygon with >= 3 vertices")
            elif geometry.polygon_self_intersects(geom.vertices):
                err("self-intersecting", el.id, "polygon ring self-intersects")
        for (x, y) in el.vertices:
            if not (0.0 <= x <= doc.canvas_width_mm and 0.0 <= y <= doc.canvas_height_mm):
                err("out-of-canvas", el.id, f"vertex ({x}, {y}) outside canvas")
                break
    return issues


def validate_map(doc: MapDocument, rules: ValidationRules | None = None) -> list[ValidationIssue]:
    """Check invariants (errors) and tactile-guideline rules (warnings).

    Deterministic: same document and rules yield the same issues in the
    same order. An empty list means the document passes everything.
    """
    rules = rules or ValidationRules()
    issues = _element_invariant_issues(doc)

    def warn(code: str, element_id: str, message: str) -> None:
        issues.append(ValidationIssue(Severity.WARNING, code, element_id, message))

    streets = doc.elements_of_kind(ElementKind.STREET)

    # A raised line shorter than its own printed width reads as a blob.
    for el in streets:
        if isinstance(el.geometry, Polyline):
            length = geometry.polyline_length(el.geometry.vertices)
            if length < rules.min_street_width_mm:
                warn(
                    "street-width",
                    el.id,
                    f"street {el.id!r} is {length:.3g} mm long, shorter than the "
                    f"{rules.min_street_width_mm} mm line width",
                )

    # Distinct raised lines need a fingertip of separation, except where
    # they intentionally join or cross (junctions have distance 0).
    for i in range(len(streets)):
        for j in range(i + 1, len(streets)):
            a, b = streets[i], streets[j]
            if not (isinstance(a.geometry, Polyline) and isinstance(b.geometry, Polyline)):
                continue
            d = geometry.polyline_polyline_distance(a.geometry.vertices, b.geometry.vertices)
            if 0.0 < d < rules.min_line_separation_mm:
                warn(
                    "line-separation",
                    a.id,
                    f"streets {a.id!r} and {b.id!r} run {d:.3g} mm apart, closer "
                    f"than {rules.min_line_separation_mm} mm without touching",
                )

    # Point symbols need clear space from any other raised feature.
    pois = doc.elements_of_kind(ElementKind.POI)
    for poi in pois:
        if not isinstance(poi.geometry, PointGeom):
            continue
        p = (poi.geometry.x, poi.geometry.y)
        for other in doc.elements:
            if other.id == poi.id:
                continue
            geom = other.geometry
            if isinstance(geom, PointGeom):
                d = geometry.dist(p, (geom.x, geom.y))
            elif isinstance(geom, Polyline):
                d = geometry.polyline_point_distance(p, geom.vertices)
            else:
                d = geometry.polygon_boundary_distance(p, geom.vertices)
            if d < rules.min_symbol_clearance_mm:
                warn(
                    "symbol-clearance",
                    poi.id,
                    f"poi {poi.id!r} sits {d:.3g} mm from {other.id!r}, closer "
                    f"than {rules.min_symbol_clearance_mm} mm",
                )
    return issues


# --------------------------------------------------------------------------
# Built-in fixture

def fixture_city_map() -> MapDocument:
    """Built-in fictional city centre: 6 streets, 6 buildings, 6 POIs, 1 river."""

    def street(eid: str, name: str, *pts: Vec, levels: tuple[tuple[int, str], ...] = ()) -> MapElement:
        return MapElement(eid, ElementKind.STREET, Polyline(tuple(pts)), name, InfoLayers(levels))

    def building(eid: str, name: str, x1: float, y1: float, x2: float, y2: float,
                 levels: tuple[tuple[int, str], ...] = ()) -> MapElement:
        ring = ((x1, y1), (x2, y1), (x2, y2), (x1, y2))
        return MapElement(eid, ElementKind.BUILDING, Polygon(ring), name, InfoLayers(levels))

    def poi(eid: str, name: str, x: float, y: float,
            levels: tuple[tuple[int, str], ...]) -> MapElement:
        return MapElement(eid, ElementKind.POI, PointGeom(x, y), name, InfoLayers(levels))

    elements = (
        street("street-church", "Church Lane", (20, 80), (400, 80)),
        street("street-market", "Market Street", (20, 150), (400, 150),
               levels=((1, "market held every saturday morning"),)),
        street("street-riverwalk", "River Walk", (20, 220), (400, 220)),
        street("street-station", "Station Road", (100, 20), (100, 290)),
        street("street-museum", "Museum Avenue", (260, 20), (260, 290)),
        street("street-bridge", "Old Bridge Street", (340, 20), (340, 290),
               levels=((1, "crosses the river on a stone bridge"),)),
        building("bld-railway", "Railway Station", 30, 30, 90, 60),
        building("bld-school", "Central School", 30, 100, 80, 140),
        building("bld-townhall", "Town Hall", 130, 100, 180, 130,
                 levels=((1, "open monday to friday"),)),
        building("bld-library", "Library", 200, 100, 240, 135),
        building("bld-theatre", "Theatre", 130, 170, 175, 205),
        building("bld-market-hall", "Market Hall", 200, 170, 245, 200),
        poi("hotel", "Hotel", 300, 115, (
            (1, "reception open around the clock"),
            (2, "rooms from 80 euros per night"),
        )),
        poi("poi-museum", "Museum", 280, 40, (
            (1, "open tuesday to sunday, 10 to 18"),
            (2, "entry 5 euros, free under 18"),
        )),
        poi("poi-metro", "Metro Station", 180, 50, (
            (1, "line 2, direction riverside"),
            (2, "first train 5:30, last train 0:30"),
        )),
        poi("poi-restaurant", "Restaurant", 370, 115, (
            (1, "regional cooking, lunch and dinner"),
            (2, "menu of the day 14 euros"),
        )),
        poi("poi-pharmacy", "Pharmacy", 60, 185, (
            (1, "open until 20:00 on weekdays"),
            (2, "night service rotates weekly"),
        )),
        poi("poi-fountain", "Fountain", 300, 185, (
            (1, "nineteenth century cast iron fountain"),
            (2, "meeting point for guided tours"),
        )),
        MapElement(
            "water-river",
            ElementKind.WATER,
            Polygon(((20, 250), (400, 250), (400, 285), (20, 285))),
            "River",
            InfoLayers(((1, "flows west to east through the city"),)),
        ),
    )
    return MapDocument(
        canvas_width_mm=A3_WIDTH_MM,
        canvas_height_mm=A3_HEIGHT_MM,
        scale_m_per_mm=2.0,
        elements=elements,
        title="Fictional City Centre",
    )


def element_info(doc: MapDocument, element_id: str, level: int) -> str:
    """Text for an element at an info level; level 0 is the name.

    Missing levels fall back to the name plus a fixed marker so the
    announcement is still useful.
    """
    el = doc.element(element_id)
    if level == 0:
        return el.name
    text = el.levels.get(level)
    if text is None:
        return f"{el.name} ({NO_FURTHER_INFO})"
    return text
