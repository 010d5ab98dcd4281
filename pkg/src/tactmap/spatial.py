"""Touch-point resolution, element distances, and lasso enclosure.

The index is a uniform grid over the canvas used purely to cut down the
candidate set; query answers never depend on the cell size. Hit-testing
prefers small targets over large containers (poi > street > building >
water) so a point of interest drawn inside a building stays reachable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import geometry
from .geometry import Vec
from .map_model import (
    ElementKind,
    MapDocument,
    MapElement,
    PointGeom,
    Polygon,
    Polyline,
)

DEFAULT_HIT_TOLERANCE_MM = 5.0

_KIND_PRIORITY = {
    ElementKind.POI: 0,
    ElementKind.STREET: 1,
    ElementKind.BUILDING: 2,
    ElementKind.WATER: 3,
}


@dataclass(frozen=True)
class ElementHit:
    element_id: str
    kind: ElementKind
    distance_mm: float


def element_distance_mm(element: MapElement, p: Vec) -> float:
    """Distance from p to the element's geometry; 0 inside a polygon."""
    geom = element.geometry
    if isinstance(geom, PointGeom):
        return geometry.dist(p, (geom.x, geom.y))
    if isinstance(geom, Polyline):
        return geometry.polyline_point_distance(p, geom.vertices)
    return geometry.polygon_distance(p, geom.vertices)


def element_extent(element: MapElement) -> float:
    """Tie-break size: 0 for points, arc length for streets, area for polygons."""
    geom = element.geometry
    if isinstance(geom, PointGeom):
        return 0.0
    if isinstance(geom, Polyline):
        return geometry.polyline_length(geom.vertices)
    return geometry.polygon_area(geom.vertices)


def reference_point(element: MapElement) -> Vec:
    """Announced location of an element: point, area centroid, or arc midpoint."""
    geom = element.geometry
    if isinstance(geom, PointGeom):
        return (geom.x, geom.y)
    if isinstance(geom, Polyline):
        return geometry.polyline_midpoint(geom.vertices)
    return geometry.polygon_centroid(geom.vertices)


class SpatialIndex:
    """Uniform-grid acceleration structure over an immutable document."""

    def __init__(self, doc: MapDocument, cell_mm: float):
        if cell_mm <= 0:
            raise ValueError(f"cell_mm must be positive, got {cell_mm}")
        self.doc = doc
        self.cell_mm = float(cell_mm)
        self._extent = {el.id: element_extent(el) for el in doc.elements}
        self._elements = {el.id: el for el in doc.elements}
        # Elements land in every cell their bounding box overlaps; queries
        # dilate by the tolerance, so build-time dilation is not needed.
        self._cells: dict[tuple[int, int], list[str]] = {}
        for el in doc.elements:
            min_x, min_y, max_x, max_y = geometry.bounding_box(el.vertices)
            for cx in range(self._cell_of(min_x), self._cell_of(max_x) + 1):
                for cy in range(self._cell_of(min_y), self._cell_of(max_y) + 1):
                    self._cells.setdefault((cx, cy), []).append(el.id)

    def _cell_of(self, coord: float) -> int:
        return math.floor(coord / self.cell_mm)

    def candidates(self, p: Vec, tolerance_mm: float) -> list[str]:
        """Ids of elements whose bounding box could lie within tolerance of p."""
        x, y = p
        found: dict[str, None] = {}
        for cx in range(self._cell_of(x - tolerance_mm), self._cell_of(x + tolerance_mm) + 1):
            for cy in range(self._cell_of(y - tolerance_mm), self._cell_of(y + tolerance_mm) + 1):
                for eid in self._cells.get((cx, cy), ()):
                    found[eid] = None
        return list(found)

    def element(self, element_id: str) -> MapElement:
        return self._elements[element_id]

    def extent(self, element_id: str) -> float:
        return self._extent[element_id]


def build_index(doc: MapDocument, cell_mm: float) -> SpatialIndex:
    """Build the grid index for a parsed document."""
    return SpatialIndex(doc, cell_mm)


def resolve_point(
    index: SpatialIndex, p: Vec, tolerance_mm: float = DEFAULT_HIT_TOLERANCE_MM
) -> ElementHit | None:
    """Element under a touch point, within a fingertip tolerance.

    Among elements within tolerance the winner is chosen by kind priority
    (poi > street > building > water), then smaller distance, then smaller
    extent, then id. Returns None when nothing is close enough.
    """
    if tolerance_mm < 0:
        raise ValueError(f"tolerance_mm must be >= 0, got {tolerance_mm}")
    best: tuple[int, float, float, str] | None = None
    best_hit: ElementHit | None = None
    for eid in index.candidates(p, tolerance_mm):
        el = index.element(eid)
        d = element_distance_mm(el, p)
        if d > tolerance_mm:
            continue
        key = (_KIND_PRIORITY[el.kind], d, index.extent(eid), eid)
        if best is None or key < best:
            best = key
            best_hit = ElementHit(element_id=eid, kind=el.kind, distance_mm=d)
    return best_hit


def distance_between(doc: MapDocument, id_a: str, id_b: str) -> float:
    """Real-world meters between two elements' reference points."""
    a = doc.element(id_a)
    b = doc.element(id_b)
    mm = geometry.dist(reference_point(a), reference_point(b))
    return mm * doc.scale_m_per_mm


def enclosed_element(index: SpatialIndex, lasso_path: tuple[Vec, ...]) -> str | None:
    """Point of interest circled by a closed lasso path, if any.

    Only POIs count. Strict even-odd containment; among several enclosed
    POIs the one nearest the lasso polygon's centroid wins, ties by id.
    """
    ring = _lasso_ring(lasso_path)
    if ring is None:
        return None
    center = geometry.polygon_centroid(ring)
    min_x, min_y, max_x, max_y = geometry.bounding_box(ring)
    best: tuple[float, str] | None = None
    for el in index.doc.elements:
        if el.kind != ElementKind.POI or not isinstance(el.geometry, PointGeom):
            continue
        p = (el.geometry.x, el.geometry.y)
        if not (min_x < p[0] < max_x and min_y < p[1] < max_y):
            continue
        if not geometry.point_in_polygon(p, ring):
            continue
        if geometry.polygon_boundary_distance(p, ring) == 0.0:
            continue  # exactly on the path: not strictly inside
        key = (geometry.dist(p, center), el.id)
        if best is None or key < best:
            best = key
    return best[1] if best else None


def _lasso_ring(path: tuple[Vec, ...]) -> tuple[Vec, ...] | None:
    """Lasso path as a polygon ring; None if degenerate."""
    deduped: list[Vec] = []
    for p in path:
        if not deduped or p != deduped[-1]:
            deduped.append(p)
    if len(deduped) > 1 and deduped[-1] == deduped[0]:
        deduped.pop()
    if len(deduped) < 3:
        return None
    return tuple(deduped)
