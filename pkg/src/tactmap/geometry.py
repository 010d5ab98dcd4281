"""Planar geometry helpers for map-millimeter coordinates.

All functions take plain ``(x, y)`` tuples. Polygons are rings given
without a repeated closing vertex; the edge from the last vertex back to
the first is implicit.
"""

from __future__ import annotations

import math

Vec = tuple[float, float]

# Below this, a polygon's signed area is treated as degenerate.
_AREA_EPS = 1e-12


def dist(a: Vec, b: Vec) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


def point_segment_distance(p: Vec, a: Vec, b: Vec) -> float:
    """Distance from p to the closed segment a-b."""
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    seg_len2 = dx * dx + dy * dy
    if seg_len2 == 0.0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / seg_len2
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def polyline_length(vertices: tuple[Vec, ...]) -> float:
    """Total arc length of an open polyline."""
    return sum(dist(vertices[i], vertices[i + 1]) for i in range(len(vertices) - 1))


def polyline_point_distance(p: Vec, vertices: tuple[Vec, ...]) -> float:
    """Minimum distance from p to any segment of an open polyline."""
    if len(vertices) == 1:
        return dist(p, vertices[0])
    return min(
        point_segment_distance(p, vertices[i], vertices[i + 1])
        for i in range(len(vertices) - 1)
    )


def polyline_midpoint(vertices: tuple[Vec, ...]) -> Vec:
    """Point at half the total arc length; first vertex if length is zero."""
    total = polyline_length(vertices)
    if total == 0.0:
        return vertices[0]
    target = total / 2.0
    walked = 0.0
    for i in range(len(vertices) - 1):
        a, b = vertices[i], vertices[i + 1]
        step = dist(a, b)
        if walked + step >= target and step > 0.0:
            t = (target - walked) / step
            return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
        walked += step
    return vertices[-1]


def polygon_signed_area(vertices: tuple[Vec, ...]) -> float:
    """Shoelace area; positive for counter-clockwise rings."""
    s = 0.0
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s / 2.0


def polygon_area(vertices: tuple[Vec, ...]) -> float:
    """Unsigned polygon area."""
    return abs(polygon_signed_area(vertices))


def polygon_centroid(vertices: tuple[Vec, ...]) -> Vec:
    """Area centroid; falls back to the vertex mean for degenerate rings."""
    a = polygon_signed_area(vertices)
    if abs(a) < _AREA_EPS:
        n = len(vertices)
        return (sum(v[0] for v in vertices) / n, sum(v[1] for v in vertices) / n)
    cx = cy = 0.0
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        cross = x1 * y2 - x2 * y1
        cx += (x1 + x2) * cross
        cy += (y1 + y2) * cross
    return (cx / (6.0 * a), cy / (6.0 * a))


def point_in_polygon(p: Vec, vertices: tuple[Vec, ...]) -> bool:
    """Even-odd (ray casting) containment test. Boundary points are unspecified."""
    x, y = p
    inside = False
    n = len(vertices)
    j = n - 1
    for i in range(n):
        xi, yi = vertices[i]
        xj, yj = vertices[j]
        if (yi > y) != (yj > y):
            x_cross = xi + (y - yi) * (xj - xi) / (yj - yi)
            if x < x_cross:
                inside = not inside
        j = i
    return inside


def polygon_boundary_distance(p: Vec, vertices: tuple[Vec, ...]) -> float:
    """Minimum distance from p to the polygon's ring."""
    n = len(vertices)
    return min(
        point_segment_distance(p, vertices[i], vertices[(i + 1) % n]) for i in range(n)
    )


def polygon_distance(p: Vec, vertices: tuple[Vec, ...]) -> float:
    """0 for interior points, otherwise distance to the ring."""
    if point_in_polygon(p, vertices):
        return 0.0
    return polygon_boundary_distance(p, vertices)


def _orient(a: Vec, b: Vec, c: Vec) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a: Vec, b: Vec, p: Vec) -> bool:
    """p collinear with a-b assumed; is p within the segment's bounding box?"""
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_intersect(p1: Vec, p2: Vec, q1: Vec, q2: Vec) -> bool:
    """True if the closed segments share any point (proper or touching)."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and _on_segment(q1, q2, p1):
        return True
    if d2 == 0 and _on_segment(q1, q2, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, q1):
        return True
    if d4 == 0 and _on_segment(p1, p2, q2):
        return True
    return False


def segment_segment_distance(p1: Vec, p2: Vec, q1: Vec, q2: Vec) -> float:
    """Minimum distance between two closed segments; 0 if they intersect."""
    if segments_intersect(p1, p2, q1, q2):
        return 0.0
    return min(
        point_segment_distance(p1, q1, q2),
        point_segment_distance(p2, q1, q2),
        point_segment_distance(q1, p1, p2),
        point_segment_distance(q2, p1, p2),
    )


def polyline_polyline_distance(a: tuple[Vec, ...], b: tuple[Vec, ...]) -> float:
    """Minimum distance between any two segments of two polylines."""
    best = math.inf
    for i in range(len(a) - 1):
        for j in range(len(b) - 1):
            d = segment_segment_distance(a[i], a[i + 1], b[j], b[j + 1])
            if d == 0.0:
                return 0.0
            best = min(best, d)
    return best


def polygon_self_intersects(vertices: tuple[Vec, ...]) -> bool:
    """True if any two non-adjacent ring edges touch, or an edge doubles back.

    Zero-length edges count as degenerate (self-intersecting) too.
    """
    n = len(vertices)
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for a, b in edges:
        if a == b:
            return True
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            a1, a2 = edges[i]
            b1, b2 = edges[j]
            if adjacent:
                # Shared endpoint is legal; a 180-degree fold-back is not.
                shared, pa, pb = (
                    (a2, a1, b2) if j == i + 1 else (a1, a2, b1)
                )
                if _orient(shared, pa, pb) == 0:
                    da = (pa[0] - shared[0], pa[1] - shared[1])
                    db = (pb[0] - shared[0], pb[1] - shared[1])
                    if da[0] * db[0] + da[1] * db[1] > 0:
                        return True
                continue
            if segments_intersect(a1, a2, b1, b2):
                return True
    return False


def bounding_box(vertices: tuple[Vec, ...]) -> tuple[float, float, float, float]:
    """(min_x, min_y, max_x, max_y) of a vertex sequence."""
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    return (min(xs), min(ys), max(xs), max(ys))
