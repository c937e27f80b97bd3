"""Planar primitives: points, segments, polygons with holes, and the
predicates the rest of the pipeline is built on.

All predicates are epsilon-guarded floating point with a shared tolerance of
1e-9 in input units.  The free space defined by a polygon with holes is
closed: boundaries belong to it, and grazing contact counts as inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .kernels import EPS


class GeometryError(ValueError):
    """Invalid geometric input (degenerate segment, malformed polygon, ...)."""


class Point(NamedTuple):
    x: float
    y: float

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def _require_finite(p: Point) -> None:
    if not (math.isfinite(p.x) and math.isfinite(p.y)):
        raise GeometryError(f"non-finite coordinates: {p}")


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        a = Point(*self.a)
        b = Point(*self.b)
        _require_finite(a)
        _require_finite(b)
        if a == b:
            raise GeometryError(f"degenerate segment at {a}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.a.dist(self.b)


@dataclass(frozen=True)
class SegmentIntersection:
    kind: str  # "disjoint" | "proper_cross" | "touch" | "overlap"
    point: Point | None = None
    overlap: tuple[Point, Point] | None = None


_KIND_NAMES = {
    kernels.DISJOINT: "disjoint",
    kernels.PROPER: "proper_cross",
    kernels.TOUCH: "touch",
    kernels.OVERLAP: "overlap",
}


def orientation(p: Point, q: Point, r: Point) -> int:
    """Sign of the signed area of triangle pqr: +1 left turn, -1 right, 0 collinear."""
    for pt in (p, q, r):
        _require_finite(Point(*pt))
    return kernels.orient_sign(p[0], p[1], q[0], q[1], r[0], r[1])


def segments_intersect(s1: Segment, s2: Segment) -> SegmentIntersection:
    """Exact classification of how two segments meet."""
    kind, t0, t1, _, _ = kernels.segment_classify(
        s1.a.x, s1.a.y, s1.b.x, s1.b.y, s2.a.x, s2.a.y, s2.b.x, s2.b.y
    )
    name = _KIND_NAMES[kind]
    if kind in (kernels.PROPER, kernels.TOUCH):
        return SegmentIntersection(name, point=point_along(s1.a, s1.b, t0))
    if kind == kernels.OVERLAP:
        return SegmentIntersection(
            name, overlap=(point_along(s1.a, s1.b, t0), point_along(s1.a, s1.b, t1))
        )
    return SegmentIntersection(name)


def point_along(a: Point, b: Point, t: float) -> Point:
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def signed_area(ring: Sequence[Point]) -> float:
    total = 0.0
    n = len(ring)
    for i in range(n):
        j = (i + 1) % n
        total += ring[i][0] * ring[j][1] - ring[j][0] * ring[i][1]
    return 0.5 * total


def _ring_edges(ring: Sequence[Point]):
    n = len(ring)
    for i in range(n):
        yield ring[i], ring[(i + 1) % n]


def _ring_is_simple(ring: Sequence[Point]) -> bool:
    edges = list(_ring_edges(ring))
    n = len(edges)
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            kind, *_ = kernels.segment_classify(
                edges[i][0][0], edges[i][0][1], edges[i][1][0], edges[i][1][1],
                edges[j][0][0], edges[j][0][1], edges[j][1][0], edges[j][1][1],
            )
            if adjacent:
                if kind == kernels.OVERLAP or kind == kernels.PROPER:
                    return False
            elif kind != kernels.DISJOINT:
                return False
    return True


def _normalize_ring(ring, clockwise: bool) -> tuple[Point, ...]:
    pts = [Point(float(x), float(y)) for x, y in ring]
    if len(pts) < 3:
        raise GeometryError("ring needs at least 3 vertices")
    for p in pts:
        _require_finite(p)
    if pts[0] == pts[-1]:
        pts = pts[:-1]
    for i in range(len(pts)):
        if pts[i] == pts[(i + 1) % len(pts)]:
            raise GeometryError(f"repeated consecutive vertex {pts[i]}")
    area = signed_area(pts)
    if abs(area) <= EPS:
        raise GeometryError("ring has (near) zero area")
    if (area < 0) != clockwise:
        pts.reverse()
    return tuple(pts)


@dataclass(frozen=True)
class PolygonWithHoles:
    """Closed free space: a simple outer ring minus the open interiors of
    pairwise disjoint simple holes, all strictly inside the outer ring."""

    outer: tuple[Point, ...]
    holes: tuple[tuple[Point, ...], ...] = ()
    verts: np.ndarray = field(init=False, repr=False, compare=False)
    ring_start: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        outer = _normalize_ring(self.outer, clockwise=False)
        holes = tuple(_normalize_ring(h, clockwise=True) for h in self.holes)
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "holes", holes)

        flat = list(outer)
        starts = [0, len(outer)]
        for h in holes:
            flat.extend(h)
            starts.append(len(flat))
        verts = np.array(flat, dtype=np.float64)
        ring_start = np.array(starts, dtype=np.int64)
        object.__setattr__(self, "verts", verts)
        object.__setattr__(self, "ring_start", ring_start)

        self._validate()

    def _validate(self):
        if not _ring_is_simple(self.outer):
            raise GeometryError("outer ring is not simple")
        for hi, hole in enumerate(self.holes):
            if not _ring_is_simple(hole):
                raise GeometryError(f"hole {hi} is not simple")
            for p in hole:
                if not self._strictly_in_outer(p):
                    raise GeometryError(f"hole {hi} is not strictly inside the outer ring")
            if self._rings_touch(self.outer, hole):
                raise GeometryError(f"hole {hi} touches the outer ring")
        for i in range(len(self.holes)):
            for j in range(i + 1, len(self.holes)):
                if self._rings_touch(self.holes[i], self.holes[j]):
                    raise GeometryError(f"holes {i} and {j} are not disjoint")
                if self._point_in_ring(self.holes[i][0], self.holes[j]) or \
                        self._point_in_ring(self.holes[j][0], self.holes[i]):
                    raise GeometryError(f"holes {i} and {j} are nested")

    def _strictly_in_outer(self, p: Point) -> bool:
        sub = self.verts[: len(self.outer)]
        start = np.array([0, len(self.outer)], dtype=np.int64)
        return kernels.free_space_locate(np.ascontiguousarray(sub), start, p.x, p.y) == 2

    @staticmethod
    def _point_in_ring(p: Point, ring) -> bool:
        arr = np.array(ring, dtype=np.float64)
        start = np.array([0, len(ring)], dtype=np.int64)
        return kernels.free_space_locate(arr, start, p[0], p[1]) != 0

    @staticmethod
    def _rings_touch(r1, r2) -> bool:
        for a, b in _ring_edges(r1):
            for c, d in _ring_edges(r2):
                kind, *_ = kernels.segment_classify(
                    a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]
                )
                if kind != kernels.DISJOINT:
                    return True
        return False

    def bbox(self) -> tuple[float, float, float, float]:
        xs = self.verts[:, 0]
        ys = self.verts[:, 1]
        return float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max())

    def all_vertices(self) -> list[Point]:
        pts = list(self.outer)
        for h in self.holes:
            pts.extend(h)
        return pts


def point_in_free_space(free_space: PolygonWithHoles, p: Point) -> bool:
    """True iff p is inside-or-on the outer ring and not strictly inside a hole."""
    _require_finite(Point(*p))
    return bool(kernels.point_free(free_space.verts, free_space.ring_start, p[0], p[1]))


def segment_in_free_space(free_space: PolygonWithHoles, s: Segment) -> bool:
    """True iff every point of s lies in the closed free space."""
    return bool(
        kernels.segment_free(
            free_space.verts, free_space.ring_start, s.a.x, s.a.y, s.b.x, s.b.y
        )
    )
