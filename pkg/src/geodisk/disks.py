"""Geodesic disks, their intersection graph, ply queries and candidate points.

A disk is the set of free-space points within geodesic distance r of its
center, so two disks intersect iff the center distance is at most the radius
sum.  Each edge of the intersection graph carries a realized geodesic
between the centers and a meeting point inside the intersection; the whole
path system is normalized so any two realized paths meet in one connected
piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .geometry import Point, PolygonWithHoles, point_in_free_space
from .metric import (
    GeodesicPath,
    VisibilityGraph,
    build_visibility_graph,
    enforce_consistency,
    geodesic_shortest_path,
)

TOL = 1e-9


class DiskError(ValueError):
    """Invalid disk input (center outside free space, duplicate ids, ...)."""


@dataclass(frozen=True)
class GeodesicDisk:
    id: int
    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", Point(float(self.center[0]), float(self.center[1])))
        if not (math.isfinite(self.radius) and self.radius >= 0.0):
            raise DiskError(f"disk {self.id}: radius must be finite and nonnegative")


class IntersectionGraph:
    """Intersection graph of geodesic disks with realized edge paths."""

    def __init__(self, free_space: PolygonWithHoles, graph: VisibilityGraph,
                 disks: list[GeodesicDisk], edges: set[tuple[int, int]],
                 dist: dict[tuple[int, int], float],
                 paths: dict[tuple[int, int], GeodesicPath],
                 meeting: dict[tuple[int, int], tuple[Point, float]]):
        self.free_space = free_space
        self.graph = graph
        self.disks = sorted(disks, key=lambda d: d.id)
        self.by_id = {d.id: d for d in self.disks}
        self.edges = set(edges)
        self.dist = dist
        self.paths = paths
        self.meeting = meeting
        self.adjacency: dict[int, list[int]] = {d.id: [] for d in self.disks}
        for i, j in sorted(self.edges):
            self.adjacency[i].append(j)
            self.adjacency[j].append(i)
        for v in self.adjacency.values():
            v.sort()

    @property
    def n(self) -> int:
        return len(self.disks)

    @property
    def m(self) -> int:
        return len(self.edges)

    def ids(self) -> list[int]:
        return [d.id for d in self.disks]

    def degree(self, disk_id: int) -> int:
        return len(self.adjacency[disk_id])

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def center_site(self, disk_id: int) -> int:
        return self.graph.site_index(self.by_id[disk_id].center)

    def subgraph(self, keep_ids) -> "IntersectionGraph":
        """Induced subgraph; realized paths and the metric are shared."""
        keep = set(keep_ids)
        disks = [d for d in self.disks if d.id in keep]
        edges = {e for e in self.edges if e[0] in keep and e[1] in keep}
        return IntersectionGraph(
            self.free_space, self.graph, disks, edges,
            {e: self.dist[e] for e in edges},
            {e: self.paths[e] for e in edges},
            {e: self.meeting[e] for e in edges},
        )


def disks_intersect(graph: VisibilityGraph, di: GeodesicDisk, dj: GeodesicDisk) -> bool:
    """True iff the geodesic center distance is at most the radius sum."""
    si = graph.site_index(di.center)
    sj = graph.site_index(dj.center)
    if si == sj:
        return True
    lo, hi = (si, sj) if si < sj else (sj, si)
    d = float(graph.site_distances(lo)[hi])
    return d <= di.radius + dj.radius + TOL


def meeting_parameter(d: float, ri: float, rj: float) -> float:
    """Arclength of the meeting point along the path from the first center:
    midpoint of the feasible stretch [max(0, d-rj), min(ri, d)]."""
    return 0.5 * (max(0.0, d - rj) + min(ri, d))


def build_intersection_graph(free_space: PolygonWithHoles,
                             disks: list[GeodesicDisk]) -> IntersectionGraph:
    """All-pairs intersection tests plus realized paths and meeting points."""
    seen = set()
    for d in disks:
        if d.id in seen:
            raise DiskError(f"duplicate disk id {d.id}")
        seen.add(d.id)
        if not point_in_free_space(free_space, d.center):
            raise DiskError(f"disk {d.id}: center {tuple(d.center)} outside the free space")

    ordered = sorted(disks, key=lambda d: d.id)
    graph = build_visibility_graph(free_space, [d.center for d in ordered])

    edges: set[tuple[int, int]] = set()
    dist: dict[tuple[int, int], float] = {}
    paths: dict[tuple[int, int], GeodesicPath] = {}

    for a in range(len(ordered)):
        da = ordered[a]
        sa = graph.site_index(da.center)
        dvec = None
        for b in range(a + 1, len(ordered)):
            db = ordered[b]
            sb = graph.site_index(db.center)
            if sa == sb:
                d = 0.0
            else:
                if dvec is None:
                    dvec = graph.site_distances(sa)
                d = float(dvec[sb])
            if d <= da.radius + db.radius + TOL:
                e = (da.id, db.id)
                edges.add(e)
                dist[e] = d

    for (i, j) in sorted(edges):
        di = next(d for d in ordered if d.id == i)
        dj = next(d for d in ordered if d.id == j)
        if dist[(i, j)] == 0.0 and di.center == dj.center:
            paths[(i, j)] = GeodesicPath((di.center,), 0.0)
        else:
            paths[(i, j)] = geodesic_shortest_path(graph, di.center, dj.center)

    positive = {e: p for e, p in paths.items() if p.length > 0.0}
    normalized, _ = enforce_consistency(positive)
    paths.update(normalized)

    meeting: dict[tuple[int, int], tuple[Point, float]] = {}
    for (i, j) in edges:
        d = dist[(i, j)]
        t_star = meeting_parameter(d, next(x.radius for x in ordered if x.id == i),
                                   next(x.radius for x in ordered if x.id == j))
        meeting[(i, j)] = (paths[(i, j)].point_at(t_star), t_star)

    return IntersectionGraph(free_space, graph, ordered, edges, dist, paths, meeting)


def ply_at_point(graph: VisibilityGraph, disks: list[GeodesicDisk], q: Point) -> int:
    """Number of disks containing q."""
    if not point_in_free_space(graph.free_space, q):
        raise DiskError(f"query point {tuple(q)} outside the free space")
    if not disks:
        return 0
    return len(disks_containing(graph, disks, q))


def disks_containing(graph: VisibilityGraph, disks: list[GeodesicDisk], q: Point,
                     vis_mask: np.ndarray | None = None) -> frozenset[int]:
    """Ids of the disks whose geodesic disk contains q (tolerance toward inside)."""
    if not disks:
        return frozenset()
    centers = np.array([(d.center.x, d.center.y) for d in disks])
    euclid = np.hypot(centers[:, 0] - q[0], centers[:, 1] - q[1])
    radii = np.array([d.radius for d in disks])
    near = np.flatnonzero(euclid <= radii + TOL)
    if len(near) == 0:
        return frozenset()
    sources = [graph.site_index(disks[k].center) for k in near]
    dists = graph.point_sites_distances(q, sources, vis_mask)
    return frozenset(disks[k].id for k, dgeo in zip(near, dists) if dgeo <= radii[k] + TOL)


class ContainmentIndex:
    """Candidate-point containment sets, computed once and filtered later.

    Ply reduction repeatedly asks for the ply of candidate points against a
    shrinking disk set; storing each candidate's full containing-id set makes
    those queries set intersections.
    """

    def __init__(self, graph: VisibilityGraph, disks: list[GeodesicDisk],
                 points: list[Point]):
        self.points = list(points)
        if disks and points:
            centers = np.array([(d.center.x, d.center.y) for d in disks])
            tree = cKDTree(centers)
            radii = np.array([d.radius for d in disks])
            rmax = float(radii.max()) if len(radii) else 0.0
            self.sets = []
            for q in points:
                near = tree.query_ball_point([q[0], q[1]], rmax + TOL)
                if not near:
                    self.sets.append(frozenset())
                    continue
                near = [k for k in near
                        if math.hypot(centers[k, 0] - q[0], centers[k, 1] - q[1]) <= radii[k] + TOL]
                if not near:
                    self.sets.append(frozenset())
                    continue
                vis = graph.visible_from_point(q)
                sources = [graph.site_index(disks[k].center) for k in near]
                dists = graph.point_sites_distances(q, sources, vis)
                self.sets.append(frozenset(
                    disks[k].id for k, dgeo in zip(near, dists) if dgeo <= radii[k] + TOL
                ))
        else:
            self.sets = [frozenset() for _ in points]

    def ply(self, idx: int, alive: frozenset[int] | set[int]) -> int:
        return len(self.sets[idx] & alive)


def candidate_points(g: IntersectionGraph, drawing_crossings: list[Point]) -> list[Point]:
    """Deduplicated centers, meeting points and path-crossing points.

    This finite set stands in for "all of F" when the pipeline hunts for
    high-ply points: every point the crossing-count argument inspects is in
    here.
    """
    from .metric import _PointRegistry

    registry = _PointRegistry(merge_radius=1e-9)
    order: list[int] = []
    seen: set[int] = set()
    for d in g.disks:
        node = registry.node(d.center)
        if node not in seen:
            seen.add(node)
            order.append(node)
    for e in sorted(g.edges):
        node = registry.node(g.meeting[e][0])
        if node not in seen:
            seen.add(node)
            order.append(node)
    for p in drawing_crossings:
        node = registry.node(Point(*p))
        if node not in seen:
            seen.add(node)
            order.append(node)
    pts = [registry.points[k] for k in order]
    return [p for p in pts if point_in_free_space(g.free_space, p)]
