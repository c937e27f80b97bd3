"""Drawings of realized edge paths: crossings, roundabout planarization,
and the crossing-ply audit.

The planarization never computes explicit clearance radii.  Every point
shared by two or more path strands (proper crossings, shared bend vertices,
overlap endpoints) becomes a small combinatorial roundabout: incident road
segments are sorted by direction, each strand passing the point is drawn as
a chord through a unit disk, and chord intersections become the crossing
vertices.  Strands on a shared road keep one global lateral order, so a pair
of paths can only cross where their routes diverge, at most twice overall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .disks import IntersectionGraph, disks_containing
from .geometry import Point
from .metric import (
    GeodesicPath,
    InconsistentPathSystemError,
    _PointRegistry,
    inconsistent_pairs,
    path_pair_components,
    simplify_polyline,
)

_POINT_TOL = 1e-9
_GOLDEN = 0.6180339887498949


@dataclass(frozen=True)
class PathDrawing:
    """The set of realized edge paths, with owners and split points."""

    graph: IntersectionGraph
    strands: dict  # edge -> GeodesicPath, positive length only
    split: dict    # edge -> (meeting point, arclength from the lower-id center)
    trivial_edges: tuple  # zero-length edges (coincident centers)

    def owner(self, edge) -> tuple[int, int]:
        return edge

    def half_disk(self, edge, s: float) -> int:
        """Disk owning the path point at arclength s (lower-id side wins ties)."""
        t_star = self.split[edge][1]
        return edge[0] if s <= t_star + _POINT_TOL else edge[1]


@dataclass(frozen=True)
class Crossing:
    location: Point
    edge_a: tuple[int, int]
    edge_b: tuple[int, int]
    param_a: float  # arclength along edge_a's path
    param_b: float
    lam1: int
    lam2: int


@dataclass(frozen=True)
class AuditReport:
    crossing_count: int
    total_ply: int
    max_ply: int
    label_histogram: dict[int, int]


def realize_drawing(g: IntersectionGraph) -> PathDrawing:
    """Wrap the graph's realized paths as a drawing."""
    strands = {}
    split = {}
    trivial = []
    for e in sorted(g.edges):
        path = g.paths[e]
        if path.length <= 0.0:
            trivial.append(e)
            continue
        strands[e] = path
        split[e] = g.meeting[e]
    return PathDrawing(g, strands, split, tuple(trivial))


def find_crossings(drawing: PathDrawing) -> list[Crossing]:
    """Transversal crossings between realized paths.

    Shared subpaths, shared endpoints and shared bend vertices do not count;
    a crossing is an isolated meeting point interior to a segment of both
    paths.  Labels count crossings (inclusively, with multiplicity) on the
    stretch between the crossing and each path's meeting point.
    """
    comps = path_pair_components(drawing.strands)
    vertex_arcs = {e: p.arclengths() for e, p in drawing.strands.items()}

    raw = []
    for (ka, kb), pieces in sorted(comps.items()):
        for a0, a1, b0, b1 in pieces:
            if a1 - a0 > _POINT_TOL or b1 - b0 > _POINT_TOL:
                continue
            sa = 0.5 * (a0 + a1)
            sb = 0.5 * (b0 + b1)
            if _near_vertex(sa, vertex_arcs[ka]) or _near_vertex(sb, vertex_arcs[kb]):
                continue
            raw.append((ka, kb, sa, sb))

    per_path: dict = {}
    for idx, (ka, kb, sa, sb) in enumerate(raw):
        per_path.setdefault(ka, []).append((sa, idx))
        per_path.setdefault(kb, []).append((sb, idx))

    def count_between(edge, s: float) -> int:
        t_star = drawing.split[edge][1]
        lo, hi = (s, t_star) if s <= t_star else (t_star, s)
        return sum(
            1 for (t, _) in per_path.get(edge, ())
            if lo - _POINT_TOL <= t <= hi + _POINT_TOL
        )

    out = []
    for ka, kb, sa, sb in raw:
        out.append(Crossing(
            location=drawing.strands[ka].point_at(sa),
            edge_a=ka, edge_b=kb, param_a=sa, param_b=sb,
            lam1=count_between(ka, sa), lam2=count_between(kb, sb),
        ))
    return out


def _near_vertex(s: float, arcs: list[float]) -> bool:
    return any(abs(s - a) <= _POINT_TOL for a in arcs)


def crossing_audit(drawing: PathDrawing, disks) -> AuditReport:
    """Measured crossing statistics: |X|, total crossing ply, label histogram."""
    crossings = find_crossings(drawing)
    graph = drawing.graph.graph
    total = 0
    worst = 0
    hist: dict[int, int] = {}
    for x in crossings:
        ply = len(disks_containing(graph, list(disks), x.location))
        total += ply
        worst = max(worst, ply)
        lab = min(x.lam1, x.lam2)
        hist[lab] = hist.get(lab, 0) + 1
    return AuditReport(len(crossings), total, worst, hist)


# ---------------------------------------------------------------------------
# Planarization


@dataclass(frozen=True)
class PlanarVertex:
    id: int
    tag: str  # "center" | "lane" | "crossing"
    anchor: Point
    owner_paths: tuple
    owner_disks: frozenset


class PlanarizedGraph:
    """Plane multigraph of the drawing after roundabout expansion."""

    def __init__(self, vertices, arcs, arc_angles, center_vertex, path_walk,
                 disk_ids, roads):
        self.vertices: list[PlanarVertex] = vertices
        self.arcs: list[tuple[int, int]] = arcs
        self.arc_angles: list[tuple[float, float]] = arc_angles
        self.center_vertex: dict[int, int] = center_vertex
        self.path_walk: dict = path_walk
        self.disk_ids: list[int] = disk_ids
        self.roads: list[tuple[Point, Point]] = roads
        self.adjacency: dict[int, list[int]] = {v.id: [] for v in vertices}
        for u, v in arcs:
            self.adjacency[u].append(v)
            self.adjacency[v].append(u)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def rotation(self, vid: int) -> list[int]:
        """Incident arcs ordered counterclockwise by direction angle."""
        entries = []
        for aid, (u, v) in enumerate(self.arcs):
            if u == vid:
                entries.append((self.arc_angles[aid][0], aid))
            elif v == vid:
                entries.append((self.arc_angles[aid][1], aid))
        entries.sort()
        return [aid for _, aid in entries]

    def owners_of(self, vid: int) -> frozenset[int]:
        return self.vertices[vid].owner_disks


class _Strand:
    __slots__ = ("edge", "path", "arcs", "events", "nodes")

    def __init__(self, edge, path: GeodesicPath):
        self.edge = edge
        self.path = path
        self.arcs = path.arclengths()
        self.events: list[float] = []   # merged arclengths of gadget points
        self.nodes: list[int] = []      # registry node per event


def planarize(drawing: PathDrawing) -> PlanarizedGraph:
    """Expand every shared point of the drawing into a roundabout gadget.

    Raises InconsistentPathSystemError when some pair of paths meets in more
    than one connected piece (the realized system from the tie-broken metric
    never does).
    """
    comps = path_pair_components(drawing.strands)
    bad = inconsistent_pairs(comps)
    if bad:
        raise InconsistentPathSystemError(*bad[0])

    registry = _PointRegistry(merge_radius=1e-8)
    strands: dict = {e: _Strand(e, p) for e, p in sorted(drawing.strands.items())}

    cuts: dict = {e: {0.0, s.path.length} for e, s in strands.items()}
    for e, s in strands.items():
        for a in s.arcs[1:-1]:
            cuts[e].add(a)
    for (ka, kb), pieces in comps.items():
        for a0, a1, b0, b1 in pieces:
            cuts[ka].update((a0, a1))
            cuts[kb].update((b0, b1))

    for e, s in strands.items():
        stops = sorted(cuts[e])
        merged = [stops[0]]
        for t in stops[1:]:
            if t - merged[-1] > _POINT_TOL:
                merged.append(t)
        merged[-1] = s.path.length
        nodes = []
        events = []
        for t in merged:
            nid = registry.node(s.path.point_at(t))
            if nodes and nid == nodes[-1]:
                continue
            nodes.append(nid)
            events.append(t)
        s.events = events
        s.nodes = nodes

    # strands whose endpoints merge in the registry behave like trivial edges
    trivial = list(drawing.trivial_edges)
    for e in [e for e, s in strands.items() if len(s.nodes) < 2]:
        trivial.append(e)
        del strands[e]

    # roads: deduplicated straight pieces between consecutive gadget points
    road_index: dict[tuple[int, int], int] = {}
    road_nodes: list[tuple[int, int]] = []
    road_strands: list[list] = []  # entries (edge, forward) sorted later
    strand_pieces: dict = {e: [] for e in strands}
    for e, s in sorted(strands.items()):
        for k in range(len(s.nodes) - 1):
            na, nb = s.nodes[k], s.nodes[k + 1]
            key = (na, nb) if na < nb else (nb, na)
            rid = road_index.get(key)
            if rid is None:
                rid = len(road_nodes)
                road_index[key] = rid
                road_nodes.append(key)
                road_strands.append([])
            road_strands[rid].append((e, na == key[0]))
            strand_pieces[e].append(rid)

    for lst in road_strands:
        lst.sort(key=lambda t: t[0])

    # lateral offsets in the road frame (lo -> hi)
    def lateral(rid: int, edge) -> float:
        lst = road_strands[rid]
        k = next(i for i, (e, _) in enumerate(lst) if e == edge)
        return k - 0.5 * (len(lst) - 1)

    # ------------------------------------------------------------------
    # vertices
    vertices: list[PlanarVertex] = []
    arcs: list[tuple[int, int]] = []
    arc_angles: list[tuple[float, float]] = []

    def new_vertex(tag, anchor, owner_paths, owner_disks) -> int:
        vid = len(vertices)
        vertices.append(PlanarVertex(vid, tag, anchor, tuple(owner_paths),
                                     frozenset(owner_disks)))
        return vid

    def add_arc(u, v, ang_u, ang_v):
        arcs.append((u, v))
        arc_angles.append((ang_u, ang_v))

    g = drawing.graph
    disk_ids = [d.id for d in g.disks]
    center_vertex: dict[int, int] = {}
    center_node: dict[int, int] = {}
    for d in g.disks:
        nid = registry.node(d.center)
        center_node[d.id] = nid
        center_vertex[d.id] = new_vertex("center", d.center, (), {d.id})

    # group strand passes by gadget node
    passes_at: dict[int, list] = {}
    for e, s in strands.items():
        for k, nid in enumerate(s.nodes):
            in_rid = strand_pieces[e][k - 1] if k > 0 else None
            out_rid = strand_pieces[e][k] if k < len(s.nodes) - 1 else None
            passes_at.setdefault(nid, []).append((e, k, in_rid, out_rid))

    # per-strand chain of vertex ids inside each gadget, keyed (edge, event k)
    chain_at: dict = {}

    for nid in sorted(passes_at):
        plist = sorted(passes_at[nid], key=lambda t: (t[0], t[1]))
        origin = registry.points[nid]

        # local road directions and the angular budget for slot fans
        road_dir: dict[int, tuple[float, float]] = {}
        for e, k, in_rid, out_rid in plist:
            for rid in (in_rid, out_rid):
                if rid is None or rid in road_dir:
                    continue
                other = road_nodes[rid][0] if road_nodes[rid][1] == nid else road_nodes[rid][1]
                q = registry.points[other]
                dx, dy = q.x - origin.x, q.y - origin.y
                norm = math.hypot(dx, dy)
                road_dir[rid] = (dx / norm, dy / norm)
        angles = sorted(math.atan2(dy, dx) for dx, dy in road_dir.values())
        min_gap = 2 * math.pi
        for i in range(len(angles)):
            gap = (angles[(i + 1) % len(angles)] - angles[i]) % (2 * math.pi)
            if 1e-12 < gap < min_gap:
                min_gap = gap
        spread = min(1e-3, 0.2 * min_gap)

        jitter_rank: dict = {}

        def boundary_point(rid: int, edge) -> tuple[float, float]:
            dx, dy = road_dir[rid]
            lo, hi = road_nodes[rid]
            # lateral frame follows the road's lo -> hi direction globally
            if lo == nid:
                fx, fy = dx, dy
            else:
                fx, fy = -dx, -dy
            lat = lateral(rid, edge) * spread
            px = dx + lat * (-fy)
            py = dy + lat * fx
            key = (rid, edge)
            rank = jitter_rank.setdefault(key, len(jitter_rank))
            ang = math.atan2(py, px) + 1e-7 * math.modf(_GOLDEN * (rank + 1))[0]
            return (math.cos(ang), math.sin(ang))

        # center endpoints sit near the gadget origin
        local_center: dict[int, tuple[float, float]] = {}
        here_disks = sorted(d for d, cn in center_node.items() if cn == nid)
        for rank, did in enumerate(here_disks):
            local_center[did] = (1e-4 * rank, 0.0)

        chords = []  # (edge, k, p0, p1, kind) kind: entry->exit orientation
        for e, k, in_rid, out_rid in plist:
            if in_rid is not None and out_rid is not None:
                p0 = boundary_point(in_rid, e)
                p1 = boundary_point(out_rid, e)
                chords.append((e, k, p0, p1, "through"))
            elif out_rid is not None:  # path start: chord from center out
                did = e[0]
                p0 = local_center[did]
                p1 = boundary_point(out_rid, e)
                chords.append((e, k, p0, p1, "start"))
            elif in_rid is not None:  # path end
                did = e[1]
                p0 = boundary_point(in_rid, e)
                p1 = local_center[did]
                chords.append((e, k, p0, p1, "end"))
            else:
                chords.append((e, k, None, None, "isolated"))

        # chord pairwise intersections in the local frame
        events_on: dict[int, list] = {i: [] for i in range(len(chords))}
        for i in range(len(chords)):
            ei, ki, a0, a1, kind_i = chords[i]
            if a0 is None:
                continue
            for j in range(i + 1, len(chords)):
                ej, kj, b0, b1, kind_j = chords[j]
                if b0 is None or ei == ej:
                    continue
                hit = _open_segment_cross(a0, a1, b0, b1)
                if hit is None:
                    continue
                ti, tj = hit
                si = strands[ei].events[ki]
                sj = strands[ej].events[kj]
                vid = new_vertex(
                    "crossing", origin, (ei, ej),
                    {drawing.half_disk(ei, si), drawing.half_disk(ej, sj)},
                )
                events_on[i].append((ti, vid))
                events_on[j].append((tj, vid))

        for i, (e, k, p0, p1, kind) in enumerate(chords):
            s_here = strands[e].events[k]
            own = {drawing.half_disk(e, s_here)}
            chain: list[int] = []
            if kind in ("through", "isolated"):
                lane = new_vertex("lane", origin, (e,), own)
                events = sorted(events_on[i] + [(0.5, lane)])
                chain = [vid for _, vid in events]
            elif kind == "start":
                events = sorted(events_on[i])
                chain = [center_vertex[e[0]]] + [vid for _, vid in events]
            elif kind == "end":
                events = sorted(events_on[i])
                chain = [vid for _, vid in events] + [center_vertex[e[1]]]
            chain_at[(e, k)] = chain
            ang = math.atan2(p1[1] - p0[1], p1[0] - p0[0]) if p0 is not None else 0.0
            for u, v in zip(chain, chain[1:]):
                add_arc(u, v, ang, ang + math.pi)

    # road arcs stitch gadget chains together
    for e, s in sorted(strands.items()):
        for k in range(len(s.nodes) - 1):
            u = chain_at[(e, k)][-1]
            v = chain_at[(e, k + 1)][0]
            a = registry.points[s.nodes[k]]
            b = registry.points[s.nodes[k + 1]]
            ang = math.atan2(b.y - a.y, b.x - a.x)
            add_arc(u, v, ang, ang + math.pi)

    # coincident-center edges keep their graph connection through a trivial arc
    for (i, j) in trivial:
        add_arc(center_vertex[i], center_vertex[j], 0.0, math.pi)

    path_walk: dict = {}
    for e, s in strands.items():
        walk: list[int] = []
        for k in range(len(s.nodes)):
            walk.extend(chain_at[(e, k)])
        path_walk[e] = walk
    for e in trivial:
        path_walk[e] = [center_vertex[e[0]], center_vertex[e[1]]]

    roads = [(registry.points[a], registry.points[b]) for a, b in road_nodes]
    return PlanarizedGraph(vertices, arcs, arc_angles, center_vertex, path_walk,
                           disk_ids, roads)


def _open_segment_cross(a0, a1, b0, b1):
    """Strict interior crossing of two local-frame segments, or None."""
    r = (a1[0] - a0[0], a1[1] - a0[1])
    s = (b1[0] - b0[0], b1[1] - b0[1])
    denom = r[0] * s[1] - r[1] * s[0]
    if denom == 0.0:
        return None
    qp = (b0[0] - a0[0], b0[1] - a0[1])
    t = (qp[0] * s[1] - qp[1] * s[0]) / denom
    u = (qp[0] * r[1] - qp[1] * r[0]) / denom
    if 1e-12 < t < 1.0 - 1e-12 and 1e-12 < u < 1.0 - 1e-12:
        return (t, u)
    return None


def check_plane_graph(pg: PlanarizedGraph, drawing: PathDrawing) -> list[str]:
    """Validity battery: geometric road disjointness, owner invariants,
    abstract planarity, path recoverability.  Returns violations."""
    import networkx as nx

    from . import kernels

    violations: list[str] = []

    # roads may only meet at shared gadget endpoints
    segs = np.array([(a.x, a.y, b.x, b.y) for a, b in pg.roads], dtype=np.float64)
    if len(segs):
        owner = np.arange(len(segs), dtype=np.int64)
        lens = np.hypot(segs[:, 2] - segs[:, 0], segs[:, 3] - segs[:, 1])
        cell = max(float(np.median(lens)), 1e-6)
        ia, ib = kernels.crossing_candidates(np.ascontiguousarray(segs), owner, cell)
        for i, j in zip(ia, ib):
            kind, t0, t1, u0, u1 = kernels.segment_classify(*segs[i], *segs[j])
            if kind == kernels.DISJOINT:
                continue
            if kind in (kernels.PROPER, kernels.OVERLAP):
                violations.append(f"roads {i} and {j} intersect improperly ({kind})")
            else:
                on_end = (t0 <= 1e-7 or t0 >= 1 - 1e-7) and (u0 <= 1e-7 or u0 >= 1 - 1e-7)
                if not on_end:
                    violations.append(f"roads {i} and {j} touch away from endpoints")

    for v in pg.vertices:
        if v.tag == "lane" and len(v.owner_paths) != 1:
            violations.append(f"lane vertex {v.id} has {len(v.owner_paths)} owner paths")
        if v.tag == "crossing" and len(v.owner_paths) != 2:
            violations.append(f"crossing vertex {v.id} has {len(v.owner_paths)} owner paths")
        if len(v.owner_disks) > 2:
            violations.append(f"vertex {v.id} owned by {len(v.owner_disks)} disks")

    # parallel arcs are fine (side-by-side lanes); planarity is decided on
    # the simple collapse, which parallels cannot break
    graph = nx.Graph()
    graph.add_nodes_from(range(pg.n))
    graph.add_edges_from(pg.arcs)
    planar, _ = nx.check_planarity(graph)
    if not planar:
        violations.append("planarized graph is not planar")

    for e, walk in pg.path_walk.items():
        if e in drawing.strands:
            anchors = [pg.vertices[v].anchor for v in walk
                       if pg.vertices[v].tag in ("center", "lane")]
            if simplify_polyline(anchors) != tuple(drawing.strands[e].vertices):
                violations.append(f"path walk for edge {e} does not recover the polyline")
        for u, v in zip(walk, walk[1:]):
            if v not in pg.adjacency[u]:
                violations.append(f"path walk for edge {e} uses a missing arc {u}-{v}")
    return violations
