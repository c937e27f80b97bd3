"""The shortest-path metric of the free space.

A single visibility graph over all polygon vertices and registered sites
realizes the metric.  Shortest paths are made unique by ordering candidate
paths by (length, hop count, perturbation key): the perturbation key treats
visibility arc i as carrying an extra infinitesimal 2**i of length, so ties
resolve to the path whose arc-id set is smallest as a sum of powers of two.
That order is symmetric and closed under subpaths, which is what makes the
realized path system consistent (any two paths meet in one connected piece).

The metric sits behind a small surface (distances, paths, point-to-site
fields) so a different metric engine can be swapped in later.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .geometry import EPS, Point, PolygonWithHoles


class MetricError(ValueError):
    """Bad metric input: unregistered or out-of-free-space site."""


class UnreachableSiteError(RuntimeError):
    """No path between two sites; the free space is not path-connected."""


class InconsistentPathSystemError(RuntimeError):
    """A pair of realized paths meets in more than one connected piece."""

    def __init__(self, pair_a, pair_b):
        self.pair = (pair_a, pair_b)
        super().__init__(f"paths {pair_a} and {pair_b} intersect in multiple components")


@dataclass(frozen=True)
class GeodesicPath:
    """Polyline realization of a geodesic between two registered sites."""

    vertices: tuple[Point, ...]
    length: float

    def arclengths(self) -> list[float]:
        out = [0.0]
        for a, b in zip(self.vertices, self.vertices[1:]):
            out.append(out[-1] + a.dist(b))
        return out

    def point_at(self, s: float) -> Point:
        """Point at arclength s from the first vertex."""
        if s <= 0.0:
            return self.vertices[0]
        acc = 0.0
        for a, b in zip(self.vertices, self.vertices[1:]):
            step = a.dist(b)
            if acc + step >= s or b is self.vertices[-1]:
                if step <= 0.0:
                    return b
                t = min(1.0, (s - acc) / step)
                return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
            acc += step
        return self.vertices[-1]


class VisibilityGraph:
    """Immutable visibility graph over polygon vertices plus registered sites."""

    def __init__(self, free_space: PolygonWithHoles, sites: np.ndarray,
                 site_lookup: dict[tuple[float, float], int],
                 indptr: np.ndarray, indices: np.ndarray,
                 weights: np.ndarray, arc_ids: np.ndarray, n_arcs: int):
        self.free_space = free_space
        self.sites = sites
        self._lookup = site_lookup
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        self.arc_ids = arc_ids
        self.n_arcs = n_arcs
        self._trees: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def site_index(self, p: Point) -> int:
        try:
            return self._lookup[(float(p[0]), float(p[1]))]
        except KeyError:
            raise MetricError(f"point {tuple(p)} is not a registered site") from None

    def site_point(self, idx: int) -> Point:
        return Point(float(self.sites[idx, 0]), float(self.sites[idx, 1]))

    def tree(self, source: int):
        """Shortest-path tree (dist, hops, parent, parent_arc_pos) from a site."""
        cached = self._trees.get(source)
        if cached is None:
            cached = kernels.dijkstra(
                self.indptr, self.indices, self.weights, self.arc_ids,
                source, self.n_sites,
            )
            self._trees[source] = cached
        return cached

    def site_distances(self, source: int) -> np.ndarray:
        return self.tree(source)[0]

    def path_site_indices(self, source: int, target: int) -> list[int]:
        """Vertex-index sequence of the selected geodesic from source to target."""
        dist, _, parent, _ = self.tree(source)
        if not math.isfinite(dist[target]):
            raise UnreachableSiteError(
                f"site {target} unreachable from {source}: free space is not connected"
            )
        seq = [target]
        while seq[-1] != source:
            seq.append(int(parent[seq[-1]]))
        seq.reverse()
        return seq

    def visible_from_point(self, q: Point) -> np.ndarray:
        """Mask of sites directly visible from an arbitrary free-space point."""
        return kernels.visible_from(
            self.free_space.verts, self.free_space.ring_start, q[0], q[1], self.sites
        )

    def point_site_distance(self, q: Point, source: int,
                            vis_mask: np.ndarray | None = None) -> float:
        """Geodesic distance from an arbitrary point of F to a site."""
        if vis_mask is None:
            vis_mask = self.visible_from_point(q)
        vis = np.flatnonzero(vis_mask)
        if len(vis) == 0:
            return math.inf
        d = self.site_distances(source)
        euclid = np.hypot(self.sites[vis, 0] - q[0], self.sites[vis, 1] - q[1])
        return float(np.min(euclid + d[vis]))

    def point_sites_distances(self, q: Point, sources: Sequence[int],
                              vis_mask: np.ndarray | None = None) -> np.ndarray:
        """Distances from one point to several sites at once."""
        if vis_mask is None:
            vis_mask = self.visible_from_point(q)
        vis = np.flatnonzero(vis_mask)
        out = np.full(len(sources), np.inf)
        if len(vis) == 0:
            return out
        euclid = np.hypot(self.sites[vis, 0] - q[0], self.sites[vis, 1] - q[1])
        for k, src in enumerate(sources):
            d = self.site_distances(src)
            out[k] = float(np.min(euclid + d[vis]))
        return out


def build_visibility_graph(free_space: PolygonWithHoles,
                           sites: Iterable[Point]) -> VisibilityGraph:
    """Visibility graph over the polygon vertices and the given sites.

    Raises MetricError naming the first site that lies outside F.
    """
    points: list[Point] = []
    lookup: dict[tuple[float, float], int] = {}

    def register(p: Point):
        key = (float(p[0]), float(p[1]))
        if key not in lookup:
            lookup[key] = len(points)
            points.append(Point(*key))

    for v in free_space.all_vertices():
        register(v)
    for k, p in enumerate(sites):
        if not kernels.point_free(free_space.verts, free_space.ring_start, p[0], p[1]):
            raise MetricError(f"site {k} at {tuple(p)} lies outside the free space")
        register(Point(*p))

    arr = np.ascontiguousarray(np.array(points, dtype=np.float64))
    mask = kernels.visible_pairs(free_space.verts, free_space.ring_start, arr)

    n = len(points)
    adjacency: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
    arc_count = 0
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if mask[k]:
                w = points[i].dist(points[j])
                adjacency[i].append((j, w, arc_count))
                adjacency[j].append((i, w, arc_count))
                arc_count += 1
            k += 1

    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        indptr[i + 1] = indptr[i] + len(adjacency[i])
    indices = np.zeros(indptr[-1], dtype=np.int64)
    weights = np.zeros(indptr[-1], dtype=np.float64)
    arc_ids = np.zeros(indptr[-1], dtype=np.int64)
    for i in range(n):
        base = indptr[i]
        for off, (j, w, aid) in enumerate(adjacency[i]):
            indices[base + off] = j
            weights[base + off] = w
            arc_ids[base + off] = aid

    return VisibilityGraph(free_space, arr, lookup, indptr, indices, weights, arc_ids, arc_count)


def geodesic_distance(graph: VisibilityGraph, s: Point, t: Point) -> float:
    """Length of the geodesic between two registered sites."""
    si = graph.site_index(s)
    ti = graph.site_index(t)
    if si == ti:
        return 0.0
    lo, hi = (si, ti) if si < ti else (ti, si)
    d = graph.site_distances(lo)[hi]
    if not math.isfinite(d):
        raise UnreachableSiteError(f"no path between {tuple(s)} and {tuple(t)}")
    return float(d)


def geodesic_shortest_path(graph: VisibilityGraph, s: Point, t: Point) -> GeodesicPath:
    """The selected geodesic between two registered sites, oriented s -> t."""
    si = graph.site_index(s)
    ti = graph.site_index(t)
    if si == ti:
        return GeodesicPath((graph.site_point(si),), 0.0)
    lo, hi = (si, ti) if si < ti else (ti, si)
    seq = graph.path_site_indices(lo, hi)
    if si != lo:
        seq = seq[::-1]
    pts = tuple(graph.site_point(i) for i in seq)
    return GeodesicPath(pts, float(graph.site_distances(lo)[hi]))


# ---------------------------------------------------------------------------
# Path-system consistency


class _PointRegistry:
    """Snaps nearly identical coordinates onto shared node ids."""

    def __init__(self, merge_radius: float = 1e-8):
        self.r = merge_radius
        self._grid: dict[tuple[int, int], list[int]] = {}
        self.points: list[Point] = []

    def node(self, p: Point) -> int:
        cx = int(math.floor(p[0] / (4 * self.r)))
        cy = int(math.floor(p[1] / (4 * self.r)))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self._grid.get((cx + dx, cy + dy), ()):
                    q = self.points[idx]
                    if abs(q.x - p[0]) <= self.r and abs(q.y - p[1]) <= self.r:
                        return idx
        idx = len(self.points)
        self.points.append(Point(float(p[0]), float(p[1])))
        self._grid.setdefault((cx, cy), []).append(idx)
        return idx


def _flatten_paths(paths: dict):
    """Segment soup over all paths: coordinates, owner path, arclen prefix."""
    keys = sorted(paths)
    segs = []
    owner = []
    seg_start = []  # arclength of segment start within its path
    seg_of_path: dict = {k: [] for k in keys}
    for pi, key in enumerate(keys):
        verts = paths[key].vertices
        acc = 0.0
        for a, b in zip(verts, verts[1:]):
            seg_of_path[key].append(len(segs))
            segs.append((a.x, a.y, b.x, b.y))
            owner.append(pi)
            seg_start.append(acc)
            acc += a.dist(b)
    if not segs:
        return keys, np.zeros((0, 4)), np.zeros(0, dtype=np.int64), [], seg_of_path
    return (keys, np.ascontiguousarray(np.array(segs, dtype=np.float64)),
            np.array(owner, dtype=np.int64), seg_start, seg_of_path)


def path_pair_components(paths: dict) -> dict:
    """Connected intersection components for every meeting pair of paths.

    Returns {(key_a, key_b): [(a_lo, a_hi, b_lo, b_hi), ...]} with arclength
    intervals along each path, components sorted along path a.
    """
    keys, segs, owner, seg_start, _ = _flatten_paths(paths)
    out: dict = {}
    if len(segs) == 0:
        return out
    lens = np.hypot(segs[:, 2] - segs[:, 0], segs[:, 3] - segs[:, 1])
    cell = max(float(np.median(lens)), 1e-6)
    ia, ib = kernels.crossing_candidates(segs, owner, cell)
    raw: dict = {}
    for i, j in zip(ia, ib):
        kind, t0, t1, u0, u1 = kernels.segment_classify(
            segs[i, 0], segs[i, 1], segs[i, 2], segs[i, 3],
            segs[j, 0], segs[j, 1], segs[j, 2], segs[j, 3],
        )
        if kind == kernels.DISJOINT:
            continue
        li = float(lens[i])
        lj = float(lens[j])
        a0 = seg_start[i] + t0 * li
        a1 = seg_start[i] + t1 * li
        b0 = seg_start[j] + u0 * lj
        b1 = seg_start[j] + u1 * lj
        pa, pb = int(owner[i]), int(owner[j])
        ka, kb = keys[pa], keys[pb]
        if kb < ka:
            ka, kb = kb, ka
            a0, a1, b0, b1 = b0, b1, a0, a1
        raw.setdefault((ka, kb), []).append(
            (min(a0, a1), max(a0, a1), min(b0, b1), max(b0, b1))
        )
    tol = 1e-9
    for pair, recs in raw.items():
        recs.sort()
        merged = []
        for rec in recs:
            if merged and rec[0] <= merged[-1][1] + tol:
                last = merged[-1]
                merged[-1] = (
                    last[0], max(last[1], rec[1]),
                    min(last[2], rec[2]), max(last[3], rec[3]),
                )
            else:
                merged.append(rec)
        # a merge along path a must also be connected along path b; if two
        # pieces are adjacent on b but were kept apart on a, join them too
        changed = True
        while changed:
            changed = False
            for x in range(len(merged)):
                for y in range(x + 1, len(merged)):
                    ax = merged[x]
                    ay = merged[y]
                    touch_a = ay[0] <= ax[1] + tol and ax[0] <= ay[1] + tol
                    touch_b = ay[2] <= ax[3] + tol and ax[2] <= ay[3] + tol
                    if touch_a and touch_b:
                        merged[x] = (
                            min(ax[0], ay[0]), max(ax[1], ay[1]),
                            min(ax[2], ay[2]), max(ax[3], ay[3]),
                        )
                        del merged[y]
                        changed = True
                        break
                if changed:
                    break
        out[pair] = merged
    return out


def inconsistent_pairs(components: dict) -> list:
    return sorted(pair for pair, comps in components.items() if len(comps) > 1)


def simplify_polyline(vertices: Sequence[Point]) -> tuple[Point, ...]:
    """Drop interior vertices where the polyline continues straight."""
    if len(vertices) <= 2:
        return tuple(vertices)
    kept = [vertices[0]]
    for i in range(1, len(vertices) - 1):
        a = kept[-1]
        v = vertices[i]
        b = vertices[i + 1]
        straight = (
            kernels.orient_sign(a.x, a.y, b.x, b.y, v.x, v.y) == 0
            and (v.x - a.x) * (b.x - v.x) + (v.y - a.y) * (b.y - v.y) >= 0.0
        )
        if not straight:
            kept.append(v)
    kept.append(vertices[-1])
    return tuple(kept)


def enforce_consistency(paths: dict) -> tuple[dict, bool]:
    """Reroute paths so every pair meets in at most one connected piece.

    Splits every path at every pairwise meeting-component endpoint, forming a
    graph of shared fragments, then re-selects each path as the unique
    (length, hops, perturbation-key) optimum inside that graph.  Lengths are
    preserved, so the rerouted paths are still geodesics.  Returns the new
    path dict and whether anything changed.
    """
    components = path_pair_components(paths)
    if not inconsistent_pairs(components):
        return paths, False

    keys = sorted(paths)
    cuts: dict = {k: {0.0, paths[k].length} for k in keys}
    for (ka, kb), comps in components.items():
        for a0, a1, b0, b1 in comps:
            cuts[ka].update((a0, a1))
            cuts[kb].update((b0, b1))

    registry = _PointRegistry()
    frag_map: dict = {}
    frag_polys: list[list[Point]] = []
    frag_len: list[float] = []
    endpoints_of: dict = {}

    for k in keys:
        path = paths[k]
        arcs = path.arclengths()
        stops = sorted(cuts[k])
        # merge stops closer than tolerance
        merged_stops = [stops[0]]
        for s in stops[1:]:
            if s - merged_stops[-1] > 1e-9:
                merged_stops.append(s)
        merged_stops[-1] = path.length
        node_seq = []
        for s in merged_stops:
            node_seq.append(registry.node(path.point_at(s)))
        endpoints_of[k] = (node_seq[0], node_seq[-1])
        for piece_i in range(len(merged_stops) - 1):
            s0 = merged_stops[piece_i]
            s1 = merged_stops[piece_i + 1]
            na, nb = node_seq[piece_i], node_seq[piece_i + 1]
            if na == nb:
                continue
            poly = _sub_polyline(path, arcs, s0, s1)
            mid = poly_point_at_fraction(poly, 0.5)
            fkey = (min(na, nb), max(na, nb), round(mid.x, 6), round(mid.y, 6))
            if fkey not in frag_map:
                frag_map[fkey] = len(frag_polys)
                frag_polys.append(poly if na < nb else poly[::-1])
                frag_len.append(sum(a.dist(b) for a, b in zip(poly, poly[1:])))

    n_nodes = len(registry.points)
    order = sorted(frag_map)
    adjacency: list[list[tuple[int, float, int]]] = [[] for _ in range(n_nodes)]
    frag_by_arc: list[int] = []
    for aid, fkey in enumerate(order):
        fi = frag_map[fkey]
        na, nb = fkey[0], fkey[1]
        adjacency[na].append((nb, frag_len[fi], aid))
        adjacency[nb].append((na, frag_len[fi], aid))
        frag_by_arc.append(fi)

    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    for i in range(n_nodes):
        indptr[i + 1] = indptr[i] + len(adjacency[i])
    indices = np.zeros(indptr[-1], dtype=np.int64)
    weights = np.zeros(indptr[-1], dtype=np.float64)
    arc_ids = np.zeros(indptr[-1], dtype=np.int64)
    arc_other: dict[tuple[int, int], int] = {}
    for i in range(n_nodes):
        base = indptr[i]
        for off, (j, w, aid) in enumerate(adjacency[i]):
            indices[base + off] = j
            weights[base + off] = w
            arc_ids[base + off] = aid
            arc_other[(i, aid)] = j

    trees: dict[int, tuple] = {}

    def tree(src: int):
        if src not in trees:
            trees[src] = kernels.dijkstra(indptr, indices, weights, arc_ids, src, n_nodes)
        return trees[src]

    new_paths = {}
    changed = False
    for k in keys:
        na, nb = endpoints_of[k]
        if na == nb:
            new_paths[k] = paths[k]
            continue
        src, dst = (na, nb) if na < nb else (nb, na)
        dist, _, parent, ppos = tree(src)
        chain = []
        node = dst
        while node != src:
            pos = int(ppos[node])
            chain.append((int(parent[node]), node, int(arc_ids[pos])))
            node = int(parent[node])
        chain.reverse()
        verts: list[Point] = [registry.points[src]]
        for u, v, aid in chain:
            poly = frag_polys[frag_by_arc[aid]]
            lo = min(u, v)
            piece = list(poly) if u == lo else list(poly[::-1])
            verts.extend(piece[1:])
        if na != src:
            verts.reverse()
        simplified = simplify_polyline(verts)
        new_path = GeodesicPath(simplified, paths[k].length)
        if simplified != paths[k].vertices:
            changed = True
        new_paths[k] = new_path

    final_components = path_pair_components(new_paths)
    bad = inconsistent_pairs(final_components)
    if bad:
        raise InconsistentPathSystemError(*bad[0])
    return new_paths, changed


def _sub_polyline(path: GeodesicPath, arcs: list[float], s0: float, s1: float) -> list[Point]:
    pts = [path.point_at(s0)]
    for v, s in zip(path.vertices, arcs):
        if s0 + 1e-12 < s < s1 - 1e-12:
            pts.append(v)
    pts.append(path.point_at(s1))
    return pts


def poly_point_at_fraction(poly: Sequence[Point], frac: float) -> Point:
    total = sum(a.dist(b) for a, b in zip(poly, poly[1:]))
    target = frac * total
    acc = 0.0
    for a, b in zip(poly, poly[1:]):
        step = a.dist(b)
        if acc + step >= target:
            if step <= 0:
                return b
            t = (target - acc) / step
            return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
        acc += step
    return Point(*poly[-1])
