"""Brute-force lattice checker for geodesic distances.

Lays a square lattice of spacing h over the free space, connects valid nodes
by straight moves up to coprime steps of size 4 (axis, diagonal, knight and
longer moves; the richer move set keeps the directional overshoot of lattice
paths below one percent), and runs plain Dijkstra on the result.  Query
points join the lattice through short validated links, plus a direct edge
when the two endpoints see each other.  Completely independent of the
visibility-graph machinery except for the shared segment predicate.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as sparse_dijkstra

from . import kernels
from .geometry import Point, PolygonWithHoles


def _moves(max_step: int = 4) -> list[tuple[int, int]]:
    out = []
    for dx in range(-max_step, max_step + 1):
        for dy in range(-max_step, max_step + 1):
            if dx == 0 and dy == 0:
                continue
            if math.gcd(abs(dx), abs(dy)) != 1:
                continue
            if dx > 0 or (dx == 0 and dy > 0):  # one direction per move
                out.append((dx, dy))
    return out


class LatticeOracle:
    """Grid-graph distances inside a polygon with holes."""

    def __init__(self, free_space: PolygonWithHoles, h: float,
                 extra_points: list[Point] | None = None):
        self.free_space = free_space
        self.h = h
        extra_points = list(extra_points or [])
        x0, y0, x1, y1 = free_space.bbox()
        nx = int(math.floor((x1 - x0) / h)) + 1
        ny = int(math.floor((y1 - y0) / h)) + 1

        xs = x0 + h * np.arange(nx)
        ys = y0 + h * np.arange(ny)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        pts = np.column_stack([gx.ravel(), gy.ravel()])

        valid = np.array([
            kernels.point_free(free_space.verts, free_space.ring_start, p[0], p[1])
            for p in pts
        ], dtype=bool)
        node_id = np.full(nx * ny, -1, dtype=np.int64)
        node_id[valid] = np.arange(valid.sum())
        coords = pts[valid]
        n_lattice = len(coords)

        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []

        moves = _moves()
        cand_segs = []
        cand_pairs = []
        for dx, dy in moves:
            ii, jj = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
            ii = ii.ravel()
            jj = jj.ravel()
            ok = (ii + dx >= 0) & (ii + dx < nx) & (jj + dy >= 0) & (jj + dy < ny)
            src = ii[ok] * ny + jj[ok]
            dst = (ii[ok] + dx) * ny + (jj[ok] + dy)
            both = valid[src] & valid[dst]
            src = src[both]
            dst = dst[both]
            if len(src) == 0:
                continue
            seg = np.column_stack([pts[src], pts[dst]])
            cand_segs.append(seg)
            cand_pairs.append(np.column_stack([node_id[src], node_id[dst]]))

        if cand_segs:
            seg_arr = np.ascontiguousarray(np.vstack(cand_segs))
            pair_arr = np.vstack(cand_pairs)
            free = kernels.segments_free(free_space.verts, free_space.ring_start, seg_arr).astype(bool)
            pair_arr = pair_arr[free]
            seg_arr = seg_arr[free]
            lengths = np.hypot(seg_arr[:, 2] - seg_arr[:, 0], seg_arr[:, 3] - seg_arr[:, 1])
            rows.extend(pair_arr[:, 0].tolist())
            cols.extend(pair_arr[:, 1].tolist())
            vals.extend(lengths.tolist())

        # query points enter through validated short links
        self.extra_base = n_lattice
        link_radius = 4 * h
        extra_segs = []
        extra_pairs = []
        for k, p in enumerate(extra_points):
            close = np.flatnonzero(
                (np.abs(coords[:, 0] - p[0]) <= link_radius)
                & (np.abs(coords[:, 1] - p[1]) <= link_radius)
            )
            for c in close:
                extra_segs.append((p[0], p[1], coords[c, 0], coords[c, 1]))
                extra_pairs.append((n_lattice + k, int(c)))
        for a in range(len(extra_points)):
            for b in range(a + 1, len(extra_points)):
                pa, pb = extra_points[a], extra_points[b]
                extra_segs.append((pa[0], pa[1], pb[0], pb[1]))
                extra_pairs.append((n_lattice + a, n_lattice + b))
        if extra_segs:
            seg_arr = np.ascontiguousarray(np.array(extra_segs, dtype=np.float64))
            free = kernels.segments_free(free_space.verts, free_space.ring_start, seg_arr).astype(bool)
            for keep, (u, v), seg in zip(free, extra_pairs, seg_arr):
                if not keep:
                    continue
                rows.append(u)
                cols.append(v)
                vals.append(math.hypot(seg[2] - seg[0], seg[3] - seg[1]))

        n_total = n_lattice + len(extra_points)
        data = np.array(vals + vals)
        rc = np.array(rows + cols)
        cr = np.array(cols + rows)
        self.matrix = csr_matrix((data, (rc, cr)), shape=(n_total, n_total))
        self.n_lattice = n_lattice
        self._dist_cache: dict[int, np.ndarray] = {}

    def extra_distance(self, a: int, b: int) -> float:
        """Lattice-path distance between two registered query points."""
        src = self.extra_base + a
        if src not in self._dist_cache:
            self._dist_cache[src] = sparse_dijkstra(self.matrix, indices=src)
        return float(self._dist_cache[src][self.extra_base + b])


def refined_distances(free_space: PolygonWithHoles, pairs: list[tuple[Point, Point]],
                      h0: float | None = None, rel_tol: float = 0.003,
                      max_rounds: int = 4) -> list[float]:
    """Lattice distances for point pairs, halving h until values stabilize."""
    points: list[Point] = []
    index: dict[tuple[float, float], int] = {}
    for s, t in pairs:
        for p in (s, t):
            key = (float(p[0]), float(p[1]))
            if key not in index:
                index[key] = len(points)
                points.append(Point(*key))
    x0, y0, x1, y1 = free_space.bbox()
    if h0 is None:
        h0 = min(x1 - x0, y1 - y0) / 24.0
    h = h0
    cur: list[float] = []
    prev: list[float] | None = None
    for _ in range(max_rounds):
        oracle = LatticeOracle(free_space, h, points)
        cur = [
            oracle.extra_distance(index[(float(s[0]), float(s[1]))],
                                  index[(float(t[0]), float(t[1]))])
            for s, t in pairs
        ]
        if prev is not None:
            stable = all(
                (math.isinf(a) and math.isinf(b))
                or (math.isfinite(a) and math.isfinite(b)
                    and abs(a - b) <= rel_tol * max(b, 1e-12))
                for a, b in zip(prev, cur)
            )
            if stable:
                return cur
        prev = cur
        h /= 2.0
    return cur
