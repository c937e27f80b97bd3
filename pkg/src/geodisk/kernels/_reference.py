"""Pure-Python reference implementations of the geometric hot kernels.

Every function here has a compiled twin in ``_speedups.pyx``.  The two
backends must agree bit-for-bit: the compiled module is generated from the
same formulas, evaluated in the same order, and built with fp-contraction
disabled.  Keep the arithmetic expressions in sync when editing either side.

Polygons are passed as a flat vertex array ``verts`` of shape (R, 2) plus a
ring offset array ``ring_start`` of length ``nrings + 1``; ring 0 is the
outer boundary, the rest are holes.
"""

from __future__ import annotations

import math
from heapq import heappop, heappush

import numpy as np

EPS = 1e-9

# classification codes shared with the compiled backend
DISJOINT = 0
PROPER = 1
TOUCH = 2
OVERLAP = 3


def orient_det(ax, ay, bx, by, cx, cy):
    """Twice the signed area of triangle abc (raw float determinant)."""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def orient_sign(ax, ay, bx, by, cx, cy):
    """Orientation sign with a distance-based collinearity guard.

    Returns +1 (left turn), -1 (right turn) or 0 when c lies within EPS of
    the line through a, b (scaled by the longest triangle side so the
    predicate is symmetric under argument swaps).
    """
    det = orient_det(ax, ay, bx, by, cx, cy)
    dab = (bx - ax) * (bx - ax) + (by - ay) * (by - ay)
    dac = (cx - ax) * (cx - ax) + (cy - ay) * (cy - ay)
    dbc = (cx - bx) * (cx - bx) + (cy - by) * (cy - by)
    longest = math.sqrt(max(dab, dac, dbc))
    if abs(det) <= EPS * longest:
        return 0
    return 1 if det > 0.0 else -1


def point_seg_dist(px, py, ax, ay, bx, by):
    """Euclidean distance from p to segment ab."""
    vx = bx - ax
    vy = by - ay
    wx = px - ax
    wy = py - ay
    vv = vx * vx + vy * vy
    if vv <= 0.0:
        return math.sqrt(wx * wx + wy * wy)
    t = (wx * vx + wy * vy) / vv
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    dx = wx - t * vx
    dy = wy - t * vy
    return math.sqrt(dx * dx + dy * dy)


def segment_classify(ax, ay, bx, by, cx, cy, dx, dy):
    """Classify the intersection of segments ab and cd.

    Returns ``(kind, t0, t1, u0, u1)`` where t parameters run along ab and
    u parameters along cd:

    * DISJOINT: parameters are all -1.
    * PROPER:   t0 == t1 and u0 == u1 give the crossing point.
    * TOUCH:    t0 == t1 and u0 == u1 give the touch point.
    * OVERLAP:  [t0, t1] is the shared stretch on ab, [u0, u1] on cd
      (u interval ordered to match the t interval geometrically).
    """
    o1 = orient_sign(ax, ay, bx, by, cx, cy)
    o2 = orient_sign(ax, ay, bx, by, dx, dy)
    o3 = orient_sign(cx, cy, dx, dy, ax, ay)
    o4 = orient_sign(cx, cy, dx, dy, bx, by)

    lab = math.hypot(bx - ax, by - ay)
    lcd = math.hypot(dx - cx, dy - cy)

    if o1 == 0 and o2 == 0:
        # collinear configuration: compare parameter intervals along ab
        vv = (bx - ax) * (bx - ax) + (by - ay) * (by - ay)
        tc = ((cx - ax) * (bx - ax) + (cy - ay) * (by - ay)) / vv
        td = ((dx - ax) * (bx - ax) + (dy - ay) * (by - ay)) / vv
        lo, hi = (tc, td) if tc <= td else (td, tc)
        tol_t = EPS / lab if lab > 0.0 else EPS
        ilo = max(0.0, lo)
        ihi = min(1.0, hi)
        if ihi < ilo - tol_t:
            return (DISJOINT, -1.0, -1.0, -1.0, -1.0)
        if ihi - ilo <= tol_t:
            t = 0.5 * (max(0.0, min(1.0, ilo)) + max(0.0, min(1.0, ihi)))
            u = _param_on(cx, cy, dx, dy, ax + t * (bx - ax), ay + t * (by - ay))
            return (TOUCH, t, t, u, u)
        u0 = _param_on(cx, cy, dx, dy, ax + ilo * (bx - ax), ay + ilo * (by - ay))
        u1 = _param_on(cx, cy, dx, dy, ax + ihi * (bx - ax), ay + ihi * (by - ay))
        return (OVERLAP, ilo, ihi, u0, u1)

    if o1 * o2 < 0 and o3 * o4 < 0:
        rx = bx - ax
        ry = by - ay
        sx = dx - cx
        sy = dy - cy
        denom = rx * sy - ry * sx
        t = ((cx - ax) * sy - (cy - ay) * sx) / denom
        u = ((cx - ax) * ry - (cy - ay) * rx) / denom
        return (PROPER, t, t, u, u)

    # endpoint touches (T or V contacts within tolerance)
    if o1 == 0 and point_seg_dist(cx, cy, ax, ay, bx, by) <= EPS:
        t = _param_on(ax, ay, bx, by, cx, cy)
        return (TOUCH, t, t, 0.0, 0.0)
    if o2 == 0 and point_seg_dist(dx, dy, ax, ay, bx, by) <= EPS:
        t = _param_on(ax, ay, bx, by, dx, dy)
        return (TOUCH, t, t, 1.0, 1.0)
    if o3 == 0 and point_seg_dist(ax, ay, cx, cy, dx, dy) <= EPS:
        u = _param_on(cx, cy, dx, dy, ax, ay)
        return (TOUCH, 0.0, 0.0, u, u)
    if o4 == 0 and point_seg_dist(bx, by, cx, cy, dx, dy) <= EPS:
        u = _param_on(cx, cy, dx, dy, bx, by)
        return (TOUCH, 1.0, 1.0, u, u)

    return (DISJOINT, -1.0, -1.0, -1.0, -1.0)


def _param_on(ax, ay, bx, by, px, py):
    """Clamped parameter of p projected on segment ab."""
    vx = bx - ax
    vy = by - ay
    vv = vx * vx + vy * vy
    if vv <= 0.0:
        return 0.0
    t = ((px - ax) * vx + (py - ay) * vy) / vv
    if t < 0.0:
        return 0.0
    if t > 1.0:
        return 1.0
    return t


def ring_locate(verts, start, end, px, py):
    """Locate p against one ring: 0 outside, 1 on boundary, 2 inside."""
    for i in range(start, end):
        j = start if i == end - 1 else i + 1
        if point_seg_dist(px, py, verts[i, 0], verts[i, 1], verts[j, 0], verts[j, 1]) <= EPS:
            return 1
    inside = False
    for i in range(start, end):
        j = start if i == end - 1 else i + 1
        y1 = verts[i, 1]
        y2 = verts[j, 1]
        if (y1 > py) != (y2 > py):
            xcross = verts[i, 0] + (py - y1) / (y2 - y1) * (verts[j, 0] - verts[i, 0])
            if xcross > px:
                inside = not inside
    return 2 if inside else 0


def free_space_locate(verts, ring_start, px, py):
    """0 outside F, 1 on a boundary of F, 2 in the open interior of F."""
    loc = ring_locate(verts, ring_start[0], ring_start[1], px, py)
    if loc == 0:
        return 0
    boundary = loc == 1
    for r in range(1, len(ring_start) - 1):
        hl = ring_locate(verts, ring_start[r], ring_start[r + 1], px, py)
        if hl == 2:
            return 0
        if hl == 1:
            boundary = True
    return 1 if boundary else 2


def point_free(verts, ring_start, px, py):
    return free_space_locate(verts, ring_start, px, py) != 0


def segment_free(verts, ring_start, ax, ay, bx, by):
    """True iff segment ab lies entirely in the closed free space.

    Collects every parameter where ab meets a boundary edge, then tests the
    midpoint of each sub-interval; grazing along boundaries passes because
    the free space is closed.
    """
    if free_space_locate(verts, ring_start, ax, ay) == 0:
        return False
    if free_space_locate(verts, ring_start, bx, by) == 0:
        return False
    params = [0.0, 1.0]
    nrings = len(ring_start) - 1
    for r in range(nrings):
        start = ring_start[r]
        end = ring_start[r + 1]
        for i in range(start, end):
            j = start if i == end - 1 else i + 1
            kind, t0, t1, _, _ = segment_classify(
                ax, ay, bx, by, verts[i, 0], verts[i, 1], verts[j, 0], verts[j, 1]
            )
            if kind == PROPER or kind == TOUCH:
                params.append(t0)
            elif kind == OVERLAP:
                params.append(t0)
                params.append(t1)
    params.sort()
    prev = params[0]
    for t in params[1:]:
        if t - prev > 1e-12:
            mx = ax + 0.5 * (prev + t) * (bx - ax)
            my = ay + 0.5 * (prev + t) * (by - ay)
            if free_space_locate(verts, ring_start, mx, my) == 0:
                return False
        prev = t
    return True


def visible_pairs(verts, ring_start, pts):
    """Condensed upper-triangle visibility mask over the site array.

    Entry ``k = i*n - i*(i+1)//2 + (j-i-1)`` is 1 iff sites i < j see each
    other inside F.
    """
    n = len(pts)
    out = np.zeros(n * (n - 1) // 2, dtype=np.uint8)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if segment_free(verts, ring_start, pts[i, 0], pts[i, 1], pts[j, 0], pts[j, 1]):
                out[k] = 1
            k += 1
    return out


def visible_from(verts, ring_start, qx, qy, pts):
    """Visibility mask of a single query point against all sites."""
    n = len(pts)
    out = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        if segment_free(verts, ring_start, qx, qy, pts[i, 0], pts[i, 1]):
            out[i] = 1
    return out


def segments_free(verts, ring_start, segs):
    """Batch segment-in-free-space test; segs is an (m, 4) array."""
    m = len(segs)
    out = np.zeros(m, dtype=np.uint8)
    for i in range(m):
        if segment_free(verts, ring_start, segs[i, 0], segs[i, 1], segs[i, 2], segs[i, 3]):
            out[i] = 1
    return out


def _chain_arc_ids(parent_arc, parent, arc_ids, node):
    ids = []
    while parent_arc[node] >= 0:
        ids.append(arc_ids[parent_arc[node]])
        node = parent[node]
    return ids


def _mask_less(cand, incumbent):
    """Compare two arc-id sets as sums of distinct powers of two."""
    a = sorted(cand, reverse=True)
    b = sorted(incumbent, reverse=True)
    for x, y in zip(a, b):
        if x != y:
            return x < y
    return len(a) < len(b)


def dijkstra(indptr, indices, weights, arc_ids, source, n):
    """Single-source shortest paths with deterministic tie-breaking.

    Paths are ordered by (length, hop count, perturbation key) where the
    perturbation key treats arc i as carrying an extra infinitesimal
    2**arc_id; comparing keys reduces to comparing the arc-id sets of the
    two candidate paths.  The resulting path system is unique and closed
    under taking subpaths.

    Returns (dist, hops, parent, parent_edge_pos); ``parent_edge_pos``
    indexes into ``indices``/``arc_ids``; -1 marks the source/unreached.
    """
    dist = np.full(n, np.inf)
    hops = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    parent_pos = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    dist[source] = 0.0
    hops[source] = 0
    heap = [(0.0, 0, source)]
    while heap:
        d, h, u = heappop(heap)
        if done[u] or d > dist[u] or (d == dist[u] and h > hops[u]):
            continue
        done[u] = True
        for pos in range(indptr[u], indptr[u + 1]):
            v = indices[pos]
            if done[v]:
                continue
            nd = d + weights[pos]
            nh = h + 1
            if nd > dist[v]:
                continue
            if nd < dist[v] or nh < hops[v]:
                dist[v] = nd
                hops[v] = nh
                parent[v] = u
                parent_pos[v] = pos
                heappush(heap, (nd, nh, v))
            elif nh == hops[v]:
                cand = _chain_arc_ids(parent_pos, parent, arc_ids, u)
                cand.append(arc_ids[pos])
                inc = _chain_arc_ids(parent_pos, parent, arc_ids, v)
                if _mask_less(cand, inc):
                    parent[v] = u
                    parent_pos[v] = pos
    return dist, hops, parent, parent_pos


def crossing_candidates(segs, owner, cell):
    """Bounding-box candidate pairs of segments with distinct owners.

    Buckets segments into a uniform grid of the given cell size and emits
    each close pair once, ordered (i < j), sorted.
    """
    buckets = {}
    m = len(segs)
    inv = 1.0 / cell
    for i in range(m):
        x0 = min(segs[i, 0], segs[i, 2])
        x1 = max(segs[i, 0], segs[i, 2])
        y0 = min(segs[i, 1], segs[i, 3])
        y1 = max(segs[i, 1], segs[i, 3])
        cx0 = int(math.floor(x0 * inv))
        cx1 = int(math.floor(x1 * inv))
        cy0 = int(math.floor(y0 * inv))
        cy1 = int(math.floor(y1 * inv))
        for cx in range(cx0, cx1 + 1):
            for cy in range(cy0, cy1 + 1):
                buckets.setdefault((cx, cy), []).append(i)
    pairs = set()
    for members in buckets.values():
        for a in range(len(members)):
            i = members[a]
            for b in range(a + 1, len(members)):
                j = members[b]
                if owner[i] == owner[j]:
                    continue
                lo, hi = (i, j) if i < j else (j, i)
                if (lo, hi) in pairs:
                    continue
                if min(segs[i, 0], segs[i, 2]) > max(segs[j, 0], segs[j, 2]) + EPS:
                    continue
                if min(segs[j, 0], segs[j, 2]) > max(segs[i, 0], segs[i, 2]) + EPS:
                    continue
                if min(segs[i, 1], segs[i, 3]) > max(segs[j, 1], segs[j, 3]) + EPS:
                    continue
                if min(segs[j, 1], segs[j, 3]) > max(segs[i, 1], segs[i, 3]) + EPS:
                    continue
                pairs.add((lo, hi))
    if not pairs:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    arr = np.array(sorted(pairs), dtype=np.int64)
    return arr[:, 0].copy(), arr[:, 1].copy()
