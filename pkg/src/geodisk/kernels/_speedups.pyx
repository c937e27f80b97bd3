# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the reference kernels.

Formula-for-formula identical to ``_reference.py`` (same operation order,
compiled with fp-contraction off) so both backends return identical bits.
"""

from libc.math cimport sqrt, floor, INFINITY, hypot

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double EPS = 1e-9

cdef int K_DISJOINT = 0
cdef int K_PROPER = 1
cdef int K_TOUCH = 2
cdef int K_OVERLAP = 3

DISJOINT = 0
PROPER = 1
TOUCH = 2
OVERLAP = 3


cdef inline double _orient_det(double ax, double ay, double bx, double by,
                               double cx, double cy) noexcept nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


cdef int _orient_sign(double ax, double ay, double bx, double by,
                      double cx, double cy) noexcept nogil:
    cdef double det = _orient_det(ax, ay, bx, by, cx, cy)
    cdef double dab = (bx - ax) * (bx - ax) + (by - ay) * (by - ay)
    cdef double dac = (cx - ax) * (cx - ax) + (cy - ay) * (cy - ay)
    cdef double dbc = (cx - bx) * (cx - bx) + (cy - by) * (cy - by)
    cdef double longest = dab
    if dac > longest:
        longest = dac
    if dbc > longest:
        longest = dbc
    longest = sqrt(longest)
    if det < 0.0:
        if -det <= EPS * longest:
            return 0
        return -1
    if det <= EPS * longest:
        return 0
    return 1


cdef double _point_seg_dist(double px, double py, double ax, double ay,
                            double bx, double by) noexcept nogil:
    cdef double vx = bx - ax
    cdef double vy = by - ay
    cdef double wx = px - ax
    cdef double wy = py - ay
    cdef double vv = vx * vx + vy * vy
    cdef double t, dx, dy
    if vv <= 0.0:
        return sqrt(wx * wx + wy * wy)
    t = (wx * vx + wy * vy) / vv
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    dx = wx - t * vx
    dy = wy - t * vy
    return sqrt(dx * dx + dy * dy)


cdef inline double _param_on(double ax, double ay, double bx, double by,
                             double px, double py) noexcept nogil:
    cdef double vx = bx - ax
    cdef double vy = by - ay
    cdef double vv = vx * vx + vy * vy
    cdef double t
    if vv <= 0.0:
        return 0.0
    t = ((px - ax) * vx + (py - ay) * vy) / vv
    if t < 0.0:
        return 0.0
    if t > 1.0:
        return 1.0
    return t


cdef int _segment_classify(double ax, double ay, double bx, double by,
                           double cx, double cy, double dx, double dy,
                           double* out) noexcept nogil:
    """out receives t0, t1, u0, u1; returns the kind code."""
    cdef int o1 = _orient_sign(ax, ay, bx, by, cx, cy)
    cdef int o2 = _orient_sign(ax, ay, bx, by, dx, dy)
    cdef int o3 = _orient_sign(cx, cy, dx, dy, ax, ay)
    cdef int o4 = _orient_sign(cx, cy, dx, dy, bx, by)
    cdef double lab = hypot(bx - ax, by - ay)
    cdef double vv, tc, td, lo, hi, tol_t, ilo, ihi, t, u, clo, chi
    cdef double rx, ry, sx, sy, denom

    out[0] = -1.0
    out[1] = -1.0
    out[2] = -1.0
    out[3] = -1.0

    if o1 == 0 and o2 == 0:
        vv = (bx - ax) * (bx - ax) + (by - ay) * (by - ay)
        tc = ((cx - ax) * (bx - ax) + (cy - ay) * (by - ay)) / vv
        td = ((dx - ax) * (bx - ax) + (dy - ay) * (by - ay)) / vv
        if tc <= td:
            lo = tc
            hi = td
        else:
            lo = td
            hi = tc
        tol_t = EPS / lab if lab > 0.0 else EPS
        ilo = lo if lo > 0.0 else 0.0
        ihi = hi if hi < 1.0 else 1.0
        if ihi < ilo - tol_t:
            return K_DISJOINT
        if ihi - ilo <= tol_t:
            clo = ilo
            if clo < 0.0:
                clo = 0.0
            elif clo > 1.0:
                clo = 1.0
            chi = ihi
            if chi < 0.0:
                chi = 0.0
            elif chi > 1.0:
                chi = 1.0
            t = 0.5 * (clo + chi)
            u = _param_on(cx, cy, dx, dy, ax + t * (bx - ax), ay + t * (by - ay))
            out[0] = t
            out[1] = t
            out[2] = u
            out[3] = u
            return K_TOUCH
        out[0] = ilo
        out[1] = ihi
        out[2] = _param_on(cx, cy, dx, dy, ax + ilo * (bx - ax), ay + ilo * (by - ay))
        out[3] = _param_on(cx, cy, dx, dy, ax + ihi * (bx - ax), ay + ihi * (by - ay))
        return K_OVERLAP

    if o1 * o2 < 0 and o3 * o4 < 0:
        rx = bx - ax
        ry = by - ay
        sx = dx - cx
        sy = dy - cy
        denom = rx * sy - ry * sx
        t = ((cx - ax) * sy - (cy - ay) * sx) / denom
        u = ((cx - ax) * ry - (cy - ay) * rx) / denom
        out[0] = t
        out[1] = t
        out[2] = u
        out[3] = u
        return K_PROPER

    if o1 == 0 and _point_seg_dist(cx, cy, ax, ay, bx, by) <= EPS:
        t = _param_on(ax, ay, bx, by, cx, cy)
        out[0] = t
        out[1] = t
        out[2] = 0.0
        out[3] = 0.0
        return K_TOUCH
    if o2 == 0 and _point_seg_dist(dx, dy, ax, ay, bx, by) <= EPS:
        t = _param_on(ax, ay, bx, by, dx, dy)
        out[0] = t
        out[1] = t
        out[2] = 1.0
        out[3] = 1.0
        return K_TOUCH
    if o3 == 0 and _point_seg_dist(ax, ay, cx, cy, dx, dy) <= EPS:
        u = _param_on(cx, cy, dx, dy, ax, ay)
        out[0] = 0.0
        out[1] = 0.0
        out[2] = u
        out[3] = u
        return K_TOUCH
    if o4 == 0 and _point_seg_dist(bx, by, cx, cy, dx, dy) <= EPS:
        u = _param_on(cx, cy, dx, dy, bx, by)
        out[0] = 1.0
        out[1] = 1.0
        out[2] = u
        out[3] = u
        return K_TOUCH

    return K_DISJOINT


cdef int _ring_locate(double[:, ::1] verts, Py_ssize_t start, Py_ssize_t end,
                      double px, double py) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef bint inside = False
    cdef double y1, y2, xcross
    for i in range(start, end):
        j = start if i == end - 1 else i + 1
        if _point_seg_dist(px, py, verts[i, 0], verts[i, 1], verts[j, 0], verts[j, 1]) <= EPS:
            return 1
    for i in range(start, end):
        j = start if i == end - 1 else i + 1
        y1 = verts[i, 1]
        y2 = verts[j, 1]
        if (y1 > py) != (y2 > py):
            xcross = verts[i, 0] + (py - y1) / (y2 - y1) * (verts[j, 0] - verts[i, 0])
            if xcross > px:
                inside = not inside
    return 2 if inside else 0


cdef int _free_space_locate(double[:, ::1] verts, long long[::1] ring_start,
                            double px, double py) noexcept nogil:
    cdef int loc = _ring_locate(verts, ring_start[0], ring_start[1], px, py)
    cdef bint boundary
    cdef Py_ssize_t r
    cdef int hl
    if loc == 0:
        return 0
    boundary = loc == 1
    for r in range(1, ring_start.shape[0] - 1):
        hl = _ring_locate(verts, ring_start[r], ring_start[r + 1], px, py)
        if hl == 2:
            return 0
        if hl == 1:
            boundary = True
    return 1 if boundary else 2


cdef bint _segment_free(double[:, ::1] verts, long long[::1] ring_start,
                        double ax, double ay, double bx, double by,
                        double* params) noexcept nogil:
    """params must hold 2 + 2 * total_edges doubles."""
    cdef Py_ssize_t nparams = 0, r, i, j, k
    cdef Py_ssize_t nrings = ring_start.shape[0] - 1
    cdef int kind
    cdef double out[4]
    cdef double key, prev, t, mx, my

    if _free_space_locate(verts, ring_start, ax, ay) == 0:
        return False
    if _free_space_locate(verts, ring_start, bx, by) == 0:
        return False
    params[0] = 0.0
    params[1] = 1.0
    nparams = 2
    for r in range(nrings):
        for i in range(ring_start[r], ring_start[r + 1]):
            j = ring_start[r] if i == ring_start[r + 1] - 1 else i + 1
            kind = _segment_classify(ax, ay, bx, by,
                                     verts[i, 0], verts[i, 1],
                                     verts[j, 0], verts[j, 1], out)
            if kind == K_PROPER or kind == K_TOUCH:
                params[nparams] = out[0]
                nparams += 1
            elif kind == K_OVERLAP:
                params[nparams] = out[0]
                nparams += 1
                params[nparams] = out[1]
                nparams += 1
    # insertion sort (parameter lists are short)
    for i in range(1, nparams):
        key = params[i]
        j = i - 1
        while j >= 0 and params[j] > key:
            params[j + 1] = params[j]
            j -= 1
        params[j + 1] = key
    prev = params[0]
    for k in range(1, nparams):
        t = params[k]
        if t - prev > 1e-12:
            mx = ax + 0.5 * (prev + t) * (bx - ax)
            my = ay + 0.5 * (prev + t) * (by - ay)
            if _free_space_locate(verts, ring_start, mx, my) == 0:
                return False
        prev = t
    return True


# ---------------------------------------------------------------------------
# python-visible wrappers

def orient_det(double ax, double ay, double bx, double by, double cx, double cy):
    return _orient_det(ax, ay, bx, by, cx, cy)


def orient_sign(double ax, double ay, double bx, double by, double cx, double cy):
    return _orient_sign(ax, ay, bx, by, cx, cy)


def point_seg_dist(double px, double py, double ax, double ay, double bx, double by):
    return _point_seg_dist(px, py, ax, ay, bx, by)


def segment_classify(double ax, double ay, double bx, double by,
                     double cx, double cy, double dx, double dy):
    cdef double out[4]
    cdef int kind = _segment_classify(ax, ay, bx, by, cx, cy, dx, dy, out)
    return (kind, out[0], out[1], out[2], out[3])


def free_space_locate(double[:, ::1] verts, long long[::1] ring_start,
                      double px, double py):
    return _free_space_locate(verts, ring_start, px, py)


def point_free(double[:, ::1] verts, long long[::1] ring_start, double px, double py):
    return _free_space_locate(verts, ring_start, px, py) != 0


def segment_free(double[:, ::1] verts, long long[::1] ring_start,
                 double ax, double ay, double bx, double by):
    cdef Py_ssize_t cap = 2 + 2 * verts.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(cap, dtype=np.float64)
    return _segment_free(verts, ring_start, ax, ay, bx, by, &buf[0])


def visible_pairs(double[:, ::1] verts, long long[::1] ring_start, double[:, ::1] pts):
    cdef Py_ssize_t n = pts.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(n * (n - 1) // 2, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(2 + 2 * verts.shape[0], dtype=np.float64)
    cdef Py_ssize_t i, j, k = 0
    cdef double* pbuf = &buf[0]
    for i in range(n):
        for j in range(i + 1, n):
            if _segment_free(verts, ring_start, pts[i, 0], pts[i, 1],
                             pts[j, 0], pts[j, 1], pbuf):
                out[k] = 1
            k += 1
    return out


def visible_from(double[:, ::1] verts, long long[::1] ring_start,
                 double qx, double qy, double[:, ::1] pts):
    cdef Py_ssize_t n = pts.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(2 + 2 * verts.shape[0], dtype=np.float64)
    cdef Py_ssize_t i
    cdef double* pbuf = &buf[0]
    for i in range(n):
        if _segment_free(verts, ring_start, qx, qy, pts[i, 0], pts[i, 1], pbuf):
            out[i] = 1
    return out


def segments_free(double[:, ::1] verts, long long[::1] ring_start, double[:, ::1] segs):
    cdef Py_ssize_t m = segs.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(m, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(2 + 2 * verts.shape[0], dtype=np.float64)
    cdef Py_ssize_t i
    cdef double* pbuf = &buf[0]
    for i in range(m):
        if _segment_free(verts, ring_start, segs[i, 0], segs[i, 1],
                         segs[i, 2], segs[i, 3], pbuf):
            out[i] = 1
    return out


cdef Py_ssize_t _chain_collect(long long[::1] parent_pos, long long[::1] parent,
                               long long[::1] arc_ids, Py_ssize_t node,
                               long long* buf) noexcept nogil:
    cdef Py_ssize_t cnt = 0
    while parent_pos[node] >= 0:
        buf[cnt] = arc_ids[parent_pos[node]]
        cnt += 1
        node = parent[node]
    return cnt


cdef void _sort_desc(long long* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef long long key
    for i in range(1, n):
        key = a[i]
        j = i - 1
        while j >= 0 and a[j] < key:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = key


cdef bint _mask_less(long long* a, Py_ssize_t na, long long* b, Py_ssize_t nb) noexcept nogil:
    cdef Py_ssize_t i, m = na if na < nb else nb
    for i in range(m):
        if a[i] != b[i]:
            return a[i] < b[i]
    return na < nb


def dijkstra(long long[::1] indptr, long long[::1] indices, double[::1] weights,
             long long[::1] arc_ids, Py_ssize_t source, Py_ssize_t n):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dist_arr = np.full(n, np.inf)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hops_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] parent_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ppos_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] done_arr = np.zeros(n, dtype=np.uint8)

    cdef double[::1] dist = dist_arr
    cdef long long[::1] hops = hops_arr
    cdef long long[::1] parent = parent_arr
    cdef long long[::1] ppos = ppos_arr
    cdef cnp.uint8_t[::1] done = done_arr

    # binary heap with lazy deletion, keys (dist, hops)
    cdef Py_ssize_t cap = 4 * (indices.shape[0] + 4)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hd_arr = np.empty(cap, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hh_arr = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hn_arr = np.empty(cap, dtype=np.int64)
    cdef double[::1] hd = hd_arr
    cdef long long[::1] hh = hh_arr
    cdef long long[::1] hn = hn_arr
    cdef Py_ssize_t heap_size = 0

    cdef cnp.ndarray[cnp.int64_t, ndim=1] cbuf_arr = np.empty(n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ibuf_arr = np.empty(n + 1, dtype=np.int64)
    cdef long long[::1] cbuf = cbuf_arr
    cdef long long[::1] ibuf = ibuf_arr

    cdef Py_ssize_t u, v, pos, idx, child, parent_idx
    cdef double d, nd, w
    cdef long long h, nh
    cdef Py_ssize_t nc, ni

    dist[source] = 0.0
    hops[source] = 0
    hd[0] = 0.0
    hh[0] = 0
    hn[0] = source
    heap_size = 1

    while heap_size > 0:
        d = hd[0]
        h = hh[0]
        u = <Py_ssize_t> hn[0]
        # pop root
        heap_size -= 1
        hd[0] = hd[heap_size]
        hh[0] = hh[heap_size]
        hn[0] = hn[heap_size]
        idx = 0
        while True:
            child = 2 * idx + 1
            if child >= heap_size:
                break
            if child + 1 < heap_size and (hd[child + 1] < hd[child] or
                                          (hd[child + 1] == hd[child] and hh[child + 1] < hh[child])):
                child += 1
            if hd[child] < hd[idx] or (hd[child] == hd[idx] and hh[child] < hh[idx]):
                hd[idx], hd[child] = hd[child], hd[idx]
                hh[idx], hh[child] = hh[child], hh[idx]
                hn[idx], hn[child] = hn[child], hn[idx]
                idx = child
            else:
                break
        if done[u] or d > dist[u] or (d == dist[u] and h > hops[u]):
            continue
        done[u] = 1
        for pos in range(indptr[u], indptr[u + 1]):
            v = <Py_ssize_t> indices[pos]
            if done[v]:
                continue
            w = weights[pos]
            nd = d + w
            nh = h + 1
            if nd > dist[v]:
                continue
            if nd < dist[v] or nh < hops[v]:
                dist[v] = nd
                hops[v] = nh
                parent[v] = u
                ppos[v] = pos
                # push (nd, nh, v)
                idx = heap_size
                hd[idx] = nd
                hh[idx] = nh
                hn[idx] = v
                heap_size += 1
                while idx > 0:
                    parent_idx = (idx - 1) // 2
                    if hd[idx] < hd[parent_idx] or (hd[idx] == hd[parent_idx] and hh[idx] < hh[parent_idx]):
                        hd[idx], hd[parent_idx] = hd[parent_idx], hd[idx]
                        hh[idx], hh[parent_idx] = hh[parent_idx], hh[idx]
                        hn[idx], hn[parent_idx] = hn[parent_idx], hn[idx]
                        idx = parent_idx
                    else:
                        break
            elif nh == hops[v]:
                nc = _chain_collect(ppos, parent, arc_ids, u, &cbuf[0])
                cbuf[nc] = arc_ids[pos]
                nc += 1
                ni = _chain_collect(ppos, parent, arc_ids, v, &ibuf[0])
                _sort_desc(&cbuf[0], nc)
                _sort_desc(&ibuf[0], ni)
                if _mask_less(&cbuf[0], nc, &ibuf[0], ni):
                    parent[v] = u
                    ppos[v] = pos
    return dist_arr, hops_arr, parent_arr, ppos_arr


def crossing_candidates(double[:, ::1] segs, long long[::1] owner, double cell):
    cdef Py_ssize_t m = segs.shape[0]
    cdef double inv = 1.0 / cell
    cdef Py_ssize_t i, j, a, b
    cdef double x0, x1, y0, y1
    cdef long long cx0, cx1, cy0, cy1, cx, cy

    buckets = {}
    for i in range(m):
        x0 = segs[i, 0] if segs[i, 0] < segs[i, 2] else segs[i, 2]
        x1 = segs[i, 2] if segs[i, 0] < segs[i, 2] else segs[i, 0]
        y0 = segs[i, 1] if segs[i, 1] < segs[i, 3] else segs[i, 3]
        y1 = segs[i, 3] if segs[i, 1] < segs[i, 3] else segs[i, 1]
        cx0 = <long long> floor(x0 * inv)
        cx1 = <long long> floor(x1 * inv)
        cy0 = <long long> floor(y0 * inv)
        cy1 = <long long> floor(y1 * inv)
        for cx in range(cx0, cx1 + 1):
            for cy in range(cy0, cy1 + 1):
                key = (cx, cy)
                if key in buckets:
                    buckets[key].append(i)
                else:
                    buckets[key] = [i]
    pairs = set()
    cdef list members
    cdef Py_ssize_t lo, hi
    for members in buckets.values():
        for a in range(len(members)):
            i = members[a]
            for b in range(a + 1, len(members)):
                j = members[b]
                if owner[i] == owner[j]:
                    continue
                if i < j:
                    lo = i
                    hi = j
                else:
                    lo = j
                    hi = i
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
