"""Geometric hot-kernel backends.

The compiled Cython extension is used when it imported successfully and the
environment variable ``GEODISK_PURE_PYTHON`` is not set; otherwise the pure
Python reference implementation takes over.  Both expose the same functions
and must produce identical results (covered by the equivalence tests and
compared by ``benchmarks/backend_bench.py``).
"""

from __future__ import annotations

import os

from . import _reference

EPS = _reference.EPS
DISJOINT = _reference.DISJOINT
PROPER = _reference.PROPER
TOUCH = _reference.TOUCH
OVERLAP = _reference.OVERLAP

_BACKENDS = {"python": _reference}

try:  # pragma: no cover - exercised via the env-var test
    from . import _speedups

    _BACKENDS["compiled"] = _speedups
except ImportError:
    _speedups = None

_active_name = "python"
if "compiled" in _BACKENDS and os.environ.get("GEODISK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    _active_name = "compiled"
_active = _BACKENDS[_active_name]


def backend_name() -> str:
    """Name of the backend currently answering kernel calls."""
    return _active_name


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def use_backend(name: str) -> str:
    """Switch backends at runtime (used by tests and the backend benchmark)."""
    global _active, _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; have {available_backends()}")
    _active_name = name
    _active = _BACKENDS[name]
    return _active_name


def orient_det(ax, ay, bx, by, cx, cy):
    return _active.orient_det(ax, ay, bx, by, cx, cy)


def orient_sign(ax, ay, bx, by, cx, cy):
    return _active.orient_sign(ax, ay, bx, by, cx, cy)


def point_seg_dist(px, py, ax, ay, bx, by):
    return _active.point_seg_dist(px, py, ax, ay, bx, by)


def segment_classify(ax, ay, bx, by, cx, cy, dx, dy):
    return _active.segment_classify(ax, ay, bx, by, cx, cy, dx, dy)


def free_space_locate(verts, ring_start, px, py):
    return _active.free_space_locate(verts, ring_start, px, py)


def point_free(verts, ring_start, px, py):
    return _active.point_free(verts, ring_start, px, py)


def segment_free(verts, ring_start, ax, ay, bx, by):
    return _active.segment_free(verts, ring_start, ax, ay, bx, by)


def visible_pairs(verts, ring_start, pts):
    return _active.visible_pairs(verts, ring_start, pts)


def visible_from(verts, ring_start, qx, qy, pts):
    return _active.visible_from(verts, ring_start, qx, qy, pts)


def segments_free(verts, ring_start, segs):
    return _active.segments_free(verts, ring_start, segs)


def dijkstra(indptr, indices, weights, arc_ids, source, n):
    return _active.dijkstra(indptr, indices, weights, arc_ids, source, n)


def crossing_candidates(segs, owner, cell):
    return _active.crossing_candidates(segs, owner, cell)
