"""Deterministic SVG figures of instances and pipeline overlays."""

from __future__ import annotations

from fractions import Fraction

from .disks import build_intersection_graph
from .drawing import planarize, realize_drawing
from .instances import Instance
from .separator import clique_separator_of_graph

_CLIQUE_COLORS = ["#d62728", "#9467bd", "#8c564b", "#e377c2", "#bcbd22", "#17becf"]


def _f(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def _ring_path(ring) -> str:
    return "M " + " L ".join(f"{_f(p.x)} {_f(p.y)}" for p in ring) + " Z"


def render_svg(instance: Instance, overlay: str | None = None,
               epsilon=Fraction(1, 2)) -> str:
    """SVG document for an instance; overlay is one of None, "drawing",
    "separator", "planarized"."""
    if overlay not in (None, "drawing", "separator", "planarized"):
        raise ValueError(f"unknown overlay {overlay!r}")
    fs = instance.free_space
    x0, y0, x1, y1 = fs.bbox()
    pad = 0.05 * max(x1 - x0, y1 - y0, 1.0)
    view = f"{_f(x0 - pad)} {_f(y0 - pad)} {_f(x1 - x0 + 2 * pad)} {_f(y1 - y0 + 2 * pad)}"
    unit = max(x1 - x0, y1 - y0) / 100.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}" width="800" height="800">',
        f'<g transform="translate(0 {_f(y0 + y1)}) scale(1 -1)">',  # y up
    ]
    d = " ".join([_ring_path(fs.outer)] + [_ring_path(h) for h in fs.holes])
    parts.append(
        f'<path d="{d}" fill="#eef2f5" stroke="#37474f" '
        f'stroke-width="{_f(0.4 * unit)}" fill-rule="evenodd"/>'
    )

    graph = None
    if overlay in ("drawing", "separator", "planarized") and instance.disks:
        graph = build_intersection_graph(fs, instance.disks)

    if overlay in ("drawing", "planarized") and graph is not None:
        for e in sorted(graph.edges):
            pts = graph.paths[e].vertices
            if len(pts) < 2:
                continue
            pl = " ".join(f"{_f(p.x)},{_f(p.y)}" for p in pts)
            parts.append(
                f'<polyline points="{pl}" fill="none" stroke="#1f77b4" '
                f'stroke-width="{_f(0.35 * unit)}"/>'
            )

    separator = None
    if overlay == "separator" and graph is not None:
        separator = clique_separator_of_graph(graph, epsilon)
        side = {}
        for i in separator.part_a:
            side[i] = "#2ca02c"
        for i in separator.part_b:
            side[i] = "#ff7f0e"
        clique_of = {}
        for ci, c in enumerate(separator.cliques):
            for i in c.members:
                clique_of[i] = ci
        for disk in instance.disks:
            if disk.id in clique_of:
                color = _CLIQUE_COLORS[clique_of[disk.id] % len(_CLIQUE_COLORS)]
            else:
                color = side.get(disk.id, "#607d8b")
            parts.append(
                f'<circle cx="{_f(disk.center.x)}" cy="{_f(disk.center.y)}" '
                f'r="{_f(disk.radius)}" fill="none" stroke="{color}" '
                f'stroke-width="{_f(0.5 * unit)}" stroke-dasharray="{_f(unit)} {_f(unit)}"/>'
            )
        for ci, c in enumerate(separator.cliques):
            if c.witness is not None:
                color = _CLIQUE_COLORS[ci % len(_CLIQUE_COLORS)]
                parts.append(
                    f'<circle cx="{_f(c.witness.x)}" cy="{_f(c.witness.y)}" '
                    f'r="{_f(1.2 * unit)}" fill="{color}"/>'
                )
    else:
        for disk in instance.disks:
            parts.append(
                f'<circle cx="{_f(disk.center.x)}" cy="{_f(disk.center.y)}" '
                f'r="{_f(disk.radius)}" fill="none" stroke="#90a4ae" '
                f'stroke-width="{_f(0.3 * unit)}" stroke-dasharray="{_f(unit)} {_f(unit)}"/>'
            )

    if overlay == "planarized" and graph is not None:
        pg = planarize(realize_drawing(graph))
        for v in pg.vertices:
            if v.tag == "crossing":
                parts.append(
                    f'<circle cx="{_f(v.anchor.x)}" cy="{_f(v.anchor.y)}" '
                    f'r="{_f(1.0 * unit)}" fill="#d62728"/>'
                )

    for disk in instance.disks:
        parts.append(
            f'<circle cx="{_f(disk.center.x)}" cy="{_f(disk.center.y)}" '
            f'r="{_f(0.7 * unit)}" fill="#263238"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
