"""q-coloring of the intersection graph by divide and conquer over the
clique-based separator, with a brute-force checker for small instances.

Colors inside a separator clique must be pairwise distinct, so the solver
only enumerates injective assignments per clique (q * (q-1) * ... options),
pruning against edges among already-colored vertices, then colors the two
sides recursively under the accumulated boundary constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

from .disks import IntersectionGraph
from .separator import clique_separator_of_graph

BRUTE_FORCE_LIMIT = 20
_LEAF_CUTOFF = 8


class ColoringError(ValueError):
    """Instance too large for the brute-force solver, or bad q."""


@dataclass(frozen=True)
class ColoringResult:
    feasible: bool
    assignment: dict[int, int] | None = None


def check_coloring(g: IntersectionGraph, assignment: dict[int, int], q: int) -> bool:
    """Independent edge-by-edge propriety check."""
    if set(assignment) != set(g.ids()):
        return False
    if any(not 1 <= c <= q for c in assignment.values()):
        return False
    return all(assignment[i] != assignment[j] for i, j in g.edges)


def brute_force_q_color(g: IntersectionGraph, q: int) -> ColoringResult:
    """Backtracking ground truth (guarded to 20 disks)."""
    if q < 1:
        raise ColoringError("q must be at least 1")
    if g.n > BRUTE_FORCE_LIMIT:
        raise ColoringError(f"brute force limited to {BRUTE_FORCE_LIMIT} disks, got {g.n}")
    order = sorted(g.ids(), key=lambda i: (-g.degree(i), i))
    colors: dict[int, int] = {}

    def place(k: int, used: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        forbidden = {colors[u] for u in g.adjacency[v] if u in colors}
        # new colors are interchangeable: try at most one fresh color
        for c in range(1, min(used + 1, q) + 1):
            if c in forbidden:
                continue
            colors[v] = c
            if place(k + 1, max(used, c)):
                return True
            del colors[v]
        return False

    if place(0, 0):
        return ColoringResult(True, dict(colors))
    return ColoringResult(False)


def q_color_via_separator(g: IntersectionGraph, q: int, epsilon) -> ColoringResult:
    """Separator-based solver; any clique larger than q is immediately
    infeasible, otherwise separator colorings are enumerated injectively and
    the two sides are colored recursively under the boundary constraints."""
    if q < 1:
        raise ColoringError("q must be at least 1")

    colors: dict[int, int] = {}

    def solve(sub: IntersectionGraph) -> bool:
        if sub.n == 0:
            return True
        if sub.n <= _LEAF_CUTOFF:
            return _extend_small(g, sub, q, colors)
        sep = clique_separator_of_graph(sub, epsilon)
        if any(len(c.members) > q for c in sep.cliques):
            return False
        clique_vertices = [list(c.members) for c in sep.cliques]

        def assign_cliques(idx: int) -> bool:
            if idx == len(clique_vertices):
                side_a = sub.subgraph(sep.part_a) if sep.part_a else None
                if side_a is not None and not solve(side_a):
                    return False
                side_b = sub.subgraph(sep.part_b) if sep.part_b else None
                if side_b is not None and not solve(side_b):
                    if side_a is not None:
                        for i in sep.part_a:
                            colors.pop(i, None)
                    return False
                return True
            members = clique_vertices[idx]

            def fill(pos: int, taken: set[int]) -> bool:
                if pos == len(members):
                    return assign_cliques(idx + 1)
                v = members[pos]
                forbidden = {colors[u] for u in g.adjacency[v] if u in colors}
                for c in range(1, q + 1):
                    if c in taken or c in forbidden:
                        continue
                    colors[v] = c
                    if fill(pos + 1, taken | {c}):
                        return True
                    del colors[v]
                return False

            return fill(0, set())

        return assign_cliques(0)

    if solve(g):
        return ColoringResult(True, dict(colors))
    return ColoringResult(False)


def _extend_small(g: IntersectionGraph, sub: IntersectionGraph, q: int,
                  colors: dict[int, int]) -> bool:
    """Backtracking over a leaf subproblem under outside constraints;
    constraints come from any already-colored neighbor in the full graph."""
    order = sorted(sub.ids(), key=lambda i: (-sub.degree(i), i))

    def place(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        forbidden = {colors[u] for u in g.adjacency[v] if u in colors}
        for c in range(1, q + 1):
            if c in forbidden:
                continue
            colors[v] = c
            if place(k + 1):
                return True
            del colors[v]
        return False

    return place(0)
