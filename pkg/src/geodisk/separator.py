"""The clique-based separator pipeline.

Stages: exponent schedule, greedy ply reduction at candidate points, degree
pruning rounds, planarization of the residual drawing, a planar vertex
separator on it, and the lift back to disks.  Balance is enforced on disk
counts by re-separating an oversized side until both sides fit in 2n/3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .disks import ContainmentIndex, IntersectionGraph, disks_intersect
from .drawing import PathDrawing, find_crossings, planarize, realize_drawing
from .geometry import Point, PolygonWithHoles
from .metric import VisibilityGraph, _PointRegistry
from .planarsep import components, pack_sides, planar_vertex_separator


class ScheduleError(ValueError):
    """Epsilon outside (0, 1)."""


@dataclass(frozen=True)
class Schedule:
    """Exponents of the pipeline: a ply exponent and degree exponents.

    With the degree sequence extended by a leading 1 (no pruning means the
    max-degree exponent is 1), the identities 3*a1 = 2*a2 - 1,
    3*a1 = 2*a[i+1] - a[i] and 5*a1 = 2 - a[k] hold exactly in rational
    arithmetic, and the separator size exponent is
    1 - a1 = (3*2^k - 2) / (4*2^k - 3).
    """

    epsilon: Fraction
    k: int
    alphas: tuple[Fraction, ...]

    @property
    def exponent(self) -> Fraction:
        return 1 - self.alphas[0]

    def ply_threshold(self, n: int) -> int:
        """Greedy ply-extraction threshold: max(3, ceil(n^a1 / 4)).

        The floor sits at 3 because every meeting point of an edge has ply
        at least 2, so a threshold of 2 would consume every edge of the
        graph as a two-member clique and starve the later stages.
        """
        if n <= 0:
            return 3
        return max(3, math.ceil(0.25 * n ** float(self.alphas[0])))

    def degree_thresholds(self, n: int) -> list[int]:
        return [math.ceil(n ** float(a)) for a in self.alphas[1:]]


def schedule_for_k(k: int, epsilon: Fraction | None = None) -> Schedule:
    alpha1 = Fraction(2**k - 1, 2 ** (k + 2) - 3)
    alphas = [alpha1]
    prev = Fraction(1)
    for _ in range(2, k + 1):
        nxt = (3 * alpha1 + prev) / 2
        alphas.append(nxt)
        prev = nxt
    return Schedule(epsilon if epsilon is not None else Fraction(1, 2**k), k, tuple(alphas))


def compute_schedule(epsilon) -> Schedule:
    """Schedule for a target separator exponent of 3/4 + epsilon."""
    eps = Fraction(epsilon).limit_denominator(10**12) if isinstance(epsilon, float) \
        else Fraction(epsilon)
    if not Fraction(0) < eps < Fraction(1):
        raise ScheduleError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")
    k = 1
    while Fraction(2) ** k * eps < 1:
        k += 1
    return schedule_for_k(k, eps)


@dataclass(frozen=True)
class CliquePart:
    members: tuple[int, ...]
    kind: str  # "point_clique" | "singleton"
    witness: Point | None = None


@dataclass(frozen=True)
class CliqueSeparator:
    cliques: tuple[CliquePart, ...]
    part_a: tuple[int, ...]
    part_b: tuple[int, ...]

    @property
    def clique_count(self) -> int:
        return len(self.cliques)

    def separator_ids(self) -> set[int]:
        out: set[int] = set()
        for c in self.cliques:
            out.update(c.members)
        return out


class _CandidateTable:
    """Candidate points with containment sets and activation supports.

    A candidate stays active while at least one of its defining objects
    (a center, an edge's meeting point, a crossing of two paths) still has
    all its disks alive.
    """

    def __init__(self, g: IntersectionGraph, crossings):
        registry = _PointRegistry(merge_radius=1e-9)
        supports: dict[int, list[frozenset[int]]] = {}
        order: list[int] = []

        def add(p: Point, needed: frozenset[int]):
            node = registry.node(p)
            if node not in supports:
                supports[node] = []
                order.append(node)
            supports[node].append(needed)

        for d in g.disks:
            add(d.center, frozenset((d.id,)))
        for e in sorted(g.edges):
            add(g.meeting[e][0], frozenset(e))
        for x in crossings:
            add(x.location, frozenset(x.edge_a) | frozenset(x.edge_b))

        self.points = [registry.points[i] for i in order]
        self.supports = [supports[i] for i in order]
        self.index = ContainmentIndex(g.graph, g.disks, self.points)

    def active(self, idx: int, alive: set[int]) -> bool:
        return any(req <= alive for req in self.supports[idx])


def reduce_ply(g: IntersectionGraph, threshold: int) -> tuple[list[CliquePart], IntersectionGraph]:
    """Greedy ply reduction: extract the disks containing a maximum-ply
    candidate point as a point clique, until every candidate of the residual
    has ply below the threshold."""
    if threshold < 2:
        raise ValueError("ply threshold must be at least 2")
    if g.n == 0:
        return [], g
    crossings = find_crossings(realize_drawing(g))
    table = _CandidateTable(g, crossings)
    alive = set(g.ids())
    cliques: list[CliquePart] = []
    while True:
        best_ply = 0
        best_idx = -1
        for idx in range(len(table.points)):
            if not table.active(idx, alive):
                continue
            ply = table.index.ply(idx, alive)
            if ply > best_ply:
                best_ply = ply
                best_idx = idx
        if best_ply < threshold:
            break
        members = tuple(sorted(table.index.sets[best_idx] & alive))
        cliques.append(CliquePart(members, "point_clique", table.points[best_idx]))
        alive -= set(members)
    return cliques, g.subgraph(alive)


def prune_high_degree(g: IntersectionGraph, degree_threshold: int) -> tuple[list[int], IntersectionGraph]:
    """Remove every vertex whose degree in the input graph meets the
    threshold (one batch, degrees frozen at entry)."""
    if degree_threshold < 1:
        raise ValueError("degree threshold must be at least 1")
    removed = sorted(i for i in g.ids() if g.degree(i) >= degree_threshold)
    keep = [i for i in g.ids() if i not in set(removed)]
    return removed, g.subgraph(keep)


def lift_to_disks(pg, separator_vertices) -> set[int]:
    """Union of the owner disks of the separator's planar vertices."""
    out: set[int] = set()
    for vid in separator_vertices:
        out |= pg.owners_of(vid)
    return out


def _disk_parts(pg, separator_vertices, lifted: set[int]) -> list[list[int]]:
    """Group the unlifted disks by the component their drawing star lies in."""
    adj = {v.id: pg.adjacency[v.id] for v in pg.vertices}
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(components(adj, set(separator_vertices))):
        for v in comp:
            comp_of[v] = ci
    groups: dict[int, list[int]] = {}
    for did in pg.disk_ids:
        if did in lifted:
            continue
        cv = pg.center_vertex[did]
        groups.setdefault(comp_of[cv], []).append(did)
    return [sorted(v) for _, v in sorted(groups.items())]


def clique_separator_of_graph(g: IntersectionGraph, epsilon) -> CliqueSeparator:
    """Full pipeline on an already-built intersection graph."""
    n = g.n
    if n == 0:
        return CliqueSeparator((), (), ())
    schedule = compute_schedule(epsilon)

    cliques, residual = reduce_ply(g, schedule.ply_threshold(n))
    for thr in schedule.degree_thresholds(n):
        singles, residual = prune_high_degree(residual, thr)
        cliques.extend(CliquePart((i,), "singleton") for i in singles)

    drawing = realize_drawing(residual)
    pg = planarize(drawing)
    sep_vertices = planar_vertex_separator(pg, 2.0 / 3.0) if pg.n else set()
    lifted = lift_to_disks(pg, sep_vertices)
    cliques.extend(CliquePart((i,), "singleton") for i in sorted(lifted))
    parts = _disk_parts(pg, sep_vertices, lifted)

    bound = math.ceil(2.0 * n / 3.0)
    while True:
        packed = pack_sides(parts, bound)
        if packed is not None:
            side_a, side_b = packed
            break
        big = max(parts, key=len)
        parts = [p for p in parts if p is not big]
        sub = clique_separator_of_graph(g.subgraph(big), epsilon)
        if max(len(sub.part_a), len(sub.part_b), 1) >= len(big):
            # defensive fallback: peel the busiest disk and retry
            sub_g = g.subgraph(big)
            victim = max(big, key=lambda i: (sub_g.degree(i), -i))
            cliques.append(CliquePart((victim,), "singleton"))
            rest = [i for i in big if i != victim]
            parts.extend([sorted(c) for c in _graph_components(g.subgraph(rest))])
            continue
        cliques.extend(sub.cliques)
        if sub.part_a:
            parts.append(list(sub.part_a))
        if sub.part_b:
            parts.append(list(sub.part_b))

    return CliqueSeparator(tuple(cliques), tuple(side_a), tuple(side_b))


def _graph_components(g: IntersectionGraph) -> list[list[int]]:
    adj = {i: g.adjacency[i] for i in g.ids()}
    return components(adj, set())


def build_clique_separator(free_space: PolygonWithHoles, disks, epsilon) -> CliqueSeparator:
    from .disks import build_intersection_graph

    return clique_separator_of_graph(build_intersection_graph(free_space, disks), epsilon)


def verify_separator(g: IntersectionGraph, graph: VisibilityGraph,
                     sep: CliqueSeparator) -> list[str]:
    """Empty list iff the separator satisfies every contract: partition,
    no side-to-side edge, verified cliques, witness containment, balance."""
    violations: list[str] = []
    all_ids = set(g.ids())
    seen: set[int] = set()
    for part in (sep.part_a, sep.part_b):
        for i in part:
            if i in seen:
                violations.append(f"disk {i} appears twice in the partition")
            seen.add(i)
    for c in sep.cliques:
        for i in c.members:
            if i in seen:
                violations.append(f"disk {i} appears in a clique and elsewhere")
            seen.add(i)
    if seen != all_ids:
        missing = sorted(all_ids - seen)
        extra = sorted(seen - all_ids)
        if missing:
            violations.append(f"disks missing from the separator structure: {missing}")
        if extra:
            violations.append(f"unknown disk ids in the separator: {extra}")

    in_a = set(sep.part_a)
    in_b = set(sep.part_b)
    for (i, j) in sorted(g.edges):
        if (i in in_a and j in in_b) or (i in in_b and j in in_a):
            violations.append(f"edge ({i},{j}) joins side A to side B")

    for ci, c in enumerate(sep.cliques):
        if c.kind == "singleton" and len(c.members) != 1:
            violations.append(f"clique {ci} marked singleton but has {len(c.members)} members")
        members = [g.by_id[i] for i in c.members if i in g.by_id]
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                if not disks_intersect(graph, members[x], members[y]):
                    violations.append(
                        f"clique {ci}: disks {members[x].id} and {members[y].id} do not intersect"
                    )
        if c.kind == "point_clique":
            if c.witness is None:
                violations.append(f"clique {ci} lacks a witness point")
            else:
                sources = [graph.site_index(d.center) for d in members]
                dists = graph.point_sites_distances(c.witness, sources)
                for d, dist in zip(members, dists):
                    if dist > d.radius + 1e-9:
                        violations.append(
                            f"clique {ci}: witness outside disk {d.id} "
                            f"(distance {dist:.12g} > radius {d.radius:.12g})"
                        )

    bound = math.ceil(2.0 * g.n / 3.0)
    if max(len(sep.part_a), len(sep.part_b)) > bound:
        violations.append(
            f"balance violated: sides {len(sep.part_a)}/{len(sep.part_b)} exceed {bound}"
        )
    return violations
