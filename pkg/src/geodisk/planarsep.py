"""Balanced vertex separators for planar graphs.

BFS layering first: if some level inside the balanced window is small, it is
the separator.  Otherwise the classic refinement: take the nearest small
levels around the median, contract everything below the lower one into a
single root, drop everything above the upper one, triangulate a planar
embedding of what remains, and use a fundamental cycle of the BFS tree as
the third piece of the separator.  Sizes then obey |S| <= 4*sqrt(N) + O(1)
on each separated component.
"""

from __future__ import annotations

import math
from collections import deque

import networkx as nx


class NonPlanarInputError(ValueError):
    """The graph handed to the planar separator is not planar."""


def planar_vertex_separator(pg, delta: float) -> set[int]:
    """Separator of a PlanarizedGraph: removing it leaves connected parts
    that pack into two sides of at most ceil(delta * N) vertices each."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0,1)")
    adj = {v.id: sorted(set(pg.adjacency[v.id]) - {v.id}) for v in pg.vertices}
    graph = nx.Graph()
    graph.add_nodes_from(adj)
    graph.add_edges_from((u, v) for u, vs in adj.items() for v in vs if u < v)
    planar, _ = nx.check_planarity(graph)
    if not planar:
        raise NonPlanarInputError("input graph is not planar")
    return separate_adjacency(adj, delta)


def separate_adjacency(adj: dict, delta: float) -> set:
    """Core loop over an adjacency dict (assumed planar)."""
    n = len(adj)
    if n == 0:
        return set()
    bound = math.ceil(delta * n)
    separator: set = set()
    while True:
        comps = components(adj, separator)
        if pack_sides(comps, bound) is not None:
            return separator
        big = max(comps, key=lambda c: (len(c), -min(c)))
        separator |= _separate_component(adj, big)


def components(adj: dict, removed: set) -> list[list]:
    """Connected components of adj minus removed, each sorted."""
    seen = set(removed)
    out = []
    for start in sorted(adj):
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        comp = []
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        out.append(sorted(comp))
    return out


def pack_sides(parts: list[list], bound: int, weight=len):
    """Greedy two-bin packing, heaviest first; None when some bin overflows."""
    order = sorted(parts, key=lambda p: (-weight(p), p[0] if p else 0))
    a: list = []
    b: list = []
    wa = wb = 0
    for part in order:
        w = weight(part)
        if wa <= wb:
            a.extend(part)
            wa += w
        else:
            b.extend(part)
            wb += w
    if wa > bound or wb > bound:
        return None
    return sorted(a), sorted(b)


def _bfs_levels(adj: dict, nodes: list, root):
    level = {root: 0}
    order = [root]
    queue = deque([root])
    keep = set(nodes)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in keep and v not in level:
                level[v] = level[u] + 1
                order.append(v)
                queue.append(v)
    height = max(level.values())
    levels = [[] for _ in range(height + 1)]
    for v in order:
        levels[level[v]].append(v)
    return levels, level


def _separate_component(adj: dict, nodes: list) -> set:
    """One Lipton-Tarjan round on a connected node set; 2/3-balanced inside."""
    n = len(nodes)
    if n <= 2:
        return {nodes[0]}
    root = nodes[0]
    levels, level_of = _bfs_levels(adj, nodes, root)
    sizes = [len(l) for l in levels]
    total = sum(sizes)
    two_thirds = (2 * total) // 3

    # balanced-window levels: both strict sides fit in 2/3
    below = 0
    window = []
    for l, sz in enumerate(sizes):
        above = total - below - sz
        if below <= two_thirds and above <= two_thirds:
            window.append((sz, max(below, above), l))
        below += sz
    window.sort()
    budget = 4.0 * math.sqrt(n)
    if window and window[0][0] <= budget:
        return set(levels[window[0][2]])

    # median level and the nearest sqrt-sized levels around it
    mu = 0
    cum = 0
    for l, sz in enumerate(sizes):
        cum += sz
        if 2 * cum >= total:
            mu = l
            break
    sq = math.sqrt(n)
    t1 = max((l for l in range(mu + 1) if sizes[l] <= sq), default=0)
    t2 = next((l for l in range(mu + 1, len(sizes)) if sizes[l] <= sq), len(sizes))

    s0 = set(levels[t1]) | (set(levels[t2]) if t2 < len(sizes) else set())
    middle = [v for l in range(t1 + 1, min(t2, len(sizes))) for v in levels[l]]
    if len(middle) <= two_thirds:
        return s0

    return s0 | _fundamental_cycle_cut(adj, nodes, set(middle), t1, level_of, two_thirds, s0)


def _fundamental_cycle_cut(adj, nodes, middle, t1, level_of, two_thirds, s0):
    """Cycle separator of the contracted middle graph.

    Levels at or below t1 contract into a virtual root, levels past the
    middle are dropped; the BFS tree of the result has radius bounded by the
    level gap, so every fundamental cycle is short.  Some cycle of the
    triangulated graph splits the component into pieces of at most 2/3 the
    size; candidates are scanned shortest-cycle-first.
    """
    root = -1
    contracted = nx.Graph()
    contracted.add_node(root)
    contracted.add_nodes_from(sorted(middle))
    for u in sorted(middle):
        for v in adj[u]:
            if v in middle:
                if u < v:
                    contracted.add_edge(u, v)
            elif level_of.get(v, -1) <= t1 and v in level_of:
                contracted.add_edge(u, root)

    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(contracted.neighbors(u)):
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)
    depth = {root: 0}
    for v in order[1:]:
        depth[v] = depth[parent[v]] + 1

    planar, emb = nx.check_planarity(contracted)
    candidates = []
    for u, v in contracted.edges():
        if parent.get(u) == v or parent.get(v) == u:
            continue
        candidates.append((u, v))
    if planar:
        candidates.extend(_triangulation_chords(contracted, emb))

    def cycle_nodes(u, v):
        path_u, path_v = [u], [v]
        a, b = u, v
        while depth.get(a, 0) > depth.get(b, 0):
            a = parent[a]
            path_u.append(a)
        while depth.get(b, 0) > depth.get(a, 0):
            b = parent[b]
            path_v.append(b)
        while a != b:
            a = parent[a]
            b = parent[b]
            path_u.append(a)
            path_v.append(b)
        return set(path_u) | set(path_v)

    scored = sorted(
        (depth[u] + depth[v], u, v) for u, v in candidates if u in depth and v in depth
    )
    best = None
    best_worst = None
    keep = set(nodes)
    for _, u, v in scored:
        cyc = cycle_nodes(u, v) - {root}
        cut = s0 | cyc
        restricted = {k: [v for v in adj[k] if v in keep] for k in keep}
        worst = max((len(c) for c in components(restricted, cut)), default=0)
        if best_worst is None or worst < best_worst:
            best_worst = worst
            best = cyc
        if worst <= two_thirds:
            break
    return best if best is not None else set()


def _triangulation_chords(graph: nx.Graph, emb) -> list:
    """Fan chords that triangulate the embedding's faces (as candidate
    nontree edges only; the embedding itself is not updated)."""
    chords = []
    seen_half = set()
    existing = {frozenset(e) for e in graph.edges()}
    for u in emb:
        for v in emb[u]:
            if (u, v) in seen_half:
                continue
            face = emb.traverse_face(u, v, mark_half_edges=seen_half)
            if len(face) <= 3:
                continue
            counts: dict = {}
            for w in face:
                counts[w] = counts.get(w, 0) + 1
            apex = next((w for w in face if counts[w] == 1), None)
            if apex is None:
                continue
            k = face.index(apex)
            ring = face[k:] + face[:k]
            for w in ring[2:-1]:
                key = frozenset((apex, w))
                if apex != w and key not in existing:
                    existing.add(key)
                    chords.append((apex, w))
    return chords
