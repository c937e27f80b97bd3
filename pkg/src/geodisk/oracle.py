"""Separator-tree hop-distance oracle with additive error at most one.

Each tree node stores, for every disk of its subproblem and every clique of
its separator, the hop distance from the disk to the clique inside the
subproblem (one multi-source BFS per clique).  A query walks from the root,
combines the two table rows over each node's cliques, and descends while
both disks stay in the same part; the smallest combined value reported is
within one of the true hop distance.  Leaves (at most 8 disks) store exact
pairwise tables.

The built tree serializes to a versioned text format (counts before
payloads) so oracles can be persisted and queried without the geometry.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .disks import IntersectionGraph
from .geometry import Point
from .separator import CliquePart, CliqueSeparator, clique_separator_of_graph

INF = math.inf
LEAF_CUTOFF = 8
SNAPSHOT_MAGIC = "geodisk-oracle"
SNAPSHOT_VERSION = 1


class OracleError(ValueError):
    """Unknown disk id or malformed snapshot."""


@dataclass
class OracleNode:
    disk_ids: tuple[int, ...]
    leaf: bool
    # internal nodes
    separator: CliqueSeparator | None = None
    tables: list[dict[int, float]] = field(default_factory=list)  # one per clique
    side_of: dict[int, int | None] = field(default_factory=dict)  # 0=A, 1=B, None=separator
    children: tuple[int | None, int | None] = (None, None)
    # leaves
    pair_table: dict[tuple[int, int], float] = field(default_factory=dict)


class SeparatorTree:
    def __init__(self, nodes: list[OracleNode], all_ids: list[int]):
        self.nodes = nodes
        self.all_ids = sorted(all_ids)

    @property
    def root(self) -> OracleNode:
        return self.nodes[0]

    def storage_entries(self) -> int:
        """Stored table entries: sum over nodes of |subproblem| x |cliques|,
        plus the exact pairwise tables at the leaves."""
        total = 0
        for node in self.nodes:
            if node.leaf:
                total += len(node.pair_table)
            else:
                total += len(node.disk_ids) * len(node.tables)
        return total


def _bfs_from_set(adjacency: dict[int, list[int]], sources) -> dict[int, float]:
    dist = {i: INF for i in adjacency}
    queue = deque()
    for s in sources:
        if s in dist and dist[s] == INF:
            dist[s] = 0.0
            queue.append(s)
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if dist[v] == INF:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def exact_hop_distance(g: IntersectionGraph, i: int, j: int) -> float:
    """Plain BFS hop distance in the intersection graph; inf if disconnected."""
    for x in (i, j):
        if x not in g.by_id:
            raise OracleError(f"unknown disk id {x}")
    if i == j:
        return 0.0
    dist = _bfs_from_set(g.adjacency, [i])
    return dist[j]


def all_pairs_hop_distances(g: IntersectionGraph) -> dict[tuple[int, int], float]:
    out = {}
    ids = g.ids()
    for a, i in enumerate(ids):
        dist = _bfs_from_set(g.adjacency, [i])
        for j in ids[a + 1:]:
            out[(i, j)] = dist[j]
    return out


def build_separator_tree(g: IntersectionGraph, epsilon,
                         leaf_cutoff: int = LEAF_CUTOFF) -> SeparatorTree:
    nodes: list[OracleNode] = []

    def build(sub: IntersectionGraph) -> int:
        node_id = len(nodes)
        ids = tuple(sub.ids())
        if len(ids) <= leaf_cutoff:
            node = OracleNode(ids, leaf=True)
            nodes.append(node)
            for a, i in enumerate(ids):
                dist = _bfs_from_set(sub.adjacency, [i])
                for j in ids[a + 1:]:
                    node.pair_table[(i, j)] = dist[j]
            return node_id
        sep = clique_separator_of_graph(sub, epsilon)
        node = OracleNode(ids, leaf=False, separator=sep)
        nodes.append(node)
        for c in sep.cliques:
            dist = _bfs_from_set(sub.adjacency, c.members)
            node.tables.append({i: dist[i] for i in ids})
        node.side_of = {i: None for i in sep.separator_ids()}
        node.side_of.update({i: 0 for i in sep.part_a})
        node.side_of.update({i: 1 for i in sep.part_b})
        child_a = build(sub.subgraph(sep.part_a)) if sep.part_a else None
        child_b = build(sub.subgraph(sep.part_b)) if sep.part_b else None
        nodes[node_id].children = (child_a, child_b)
        return node_id

    build(g)
    return SeparatorTree(nodes, g.ids())


def query_hop_distance(tree: SeparatorTree, i: int, j: int) -> float:
    d, _ = query_with_stats(tree, i, j)
    return d


def query_with_stats(tree: SeparatorTree, i: int, j: int) -> tuple[float, int]:
    """Reported distance d* with d* <= hop(i,j) <= d* + 1, plus the number
    of table lookups the walk performed."""
    for x in (i, j):
        if x not in set(tree.all_ids):
            raise OracleError(f"unknown disk id {x}")
    if i == j:
        return 0.0, 0
    best = INF
    lookups = 0
    node = tree.root
    while True:
        if node.leaf:
            lo, hi = (i, j) if i < j else (j, i)
            best = min(best, node.pair_table.get((lo, hi), INF))
            lookups += 1
            return best, lookups
        for table in node.tables:
            z = table[i] + table[j]
            lookups += 2
            if z < best:
                best = z
        side_i = node.side_of[i]
        side_j = node.side_of[j]
        if side_i is None or side_j is None or side_i != side_j:
            return best, lookups
        child = node.children[side_i]
        node = tree.nodes[child]


# ---------------------------------------------------------------------------
# Snapshot format: line-oriented, counts before payloads, version-tagged.


def _fmt(value: float) -> str:
    return "inf" if math.isinf(value) else repr(int(value)) if float(value).is_integer() \
        else repr(value)


def _parse_dist(token: str) -> float:
    return INF if token == "inf" else float(token)


def write_snapshot(tree: SeparatorTree) -> str:
    lines = [f"{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION}"]
    lines.append(f"disks {len(tree.all_ids)} " + " ".join(map(str, tree.all_ids)))
    lines.append(f"nodes {len(tree.nodes)}")
    for nid, node in enumerate(tree.nodes):
        kind = "leaf" if node.leaf else "internal"
        lines.append(f"node {nid} {kind} {len(node.disk_ids)}")
        lines.append("ids " + " ".join(map(str, node.disk_ids)))
        if node.leaf:
            pairs = sorted(node.pair_table)
            lines.append(f"pairs {len(pairs)}")
            for (a, b) in pairs:
                lines.append(f"pair {a} {b} {_fmt(node.pair_table[(a, b)])}")
        else:
            sep = node.separator
            lines.append(f"cliques {len(sep.cliques)}")
            for c, table in zip(sep.cliques, node.tables):
                witness = f" witness {c.witness.x!r} {c.witness.y!r}" if c.witness else ""
                lines.append(f"clique {c.kind} {len(c.members)}{witness}")
                lines.append("members " + " ".join(map(str, c.members)))
                lines.append("row " + " ".join(_fmt(table[i]) for i in node.disk_ids))
            lines.append(f"parta {len(sep.part_a)} " + " ".join(map(str, sep.part_a)))
            lines.append(f"partb {len(sep.part_b)} " + " ".join(map(str, sep.part_b)))
            ca = -1 if node.children[0] is None else node.children[0]
            cb = -1 if node.children[1] is None else node.children[1]
            lines.append(f"children {ca} {cb}")
    return "\n".join(lines) + "\n"


def read_snapshot(text: str) -> SeparatorTree:
    lines = text.splitlines()
    pos = 0

    def take(prefix: str) -> list[str]:
        nonlocal pos
        if pos >= len(lines):
            raise OracleError(f"snapshot truncated, expected {prefix!r}")
        parts = lines[pos].split()
        if not parts or parts[0] != prefix:
            raise OracleError(f"expected {prefix!r} at line {pos + 1}, got {lines[pos]!r}")
        pos += 1
        return parts[1:]

    magic = lines[0].split() if lines else []
    if len(magic) != 2 or magic[0] != SNAPSHOT_MAGIC:
        raise OracleError("not an oracle snapshot")
    if int(magic[1]) != SNAPSHOT_VERSION:
        raise OracleError(f"unsupported snapshot version {magic[1]}")
    pos = 1
    head = take("disks")
    all_ids = [int(x) for x in head[1:]]
    if len(all_ids) != int(head[0]):
        raise OracleError("disk id count mismatch")
    n_nodes = int(take("nodes")[0])
    nodes: list[OracleNode] = []
    for nid in range(n_nodes):
        head = take("node")
        if int(head[0]) != nid:
            raise OracleError(f"node ids out of order at {nid}")
        kind, count = head[1], int(head[2])
        ids = tuple(int(x) for x in take("ids"))
        if len(ids) != count:
            raise OracleError(f"node {nid}: id count mismatch")
        if kind == "leaf":
            node = OracleNode(ids, leaf=True)
            for _ in range(int(take("pairs")[0])):
                a, b, d = take("pair")
                node.pair_table[(int(a), int(b))] = _parse_dist(d)
        elif kind == "internal":
            cliques = []
            tables = []
            n_cliques = int(take("cliques")[0])
            for _ in range(n_cliques):
                chead = take("clique")
                ckind, csize = chead[0], int(chead[1])
                witness = None
                if len(chead) > 2:
                    if chead[2] != "witness":
                        raise OracleError("malformed clique header")
                    witness = Point(float(chead[3]), float(chead[4]))
                members = tuple(int(x) for x in take("members"))
                if len(members) != csize:
                    raise OracleError("clique member count mismatch")
                row = take("row")
                if len(row) != count:
                    raise OracleError("table row length mismatch")
                cliques.append(CliquePart(members, ckind, witness))
                tables.append({i: _parse_dist(v) for i, v in zip(ids, row)})
            pa = take("parta")
            part_a = tuple(int(x) for x in pa[1:])
            pb = take("partb")
            part_b = tuple(int(x) for x in pb[1:])
            ca, cb = (int(x) for x in take("children"))
            sep = CliqueSeparator(tuple(cliques), part_a, part_b)
            node = OracleNode(ids, leaf=False, separator=sep, tables=tables)
            node.side_of = {i: None for i in sep.separator_ids()}
            node.side_of.update({i: 0 for i in part_a})
            node.side_of.update({i: 1 for i in part_b})
            node.children = (None if ca < 0 else ca, None if cb < 0 else cb)
        else:
            raise OracleError(f"unknown node kind {kind!r}")
        nodes.append(node)
    return SeparatorTree(nodes, all_ids)
