import math
from fractions import Fraction

import pytest

from geodisk.disks import GeodesicDisk, build_intersection_graph
from geodisk.geometry import Point
from geodisk.oracle import (
    OracleError,
    all_pairs_hop_distances,
    build_separator_tree,
    exact_hop_distance,
    query_hop_distance,
    query_with_stats,
    read_snapshot,
    write_snapshot,
)


def test_chain_root_table(chain_graph):
    tree = build_separator_tree(chain_graph, Fraction(1, 2), leaf_cutoff=2)
    root = tree.root
    assert [c.members for c in root.separator.cliques] == [(3,)]
    assert [root.tables[0][i] for i in root.disk_ids] == [2, 1, 0, 1, 2]
    assert query_hop_distance(tree, 1, 5) == 4
    assert exact_hop_distance(chain_graph, 1, 5) == 4
    assert query_hop_distance(tree, 2, 2) == 0


def test_single_disk_leaf(square):
    g = build_intersection_graph(square, [GeodesicDisk(1, Point(5, 5), 1.0)])
    tree = build_separator_tree(g, Fraction(1, 2))
    assert tree.root.leaf
    assert query_hop_distance(tree, 1, 1) == 0


def test_disconnected_pair_is_inf(square):
    g = build_intersection_graph(square, [
        GeodesicDisk(1, Point(1, 1), 0.5), GeodesicDisk(2, Point(9, 9), 0.5),
    ])
    tree = build_separator_tree(g, Fraction(1, 2))
    assert math.isinf(query_hop_distance(tree, 1, 2))
    assert math.isinf(exact_hop_distance(g, 1, 2))


def test_unknown_ids_rejected(chain_graph):
    tree = build_separator_tree(chain_graph, Fraction(1, 2))
    with pytest.raises(OracleError):
        query_hop_distance(tree, 1, 99)
    with pytest.raises(OracleError):
        exact_hop_distance(chain_graph, 0, 1)


def test_adjacent_pair(chain_graph):
    assert exact_hop_distance(chain_graph, 1, 2) == 1


def test_additive_error_all_pairs(medium_graphs):
    for g in medium_graphs:
        for eps in (Fraction(1, 2), Fraction(1, 8)):
            tree = build_separator_tree(g, eps)
            for (i, j), exact in all_pairs_hop_distances(g).items():
                d, lookups = query_with_stats(tree, i, j)
                if math.isinf(exact):
                    assert math.isinf(d)
                else:
                    assert d <= exact <= d + 1, (i, j, d, exact)
                assert lookups >= 0


def test_table_consistency_against_bfs(medium_graphs):
    g = medium_graphs[0]
    tree = build_separator_tree(g, Fraction(1, 4))
    for node in tree.nodes:
        if node.leaf:
            continue
        sub = g.subgraph(node.disk_ids)
        from geodisk.oracle import _bfs_from_set

        for clique, table in zip(node.separator.cliques, node.tables):
            truth = _bfs_from_set(sub.adjacency, clique.members)
            for i in node.disk_ids:
                assert table[i] == truth[i]


def test_storage_accounting(medium_graphs):
    g = medium_graphs[1]
    tree = build_separator_tree(g, Fraction(1, 4))
    expected = 0
    for node in tree.nodes:
        if node.leaf:
            expected += len(node.disk_ids) * (len(node.disk_ids) - 1) // 2
        else:
            expected += len(node.disk_ids) * len(node.separator.cliques)
    assert tree.storage_entries() == expected


def test_query_lookups_bounded_by_walk(medium_graphs):
    g = medium_graphs[0]
    tree = build_separator_tree(g, Fraction(1, 4))
    ids = g.ids()
    budget = sum(
        2 * len(n.separator.cliques) for n in tree.nodes if not n.leaf
    ) + max(1, len(ids))
    for i, j in [(ids[0], ids[-1]), (ids[1], ids[2])]:
        _, lookups = query_with_stats(tree, i, j)
        assert lookups <= budget


def test_snapshot_round_trip(medium_graphs):
    g = medium_graphs[2]
    tree = build_separator_tree(g, Fraction(1, 4))
    text = write_snapshot(tree)
    again = read_snapshot(text)
    assert write_snapshot(again) == text
    for (i, j) in list(all_pairs_hop_distances(g))[:200]:
        assert query_hop_distance(again, i, j) == query_hop_distance(tree, i, j)


def test_snapshot_rejects_garbage():
    with pytest.raises(OracleError):
        read_snapshot("not a snapshot\n")
    with pytest.raises(OracleError):
        read_snapshot("geodisk-oracle 99\nnodes 0\n")


def test_snapshot_detects_truncation(chain_graph):
    tree = build_separator_tree(chain_graph, Fraction(1, 2))
    text = write_snapshot(tree)
    with pytest.raises(OracleError):
        read_snapshot("\n".join(text.splitlines()[:3]) + "\n")
