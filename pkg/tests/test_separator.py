import math
from fractions import Fraction

import pytest

from geodisk.disks import GeodesicDisk, build_intersection_graph
from geodisk.drawing import planarize, realize_drawing
from geodisk.geometry import Point, PolygonWithHoles
from geodisk.separator import (
    CliquePart,
    CliqueSeparator,
    ScheduleError,
    build_clique_separator,
    clique_separator_of_graph,
    compute_schedule,
    lift_to_disks,
    prune_high_degree,
    reduce_ply,
    schedule_for_k,
    verify_separator,
)

from conftest import random_instance


def test_schedule_paper_values():
    s = compute_schedule(Fraction(1, 2))
    assert (s.k, s.alphas, s.exponent) == (1, (Fraction(1, 5),), Fraction(4, 5))
    s = compute_schedule(Fraction(1, 4))
    assert (s.k, s.alphas) == (2, (Fraction(3, 13), Fraction(11, 13)))
    assert s.exponent == Fraction(10, 13)
    s = compute_schedule(Fraction(1, 8))
    assert (s.k, s.alphas) == (3, (Fraction(7, 29), Fraction(25, 29), Fraction(23, 29)))
    assert s.exponent == Fraction(22, 29)
    assert 5 * s.alphas[0] == 2 - s.alphas[-1]


def test_schedule_identities_exact():
    for k in range(1, 21):
        s = schedule_for_k(k)
        a = s.alphas
        assert a[0] == Fraction(2**k - 1, 2 ** (k + 2) - 3)
        degree_seq = (Fraction(1),) + a[1:]
        if k >= 2:
            assert 3 * a[0] == 2 * a[1] - 1
            for i in range(1, k - 1):
                assert 3 * a[0] == 2 * a[i + 1] - a[i]
        assert 5 * a[0] == 2 - degree_seq[-1]
        assert 1 - a[0] == Fraction(3 * 2**k - 2, 4 * 2**k - 3)
        assert s.exponent <= Fraction(3, 4) + Fraction(1, 2**k)


def test_schedule_epsilon_guard():
    for bad in (0, 1, -0.5, 2):
        with pytest.raises(ScheduleError):
            compute_schedule(bad)


def test_reduce_ply_examples(chain_graph, cluster_graph, square):
    cliques, residual = reduce_ply(cluster_graph, 2)
    assert len(cliques) == 1
    assert cliques[0].members == (1, 2, 3, 4)
    assert cliques[0].kind == "point_clique"
    assert residual.n == 0

    cliques, residual = reduce_ply(chain_graph, 3)
    assert cliques == [] and residual.n == 5

    empty = build_intersection_graph(square, [])
    assert reduce_ply(empty, 2) == ([], empty) or reduce_ply(empty, 2)[0] == []


def test_reduce_ply_residual_below_threshold(medium_graphs):
    from geodisk.disks import disks_containing
    from geodisk.drawing import find_crossings
    from geodisk.disks import candidate_points

    g = medium_graphs[0]
    cliques, residual = reduce_ply(g, 3)
    xs = [x.location for x in find_crossings(realize_drawing(residual))]
    for q in candidate_points(residual, xs):
        assert len(disks_containing(residual.graph, residual.disks, q)) < 3


def test_prune_examples(square, chain_graph):
    # star: one big hub touching five satellites that miss each other
    strip = PolygonWithHoles((Point(0, 0), Point(60, 0), Point(60, 10), Point(0, 10)))
    disks = [GeodesicDisk(0, Point(30, 5), 25.0)]
    disks += [GeodesicDisk(k, Point(10 * k, 5), 0.5) for k in range(1, 6)]
    star = build_intersection_graph(strip, disks)
    assert star.degree(0) == 5
    removed, residual = prune_high_degree(star, 3)
    assert removed == [0]
    assert residual.n == 5 and residual.m == 0

    removed, residual = prune_high_degree(chain_graph, 3)
    assert removed == [] and residual.n == 5

    removed, residual = prune_high_degree(chain_graph, 1)
    assert removed == [1, 2, 3, 4, 5]


def test_lift_owner_rule(cluster_graph):
    dr = realize_drawing(cluster_graph)
    pg = planarize(dr)
    crossing = next(v for v in pg.vertices if v.tag == "crossing")
    lifted = lift_to_disks(pg, {crossing.id})
    assert lifted == set(crossing.owner_disks)
    assert 1 <= len(lifted) <= 2
    lane = next(v for v in pg.vertices if v.tag == "lane")
    assert len(lift_to_disks(pg, {lane.id})) == 1
    assert lift_to_disks(pg, set()) == set()


def test_separator_chain(chain_graph):
    sep = clique_separator_of_graph(chain_graph, Fraction(1, 2))
    assert [c.members for c in sep.cliques] == [(3,)]
    assert set(sep.part_a) | set(sep.part_b) == {1, 2, 4, 5}
    assert verify_separator(chain_graph, chain_graph.graph, sep) == []


def test_separator_cluster(cluster_graph):
    sep = clique_separator_of_graph(cluster_graph, Fraction(1, 2))
    assert len(sep.cliques) == 1 and sep.cliques[0].members == (1, 2, 3, 4)
    assert sep.part_a == () and sep.part_b == ()
    assert verify_separator(cluster_graph, cluster_graph.graph, sep) == []


def test_separator_single_disk(square):
    g = build_intersection_graph(square, [GeodesicDisk(1, Point(5, 5), 1.0)])
    sep = clique_separator_of_graph(g, Fraction(1, 2))
    assert sep.cliques == () and set(sep.part_a) == {1} and sep.part_b == ()


def test_separator_edgeless(square):
    disks = [GeodesicDisk(i, Point(1 + 2 * i, 1), 0.4) for i in range(5)]
    g = build_intersection_graph(square, disks)
    sep = clique_separator_of_graph(g, Fraction(1, 2))
    assert sep.cliques == ()
    assert verify_separator(g, g.graph, sep) == []


def test_build_clique_separator_entrypoint(holed_square):
    disks = [GeodesicDisk(1, Point(2, 5), 3.3), GeodesicDisk(2, Point(8, 5), 3.3),
             GeodesicDisk(3, Point(5, 1), 2.0)]
    sep = build_clique_separator(holed_square, disks, Fraction(1, 4))
    g = build_intersection_graph(holed_square, disks)
    assert verify_separator(g, g.graph, sep) == []


def test_separator_random_suite(medium_graphs):
    for g in medium_graphs:
        for eps in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
            sep = clique_separator_of_graph(g, eps)
            assert verify_separator(g, g.graph, sep) == []
            assert sep.clique_count <= g.n
            bound = math.ceil(2 * g.n / 3)
            assert max(len(sep.part_a), len(sep.part_b)) <= bound


def test_verify_rejects_bad_separators(chain_graph):
    # A-B edge
    bad = CliqueSeparator((CliquePart((3,), "singleton"),), (1, 2, 4), (5,))
    out = verify_separator(chain_graph, chain_graph.graph, bad)
    assert any("joins side A to side B" in v for v in out)
    # witness outside a member
    bad = CliqueSeparator(
        (CliquePart((1, 2), "point_clique", Point(10, 5)),), (3, 4), (5,)
    )
    out = verify_separator(chain_graph, chain_graph.graph, bad)
    assert any("witness outside disk" in v for v in out)
    # non-intersecting "clique"
    bad = CliqueSeparator(
        (CliquePart((1, 5), "point_clique", Point(10, 5)),), (2, 3), (4,)
    )
    out = verify_separator(chain_graph, chain_graph.graph, bad)
    assert any("do not intersect" in v for v in out)
    # missing disk
    bad = CliqueSeparator((CliquePart((3,), "singleton"),), (1, 2), (5,))
    out = verify_separator(chain_graph, chain_graph.graph, bad)
    assert any("missing" in v for v in out)
    # imbalance
    bad = CliqueSeparator((), (1, 2, 3, 4, 5), ())
    out = verify_separator(chain_graph, chain_graph.graph, bad)
    assert any("balance" in v for v in out)
