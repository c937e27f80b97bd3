import math
from fractions import Fraction
from itertools import product

import pytest

from geodisk.coloring import (
    ColoringError,
    brute_force_q_color,
    check_coloring,
    q_color_via_separator,
)
from geodisk.disks import GeodesicDisk, build_intersection_graph
from geodisk.geometry import Point, PolygonWithHoles

from conftest import random_instance


@pytest.fixture(scope="module")
def triangle(square=None):
    free = PolygonWithHoles((Point(0, 0), Point(10, 0), Point(10, 10), Point(0, 10)))
    disks = [
        GeodesicDisk(1, Point(3, 3), 2.0), GeodesicDisk(2, Point(6, 3), 2.0),
        GeodesicDisk(3, Point(4.5, 5.5), 2.0),
    ]
    return build_intersection_graph(free, disks)


@pytest.fixture(scope="module")
def annulus_cycle():
    free = PolygonWithHoles(
        (Point(0, 0), Point(10, 0), Point(10, 10), Point(0, 10)),
        ((Point(4, 4), Point(6, 4), Point(6, 6), Point(4, 6)),),
    )
    disks = []
    for k in range(5):
        th = math.radians(90 + 72 * k)
        disks.append(GeodesicDisk(
            k + 1, Point(5 + 3.5 * math.cos(th), 5 + 3.5 * math.sin(th)), 2.1
        ))
    g = build_intersection_graph(free, disks)
    assert sorted(len(g.adjacency[i]) for i in g.ids()) == [2] * 5
    return g


def test_triangle(triangle):
    assert not q_color_via_separator(triangle, 2, Fraction(1, 2)).feasible
    res = q_color_via_separator(triangle, 3, Fraction(1, 2))
    assert res.feasible and check_coloring(triangle, res.assignment, 3)
    assert brute_force_q_color(triangle, 3).feasible
    assert not brute_force_q_color(triangle, 2).feasible


def test_chain_bipartite(chain_graph):
    res = q_color_via_separator(chain_graph, 2, Fraction(1, 2))
    assert res.feasible and check_coloring(chain_graph, res.assignment, 2)


def test_odd_cycle(annulus_cycle):
    assert not q_color_via_separator(annulus_cycle, 2, Fraction(1, 2)).feasible
    res = q_color_via_separator(annulus_cycle, 3, Fraction(1, 2))
    assert res.feasible and check_coloring(annulus_cycle, res.assignment, 3)
    assert not brute_force_q_color(annulus_cycle, 2).feasible
    assert brute_force_q_color(annulus_cycle, 3).feasible


def test_clique_shortcut(cluster_graph):
    # a clique larger than q forces infeasibility
    assert not q_color_via_separator(cluster_graph, 3, Fraction(1, 2)).feasible
    res = q_color_via_separator(cluster_graph, 4, Fraction(1, 2))
    assert res.feasible and check_coloring(cluster_graph, res.assignment, 4)


def test_edgeless_one_color(square):
    disks = [GeodesicDisk(i, Point(1 + 2 * i, 1), 0.4) for i in range(5)]
    g = build_intersection_graph(square, disks)
    assert brute_force_q_color(g, 1).feasible
    res = q_color_via_separator(g, 1, Fraction(1, 2))
    assert res.feasible and check_coloring(g, res.assignment, 1)


def test_guards(square):
    g = build_intersection_graph(square, [GeodesicDisk(1, Point(5, 5), 1.0)])
    with pytest.raises(ColoringError):
        brute_force_q_color(g, 0)
    with pytest.raises(ColoringError):
        q_color_via_separator(g, 0, Fraction(1, 2))
    big = build_intersection_graph(
        square, [GeodesicDisk(i, Point(0.2 + 0.4 * i, 0.2), 0.01) for i in range(21)]
    )
    with pytest.raises(ColoringError):
        brute_force_q_color(big, 2)


def test_agreement_random_small():
    for seed in range(40, 48):
        inst = random_instance(seed, 12, seed % 4, radius_scale=1.5)
        g = build_intersection_graph(inst.free_space, inst.disks)
        for q, eps in product((2, 3, 4), (Fraction(1, 2), Fraction(1, 4))):
            truth = brute_force_q_color(g, q)
            res = q_color_via_separator(g, q, eps)
            assert res.feasible == truth.feasible, (seed, q, eps)
            if res.feasible:
                assert check_coloring(g, res.assignment, q)
