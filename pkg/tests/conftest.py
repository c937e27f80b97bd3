import math

import pytest

from geodisk.disks import GeodesicDisk, build_intersection_graph
from geodisk.geometry import Point, PolygonWithHoles
from geodisk.instances import generate_instance


@pytest.fixture(scope="session")
def square():
    return PolygonWithHoles(
        (Point(0, 0), Point(10, 0), Point(10, 10), Point(0, 10))
    )


@pytest.fixture(scope="session")
def holed_square():
    return PolygonWithHoles(
        (Point(0, 0), Point(10, 0), Point(10, 10), Point(0, 10)),
        ((Point(4, 4), Point(6, 4), Point(6, 6), Point(4, 6)),),
    )


@pytest.fixture(scope="session")
def chain_graph():
    strip = PolygonWithHoles(
        (Point(0, 0), Point(100, 0), Point(100, 10), Point(0, 10))
    )
    disks = [GeodesicDisk(k, Point(10 * k, 5), 6.0) for k in range(1, 6)]
    return build_intersection_graph(strip, disks)


@pytest.fixture(scope="session")
def cluster_graph(square):
    disks = [
        GeodesicDisk(1, Point(4, 4), 3.0), GeodesicDisk(2, Point(4, 6), 3.0),
        GeodesicDisk(3, Point(6, 4), 3.0), GeodesicDisk(4, Point(6, 6), 3.0),
    ]
    return build_intersection_graph(square, disks)


def random_instance(seed: int, n: int, holes: int, radius_scale: float = 1.2):
    """Shared recipe for random test instances at sane density."""
    side = max(10.0, 2.0 * math.sqrt(n))
    base = radius_scale * side / math.sqrt(n)
    return generate_instance(
        seed=seed, n_disks=n, n_holes=holes,
        bbox=(0.0, 0.0, side, side),
        radius_range=(0.5 * base, base),
    )


@pytest.fixture(scope="session")
def medium_graphs():
    """A handful of random graphs shared by the slower property tests."""
    out = []
    for seed, n, holes in [(11, 30, 2), (12, 48, 3), (13, 64, 0), (14, 40, 5)]:
        inst = random_instance(seed, n, holes)
        out.append(build_intersection_graph(inst.free_space, inst.disks))
    return out
