import pytest

from geodisk.geometry import Point
from geodisk.instances import (
    GenerationError,
    InstanceError,
    chain_instance,
    cluster_instance,
    generate_instance,
    parse_instance,
    write_instance,
)

MINIMAL = """
{
  "free_space": {"outer": [[0,0],[10,0],[10,10],[0,10]], "holes": []},
  "disks": [{"id": 1, "center": [5,5], "radius": 2.0}],
  "metadata": {"name": "minimal"}
}
"""


def test_parse_minimal():
    inst = parse_instance(MINIMAL)
    assert inst.n == 1
    assert inst.disks[0].center == Point(5, 5)
    assert inst.metadata["name"] == "minimal"


def test_round_trip_canonical():
    inst = parse_instance(MINIMAL)
    text = write_instance(inst)
    assert write_instance(parse_instance(text)) == text


def test_parse_errors_carry_paths():
    with pytest.raises(InstanceError, match=r"\$: invalid JSON"):
        parse_instance("{nope")
    with pytest.raises(InstanceError, match="free_space.outer"):
        parse_instance('{"free_space": {"outer": [[0,0],[1,0]]}, "disks": []}')
    with pytest.raises(InstanceError, match=r"disks\[0\]"):
        parse_instance(
            '{"free_space": {"outer": [[0,0],[10,0],[10,10],[0,10]]},'
            ' "disks": [{"id": 1}]}'
        )
    with pytest.raises(InstanceError, match=r"disks\[1\].*duplicate"):
        parse_instance(
            '{"free_space": {"outer": [[0,0],[10,0],[10,10],[0,10]]},'
            ' "disks": [{"id": 1, "center": [1,1], "radius": 1},'
            '           {"id": 1, "center": [2,2], "radius": 1}]}'
        )


def test_center_in_hole_rejected():
    doc = (
        '{"free_space": {"outer": [[0,0],[10,0],[10,10],[0,10]],'
        ' "holes": [[[4,4],[6,4],[6,6],[4,6]]]},'
        ' "disks": [{"id": 7, "center": [5,5], "radius": 1}]}'
    )
    with pytest.raises(InstanceError, match="disk id 7"):
        parse_instance(doc)


def test_generator_deterministic():
    a = generate_instance(seed=42, n_disks=12, n_holes=3)
    b = generate_instance(seed=42, n_disks=12, n_holes=3)
    assert write_instance(a) == write_instance(b)
    c = generate_instance(seed=43, n_disks=12, n_holes=3)
    assert write_instance(a) != write_instance(c)


def test_generator_respects_free_space():
    from geodisk.geometry import point_in_free_space

    inst = generate_instance(seed=7, n_disks=30, n_holes=5)
    assert len(inst.free_space.holes) == 5
    for d in inst.disks:
        assert point_in_free_space(inst.free_space, d.center)


def test_generator_no_holes_ok():
    inst = generate_instance(seed=7, n_disks=5, n_holes=0)
    assert inst.free_space.holes == ()


def test_generator_failure_is_informative():
    with pytest.raises(GenerationError, match="fewer or smaller holes"):
        generate_instance(seed=1, n_disks=5, n_holes=60, bbox=(0, 0, 10, 10))


def test_chain_preset_matches_spec():
    inst = chain_instance(n=5, bbox=(0.0, 0.0, 100.0, 10.0))
    assert [d.center for d in inst.disks] == [Point(10 * k, 5) for k in range(1, 6)]
    assert all(d.radius == 6.0 for d in inst.disks)
    from geodisk.disks import build_intersection_graph

    g = build_intersection_graph(inst.free_space, inst.disks)
    assert sorted(g.edges) == [(1, 2), (2, 3), (3, 4), (4, 5)]


def test_cluster_preset():
    inst = cluster_instance()
    from geodisk.disks import build_intersection_graph

    g = build_intersection_graph(inst.free_space, inst.disks)
    assert g.m == 6


def test_parameter_validation():
    with pytest.raises(InstanceError):
        generate_instance(seed=1, n_disks=0, n_holes=0)
    with pytest.raises(InstanceError):
        generate_instance(seed=1, n_disks=1, n_holes=0, bbox=(0, 0, 0, 10))
    with pytest.raises(InstanceError):
        generate_instance(seed=1, n_disks=1, n_holes=0, radius_range=(2.0, 1.0))
