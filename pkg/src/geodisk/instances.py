"""Instance documents: parsing, canonical serialization, and generators.

The on-disk form is JSON: ``{"free_space": {"outer": [[x,y],...],
"holes": [[[x,y],...],...]}, "disks": [{"id":..,"center":[x,y],
"radius":..}], "metadata": {...}}``.  Parsing validates with precise paths;
writing is canonical (sorted keys, two-space indent) so round trips are
byte-stable.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .disks import GeodesicDisk
from .geometry import GeometryError, Point, PolygonWithHoles, point_in_free_space


class InstanceError(ValueError):
    """Schema violation or geometric rejection, tagged with a JSON path."""


@dataclass
class Instance:
    free_space: PolygonWithHoles
    disks: list[GeodesicDisk]
    metadata: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.disks)


def _as_point_list(node, path: str) -> list[Point]:
    if not isinstance(node, list) or len(node) < 3:
        raise InstanceError(f"{path}: expected a list of at least 3 [x, y] pairs")
    pts = []
    for k, item in enumerate(node):
        if (not isinstance(item, list)) or len(item) != 2 \
                or not all(isinstance(c, (int, float)) for c in item):
            raise InstanceError(f"{path}[{k}]: expected [x, y] numbers")
        pts.append(Point(float(item[0]), float(item[1])))
    return pts


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"$: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise InstanceError("$: expected a JSON object")
    fs = doc.get("free_space")
    if not isinstance(fs, dict) or "outer" not in fs:
        raise InstanceError("free_space: expected an object with an 'outer' ring")
    outer = _as_point_list(fs["outer"], "free_space.outer")
    holes = []
    for k, ring in enumerate(fs.get("holes", [])):
        holes.append(_as_point_list(ring, f"free_space.holes[{k}]"))
    try:
        free_space = PolygonWithHoles(tuple(outer), tuple(tuple(h) for h in holes))
    except GeometryError as exc:
        raise InstanceError(f"free_space: {exc}") from exc

    disks_node = doc.get("disks", [])
    if not isinstance(disks_node, list):
        raise InstanceError("disks: expected a list")
    disks = []
    seen = set()
    for k, item in enumerate(disks_node):
        path = f"disks[{k}]"
        if not isinstance(item, dict):
            raise InstanceError(f"{path}: expected an object")
        try:
            did = int(item["id"])
            cx, cy = (float(c) for c in item["center"])
            radius = float(item["radius"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"{path}: needs id, center [x, y] and radius ({exc})") from exc
        if did in seen:
            raise InstanceError(f"{path}: duplicate disk id {did}")
        seen.add(did)
        if radius < 0 or not math.isfinite(radius):
            raise InstanceError(f"{path}.radius: must be finite and nonnegative")
        center = Point(cx, cy)
        if not point_in_free_space(free_space, center):
            raise InstanceError(f"{path}: center outside the free space (disk id {did})")
        disks.append(GeodesicDisk(did, center, radius))

    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise InstanceError("metadata: expected an object")
    return Instance(free_space, disks, metadata)


def write_instance(instance: Instance) -> str:
    doc = {
        "free_space": {
            "outer": [[p.x, p.y] for p in instance.free_space.outer],
            "holes": [[[p.x, p.y] for p in h] for h in instance.free_space.holes],
        },
        "disks": [
            {"id": d.id, "center": [d.center.x, d.center.y], "radius": d.radius}
            for d in sorted(instance.disks, key=lambda d: d.id)
        ],
        "metadata": instance.metadata,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


class GenerationError(RuntimeError):
    """Placement failed within the retry budget."""


def generate_instance(seed: int, n_disks: int, n_holes: int,
                      bbox: tuple[float, float, float, float] = (0.0, 0.0, 20.0, 20.0),
                      radius_range: tuple[float, float] = (1.0, 2.0),
                      name: str | None = None) -> Instance:
    """Deterministic random instance: square holes placed by rejection,
    centers uniform over the free space, radii uniform in the range."""
    if n_disks < 1 or n_holes < 0:
        raise InstanceError("n_disks must be positive and n_holes nonnegative")
    x0, y0, x1, y1 = bbox
    if not (x1 > x0 and y1 > y0):
        raise InstanceError("bbox must be nonempty")
    if radius_range[0] < 0 or radius_range[1] < radius_range[0]:
        raise InstanceError("radius range must be 0 <= lo <= hi")
    rng = random.Random(seed)
    short = min(x1 - x0, y1 - y0)
    margin = 0.06 * short
    gap = 0.04 * short

    holes: list[list[Point]] = []
    squares: list[tuple[float, float, float]] = []  # (cx, cy, half)
    tries = 0
    while len(holes) < n_holes:
        tries += 1
        if tries > 300 * max(1, n_holes):
            raise GenerationError(
                f"could not place {n_holes} holes in {bbox}; try fewer or smaller holes"
            )
        half = 0.5 * rng.uniform(0.08, 0.16) * short
        cx = rng.uniform(x0 + margin + half, x1 - margin - half)
        cy = rng.uniform(y0 + margin + half, y1 - margin - half)
        if any(abs(cx - ox) < half + oh + gap and abs(cy - oy) < half + oh + gap
               for ox, oy, oh in squares):
            continue
        squares.append((cx, cy, half))
        holes.append([
            Point(cx - half, cy - half), Point(cx + half, cy - half),
            Point(cx + half, cy + half), Point(cx - half, cy + half),
        ])

    free_space = PolygonWithHoles(
        (Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)),
        tuple(tuple(h) for h in holes),
    )

    disks = []
    tries = 0
    while len(disks) < n_disks:
        tries += 1
        if tries > 200 * n_disks:
            raise GenerationError("could not place disk centers; free space too small")
        p = Point(rng.uniform(x0, x1), rng.uniform(y0, y1))
        if not point_in_free_space(free_space, p):
            continue
        disks.append(GeodesicDisk(len(disks) + 1, p, rng.uniform(*radius_range)))

    meta = {
        "name": name or f"random-s{seed}-n{n_disks}-h{n_holes}",
        "seed": seed,
        "generator": {
            "preset": "random",
            "n_disks": n_disks,
            "n_holes": n_holes,
            "bbox": list(bbox),
            "radius_range": list(radius_range),
        },
    }
    return Instance(free_space, disks, meta)


def chain_instance(n: int = 5, spacing: float = 10.0, radius: float = 6.0,
                   bbox: tuple[float, float, float, float] | None = None) -> Instance:
    """Collinear chain preset: centers (spacing*k, height/2), path graph."""
    if bbox is None:
        bbox = (0.0, 0.0, spacing * (n + 1), 10.0)
    x0, y0, x1, y1 = bbox
    free_space = PolygonWithHoles(
        (Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1))
    )
    mid = 0.5 * (y0 + y1)
    disks = [GeodesicDisk(k, Point(x0 + spacing * k, mid), radius) for k in range(1, n + 1)]
    meta = {"name": f"chain-n{n}", "seed": 0,
            "generator": {"preset": "chain", "n_disks": n, "spacing": spacing,
                          "radius": radius}}
    return Instance(free_space, disks, meta)


def cluster_instance() -> Instance:
    """Four disks in a tight square; the intersection graph is complete."""
    free_space = PolygonWithHoles(
        (Point(0, 0), Point(10, 0), Point(10, 10), Point(0, 10))
    )
    disks = [
        GeodesicDisk(1, Point(4, 4), 3.0), GeodesicDisk(2, Point(4, 6), 3.0),
        GeodesicDisk(3, Point(6, 4), 3.0), GeodesicDisk(4, Point(6, 6), 3.0),
    ]
    meta = {"name": "cluster-k4", "seed": 0, "generator": {"preset": "cluster"}}
    return Instance(free_space, disks, meta)
