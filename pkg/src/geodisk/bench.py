"""Benchmark harness: runs the full pipeline over instance families and
emits one CSV row per (instance, epsilon) run, plus log-log slopes of the
clique count and oracle storage against n."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .disks import build_intersection_graph
from .drawing import find_crossings, realize_drawing
from .instances import Instance, generate_instance
from .oracle import build_separator_tree, exact_hop_distance, query_hop_distance
from .separator import clique_separator_of_graph, verify_separator

CSV_FIELDS = [
    "name", "n", "holes", "epsilon", "m", "crossings", "clique_count",
    "max_clique", "balance", "oracle_entries", "build_seconds",
    "query_mean_seconds", "max_additive_error", "status",
]


@dataclass
class BenchRecord:
    name: str
    n: int
    holes: int
    epsilon: str
    m: int = 0
    crossings: int = 0
    clique_count: int = 0
    max_clique: int = 0
    balance: float = 0.0
    oracle_entries: int = 0
    build_seconds: float = 0.0
    query_mean_seconds: float = 0.0
    max_additive_error: float = 0.0
    status: str = "ok"

    def row(self) -> dict:
        return {
            "name": self.name, "n": self.n, "holes": self.holes,
            "epsilon": self.epsilon, "m": self.m, "crossings": self.crossings,
            "clique_count": self.clique_count, "max_clique": self.max_clique,
            "balance": f"{self.balance:.4f}",
            "oracle_entries": self.oracle_entries,
            "build_seconds": f"{self.build_seconds:.4f}",
            "query_mean_seconds": f"{self.query_mean_seconds:.6g}",
            "max_additive_error": self.max_additive_error,
            "status": self.status,
        }


@dataclass
class FamilySpec:
    """One row per (size, seed, epsilon) triple."""

    sizes: list[int]
    seeds: list[int] = field(default_factory=lambda: [1])
    holes: int = 2
    box_scale: float = 2.0      # bbox side = box_scale * sqrt(n)
    radius_scale: float = 1.2   # radii ~ radius_scale * side / sqrt(n)

    def instances(self):
        for n in self.sizes:
            for seed in self.seeds:
                side = max(10.0, self.box_scale * math.sqrt(n))
                base = self.radius_scale * side / math.sqrt(n)
                yield generate_instance(
                    seed=seed, n_disks=n, n_holes=self.holes,
                    bbox=(0.0, 0.0, side, side),
                    radius_range=(0.5 * base, 1.0 * base),
                    name=f"fam-n{n}-s{seed}",
                )


def run_single(instance: Instance, epsilon, query_sample: int = 200) -> BenchRecord:
    rec = BenchRecord(
        name=instance.metadata.get("name", "instance"),
        n=instance.n,
        holes=len(instance.free_space.holes),
        epsilon=str(Fraction(epsilon)),
    )
    try:
        t0 = time.perf_counter()
        g = build_intersection_graph(instance.free_space, instance.disks)
        rec.m = g.m
        rec.crossings = len(find_crossings(realize_drawing(g)))
        sep = clique_separator_of_graph(g, epsilon)
        violations = verify_separator(g, g.graph, sep)
        if violations:
            rec.status = "separator-violation: " + violations[0]
            return rec
        rec.clique_count = sep.clique_count
        rec.max_clique = max((len(c.members) for c in sep.cliques), default=0)
        rec.balance = max(len(sep.part_a), len(sep.part_b)) / max(1, g.n)
        tree = build_separator_tree(g, epsilon)
        rec.build_seconds = time.perf_counter() - t0
        rec.oracle_entries = tree.storage_entries()

        ids = g.ids()
        pairs = []
        if len(ids) >= 2:
            rng = np.random.default_rng(12345)
            want = min(query_sample, len(ids) * (len(ids) - 1) // 2)
            seen = set()
            while len(pairs) < want:
                i, j = rng.integers(0, len(ids), size=2)
                if i == j:
                    continue
                key = (min(i, j), max(i, j))
                if key in seen:
                    continue
                seen.add(key)
                pairs.append((ids[key[0]], ids[key[1]]))
        t1 = time.perf_counter()
        worst = 0.0
        for i, j in pairs:
            d = query_hop_distance(tree, i, j)
            e = exact_hop_distance(g, i, j)
            if math.isinf(d) != math.isinf(e):
                rec.status = f"infinity-disagreement on ({i},{j})"
                return rec
            if math.isfinite(d):
                if not d <= e <= d + 1:
                    rec.status = f"additive-error-violation on ({i},{j}): {d} vs {e}"
                    return rec
                worst = max(worst, e - d)
        rec.query_mean_seconds = (time.perf_counter() - t1) / max(1, len(pairs))
        rec.max_additive_error = worst
    except Exception as exc:  # recorded, the sweep continues
        rec.status = f"error: {type(exc).__name__}: {exc}"
    return rec


def _runner(args):
    instance_text, epsilon_str, sample = args
    from .instances import parse_instance

    return run_single(parse_instance(instance_text), Fraction(epsilon_str), sample)


def run_bench(instances: list[Instance], eps_list, workers: int = 1,
              query_sample: int = 200) -> list[BenchRecord]:
    """One record per (instance, epsilon), in spec order."""
    if not eps_list:
        raise ValueError("epsilon list must not be empty")
    jobs = [(inst, eps) for inst in instances for eps in eps_list]
    if workers <= 1:
        return [run_single(inst, eps, query_sample) for inst, eps in jobs]
    from .instances import write_instance

    payload = [(write_instance(inst), str(Fraction(eps)), query_sample)
               for inst, eps in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_runner, payload))


def to_csv(records: list[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def loglog_slope(xs: list[float], ys: list[float]) -> float:
    """Least-squares slope of log y against log x (ignoring nonpositives)."""
    pts = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pts) < 2:
        return float("nan")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    return float(np.polyfit(lx, ly, 1)[0])


def scaling_report(records: list[BenchRecord]) -> dict:
    ok = [r for r in records if r.status == "ok"]
    ns = [r.n for r in ok]
    return {
        "clique_count_slope": loglog_slope(ns, [r.clique_count for r in ok]),
        "oracle_entries_slope": loglog_slope(ns, [r.oracle_entries for r in ok]),
        "runs": len(records),
        "ok_runs": len(ok),
    }
