"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (visible with ``pytest -s`` or in the
captured output).  The random suites are fully seeded.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from geodisk.coloring import brute_force_q_color, check_coloring, q_color_via_separator
from geodisk.disks import GeodesicDisk, build_intersection_graph, disks_intersect
from geodisk.drawing import check_plane_graph, planarize, realize_drawing
from geodisk.geometry import Point, PolygonWithHoles, point_in_free_space
from geodisk.instances import generate_instance
from geodisk.lattice import refined_distances
from geodisk.metric import build_visibility_graph, geodesic_distance
from geodisk.oracle import (
    all_pairs_hop_distances,
    build_separator_tree,
    query_hop_distance,
)
from geodisk.separator import (
    clique_separator_of_graph,
    compute_schedule,
    reduce_ply,
    schedule_for_k,
    verify_separator,
)

EPSILONS = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))


def _report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} — {detail}")


def _suite_params(count: int, n_lo: int, n_hi: int, seed0: int):
    rng = random.Random(9000 + seed0)
    out = []
    for k in range(count):
        frac = rng.random() ** 2.2  # skew toward small sizes, still reach n_hi
        n = int(n_lo + (n_hi - n_lo) * frac)
        out.append((seed0 + k, n, rng.randint(0, 5)))
    out[-1] = (seed0 + count - 1, n_hi, 3)  # make sure the top size is hit
    return out


def _build(seed: int, n: int, holes: int):
    side = max(10.0, 2.0 * math.sqrt(n))
    base = 1.2 * side / math.sqrt(n)
    inst = generate_instance(
        seed=seed, n_disks=n, n_holes=holes,
        bbox=(0.0, 0.0, side, side), radius_range=(0.5 * base, base),
    )
    return inst, build_intersection_graph(inst.free_space, inst.disks)


@pytest.fixture(scope="module")
def separator_suite():
    """34 instances x 3 epsilons = 102 separator runs, kept for reuse."""
    t0 = time.perf_counter()
    runs = []
    graphs = []
    for seed, n, holes in _suite_params(34, 20, 300, seed0=100):
        inst, g = _build(seed, n, holes)
        graphs.append((inst, g))
        for eps in EPSILONS:
            sep = clique_separator_of_graph(g, eps)
            runs.append((inst, g, eps, sep))
    return runs, graphs, time.perf_counter() - t0


def test_criterion_1_separator_soundness(separator_suite):
    runs, _, build_time = separator_suite
    t0 = time.perf_counter()
    violations = []
    for inst, g, eps, sep in runs:
        out = verify_separator(g, g.graph, sep)
        if out:
            violations.append((inst.metadata["name"], str(eps), out[:2]))
        bound = math.ceil(2 * g.n / 3)
        if max(len(sep.part_a), len(sep.part_b)) > bound:
            violations.append((inst.metadata["name"], str(eps), "balance"))
    elapsed = build_time + (time.perf_counter() - t0)
    ok = not violations and len(runs) >= 100 and elapsed < 600
    _report(
        "criterion 1 (separator soundness)", ok,
        f"{len(runs)} runs, {len(violations)} violations, {elapsed:.1f}s (< 600s)",
    )
    assert not violations, violations[:3]
    assert len(runs) >= 100
    assert elapsed < 600


def test_criterion_2_schedule_exactness():
    ok = True
    for k in range(1, 21):
        s = schedule_for_k(k)
        a = s.alphas
        degree_seq = (Fraction(1),) + a[1:]
        ok &= a[0] == Fraction(2**k - 1, 2 ** (k + 2) - 3)
        if k >= 2:
            ok &= 3 * a[0] == 2 * a[1] - 1
            for i in range(1, k - 1):
                ok &= 3 * a[0] == 2 * a[i + 1] - a[i]
        ok &= 5 * a[0] == 2 - degree_seq[-1]
        ok &= 1 - a[0] == Fraction(3 * 2**k - 2, 4 * 2**k - 3)
    half = compute_schedule(Fraction(1, 2))
    quarter = compute_schedule(Fraction(1, 4))
    ok &= half.alphas == (Fraction(1, 5),) and half.exponent == Fraction(4, 5)
    ok &= quarter.alphas == (Fraction(3, 13), Fraction(11, 13))
    ok &= quarter.exponent == Fraction(10, 13)
    _report("criterion 2 (schedule exactness)", ok,
            "identities exact for k=1..20; alpha=1/5 and (3/13, 11/13) reproduced")
    assert ok


def test_criterion_3_oracle_additive_error():
    checked_pairs = 0
    violations = 0
    rng = random.Random(777)
    for k in range(30):
        n = int(12 + 188 * rng.random() ** 1.8)
        seed = 7000 + k
        _, g = _build(seed, n, rng.randint(0, 5))
        eps = EPSILONS[k % 3]
        tree = build_separator_tree(g, eps)
        for (i, j), exact in all_pairs_hop_distances(g).items():
            d = query_hop_distance(tree, i, j)
            checked_pairs += 1
            if math.isinf(exact) != math.isinf(d):
                violations += 1
            elif math.isfinite(d) and not d <= exact <= d + 1:
                violations += 1
    ok = violations == 0
    _report("criterion 3 (oracle additive error)", ok,
            f"30 instances, {checked_pairs} pairs, {violations} violations")
    assert ok


def test_criterion_4_metric_correctness():
    rng = random.Random(4242)
    # holed instances against the refined lattice
    worst_rel = 0.0
    queries = 0
    for seed in (901, 902, 903, 904, 905, 906):
        inst = generate_instance(
            seed=seed, n_disks=1, n_holes=rng.randint(1, 5),
            bbox=(0.0, 0.0, 12.0, 12.0), radius_range=(0.5, 0.5),
        )
        free = inst.free_space
        pts = []
        while len(pts) < 20:
            p = Point(rng.uniform(0.2, 11.8), rng.uniform(0.2, 11.8))
            if point_in_free_space(free, p):
                pts.append(p)
        graph = build_visibility_graph(free, pts)
        pairs = []
        while len(pairs) < 50:
            a, b = rng.sample(range(len(pts)), 2)
            pairs.append((pts[a], pts[b]))
        grid = refined_distances(free, pairs)
        for (s, t), gd in zip(pairs, grid):
            d = geodesic_distance(graph, s, t)
            rel = abs(gd - d) / max(d, 1e-12)
            worst_rel = max(worst_rel, rel)
            queries += 1
    lattice_ok = worst_rel <= 0.01

    # no-hole instances match euclidean distance
    square = PolygonWithHoles((Point(0, 0), Point(12, 0), Point(12, 12), Point(0, 12)))
    sites = [Point(rng.uniform(0, 12), rng.uniform(0, 12)) for _ in range(40)]
    graph = build_visibility_graph(square, sites)
    euclid_ok = all(
        abs(geodesic_distance(graph, a, b) - a.dist(b)) <= 1e-9
        for a in sites[:20] for b in sites[20:]
    )

    # metric axioms on 1000 sampled triples of one holed instance
    inst = generate_instance(seed=907, n_disks=1, n_holes=4,
                             bbox=(0.0, 0.0, 12.0, 12.0), radius_range=(0.5, 0.5))
    pts = []
    while len(pts) < 25:
        p = Point(rng.uniform(0, 12), rng.uniform(0, 12))
        if point_in_free_space(inst.free_space, p):
            pts.append(p)
    graph = build_visibility_graph(inst.free_space, pts)
    axioms_ok = True
    for _ in range(1000):
        a, b, c = (rng.choice(pts) for _ in range(3))
        dab = geodesic_distance(graph, a, b)
        dba = geodesic_distance(graph, b, a)
        axioms_ok &= abs(dab - dba) <= 1e-9
        axioms_ok &= geodesic_distance(graph, a, c) <= dab + geodesic_distance(graph, b, c) + 1e-9
    ok = lattice_ok and euclid_ok and axioms_ok
    _report("criterion 4 (metric correctness)", ok,
            f"{queries} lattice queries, worst rel err {worst_rel:.4%} (<= 1%); "
            f"euclid {'ok' if euclid_ok else 'BAD'}; axioms on 1000 triples "
            f"{'ok' if axioms_ok else 'BAD'}")
    assert ok


def test_criterion_5_intersection_vs_sampling():
    rng = random.Random(55)
    agreements = 0
    disagreements = []
    for fi in range(10):
        inst = generate_instance(
            seed=500 + fi, n_disks=1, n_holes=rng.randint(0, 4),
            bbox=(0.0, 0.0, 10.0, 10.0), radius_range=(0.4, 0.4),
        )
        free = inst.free_space
        centers = []
        while len(centers) < 40:
            p = Point(rng.uniform(0.2, 9.8), rng.uniform(0.2, 9.8))
            if point_in_free_space(free, p) and (not centers or p.dist(centers[-1]) >= 2.0):
                centers.append(p)
        graph = build_visibility_graph(free, centers)
        xs = np.linspace(0.04, 9.96, 72)
        grid = np.array([
            (x, y) for x in xs for y in xs if point_in_free_space(free, Point(x, y))
        ])
        euclid = np.hypot(grid[:, None, 0] - graph.sites[None, :, 0],
                          grid[:, None, 1] - graph.sites[None, :, 1])
        vis = np.vstack([
            graph.visible_from_point(Point(*q)) for q in grid
        ]).astype(bool)
        masked = np.where(vis, euclid, np.inf)

        def dist_field(src):
            return np.min(masked + graph.site_distances(src)[None, :], axis=1)

        for k in range(0, 40, 2):
            pi, pj = centers[k], centers[k + 1]
            si, sj = graph.site_index(pi), graph.site_index(pj)
            d = float(graph.site_distances(min(si, sj))[max(si, sj)])
            u = rng.uniform(0.35, 0.65)
            if k % 4 == 0:  # deep intersection
                ri, rj = (u + 0.1) * d, (1 - u + 0.1) * d
                expected = True
            else:  # clear miss
                ri, rj = (u - 0.12) * d, (1 - u - 0.12) * d
                expected = False
            test = disks_intersect(graph, GeodesicDisk(1, pi, ri), GeodesicDisk(2, pj, rj))
            di = dist_field(si)
            dj = dist_field(sj)
            found_tight = bool(np.any((di <= ri - 1e-6) & (dj <= rj - 1e-6)))
            found_loose = bool(np.any((di <= ri + 1e-6) & (dj <= rj + 1e-6)))
            agreements += 1
            if expected and not (test and found_tight):
                disagreements.append((fi, k, d, ri, rj, test, found_tight))
            if not expected and (test or found_loose):
                disagreements.append((fi, k, d, ri, rj, test, found_loose))
    ok = not disagreements
    _report("criterion 5 (intersection vs sampling)", ok,
            f"{agreements} pairs checked, {len(disagreements)} disagreements")
    assert ok, disagreements[:3]


def test_criterion_6_coloring_agreement():
    rng = random.Random(66)
    cases = 0
    mismatches = []
    for k in range(10):
        n = rng.randint(6, 14)
        _, g = _build(6600 + k, n, rng.randint(0, 3))
        for q in (2, 3, 4):
            truth = brute_force_q_color(g, q)
            for eps in (Fraction(1, 2), Fraction(1, 4)):
                res = q_color_via_separator(g, q, eps)
                cases += 1
                if res.feasible != truth.feasible:
                    mismatches.append((k, q, str(eps)))
                elif res.feasible and not check_coloring(g, res.assignment, q):
                    mismatches.append((k, q, str(eps), "bad assignment"))
    ok = not mismatches
    _report("criterion 6 (coloring agreement)", ok,
            f"{cases} solver runs against brute force, {len(mismatches)} mismatches")
    assert ok, mismatches


def test_criterion_7_planarization_validity(separator_suite):
    _, graphs, _ = separator_suite
    bad = []
    checked = 0
    for inst, g in graphs[:15]:
        drawing = realize_drawing(g)
        pg = planarize(drawing)
        out = check_plane_graph(pg, drawing)
        checked += 1
        if out:
            bad.append((inst.metadata["name"], out[:2]))
        # residual drawing after ply reduction is covered by the pipeline runs
        schedule = compute_schedule(Fraction(1, 8))
        _, residual = reduce_ply(g, schedule.ply_threshold(g.n))
        rdrawing = realize_drawing(residual)
        rpg = planarize(rdrawing)
        out = check_plane_graph(rpg, rdrawing)
        if out:
            bad.append((inst.metadata["name"], "residual", out[:2]))
    ok = not bad
    _report("criterion 7 (planarization validity)", ok,
            f"{checked} instances, full + residual drawings, {len(bad)} failures")
    assert ok, bad[:3]


def test_criterion_8_empirical_scaling():
    from geodisk.bench import FamilySpec, run_bench, scaling_report, to_csv

    fam = FamilySpec(sizes=[50, 100, 200, 400, 800], seeds=[1], holes=3)
    records = run_bench(list(fam.instances()), [Fraction(1, 8)], query_sample=60)
    report = scaling_report(records)
    all_ok = report["ok_runs"] == report["runs"]
    clique_slope = report["clique_count_slope"]
    entries_slope = report["oracle_entries_slope"]
    _report(
        "criterion 8 (empirical scaling, soft)", all_ok,
        f"clique-count slope {clique_slope:.3f} (target <= 0.85), "
        f"oracle-entries slope {entries_slope:.3f} (target <= 1.9); "
        f"{report['ok_runs']}/{report['runs']} runs ok",
    )
    print(to_csv(records))
    assert all_ok
    assert math.isfinite(clique_slope) and math.isfinite(entries_slope)
