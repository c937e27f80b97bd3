"""Command-line surface tying the pipeline together.

Exit codes: 0 success, 1 infeasible result or verification violation,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .bench import FamilySpec, run_bench, scaling_report, to_csv
from .coloring import ColoringError, brute_force_q_color, check_coloring, q_color_via_separator
from .disks import DiskError, build_intersection_graph
from .drawing import crossing_audit, realize_drawing
from .geometry import GeometryError
from .instances import (
    GenerationError,
    Instance,
    InstanceError,
    chain_instance,
    cluster_instance,
    generate_instance,
    parse_instance,
    write_instance,
)
from .metric import InconsistentPathSystemError, MetricError
from .oracle import (
    OracleError,
    build_separator_tree,
    exact_hop_distance,
    query_hop_distance,
    read_snapshot,
    write_snapshot,
)
from .render import render_svg
from .separator import ScheduleError, clique_separator_of_graph, verify_separator

INPUT_ERRORS = (
    InstanceError, GenerationError, GeometryError, DiskError, MetricError,
    ScheduleError, OracleError, ColoringError, InconsistentPathSystemError,
    ValueError, OSError,
)


def _epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad epsilon {text!r}: {exc}") from exc
    return eps


def _load_instance(path: str) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _separator_json(sep) -> dict:
    return {
        "cliques": [
            {
                "kind": c.kind,
                "members": list(c.members),
                **({"witness": [c.witness.x, c.witness.y]} if c.witness else {}),
            }
            for c in sep.cliques
        ],
        "a": list(sep.part_a),
        "b": list(sep.part_b),
        "clique_count": sep.clique_count,
    }


def cmd_gen(args) -> int:
    if args.preset == "chain":
        inst = chain_instance(n=args.n)
    elif args.preset == "cluster":
        inst = cluster_instance()
    else:
        bbox = tuple(float(x) for x in args.bbox.split(","))
        if len(bbox) != 4:
            raise InstanceError("bbox must be x0,y0,x1,y1")
        inst = generate_instance(
            seed=args.seed, n_disks=args.n, n_holes=args.holes, bbox=bbox,
            radius_range=(args.radius_min, args.radius_max),
        )
    _emit(write_instance(inst), args.out)
    return 0


def cmd_graph(args) -> int:
    inst = _load_instance(args.instance)
    g = build_intersection_graph(inst.free_space, inst.disks)
    doc = {
        "n": g.n,
        "m": g.m,
        "edges": [list(e) for e in sorted(g.edges)],
        "degrees": {str(i): g.degree(i) for i in g.ids()},
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_separate(args) -> int:
    inst = _load_instance(args.instance)
    g = build_intersection_graph(inst.free_space, inst.disks)
    sep = clique_separator_of_graph(g, args.epsilon)
    violations = verify_separator(g, g.graph, sep)
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        return 1
    _emit(json.dumps(_separator_json(sep), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_oracle(args) -> int:
    if args.action == "build":
        if not args.instance or not args.snapshot:
            raise InstanceError("oracle build needs --instance and --snapshot")
        inst = _load_instance(args.instance)
        g = build_intersection_graph(inst.free_space, inst.disks)
        tree = build_separator_tree(g, args.epsilon)
        ids = g.ids()
        checked = 0
        for i in ids[: min(len(ids), 20)]:
            for j in ids[-min(len(ids), 10):]:
                if i >= j:
                    continue
                d = query_hop_distance(tree, i, j)
                e = exact_hop_distance(g, i, j)
                ok = (math.isinf(d) and math.isinf(e)) or \
                    (math.isfinite(d) and d <= e <= d + 1)
                if not ok:
                    print(f"violation: query ({i},{j}) returned {d}, exact {e}",
                          file=sys.stderr)
                    return 1
                checked += 1
        Path(args.snapshot).write_text(write_snapshot(tree), encoding="utf-8")
        print(f"oracle built: {len(tree.nodes)} nodes, "
              f"{tree.storage_entries()} entries, {checked} queries self-checked")
        return 0
    # query
    if not args.snapshot:
        raise InstanceError("oracle query needs --snapshot")
    tree = read_snapshot(Path(args.snapshot).read_text(encoding="utf-8"))
    d = query_hop_distance(tree, args.source, args.target)
    print("inf" if math.isinf(d) else int(d))
    return 0


def cmd_color(args) -> int:
    inst = _load_instance(args.instance)
    g = build_intersection_graph(inst.free_space, inst.disks)
    result = q_color_via_separator(g, args.q, args.epsilon)
    if result.feasible and not check_coloring(g, result.assignment, args.q):
        print("violation: produced assignment failed the propriety check", file=sys.stderr)
        return 1
    if args.check and g.n <= 20:
        truth = brute_force_q_color(g, args.q)
        if truth.feasible != result.feasible:
            print("violation: disagreement with brute force", file=sys.stderr)
            return 1
    doc = {"feasible": result.feasible, "q": args.q}
    if result.feasible:
        doc["assignment"] = {str(k): v for k, v in sorted(result.assignment.items())}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0 if result.feasible else 1


def cmd_audit(args) -> int:
    inst = _load_instance(args.instance)
    g = build_intersection_graph(inst.free_space, inst.disks)
    report = crossing_audit(realize_drawing(g), g.disks)
    doc = {
        "crossings": report.crossing_count,
        "total_ply": report.total_ply,
        "max_ply": report.max_ply,
        "label_histogram": {str(k): v for k, v in sorted(report.label_histogram.items())},
        "n": g.n,
        "m": g.m,
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_render(args) -> int:
    inst = _load_instance(args.instance)
    _emit(render_svg(inst, overlay=args.overlay, epsilon=args.epsilon), args.out)
    return 0


def cmd_bench(args) -> int:
    eps_list = [Fraction(tok) for tok in args.epsilon_list.split(",") if tok]
    if not eps_list:
        raise InstanceError("empty epsilon list")
    sizes = [int(tok) for tok in args.sizes.split(",") if tok]
    seeds = [int(tok) for tok in args.seeds.split(",") if tok]
    family = FamilySpec(sizes=sizes, seeds=seeds, holes=args.holes)
    records = run_bench(list(family.instances()), eps_list, workers=args.workers)
    _emit(to_csv(records), args.out)
    report = scaling_report(records)
    print(
        f"clique-count slope {report['clique_count_slope']:.3f}, "
        f"oracle-entries slope {report['oracle_entries_slope']:.3f} "
        f"({report['ok_runs']}/{report['runs']} runs ok)",
        file=sys.stderr,
    )
    return 0 if report["ok_runs"] == report["runs"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geodisk",
        description="Geodesic disk graphs: separators, distance oracle, coloring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance document")
    p.add_argument("--preset", choices=["random", "chain", "cluster"], default="random")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--holes", type=int, default=2)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--bbox", default="0,0,20,20")
    p.add_argument("--radius-min", type=float, default=1.0)
    p.add_argument("--radius-max", type=float, default=2.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("graph", help="build the intersection graph")
    p.add_argument("--instance", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("separate", help="build and verify a clique separator")
    p.add_argument("--instance", required=True)
    p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 4))
    p.add_argument("--out")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("oracle", help="build or query a distance oracle")
    p.add_argument("action", choices=["build", "query"])
    p.add_argument("--instance")
    p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 4))
    p.add_argument("--snapshot", required=True)
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--target", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("color", help="q-coloring via the separator")
    p.add_argument("--instance", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 2))
    p.add_argument("--check", action="store_true",
                   help="cross-check against brute force (small instances)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("audit", help="crossing/ply audit of the drawing")
    p.add_argument("--instance", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("render", help="render an SVG figure")
    p.add_argument("--instance", required=True)
    p.add_argument("--overlay", choices=["drawing", "separator", "planarized"])
    p.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 2))
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="run the benchmark sweep")
    p.add_argument("--sizes", default="50,100")
    p.add_argument("--seeds", default="1")
    p.add_argument("--holes", type=int, default=2)
    p.add_argument("--epsilon-list", default="1/4")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
