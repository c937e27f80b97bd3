"""Render, bench and CLI surface tests."""

import json
import math
from fractions import Fraction
from pathlib import Path

import pytest

from geodisk.bench import FamilySpec, run_bench, scaling_report, to_csv
from geodisk.cli import main
from geodisk.instances import chain_instance, cluster_instance, parse_instance, write_instance
from geodisk.render import render_svg


def test_render_deterministic_and_overlays():
    inst = chain_instance(n=5, bbox=(0.0, 0.0, 100.0, 10.0))
    plain = render_svg(inst)
    assert plain == render_svg(inst)
    assert plain.startswith("<svg")
    sep = render_svg(inst, overlay="separator", epsilon=Fraction(1, 2))
    assert sep != plain and "#2ca02c" in sep  # side tint present
    k4plain = render_svg(cluster_instance())
    k4sep = render_svg(cluster_instance(), overlay="separator", epsilon=Fraction(1, 2))
    assert k4sep.count("<circle") > k4plain.count("<circle")  # witness marker added
    k4 = render_svg(cluster_instance(), overlay="planarized")
    assert 'fill="#d62728"' in k4  # crossing marker at the diagonals
    drawn = render_svg(inst, overlay="drawing")
    assert "<polyline" in drawn
    with pytest.raises(ValueError):
        render_svg(inst, overlay="nope")


def test_render_empty_instance():
    inst = chain_instance(n=1)
    inst.disks.clear()
    svg = render_svg(inst)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_bench_rows_and_slopes():
    fam = FamilySpec(sizes=[16, 24], seeds=[1], holes=1)
    records = run_bench(list(fam.instances()), [Fraction(1, 2)], query_sample=40)
    assert len(records) == 2
    assert [r.n for r in records] == [16, 24]
    assert all(r.status == "ok" for r in records), [r.status for r in records]
    assert all(r.max_additive_error <= 1 for r in records)
    csv_text = to_csv(records)
    lines = csv_text.strip().splitlines()
    assert len(lines) == 3 and lines[0].startswith("name,n,holes,epsilon,m,")
    report = scaling_report(records)
    assert report["ok_runs"] == 2
    assert math.isfinite(report["clique_count_slope"])


def test_bench_rows_deterministic_modulo_timing():
    fam = FamilySpec(sizes=[16], seeds=[3], holes=2)
    a = run_bench(list(fam.instances()), [Fraction(1, 2)], query_sample=20)
    b = run_bench(list(fam.instances()), [Fraction(1, 2)], query_sample=20)

    def strip_times(rec):
        row = rec.row()
        row.pop("build_seconds")
        row.pop("query_mean_seconds")
        return row

    assert [strip_times(r) for r in a] == [strip_times(r) for r in b]


def test_bench_requires_epsilons():
    fam = FamilySpec(sizes=[12], seeds=[1], holes=0)
    with pytest.raises(ValueError):
        run_bench(list(fam.instances()), [])


def test_cli_gen_graph_separate(tmp_path: Path):
    inst_path = tmp_path / "chain.json"
    assert main(["gen", "--preset", "chain", "--n", "5", "--out", str(inst_path)]) == 0
    inst = parse_instance(inst_path.read_text())
    assert inst.n == 5

    out = tmp_path / "graph.json"
    assert main(["graph", "--instance", str(inst_path), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["n"] == 5 and doc["m"] == 4

    sep_out = tmp_path / "sep.json"
    assert main(["separate", "--instance", str(inst_path),
                 "--epsilon", "1/2", "--out", str(sep_out)]) == 0
    sep = json.loads(sep_out.read_text())
    assert sep["cliques"][0]["members"] == [3]


def test_cli_oracle_roundtrip(tmp_path: Path):
    inst_path = tmp_path / "c.json"
    main(["gen", "--preset", "chain", "--n", "5", "--out", str(inst_path)])
    snap = tmp_path / "oracle.txt"
    assert main(["oracle", "build", "--instance", str(inst_path),
                 "--epsilon", "1/2", "--snapshot", str(snap)]) == 0
    assert snap.exists()
    assert main(["oracle", "query", "--snapshot", str(snap),
                 "--source", "1", "--target", "5"]) == 0


def test_cli_color_exit_codes(tmp_path: Path):
    inst_path = tmp_path / "k4.json"
    main(["gen", "--preset", "cluster", "--out", str(inst_path)])
    assert main(["color", "--instance", str(inst_path), "--q", "4", "--check"]) == 0
    assert main(["color", "--instance", str(inst_path), "--q", "3", "--check"]) == 1


def test_cli_audit_and_render(tmp_path: Path):
    inst_path = tmp_path / "k4.json"
    main(["gen", "--preset", "cluster", "--out", str(inst_path)])
    audit_out = tmp_path / "audit.json"
    assert main(["audit", "--instance", str(inst_path), "--out", str(audit_out)]) == 0
    doc = json.loads(audit_out.read_text())
    assert doc["crossings"] == 1 and doc["total_ply"] == 4
    svg_out = tmp_path / "fig.svg"
    assert main(["render", "--instance", str(inst_path), "--overlay", "planarized",
                 "--out", str(svg_out)]) == 0
    assert svg_out.read_text().startswith("<svg")


def test_cli_bench(tmp_path: Path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--sizes", "12,16", "--seeds", "1", "--holes", "1",
                 "--epsilon-list", "1/2", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3


def test_cli_input_errors(tmp_path: Path):
    missing = tmp_path / "missing.json"
    assert main(["graph", "--instance", str(missing)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert main(["graph", "--instance", str(bad)]) == 2
    assert main(["bench", "--sizes", "12", "--epsilon-list", ""]) == 2


def test_cli_gen_determinism(tmp_path: Path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    args = ["gen", "--preset", "random", "--n", "10", "--holes", "2", "--seed", "9"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_render_determinism(tmp_path: Path):
    inst_path = tmp_path / "i.json"
    main(["gen", "--preset", "random", "--n", "8", "--holes", "1",
          "--seed", "4", "--out", str(inst_path)])
    s1 = tmp_path / "1.svg"
    s2 = tmp_path / "2.svg"
    for target in (s1, s2):
        assert main(["render", "--instance", str(inst_path), "--overlay", "separator",
                     "--epsilon", "1/4", "--out", str(target)]) == 0
    assert s1.read_bytes() == s2.read_bytes()
