import io
import json
from fractions import Fraction as F

import pytest

import wtaplab as W
from wtaplab.errors import ParseError
from wtaplab.harness import BenchConfig, run_benchmark, summarize


def test_gen_minimal():
    inst = W.gen_random_instance(2, F(1), (1, 1), seed=3)
    assert inst.n_vertices == 2
    assert len(inst.links) == 1
    assert inst.links[0].cost == 1


def test_gen_deterministic():
    a = W.gen_random_instance(7, F(1, 3), (1, 9), seed=11)
    b = W.gen_random_instance(7, F(1, 3), (1, 9), seed=11)
    assert W.serialize_instance(a) == W.serialize_instance(b)


def test_gen_density_one_has_all_pairs():
    inst = W.gen_random_instance(4, F(1), (1, 5), seed=2)
    # shadow completion fills every pair; before it, the three non-tree
    # pairs were all present, so every pair is now a link
    assert len(inst.links) == 6


def test_gen_always_coverable():
    for seed in range(30):
        inst = W.gen_random_instance(2 + seed % 7, F(1, 5), (1, 9), seed=seed)
        assert all(inst.cover[e] for e in inst.real_edges())


def test_parse_serialize_roundtrip():
    for seed in range(25):
        inst = W.gen_random_instance(2 + seed % 6, F(1, 2), (1, 9), seed=seed)
        text = W.serialize_instance(inst)
        back = W.parse_instance(text)
        assert back.equals_structure(inst)


def test_parse_minimal():
    inst = W.parse_instance("wtap 2 1\nedge 0 1\nlink 0 1 5\n")
    assert inst.n_vertices == 2
    assert inst.links[0].cost == 5


def test_parse_rational_costs():
    inst = W.parse_instance("wtap 2 1\nedge 0 1\nlink 0 1 3/2\n")
    assert inst.links[0].cost == F(3, 2)


def test_parse_rejects_zero_denominator():
    with pytest.raises(ParseError):
        W.parse_instance("wtap 2 1\nedge 0 1\nlink 0 1 1/0\n")


def test_parse_error_carries_line_number():
    try:
        W.parse_instance("wtap 2 1\nedge 0 1\nlink 0 1 oops\n")
    except ParseError as exc:
        assert exc.line == 3
    else:
        raise AssertionError("expected ParseError")


def test_bench_single_edge_all_equal():
    cfg = BenchConfig(
        seed=5,
        trials=1,
        n_range=(2, 2),
        link_density=F(1),
        cost_range=(3, 3),
        algorithms=("exact", "dp", "split2", "oddcut", "structured15", "full149"),
        rho_prime=2,
    )
    reports, summary = run_benchmark(cfg)
    r = reports[0]
    assert not r.violations and not r.errors
    costs = set(r.costs.values())
    assert costs == {F(3)}
    assert all(v == 1 for v in r.ratios_opt.values())


def test_bench_split2_never_violates():
    cfg = BenchConfig(
        seed=9,
        trials=25,
        n_range=(3, 7),
        link_density=F(1, 3),
        cost_range=(1, 9),
        algorithms=("split2",),
    )
    reports, summary = run_benchmark(cfg)
    assert summary["violations"] == 0


def test_bench_byte_identical_reruns(tmp_path):
    cfg = BenchConfig(
        seed=17,
        trials=6,
        n_range=(3, 5),
        link_density=F(1, 3),
        cost_range=(1, 9),
        algorithms=("exact", "split2", "full149"),
        rho_prime=2,
    )
    out1, out2 = io.StringIO(), io.StringIO()
    run_benchmark(cfg, out1)
    run_benchmark(cfg, out2)
    assert out1.getvalue() == out2.getvalue()
    assert out1.getvalue().count("\n") == 6


def test_bench_summary_recomputable_from_file():
    cfg = BenchConfig(
        seed=21,
        trials=5,
        n_range=(3, 5),
        link_density=F(1, 3),
        cost_range=(1, 9),
        algorithms=("exact", "split2"),
    )
    buf = io.StringIO()
    reports, summary = run_benchmark(cfg, buf)
    lines = [json.loads(line) for line in buf.getvalue().splitlines()]
    viols = sum(len(rec["violations"]) for rec in lines)
    errs = sum(len(rec["errors"]) for rec in lines)
    assert viols == summary["violations"]
    assert errs == summary["errors"]
    for algo, mean in summary["mean_ratio_opt"].items():
        ratios = [
            F(rec["ratios_opt"][algo])
            for rec in lines
            if algo in rec["ratios_opt"]
        ]
        assert F(mean) == sum(ratios, F(0)) / len(ratios)


def test_bench_config_file(tmp_path):
    path = tmp_path / "bench.cfg"
    path.write_text(
        "seed=3\ntrials=2\nn_range=3,4\nlink_density=1/4\ncost_range=1,5\n"
        "algorithms=exact,split2\ngamma=3/20\np=25/53\nrho_prime=2\n"
    )
    cfg = BenchConfig.from_file(str(path))
    assert cfg.seed == 3 and cfg.trials == 2
    assert cfg.link_density == F(1, 4)
    assert cfg.algorithms == ("exact", "split2")


def test_bench_config_env_override(tmp_path, monkeypatch):
    path = tmp_path / "bench.cfg"
    path.write_text("seed=3\ntrials=1\n")
    monkeypatch.setenv("WTAP_SEED", "99")
    cfg = BenchConfig.from_file(str(path))
    assert cfg.seed == 99
