import json

from wtaplab.cli import main


def _write_instance(tmp_path):
    path = tmp_path / "inst.wtap"
    path.write_text("wtap 3 3\nedge 0 1\nedge 1 2\nlink 0 1 1\nlink 1 2 1\nlink 0 2 3/2\n")
    return path


def test_cli_gen_and_parse(tmp_path, capsys):
    assert main(["gen", "--n", "5", "--density", "1/2", "--seed", "4"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("wtap 5 ")


def test_cli_solve_exact(tmp_path, capsys):
    inst = _write_instance(tmp_path)
    assert main(["solve", "--algo", "exact", "--in", str(inst)]) == 0
    out = capsys.readouterr().out
    assert "cost 3/2" in out
    assert "links 2" in out


def test_cli_solve_full149(tmp_path, capsys):
    inst = _write_instance(tmp_path)
    assert main(["solve", "--algo", "full149", "--in", str(inst), "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("cost ")


def test_cli_lp_values(tmp_path, capsys):
    inst = _write_instance(tmp_path)
    for which in ("cut", "oddcut", "structured", "strong"):
        assert main(["lp", "--which", which, "--in", str(inst)]) == 0
        assert "value 3/2" in capsys.readouterr().out


def test_cli_lp_dump(tmp_path, capsys):
    inst = _write_instance(tmp_path)
    assert main(["lp", "--which", "cut", "--in", str(inst), "--dump"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("min ")
    assert "st" in out.splitlines()


def test_cli_check(tmp_path, capsys):
    inst = _write_instance(tmp_path)
    links = tmp_path / "links.txt"
    links.write_text("2\n")
    assert main(["check", "--in", str(inst), "--links", str(links)]) == 0
    out = capsys.readouterr().out
    assert "feasible true" in out and "cost 3/2" in out
    links.write_text("0\n")
    assert main(["check", "--in", str(inst), "--links", str(links)]) == 1


def test_cli_bench(tmp_path, capsys):
    cfg = tmp_path / "bench.cfg"
    cfg.write_text(
        "seed=2\ntrials=2\nn_range=3,4\nlink_density=1/3\ncost_range=1,5\n"
        "algorithms=exact,split2\n"
    )
    out_path = tmp_path / "report.jsonl"
    assert main(["bench", "--config", str(cfg), "--out", str(out_path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["violations"] == 0
    lines = out_path.read_text().splitlines()
    assert len(lines) == 2
    json.loads(lines[0])
