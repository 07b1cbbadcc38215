import json

import pytest
from click.testing import CliRunner

from treedec import save_check_matrix, syndrome_of
from treedec.cli import main, parse_code, parse_duration_ns


@pytest.fixture
def runner():
    return CliRunner()


def write_syndrome(path, indices):
    path.write_text(" ".join(str(i) for i in sorted(indices)) + "\n")


def test_parse_code_specs():
    assert parse_code("color:5").n == 19
    assert parse_code("bb:gross").n == 144
    code = parse_code("bb:6,6,x3+y1+y2,y3+x1+x2")
    assert (code.n, code.k) == (72, 12)


def test_parse_duration():
    assert parse_duration_ns("250us") == 250_000
    assert parse_duration_ns("1ms") == 1_000_000
    assert parse_duration_ns("0.5s") == 500_000_000


def test_decode_found(runner, tmp_path, cc5):
    syn = tmp_path / "syn.txt"
    write_syndrome(syn, syndrome_of(cc5.hx, {4}))
    result = runner.invoke(main, ["decode", "--code", "color:5", "--syndrome", str(syn)])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["status"] == "found" and payload["correction"] == [4]
    assert isinstance(payload["elapsed_ns"], int) and payload["nu"] >= 1


def test_decode_no_solution_exit_code(runner, tmp_path):
    problem_dir = tmp_path / "prob"
    problem_dir.mkdir()
    (problem_dir / "hx.chk").write_text("2 1\n0\n\n")
    syn = tmp_path / "syn.txt"
    write_syndrome(syn, {1})
    result = runner.invoke(main, ["decode", "--problem", str(problem_dir), "--syndrome", str(syn)])
    assert result.exit_code == 1
    assert json.loads(result.output)["status"] == "no_solution"


def test_decode_input_errors_exit_two(runner, tmp_path):
    syn = tmp_path / "syn.txt"
    write_syndrome(syn, {0})
    assert runner.invoke(main, ["decode", "--code", "color:4", "--syndrome", str(syn)]).exit_code == 2
    assert runner.invoke(main, ["decode", "--syndrome", str(syn)]).exit_code == 2
    bad_dir = tmp_path / "bad"
    bad_dir.mkdir()
    (bad_dir / "hx.chk").write_text("1 2\n0 5\n")
    assert runner.invoke(main, ["decode", "--problem", str(bad_dir), "--syndrome", str(syn)]).exit_code == 2


def test_decode_every_strategy(runner, tmp_path, steane):
    syn = tmp_path / "syn.txt"
    write_syndrome(syn, syndrome_of(steane.hx, {6}))
    for decoder in ("bf", "height-bound", "height-bound-unrefined", "height-oracle", "bp-dtd", "bp-osd"):
        result = runner.invoke(
            main, ["decode", "--code", "color:3", "--syndrome", str(syn), "--decoder", decoder]
        )
        assert result.exit_code == 0, (decoder, result.output)
        assert json.loads(result.output)["status"] == "found"


def test_bounds_command(runner, tmp_path, cc7):
    syn = tmp_path / "syn.txt"
    write_syndrome(syn, syndrome_of(cc7.hx, {0, 11}))
    result = runner.invoke(main, ["bounds", "--code", "color:7", "--syndrome", str(syn)])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert set(payload) == {"h1", "h2", "h3", "h4", "color_subset", "cluster", "combined"}
    assert payload["combined"] >= payload["h2"] >= payload["h3"] >= payload["h1"]


def test_logicals_command(runner):
    result = runner.invoke(main, ["logicals", "--code", "color:3", "--d", "3", "--sep", "1", "--operators"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["count"] == 7 and len(payload["operators"]) == 7


def test_distance_command(runner):
    result = runner.invoke(main, ["distance", "--code", "color:3"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["d"] == 3 and payload["status"] == "exact"


def test_bench_deterministic_across_runs_and_workers(runner, tmp_path):
    args = ["bench", "--code", "color:5", "--decoder", "height-bound", "--weight", "2",
            "--trials", "30", "--seed", "7"]
    outputs = []
    for idx, workers in enumerate((1, 2, 1)):
        out_file = tmp_path / f"b{idx}.jsonl"
        result = runner.invoke(main, args + ["--workers", str(workers), "--out", str(out_file)])
        assert result.exit_code == 0, result.output
        outputs.append((out_file.read_bytes(), result.output))
    assert outputs[0] == outputs[1] == outputs[2]
    summary = json.loads(outputs[0][1])
    assert summary["trials"] == 30 and "nu_p50" in summary


def test_bench_requires_exactly_one_noise_option(runner, tmp_path):
    out = tmp_path / "x.jsonl"
    base = ["bench", "--code", "color:3", "--trials", "5", "--out", str(out)]
    assert runner.invoke(main, base).exit_code == 2
    assert runner.invoke(main, base + ["--weight", "1", "--p", "0.1"]).exit_code == 2


def test_cutoff_pipeline(runner, tmp_path):
    out_file = tmp_path / "timed.jsonl"
    result = runner.invoke(main, [
        "bench", "--code", "color:5", "--decoder", "bp-dtd", "--p", "0.02",
        "--trials", "25", "--seed", "1", "--out", str(out_file), "--timing",
    ])
    assert result.exit_code == 0, result.output
    assert "time_p50_ns" in json.loads(result.output)
    curve = runner.invoke(main, ["cutoff", "--in", str(out_file), "--cutoffs", "1ns,1ms,100s"])
    assert curve.exit_code == 0, curve.output
    lines = curve.output.strip().splitlines()
    assert lines[0] == "cutoff_ns,p_fail"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values[0] == 1.0 and values == sorted(values, reverse=True)


def test_cutoff_rejects_untimed_records(runner, tmp_path):
    out_file = tmp_path / "plain.jsonl"
    result = runner.invoke(main, [
        "bench", "--code", "color:3", "--decoder", "height-bound", "--weight", "1",
        "--trials", "5", "--seed", "0", "--out", str(out_file),
    ])
    assert result.exit_code == 0
    curve = runner.invoke(main, ["cutoff", "--in", str(out_file), "--cutoffs", "1ms"])
    assert curve.exit_code == 2


def test_problem_directory_pipeline(runner, tmp_path, steane):
    problem_dir = tmp_path / "steane"
    problem_dir.mkdir()
    save_check_matrix(steane.hx, problem_dir / "hx.chk")
    save_check_matrix(steane.hz, problem_dir / "hz.chk")
    syn = tmp_path / "syn.txt"
    write_syndrome(syn, syndrome_of(steane.hx, {2}))
    result = runner.invoke(main, ["decode", "--problem", str(problem_dir), "--syndrome", str(syn)])
    assert result.exit_code == 0
    assert json.loads(result.output)["correction"] == [2]
    dist = runner.invoke(main, ["distance", "--problem", str(problem_dir)])
    assert dist.exit_code == 0 and json.loads(dist.output)["d"] == 3
