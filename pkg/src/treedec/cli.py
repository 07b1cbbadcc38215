"""Command-line interface.

Code specs take the form ``color:D`` (triangular color code of distance D),
``bb:gross`` (the [[144,12,12]] bivariate bicycle code), or
``bb:L,M,A,B`` with polynomials written as monomial sums, e.g.
``bb:6,6,x3+y1+y2,y3+x1+x2``.  Syndrome files list whitespace-separated
check indices ('#' starts a comment).  All JSON output uses lowercase
snake_case keys and nanosecond integer durations.

Exit codes: 0 on success, 1 when a decode fails (no solution or cap
exceeded), 2 on input errors.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click

from .bounds import (
    BoundConfig,
    cluster_bound,
    color_subset_bound,
    combined_bound,
    h1,
    h2,
    h3,
    h4,
)
from .codes import CssCode, ParseError, bivariate_bicycle, check_coloring, color_code, gross_code, load_problem
from .core import DecodingProblem, WeightVector
from .dtd import DecodeStatus
from .harness import DECODER_NAMES, DecoderSpec, NoiseModel, evaluate, make_decoder
from .logicals import all_min_weight_logicals, find_distance


def _fail_input(message: str):
    raise click.UsageError(message)


def _parse_monomials(text: str) -> list[tuple[int, int]]:
    terms = text.split("+")
    out = []
    for term in terms:
        term = term.strip()
        if term == "1":
            out.append((0, 0))
            continue
        match = re.fullmatch(r"(?:x(\d+))?(?:y(\d+))?", term)
        if not match or not term:
            _fail_input(f"bad monomial {term!r}; expected forms like 1, x3, y2, x1y2")
        i = int(match.group(1) or 0)
        j = int(match.group(2) or 0)
        out.append((i, j))
    return out


def parse_code(spec: str) -> CssCode:
    try:
        kind, _, rest = spec.partition(":")
        if kind == "color":
            return color_code(int(rest))
        if kind == "bb":
            if rest == "gross":
                return gross_code()
            parts = rest.split(",")
            if len(parts) != 4:
                _fail_input("bb spec must be 'bb:gross' or 'bb:L,M,A,B'")
            l, m = int(parts[0]), int(parts[1])
            return bivariate_bicycle(l, m, _parse_monomials(parts[2]), _parse_monomials(parts[3]))
    except (ValueError, AssertionError) as exc:
        _fail_input(f"bad code spec {spec!r}: {exc}")
    _fail_input(f"unknown code spec {spec!r}")


def load_syndrome(path: str, m: int) -> frozenset[int]:
    indices = []
    try:
        for lineno, raw in enumerate(Path(path).open(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            for tok in line.split():
                try:
                    indices.append(int(tok))
                except ValueError:
                    _fail_input(f"{path}:{lineno}: bad syndrome index {tok!r}")
    except OSError as exc:
        _fail_input(str(exc))
    out = frozenset(indices)
    if out and (min(out) < 0 or max(out) >= m):
        _fail_input(f"{path}: syndrome index out of range [0, {m})")
    return out


def _resolve_problem(problem_dir, code_spec, p=None) -> DecodingProblem:
    if (problem_dir is None) == (code_spec is None):
        _fail_input("exactly one of --problem and --code is required")
    if problem_dir is not None:
        try:
            return load_problem(problem_dir)
        except (ParseError, OSError) as exc:
            _fail_input(str(exc))
    code = parse_code(code_spec)
    weights = None
    if p is not None:
        if not 0.0 < p < 0.5:
            _fail_input("--p must lie in (0, 0.5)")
        weights = WeightVector.from_priors([p] * code.n)
    return code.problem_x(weights)


def _decoder_spec(decoder, node_cap, bp_iters, bp_buffer, osd_order, bounds) -> DecoderSpec:
    bounds_tuple = None
    if bounds:
        bounds_tuple = tuple(tok.strip() for tok in bounds.split(",") if tok.strip())
    try:
        return DecoderSpec(
            name=decoder,
            node_cap=node_cap,
            bp_iters=bp_iters,
            bp_buffer=bp_buffer,
            osd_order=osd_order,
            bounds=bounds_tuple,
        )
    except ValueError as exc:
        _fail_input(str(exc))


_DURATION_UNITS = {"ns": 1, "us": 1_000, "ms": 1_000_000, "s": 1_000_000_000}


def parse_duration_ns(text: str) -> int:
    match = re.fullmatch(r"([0-9.]+)\s*(ns|us|ms|s)", text.strip())
    if not match:
        _fail_input(f"bad duration {text!r}; expected e.g. 250us, 1ms, 0.5s")
    return int(float(match.group(1)) * _DURATION_UNITS[match.group(2)])


@click.group()
def main():
    """Decision-tree decoding toolkit for quantum LDPC codes."""


@main.command()
@click.option("--problem", "problem_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--code", "code_spec", default=None, help="color:D | bb:gross | bb:L,M,A,B")
@click.option("--syndrome", "syndrome_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--decoder", type=click.Choice(DECODER_NAMES), default="height-bound")
@click.option("--osd-order", type=int, default=10)
@click.option("--node-cap", type=int, default=None)
@click.option("--bp-iters", type=int, default=None)
@click.option("--bp-buffer", type=int, default=None)
@click.option("--bounds", default=None, help="comma list from h1,h2,h3,h4,color,cluster")
def decode(problem_dir, code_spec, syndrome_file, decoder, osd_order, node_cap, bp_iters, bp_buffer, bounds):
    """Decode one syndrome and print the outcome as JSON."""
    problem = _resolve_problem(problem_dir, code_spec)
    sigma = load_syndrome(syndrome_file, problem.H.M)
    spec = _decoder_spec(decoder, node_cap, bp_iters, bp_buffer, osd_order, bounds)
    outcome = make_decoder(problem, spec)(sigma)
    payload = {
        "status": outcome.status.value,
        "correction": sorted(outcome.correction) if outcome.correction is not None else None,
        "nu": outcome.nu,
        "elapsed_ns": outcome.elapsed_ns,
    }
    click.echo(json.dumps(payload, sort_keys=True))
    if outcome.status is not DecodeStatus.FOUND:
        sys.exit(1)


@main.command()
@click.option("--problem", "problem_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--code", "code_spec", default=None)
@click.option("--decoder", type=click.Choice(DECODER_NAMES), default="height-bound")
@click.option("--weight", type=int, default=None, help="fixed error weight per trial")
@click.option("--p", type=float, default=None, help="i.i.d. prior per fault")
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.option("--workers", type=int, default=1)
@click.option("--out", "out_file", type=click.Path(dir_okay=False), required=True)
@click.option("--timing", is_flag=True, help="include wall-clock fields (non-deterministic output)")
@click.option("--osd-order", type=int, default=10)
@click.option("--node-cap", type=int, default=None)
@click.option("--bp-iters", type=int, default=None)
@click.option("--bp-buffer", type=int, default=None)
@click.option("--bounds", default=None)
def bench(problem_dir, code_spec, decoder, weight, p, trials, seed, workers, out_file, timing,
          osd_order, node_cap, bp_iters, bp_buffer, bounds):
    """Monte-Carlo benchmark: JSONL records to --out, summary JSON to stdout."""
    if (weight is None) == (p is None):
        _fail_input("exactly one of --weight and --p is required")
    problem = _resolve_problem(problem_dir, code_spec, p=p)
    if trials < 1:
        _fail_input("--trials must be positive")
    spec = _decoder_spec(decoder, node_cap, bp_iters, bp_buffer, osd_order, bounds)
    noise = NoiseModel(weight=weight)
    with open(out_file, "w") as sink:
        stats, _ = evaluate(
            problem,
            spec,
            noise,
            trials,
            master_seed=seed,
            workers=workers,
            record_sink=sink,
            sink_timing=timing,
        )
    extra = {"master_seed": seed, "decoder": decoder}
    if not timing:
        stats = type(stats)(
            stats.trials, stats.failures, stats.p_l, stats.wilson_lo, stats.wilson_hi,
            stats.nu_percentiles, None,
        )
    click.echo(stats.to_json(extra))


@main.command()
@click.option("--problem", "problem_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--code", "code_spec", default=None)
@click.option("--decoder", type=click.Choice(["height-bound"]), default="height-bound")
@click.option("--time-budget", type=float, default=None, help="seconds per logical-action row")
@click.option("--sector", type=click.Choice(["x", "z"]), default="x")
def distance(problem_dir, code_spec, decoder, time_budget, sector):
    """Certify the code distance with the minimum-weight decoder."""
    if code_spec is not None and sector == "z":
        problem = parse_code(code_spec).problem_z()
    else:
        problem = _resolve_problem(problem_dir, code_spec)
    if problem.A is None or problem.A.M == 0:
        _fail_input("the problem has no logical action matrix")
    result = find_distance(problem, time_budget=time_budget)
    payload = {"d": result.d, "per_row": list(result.per_row), "status": result.status}
    click.echo(json.dumps(payload, sort_keys=True))
    if result.status != "exact":
        sys.exit(1)


@main.command()
@click.option("--problem", "problem_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--code", "code_spec", default=None)
@click.option("--d", "d_target", type=int, required=True)
@click.option("--sep", "separation", type=int, default=2)
@click.option("--bounds", default=None)
@click.option("--operators", "show_operators", is_flag=True, help="include the operator supports")
def logicals(problem_dir, code_spec, d_target, separation, bounds, show_operators):
    """Enumerate every minimum-weight logical operator."""
    problem = _resolve_problem(problem_dir, code_spec)
    if problem.A is None or problem.A.M == 0:
        _fail_input("the problem has no logical action matrix")
    cfg = None
    if bounds:
        from .harness import bound_config_from_names

        cfg = bound_config_from_names(problem, tuple(tok.strip() for tok in bounds.split(",")))
    try:
        result = all_min_weight_logicals(problem, d_target, s=separation, cfg=cfg)
    except ValueError as exc:
        _fail_input(str(exc))
    payload = {"d": result.d, "count": result.count}
    if show_operators:
        payload["operators"] = sorted(sorted(op) for op in result.operators)
    click.echo(json.dumps(payload, sort_keys=True))


@main.command()
@click.option("--problem", "problem_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--code", "code_spec", default=None)
@click.option("--syndrome", "syndrome_file", required=True, type=click.Path(exists=True, dir_okay=False))
def bounds(problem_dir, code_spec, syndrome_file):
    """Evaluate every height lower bound on one syndrome."""
    problem = _resolve_problem(problem_dir, code_spec)
    H = problem.H
    sigma = load_syndrome(syndrome_file, H.M)
    coloring = check_coloring(H, 3) or check_coloring(H, 4)
    inner_cfg = BoundConfig(
        use_h1=True, use_h2=True, use_h3=True, use_h4=True,
        color_subset=coloring is not None, cluster=False, coloring=coloring,
    )
    full_cfg = BoundConfig(
        use_h1=True, use_h2=True, use_h3=True, use_h4=True,
        color_subset=coloring is not None, cluster=True, coloring=coloring,
    )

    def jsonable(value):
        return value if value != float("inf") else "inf"

    payload = {
        "h1": jsonable(h1(sigma, max(H.c, 1))),
        "h2": jsonable(h2(sigma, H)),
        "h3": jsonable(h3(sigma, H)),
        "h4": jsonable(h4(sigma, H)),
        "color_subset": color_subset_bound(sigma, coloring) if coloring else None,
        "cluster": jsonable(cluster_bound(sigma, H, lambda comp: combined_bound(comp, H, inner_cfg))),
        "combined": jsonable(combined_bound(sigma, H, full_cfg)),
    }
    click.echo(json.dumps(payload, sort_keys=True))


@main.command()
@click.option("--in", "in_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--cutoffs", required=True, help="comma list of durations, e.g. '100us,1ms,10ms'")
def cutoff(in_file, cutoffs):
    """Cutoff-time failure curve from a benchmark JSONL file, as CSV."""
    from .harness import cutoff_curve

    records = []
    with open(in_file) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                _fail_input(f"{in_file}:{lineno}: bad JSON record")
    cut_ns = [parse_duration_ns(tok) for tok in cutoffs.split(",") if tok.strip()]
    if not cut_ns:
        _fail_input("no cutoffs given")
    try:
        curve = cutoff_curve(records, cut_ns)
    except ValueError as exc:
        _fail_input(str(exc))
    click.echo("cutoff_ns,p_fail")
    for t, p_fail in curve:
        click.echo(f"{t},{p_fail}")


if __name__ == "__main__":
    main()
