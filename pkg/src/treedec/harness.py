"""Noise sampling, Monte-Carlo evaluation, and decoder benchmarking statistics.

Reproducibility contract: the random generator for trial i is seeded from the
pair (master_seed, i), so aggregates and record streams are identical for any
worker count and across runs.  Wall-clock timings are measured around the
decode call only and are the single non-deterministic quantity; they are
excluded from serialized records unless explicitly requested.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Callable, Sequence, TextIO

import numpy as np

from .bounds import BoundConfig
from .bp import BpConfig
from .core import DecodingProblem, FaultSet, Syndrome, syndrome_of
from .dtd import (
    BpGuidedExplorer,
    BreadthFirstExplorer,
    DecodeOutcome,
    DecodeStatus,
    HeightBoundExplorer,
    HeightOracleExplorer,
    dtd_decode,
)
from .osd import bp_osd_decode


def sample_fixed_weight(n: int, w: int, rng: np.random.Generator) -> FaultSet:
    """A uniformly random w-subset of [0, n)."""
    if not 0 <= w <= n:
        raise ValueError(f"weight {w} out of range [0, {n}]")
    if w == 0:
        return frozenset()
    return frozenset(int(j) for j in rng.choice(n, size=w, replace=False))


def sample_iid(weights, rng: np.random.Generator) -> FaultSet:
    """Each fault occurs independently with its prior probability."""
    p = np.asarray(weights.p, dtype=float)
    hits = np.flatnonzero(rng.random(len(p)) < p)
    return frozenset(int(j) for j in hits)


def wilson_interval(n_fail: int, n_trials: int) -> tuple[float, float]:
    """Wilson score interval for the failure probability, half-width 2."""
    if not 0 <= n_fail <= n_trials or n_trials < 1:
        raise ValueError("need 0 <= n_fail <= n_trials with at least one trial")
    f = n_fail
    n = n_trials
    scale = 1.0 / (1.0 + 4.0 / n)
    center = f / n + 2.0 / n
    half = (2.0 / n) * math.sqrt(f * (1.0 - f / n) + 1.0)
    lo = scale * (center - half)
    hi = scale * (center + half)
    return (max(0.0, lo), min(1.0, hi))


def percentile_nearest_rank(values: Sequence[float], q: float) -> float:
    """Nearest-rank percentile: the ceil(q/100 * n)-th order statistic."""
    if not values:
        raise ValueError("percentile of empty sample")
    if not 0 < q <= 100:
        raise ValueError("percentile rank must lie in (0, 100]")
    ordered = sorted(values)
    rank = max(1, math.ceil(q / 100.0 * len(ordered)))
    return ordered[rank - 1]


def bootstrap_percentile_interval(
    values: Sequence[float],
    q: float,
    resamples: int = 1000,
    seed: int = 0,
) -> tuple[float, float]:
    """Resampling min/max spread of a nearest-rank percentile estimate."""
    arr = np.asarray(sorted(values), dtype=float)
    rng = np.random.default_rng(seed)
    estimates = []
    for _ in range(resamples):
        sample = rng.choice(arr, size=len(arr), replace=True)
        estimates.append(percentile_nearest_rank(sample.tolist(), q))
    return (min(estimates), max(estimates))


@dataclass(frozen=True)
class NoiseModel:
    """Fixed-weight sampling when ``weight`` is set, else i.i.d. per-fault priors."""

    weight: int | None = None

    def sample(self, problem: DecodingProblem, rng: np.random.Generator) -> FaultSet:
        if self.weight is not None:
            return sample_fixed_weight(problem.H.N, self.weight, rng)
        return sample_iid(problem.weights, rng)


@dataclass(frozen=True)
class SampleRecord:
    """One Monte-Carlo trial: the sampled fault, the outcome, and the verdict."""

    trial: int
    true_fault: FaultSet
    status: DecodeStatus
    success: bool
    nu: int
    elapsed_ns: int

    def to_json(self, timing: bool = False) -> str:
        payload = {
            "seed": self.trial,
            "true_fault": sorted(self.true_fault),
            "status": self.status.value,
            "success": self.success,
            "nu": self.nu,
        }
        if timing:
            payload["elapsed_ns"] = self.elapsed_ns
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class EvalStats:
    trials: int
    failures: int
    p_l: float
    wilson_lo: float
    wilson_hi: float
    nu_percentiles: dict[int, float]
    time_percentiles_ns: dict[int, float] | None = None
    nu_percentile_ci: dict[int, tuple[float, float]] | None = None

    def to_json(self, extra: dict | None = None) -> str:
        payload = {
            "trials": self.trials,
            "failures": self.failures,
            "p_l": self.p_l,
            "wilson_lo": self.wilson_lo,
            "wilson_hi": self.wilson_hi,
        }
        for q, v in self.nu_percentiles.items():
            payload[f"nu_p{q}"] = v
        if self.time_percentiles_ns is not None:
            for q, v in self.time_percentiles_ns.items():
                payload[f"time_p{q}_ns"] = v
        if self.nu_percentile_ci is not None:
            for q, (lo, hi) in self.nu_percentile_ci.items():
                payload[f"nu_p{q}_lo"] = lo
                payload[f"nu_p{q}_hi"] = hi
        if extra:
            payload.update(extra)
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Decoder construction shared by the harness and the CLI
# ---------------------------------------------------------------------------

DECODER_NAMES = (
    "bf",
    "height-bound",
    "height-bound-unrefined",
    "height-oracle",
    "bp-dtd",
    "bp-osd",
)


@dataclass(frozen=True)
class DecoderSpec:
    """Picklable decoder description; realized per-process by make_decoder."""

    name: str
    node_cap: int | None = None
    bp_iters: int | None = None
    bp_buffer: int | None = None
    osd_order: int = 10
    bounds: tuple[str, ...] | None = None
    oracle_cap: float | None = None

    def __post_init__(self):
        if self.name not in DECODER_NAMES:
            raise ValueError(f"unknown decoder {self.name!r}; expected one of {DECODER_NAMES}")


def bound_config_from_names(problem: DecodingProblem, names: tuple[str, ...] | None) -> BoundConfig | None:
    if names is None:
        return None
    chosen = set(names)
    unknown = chosen - {"h1", "h2", "h3", "h4", "color", "cluster"}
    if unknown:
        raise ValueError(f"unknown bound names: {sorted(unknown)}")
    base = BoundConfig.for_matrix(problem.H) if "color" in chosen else BoundConfig(coloring=None)
    return BoundConfig(
        use_h1="h1" in chosen,
        use_h2="h2" in chosen,
        use_h3="h3" in chosen,
        use_h4="h4" in chosen,
        color_subset="color" in chosen,
        cluster="cluster" in chosen,
        coloring=base.coloring,
    )


def make_decoder(problem: DecodingProblem, spec: DecoderSpec) -> Callable[[Syndrome], DecodeOutcome]:
    """Build a syndrome -> DecodeOutcome callable for the given strategy."""
    node_cap = spec.node_cap
    if spec.name == "bf":
        explorer = BreadthFirstExplorer(problem)
    elif spec.name in ("height-bound", "height-bound-unrefined"):
        t_end = spec.bp_iters or 12
        l_buff = min(spec.bp_buffer or 8, t_end)
        explorer = HeightBoundExplorer(
            problem,
            cfg=bound_config_from_names(problem, spec.bounds),
            bp_cfg=BpConfig(t_end=t_end, l_buff=l_buff),
            refined=(spec.name == "height-bound"),
        )
    elif spec.name == "height-oracle":
        explorer = HeightOracleExplorer(problem, cap=spec.oracle_cap)
    elif spec.name == "bp-dtd":
        t_end = spec.bp_iters or 12
        l_buff = min(spec.bp_buffer or 8, t_end)
        explorer = BpGuidedExplorer(
            problem,
            root_cfg=BpConfig(t_end=100, l_buff=min(l_buff, 100)),
            node_cfg=BpConfig(t_end=t_end, l_buff=l_buff),
        )
        if node_cap is None:
            node_cap = 50_000
    elif spec.name == "bp-osd":
        t_end = spec.bp_iters or 100
        l_buff = min(spec.bp_buffer or 8, t_end)
        cfg = BpConfig(t_end=t_end, l_buff=l_buff)

        def decode_osd(sigma: Syndrome) -> DecodeOutcome:
            return bp_osd_decode(problem, sigma, cfg, spec.osd_order)

        return decode_osd
    else:  # pragma: no cover - guarded by DecoderSpec
        raise ValueError(spec.name)

    def decode(sigma: Syndrome) -> DecodeOutcome:
        return dtd_decode(problem, sigma, explorer, node_cap=node_cap)

    return decode


# ---------------------------------------------------------------------------
# Monte-Carlo evaluation
# ---------------------------------------------------------------------------


def _run_one(
    problem: DecodingProblem,
    decode: Callable[[Syndrome], DecodeOutcome],
    noise: NoiseModel,
    master_seed: int,
    trial: int,
) -> SampleRecord:
    rng = np.random.default_rng((master_seed, trial))
    fault = noise.sample(problem, rng)
    sigma = syndrome_of(problem.H, fault)
    t0 = time.perf_counter_ns()
    outcome = decode(sigma)
    elapsed = time.perf_counter_ns() - t0
    success = False
    if outcome.status is DecodeStatus.FOUND:
        ok_syndrome = syndrome_of(problem.H, outcome.correction) == sigma
        if problem.A is None:
            success = ok_syndrome
        else:
            residual = outcome.correction ^ fault
            ok_logical = not any(
                (len(row_set & residual)) % 2 for row_set in problem.A.row_sets
            )
            success = ok_syndrome and ok_logical
    return SampleRecord(trial, fault, outcome.status, success, outcome.nu, elapsed)


_WORKER_STATE: dict = {}


def _worker_init(problem, spec, noise, master_seed):
    _WORKER_STATE["problem"] = problem
    _WORKER_STATE["decode"] = make_decoder(problem, spec)
    _WORKER_STATE["noise"] = noise
    _WORKER_STATE["master_seed"] = master_seed


def _worker_run(trial: int) -> SampleRecord:
    return _run_one(
        _WORKER_STATE["problem"],
        _WORKER_STATE["decode"],
        _WORKER_STATE["noise"],
        _WORKER_STATE["master_seed"],
        trial,
    )


def evaluate(
    problem: DecodingProblem,
    decoder: DecoderSpec | Callable[[Syndrome], DecodeOutcome],
    noise: NoiseModel,
    trials: int,
    master_seed: int = 0,
    workers: int = 1,
    percentiles: Sequence[int] = (50, 95),
    record_sink: TextIO | None = None,
    sink_timing: bool = False,
    bootstrap: bool = False,
) -> tuple[EvalStats, list[SampleRecord]]:
    """Sample faults, decode their syndromes, and aggregate statistics.

    A trial succeeds when the decoder returns a correction with the sampled
    syndrome and the same logical action as the true fault (syndrome-only when
    the problem has no logical action matrix); cap-exceeded and no-solution
    outcomes count as failures.  Records stream to ``record_sink`` as JSON
    lines in trial order.  Parallel workers need a picklable DecoderSpec;
    callables run serially.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if workers > 1 and isinstance(decoder, DecoderSpec):
        with Pool(workers, initializer=_worker_init, initargs=(problem, decoder, noise, master_seed)) as pool:
            records = list(pool.map(_worker_run, range(trials), chunksize=max(1, trials // (4 * workers))))
    else:
        decode = make_decoder(problem, decoder) if isinstance(decoder, DecoderSpec) else decoder
        records = [_run_one(problem, decode, noise, master_seed, t) for t in range(trials)]
    records.sort(key=lambda r: r.trial)
    if record_sink is not None:
        for rec in records:
            record_sink.write(rec.to_json(timing=sink_timing) + "\n")
    failures = sum(1 for r in records if not r.success)
    lo, hi = wilson_interval(failures, trials)
    nus = [r.nu for r in records]
    nu_pct = {q: percentile_nearest_rank(nus, q) for q in percentiles}
    time_pct = {q: percentile_nearest_rank([r.elapsed_ns for r in records], q) for q in percentiles}
    nu_ci = {q: bootstrap_percentile_interval(nus, q) for q in percentiles} if bootstrap else None
    stats = EvalStats(trials, failures, failures / trials, lo, hi, nu_pct, time_pct, nu_ci)
    return stats, records


def cutoff_curve(
    records: Sequence[SampleRecord] | Sequence[dict],
    cutoffs_ns: Sequence[int],
) -> list[tuple[int, float]]:
    """Failure probability as a function of the decoding time budget.

    A trial fails at cutoff T when it ran longer than T or finished within T
    with an unsuccessful result.
    """
    if not records:
        raise ValueError("no records")
    pairs = []
    for rec in records:
        if isinstance(rec, dict):
            if "elapsed_ns" not in rec:
                raise ValueError("records lack elapsed_ns; re-run the benchmark with timing enabled")
            pairs.append((rec["elapsed_ns"], bool(rec["success"])))
        else:
            pairs.append((rec.elapsed_ns, rec.success))
    out = []
    total = len(pairs)
    for cutoff in cutoffs_ns:
        bad = sum(1 for elapsed, success in pairs if elapsed > cutoff or not success)
        out.append((int(cutoff), bad / total))
    return out
