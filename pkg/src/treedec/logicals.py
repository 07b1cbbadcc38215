"""Enumeration of min-weight logical operators and distance certification.

A weight-d logical operator is a fault set F with HF = 0, AF != 0, |F| = d.
Every such operator is connected in the decoding graph and none of its proper
subsets has a trivial syndrome, so all of them appear as depth-d paths of the
decision tree grown from any one of their faults.  Expansion always follows
the smallest unsatisfied check and prunes any partial set whose height lower
bound already rules out completion within weight d.

Distance certification appends one logical-action row at a time to H as an
extra check, decodes the syndrome with only that check set, and takes the
minimum correction weight over rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .bounds import BoundConfig, combined_bound
from .core import (
    CheckMatrix,
    DecodingProblem,
    FaultSet,
    WeightVector,
    set_to_mask,
    syndrome_of,
)
from .dtd import DecodeOutcome, DecodeStatus, HeightBoundExplorer, dtd_decode


@dataclass(frozen=True)
class LogicalSet:
    """All minimum-weight logical operators of one type."""

    d: int
    operators: frozenset[FaultSet]

    @property
    def count(self) -> int:
        return len(self.operators)


def _logical_action_masks(A: CheckMatrix) -> tuple[int, ...]:
    return A.row_masks


def _acts_nontrivially(faults: FaultSet, a_masks: tuple[int, ...]) -> bool:
    mask = set_to_mask(faults)
    return any((mask & row).bit_count() % 2 for row in a_masks)


def _expand_layer(
    layer: set[FaultSet],
    problem: DecodingProblem,
    d: int,
    next_size: int,
    cfg: BoundConfig,
    cache: dict,
    a_masks: tuple[int, ...],
    final: bool,
) -> set[FaultSet]:
    """One expansion step; keeps final-layer solutions or prunable survivors."""
    H = problem.H
    out: set[FaultSet] = set()
    for faults in layer:
        sigma = syndrome_of(H, faults)
        if not sigma:
            continue
        pick = min(sigma)
        for j in H.rows[pick]:
            if j in faults:
                continue
            child = faults | {j}
            if child in out:
                continue
            child_sigma = sigma ^ H.col_sets[j]
            if final:
                if not child_sigma and _acts_nontrivially(child, a_masks):
                    out.add(child)
            else:
                if not child_sigma:
                    continue
                if combined_bound(child_sigma, H, cfg, cache) + next_size <= d:
                    out.add(child)
    return out


def enclosing_logicals(
    f_in: FaultSet,
    problem: DecodingProblem,
    d: int,
    cfg: BoundConfig | None = None,
) -> set[FaultSet]:
    """All weight-d logical operators whose support contains ``f_in``."""
    if problem.A is None:
        raise ValueError("problem has no logical action matrix")
    if len(f_in) >= d:
        raise ValueError("seed fault set must be lighter than d")
    if cfg is None:
        cfg = BoundConfig.for_matrix(problem.H)
    a_masks = _logical_action_masks(problem.A)
    cache: dict = {}
    layer = {frozenset(f_in)}
    for size in range(len(f_in), d):
        layer = _expand_layer(layer, problem, d, size + 1, cfg, cache, a_masks, final=(size == d - 1))
        if not layer:
            return set()
    return layer


def all_min_weight_logicals(
    problem: DecodingProblem,
    d: int,
    s: int = 2,
    cfg: BoundConfig | None = None,
) -> LogicalSet:
    """Every weight-d logical operator, via layered expansion split at level s.

    Layers 1..s are grown from all single faults in one pass; each level-s
    survivor is then expanded to depth d separately and the results are
    deduplicated by canonical fault-set key.
    """
    if problem.A is None:
        raise ValueError("problem has no logical action matrix")
    if not 1 <= s <= d:
        raise ValueError("separation point must lie in [1, d]")
    if cfg is None:
        cfg = BoundConfig.for_matrix(problem.H)
    a_masks = _logical_action_masks(problem.A)
    cache: dict = {}
    layer: set[FaultSet] = {frozenset({j}) for j in range(problem.H.N)}
    if d == 1:
        ops = {f for f in layer if not syndrome_of(problem.H, f) and _acts_nontrivially(f, a_masks)}
        return LogicalSet(1, frozenset(ops))
    found: set[FaultSet] = set()
    for size in range(1, min(s, d - 1)):
        layer = _expand_layer(layer, problem, d, size + 1, cfg, cache, a_masks, final=False)
    for seed in sorted(layer, key=sorted):
        found |= enclosing_logicals(seed, problem, d, cfg)
    return LogicalSet(d, frozenset(found))


@dataclass(frozen=True)
class DistanceResult:
    """Per-row minimum logical weights and their minimum.

    ``status`` is "exact" when every row finished, "upper_bound" when at least
    one row finished but others timed out, and "unknown" otherwise.
    """

    d: int | None
    per_row: tuple[dict, ...]
    status: str


def _reduce_row_weight(row_mask: int, h_masks: Iterable[int]) -> int:
    improved = True
    while improved:
        improved = False
        for h in h_masks:
            cand = row_mask ^ h
            if cand.bit_count() < row_mask.bit_count():
                row_mask = cand
                improved = True
    return row_mask


def _default_decoder_factory(problem: DecodingProblem) -> Callable:
    explorer = HeightBoundExplorer(problem)

    def decode(sigma, time_budget=None):
        return dtd_decode(problem, sigma, explorer, time_budget=time_budget)

    return decode


def find_distance(
    problem: DecodingProblem,
    decoder_factory: Callable[[DecodingProblem], Callable] | None = None,
    time_budget: float | None = None,
    reduce_basis: bool = True,
) -> DistanceResult:
    """Certify the code distance with a minimum-weight decoder.

    For each row of the logical action matrix, appends the row to H as an
    extra check, decodes the syndrome that sets only that check, and records
    the weight of the minimum-weight correction.  The distance is the minimum
    over rows.  ``time_budget`` (seconds) applies per row; rows that exceed it
    are reported as unknown and downgrade the result to an upper bound.
    """
    if problem.A is None or problem.A.M == 0:
        raise ValueError("problem has no logical action matrix")
    H, A = problem.H, problem.A
    a_masks = list(A.row_masks)
    if reduce_basis:
        a_masks = [_reduce_row_weight(v, H.row_masks) for v in a_masks]
    factory = decoder_factory or _default_decoder_factory
    per_row: list[dict] = []
    weights: list[int] = []
    uniform = WeightVector.uniform(H.N)  # distance counts faults, whatever the noise weights
    for idx, mask in enumerate(a_masks):
        row = sorted(j for j in range(H.N) if mask >> j & 1)
        aug = CheckMatrix.from_rows([list(r) for r in H.rows] + [row], H.N)
        aug_problem = DecodingProblem(aug, None, uniform)
        decode = factory(aug_problem)
        outcome: DecodeOutcome = decode(frozenset({H.M}), time_budget=time_budget)
        if outcome.status is DecodeStatus.FOUND:
            weight = len(outcome.correction)
            weights.append(weight)
            per_row.append(
                {"row": idx, "weight": weight, "witness": sorted(outcome.correction), "status": "found"}
            )
        else:
            per_row.append({"row": idx, "weight": None, "witness": None, "status": outcome.status.value})
    if not weights:
        return DistanceResult(None, tuple(per_row), "unknown")
    status = "exact" if len(weights) == len(a_masks) else "upper_bound"
    return DistanceResult(min(weights), tuple(per_row), status)
