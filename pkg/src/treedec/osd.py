"""BP with ordered-statistics post-processing (the baseline decoder).

When BP fails to converge, its soft output orders the columns of H by
reliability (ascending final LPR: most-likely-fault columns first, column
index as tie-break).  The first rank(H) independent columns in that order
form the basis block S, the rest form T, and the unique solution of
S x = sigma yields the order-0 correction.  Higher orders sweep low-weight
perturbations t on the leading T columns and keep the lightest candidate.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .bounds import h1
from .bp import BpConfig, bp_decode
from .core import CheckMatrix, DecodingProblem, Syndrome, syndrome_of, weight_of
from .dtd import DecodeOutcome, DecodeStatus


@dataclass(frozen=True)
class OsdDecomposition:
    """Reliability-ordered decomposition H * Pi = [S | T] with S x = sigma solved.

    ``perm`` maps permuted positions to original columns; the first ``rank``
    entries are the independent S columns, the rest the T block.  ``x`` solves
    S x = sigma, and ``reduced_t`` holds S^+ applied to each T column (so
    S^+ (T t) is an XOR of its columns).
    """

    perm: tuple[int, ...]
    rank: int
    s: np.ndarray
    t: np.ndarray
    x: np.ndarray
    reduced_t: np.ndarray

    @property
    def s_cols(self) -> tuple[int, ...]:
        return self.perm[: self.rank]

    @property
    def t_cols(self) -> tuple[int, ...]:
        return self.perm[self.rank :]


def _rref_in_place(mat: np.ndarray, n_pivot_cols: int) -> list[int]:
    """Gauss-Jordan over GF(2), searching pivots in the first n_pivot_cols."""
    rows = mat.shape[0]
    pivots: list[int] = []
    r = 0
    for col in range(n_pivot_cols):
        hits = np.flatnonzero(mat[r:, col]) + r
        if hits.size == 0:
            continue
        pivot = hits[0]
        if pivot != r:
            mat[[r, pivot]] = mat[[pivot, r]]
        others = np.flatnonzero(mat[:, col])
        others = others[others != r]
        mat[others] ^= mat[r]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    return pivots


def osd_decompose(H: CheckMatrix, lpr: np.ndarray, sigma: Syndrome) -> OsdDecomposition | None:
    """Build the reliability decomposition; None when sigma is outside colspan(H)."""
    n = H.N
    order = np.lexsort((np.arange(n), np.asarray(lpr, dtype=float)))
    dense = H.to_dense()[:, order]
    syn = np.zeros((H.M, 1), dtype=np.uint8)
    for i in sigma:
        syn[i, 0] = 1
    work = np.concatenate([dense, syn], axis=1)
    pivot_positions = _rref_in_place(work, n)
    rank = len(pivot_positions)
    if np.any(work[rank:, n]):
        return None
    pivot_set = set(pivot_positions)
    non_pivots = [p for p in range(n) if p not in pivot_set]
    perm = tuple(int(order[p]) for p in pivot_positions + non_pivots)
    s_block = dense[:, pivot_positions].copy()
    t_block = dense[:, non_pivots].copy() if non_pivots else np.zeros((H.M, 0), np.uint8)
    x = work[:rank, n].copy()
    reduced_t = work[:rank, non_pivots].copy() if non_pivots else np.zeros((rank, 0), np.uint8)
    return OsdDecomposition(perm, rank, s_block, t_block, x, reduced_t)


def sweep_patterns(n_t: int, order: int, method: str) -> list[tuple[int, ...]]:
    """Perturbation supports for the given order, excluding the empty pattern.

    Combination sweep (``cs``): every weight-1 pattern plus all weight-2
    patterns on the first min(order, n_t) T columns.  Exhaustive search
    (``es``): every non-empty pattern on the first min(order, n_t) columns.
    """
    lam = min(order, n_t)
    if method == "cs":
        singles = [(i,) for i in range(n_t)]
        pairs = [(i, j) for i in range(lam) for j in range(i + 1, lam)]
        return singles + pairs
    if method == "es":
        out: list[tuple[int, ...]] = []
        for k in range(1, lam + 1):
            out.extend(itertools.combinations(range(lam), k))
        return out
    raise ValueError(f"unknown sweep method {method!r}")


def bp_osd_decode(
    problem: DecodingProblem,
    sigma: Syndrome,
    bp_cfg: BpConfig = BpConfig(t_end=100, l_buff=8),
    osd_order: int = 10,
    method: str = "cs",
) -> DecodeOutcome:
    """Decode with BP, falling back to ordered-statistics post-processing.

    A converged BP estimate is returned outright only when the degree bound
    certifies it minimum-weight; otherwise it stays in the running as a
    candidate and the ordered-statistics stage may improve on it (BP can
    converge to a degenerate, heavier coset representative).

    ``osd_order`` = 0 selects plain order-0; the combination sweep evaluates
    (N - rank) + C(order, 2) perturbations on top of the order-0 incumbent.
    """
    start = time.perf_counter_ns()
    H, weights = problem.H, problem.weights
    scale = 1.0 if weights.is_uniform else weights.min_weight

    def outcome(status, correction, info):
        return DecodeOutcome(status, correction, 0, time.perf_counter_ns() - start, 0, info)

    bp = bp_decode(H, weights, sigma, frozenset(), bp_cfg)
    bp_weight = None
    if bp.converged:
        bp_weight = weight_of(bp.estimate, weights)
        if bp_weight <= h1(sigma, max(H.c, 1)) * scale + 1e-9:
            return outcome(DecodeStatus.FOUND, bp.estimate, {"stage": "bp"})
    decomp = osd_decompose(H, bp.lpr, sigma)
    if decomp is None:
        return outcome(DecodeStatus.NO_SOLUTION, None, {"stage": "osd"})

    w = weights.w_array
    s_ids = np.array(decomp.s_cols, dtype=int)
    t_ids = np.array(decomp.t_cols, dtype=int)
    s_weights = w[s_ids] if s_ids.size else np.zeros(0)
    t_weights = w[t_ids] if t_ids.size else np.zeros(0)

    def candidate_weight(xs: np.ndarray, pattern: tuple[int, ...]) -> float:
        return float(s_weights[xs.astype(bool)].sum() + sum(t_weights[i] for i in pattern))

    best_xs = decomp.x
    best_pattern: tuple[int, ...] = ()
    best_weight = candidate_weight(best_xs, ())
    candidates = 0
    if osd_order > 0:
        for pattern in sweep_patterns(len(t_ids), osd_order, method):
            xs = decomp.x.copy()
            for i in pattern:
                xs ^= decomp.reduced_t[:, i]
            candidates += 1
            cw = candidate_weight(xs, pattern)
            if cw < best_weight:
                best_xs, best_pattern, best_weight = xs, pattern, cw
    correction = frozenset(int(s_ids[k]) for k in np.flatnonzero(best_xs)) | frozenset(
        int(t_ids[i]) for i in best_pattern
    )
    if bp_weight is not None and bp_weight <= best_weight:
        correction = bp.estimate
    if __debug__:
        assert syndrome_of(H, correction) == frozenset(sigma)
    info = {"stage": "osd", "osd_candidates": candidates, "rank": decomp.rank}
    return outcome(DecodeStatus.FOUND, frozenset(correction), info)


__all__ = [
    "OsdDecomposition",
    "osd_decompose",
    "sweep_patterns",
    "bp_osd_decode",
]
