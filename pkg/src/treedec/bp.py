"""Min-sum belief propagation with decimation support and buffered LPR output.

The schedule is flooding (fully parallel): one iteration performs the
check-to-fault update with the syndrome sign, the LPR update, the hard
estimate and convergence test, and the fault-to-check update.  Messages for a
check whose co-neighborhood is empty (a degree-1 check after decimation)
carry no information and are set to zero, which keeps every message finite.

Decimated faults are removed from the graph entirely: they send and receive
no messages, never enter the hard estimate, and their entries in the returned
LPR vectors are NaN.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import CheckMatrix, FaultSet, Syndrome, WeightVector


@dataclass(frozen=True)
class BpConfig:
    """Iteration limit and LPR buffer length."""

    t_end: int = 12
    l_buff: int = 8
    buffer_sum: bool = False  # report the plain sum over the buffer instead of the mean

    def __post_init__(self):
        if self.t_end < 1:
            raise ValueError("t_end must be at least 1")
        if not 1 <= self.l_buff <= self.t_end:
            raise ValueError("l_buff must lie in [1, t_end]")


@dataclass(frozen=True)
class BpResult:
    """Final LPRs, buffered LPRs, hard estimate, and convergence flag."""

    lpr: np.ndarray
    lpr_buffered: np.ndarray
    estimate: FaultSet
    converged: bool
    iterations_run: int


def bp_decode(
    H: CheckMatrix,
    weights: WeightVector,
    syndrome: Syndrome,
    decimation: FaultSet = frozenset(),
    cfg: BpConfig = BpConfig(),
) -> BpResult:
    """Run flooding min-sum BP for ``syndrome`` on H with ``decimation`` removed.

    Stops at the first iteration whose hard estimate reproduces the syndrome;
    otherwise runs t_end iterations and reports converged=False.  The buffered
    LPR averages the last min(l_buff, iterations_run) per-iteration LPRs.
    """
    n, m = H.N, H.M
    for i in syndrome:
        if not 0 <= i < m:
            raise ValueError(f"syndrome index {i} out of range [0, {m})")
    for j in decimation:
        if not 0 <= j < n:
            raise ValueError(f"decimation index {j} out of range [0, {n})")

    prior = weights.w_array.copy()
    decimated = np.zeros(n, dtype=bool)
    if decimation:
        decimated[list(decimation)] = True

    syn = np.zeros(m, dtype=bool)
    if syndrome:
        syn[list(syndrome)] = True

    lpr = prior.copy()
    history: deque[np.ndarray] = deque(maxlen=cfg.l_buff)

    def finish(estimate_mask: np.ndarray, converged: bool, iterations: int) -> BpResult:
        if history:
            stacked = np.stack(list(history))
            buffered = stacked.sum(axis=0)
            if not cfg.buffer_sum:
                buffered /= len(history)
        else:
            buffered = lpr.copy()
        out_lpr = lpr.copy()
        out_lpr[decimated] = np.nan
        buffered = buffered.copy()
        buffered[decimated] = np.nan
        estimate = frozenset(int(j) for j in np.flatnonzero(estimate_mask))
        return BpResult(out_lpr, buffered, estimate, converged, iterations)

    empty_estimate = np.zeros(n, dtype=bool)
    if not syndrome:
        # all priors are positive, so the all-zero estimate is already consistent
        return finish(empty_estimate, True, 0)

    ec, ef = H.edges
    active = ~decimated[ef] if len(ef) else np.zeros(0, dtype=bool)
    ec_a = ec[active]
    ef_a = ef[active]
    if ec_a.size == 0:
        # nothing to propagate: a non-empty syndrome cannot be satisfied
        return finish(empty_estimate, False, cfg.t_end)

    # per-check segments over the active, (check, fault)-sorted edge list
    new_seg = np.r_[True, np.diff(ec_a) != 0]
    starts = np.flatnonzero(new_seg)
    seg_of_edge = np.cumsum(new_seg) - 1
    seg_check = ec_a[starts]
    seg_sign = np.where(syn[seg_check], -1.0, 1.0)

    mu_fc = prior[ef_a].astype(float)
    iterations = 0
    converged = False
    estimate_mask = empty_estimate
    for t in range(1, cfg.t_end + 1):
        neg = mu_fc < 0
        sign = np.where(neg, -1.0, 1.0)
        neg_count = np.add.reduceat(neg.astype(np.int64), starts)
        seg_prod = np.where(neg_count % 2 == 1, -1.0, 1.0)
        mag = np.abs(mu_fc)
        min1 = np.minimum.reduceat(mag, starts)
        at_min = mag == min1[seg_of_edge]
        min_count = np.add.reduceat(at_min.astype(np.int64), starts)
        masked = np.where(at_min, np.inf, mag)
        min2 = np.minimum.reduceat(masked, starts)
        min_excl = np.where(at_min & (min_count[seg_of_edge] == 1), min2[seg_of_edge], min1[seg_of_edge])
        min_excl = np.where(np.isinf(min_excl), 0.0, min_excl)
        mu_cf = seg_sign[seg_of_edge] * seg_prod[seg_of_edge] * sign * min_excl

        lpr = prior + np.bincount(ef_a, weights=mu_cf, minlength=n)
        history.append(lpr.copy())
        iterations = t

        estimate_mask = lpr < 0
        parity = np.bincount(ec_a[estimate_mask[ef_a]], minlength=m) % 2
        if np.array_equal(parity.astype(bool), syn):
            converged = True
            break

        mu_fc = lpr[ef_a] - mu_cf

    return finish(estimate_mask, converged, iterations)
