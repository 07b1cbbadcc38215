"""Shared test utilities: reference implementations and strategies."""

from __future__ import annotations

import itertools

import numpy as np
from hypothesis import strategies as st

from treedec import CheckMatrix, syndrome_of


def reference_min_sum(H, weights, syndrome, decimation=frozenset(), t_end=12, l_buff=8):
    """Dict-based flooding min-sum, written independently of the numpy version.

    Returns (lpr, buffered, estimate, converged, iterations); decimated
    entries of the LPR vectors hold NaN.
    """
    n, m = H.N, H.M
    active = [j for j in range(n) if j not in decimation]
    if not syndrome:
        lpr = [float(w) for w in weights.w]
        for j in decimation:
            lpr[j] = float("nan")
        return lpr, lpr[:], set(), True, 0
    mu_fc = {(j, i): float(weights.w[j]) for j in active for i in H.cols[j]}
    lpr = [float(w) for w in weights.w]
    estimate: set[int] = set()
    history: list[list[float]] = []
    converged = False
    iterations = 0
    for t in range(1, t_end + 1):
        mu_cf = {}
        for i in range(m):
            nbrs = [j for j in H.rows[i] if j not in decimation]
            for j in nbrs:
                others = [mu_fc[(j2, i)] for j2 in nbrs if j2 != j]
                if not others:
                    mu_cf[(i, j)] = 0.0
                    continue
                value = -1.0 if i in syndrome else 1.0
                neg = sum(1 for x in others if x < 0)
                value *= -1.0 if neg % 2 else 1.0
                value *= min(abs(x) for x in others)
                mu_cf[(i, j)] = value
        lpr = []
        for j in range(n):
            if j not in decimation:
                acc = 0.0
                for i in H.cols[j]:
                    acc += mu_cf[(i, j)]
                lpr.append(float(weights.w[j]) + acc)
            else:
                lpr.append(float(weights.w[j]))
        history.append(lpr[:])
        iterations = t
        estimate = {j for j in active if lpr[j] < 0}
        if syndrome_of(H, estimate) == frozenset(syndrome):
            converged = True
            break
        for j in active:
            for i in H.cols[j]:
                mu_fc[(j, i)] = lpr[j] - mu_cf[(i, j)]
    window = history[-min(l_buff, len(history)):]
    buffered = [sum(step[j] for step in window) / len(window) for j in range(n)]
    for j in decimation:
        lpr[j] = float("nan")
        buffered[j] = float("nan")
    return lpr, buffered, estimate, converged, iterations


@st.composite
def small_check_matrix(draw, max_m=6, max_n=8):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    rows = [
        sorted(draw(st.sets(st.integers(0, n - 1), max_size=min(n, 5))))
        for _ in range(m)
    ]
    return CheckMatrix.from_rows(rows, n)


@st.composite
def small_fault_set(draw, n, max_size=4):
    return frozenset(draw(st.sets(st.integers(0, n - 1), max_size=min(n, max_size))))


def exhaustive_logicals(problem, d):
    """All weight-d fault sets with trivial syndrome and non-trivial action."""
    out = set()
    for comb in itertools.combinations(range(problem.H.N), d):
        F = frozenset(comb)
        if syndrome_of(problem.H, F):
            continue
        if any(len(rs & F) % 2 for rs in problem.A.row_sets):
            out.add(F)
    return out


def support_is_connected(H, faults):
    """True when the fault set is connected through shared checks."""
    faults = set(faults)
    if len(faults) <= 1:
        return True
    start = min(faults)
    seen = {start}
    frontier = [start]
    while frontier:
        j = frontier.pop()
        for i in H.cols[j]:
            for j2 in H.rows[i]:
                if j2 in faults and j2 not in seen:
                    seen.add(j2)
                    frontier.append(j2)
    return seen == faults


def random_syndrome(H, rng):
    """A uniformly random subset of checks (not necessarily realizable)."""
    return frozenset(int(i) for i in np.flatnonzero(rng.random(H.M) < 0.3))
