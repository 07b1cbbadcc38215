"""The decision-tree decoder engine and its exploration strategies.

The main loop grows a tree of partial corrections: each node holds a fault
set F and the updated syndrome sigma_in + HF.  The cheapest live node is
extracted; if its syndrome is empty its fault set is the correction,
otherwise an exploration strategy assigns costs to the children obtained by
adding one fault adjacent to the smallest unsatisfied check.  Fault sets are
canonical (order-free), so a seen-set prunes duplicate nodes across parents.

Strategies:

* breadth_first      - child cost = parent cost + fault weight (exhaustive,
                       minimum weight, exponentially many nodes).
* height_oracle      - child cost = exact height of the child syndrome from
                       the brute-force oracle (minimum weight, explores
                       exactly |correction| nodes; testing only).
* height_bound       - child cost = max(parent, weight + height lower bound),
                       optionally refined with a BP log-probability-ratio
                       tie-break (minimum weight, fast in the median case).
* bp_guided          - child cost = parent + a bounded arctan transform of
                       buffered BP LPRs, with early exit when BP converges
                       (heuristic, no minimum-weight guarantee).
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from enum import Enum

from .bounds import BoundConfig, brute_force_height, combined_bound
from .bp import BpConfig, bp_decode
from .core import DecodingProblem, FaultSet, Syndrome, weight_of

Cost = float | tuple[float, float]


class DecodeStatus(str, Enum):
    FOUND = "found"
    NO_SOLUTION = "no_solution"
    CAP_EXCEEDED = "cap_exceeded"


@dataclass(frozen=True)
class DecodeOutcome:
    """Decode result: status, correction (when found), and search statistics.

    ``nu`` counts exploration-subroutine invocations; ``nodes_seen`` is the
    size of the seen-set including the root.
    """

    status: DecodeStatus
    correction: FaultSet | None
    nu: int
    elapsed_ns: int
    nodes_seen: int
    info: dict | None = None

    @property
    def found(self) -> bool:
        return self.status is DecodeStatus.FOUND


@dataclass
class TreeNode:
    faults: FaultSet
    syndrome: Syndrome
    cost: Cost
    seq: int


@dataclass
class ExploreResult:
    children: list[tuple[int, Cost]]
    solution: FaultSet | None = None
    abort: bool = False


def check_selection(sigma: Syndrome) -> int:
    """Deterministic check choice: the smallest unsatisfied check index."""
    if not sigma:
        raise ValueError("cannot select a check from an empty syndrome")
    return min(sigma)


class BreadthFirstExplorer:
    """Weighted breadth-first exploration: child cost = parent + fault weight."""

    initial_cost: Cost = 0.0

    def __init__(self, problem: DecodingProblem):
        self.problem = problem

    def explore(self, node: TreeNode) -> ExploreResult:
        H = self.problem.H
        w = self.problem.weights.w
        i = check_selection(node.syndrome)
        children = [(j, node.cost + w[j]) for j in H.rows[i] if j not in node.faults]
        return ExploreResult(children)


class HeightOracleExplorer:
    """Child cost = exact syndrome height from the brute-force oracle."""

    initial_cost: Cost = 0.0

    def __init__(self, problem: DecodingProblem, cap: float | None = None):
        self.problem = problem
        self.cap = cap

    def explore(self, node: TreeNode) -> ExploreResult:
        H = self.problem.H
        i = check_selection(node.syndrome)
        children = []
        for j in H.rows[i]:
            if j in node.faults:
                continue
            child_sigma = node.syndrome ^ H.col_sets[j]
            result = brute_force_height(child_sigma, H, self.problem.weights, self.cap)
            if result is None:
                return ExploreResult([], abort=True)
            height, _ = result
            if math.isinf(height):
                continue
            children.append((j, height))
        return ExploreResult(children)


class HeightBoundExplorer:
    """Height-lower-bound exploration, optionally BP-refined.

    Unrefined: child cost = max(h_min(child sigma) + w(child faults), parent).
    Refined: the same bound, tie-broken lexicographically by an accumulated
    BP log-probability ratio from one decimated BP run per explored node.
    """

    def __init__(
        self,
        problem: DecodingProblem,
        cfg: BoundConfig | None = None,
        bp_cfg: BpConfig = BpConfig(t_end=12, l_buff=8),
        refined: bool = True,
    ):
        self.problem = problem
        self.cfg = cfg if cfg is not None else BoundConfig.for_matrix(problem.H)
        self.bp_cfg = bp_cfg
        self.refined = refined
        self.scale = 1.0 if problem.weights.is_uniform else problem.weights.min_weight
        self.cache: dict[Syndrome, float] = {}

    @property
    def initial_cost(self) -> Cost:
        return (0.0, 0.0) if self.refined else 0.0

    def explore(self, node: TreeNode) -> ExploreResult:
        H = self.problem.H
        weights = self.problem.weights
        if self.refined:
            parent_bound, parent_tie = node.cost
            bp = bp_decode(H, weights, node.syndrome, node.faults, self.bp_cfg)
        else:
            parent_bound = node.cost
        base_weight = weight_of(node.faults, weights)
        i = check_selection(node.syndrome)
        children: list[tuple[int, Cost]] = []
        for j in H.rows[i]:
            if j in node.faults:
                continue
            child_sigma = node.syndrome ^ H.col_sets[j]
            h_min = combined_bound(child_sigma, H, self.cfg, self.cache)
            if math.isinf(h_min):
                continue
            bound = max(h_min * self.scale + base_weight + weights.w[j], parent_bound)
            if self.refined:
                children.append((j, (bound, parent_tie + float(bp.lpr[j]))))
            else:
                children.append((j, bound))
        return ExploreResult(children)


def bp_cost_increment(buffered_lpr: float) -> float:
    """Bounded cost increment: (13/pi) * atan(x/2 - 1) + 11/2, in (-1, 12)."""
    return 13.0 / math.pi * math.atan(buffered_lpr / 2.0 - 1.0) + 5.5


class BpGuidedExplorer:
    """BP-guided exploration with early exit on convergence."""

    initial_cost: Cost = 0.0

    def __init__(
        self,
        problem: DecodingProblem,
        root_cfg: BpConfig = BpConfig(t_end=100, l_buff=8),
        node_cfg: BpConfig = BpConfig(t_end=12, l_buff=8),
    ):
        self.problem = problem
        self.root_cfg = root_cfg
        self.node_cfg = node_cfg

    def explore(self, node: TreeNode) -> ExploreResult:
        H = self.problem.H
        cfg = self.root_cfg if not node.faults else self.node_cfg
        bp = bp_decode(H, self.problem.weights, node.syndrome, node.faults, cfg)
        if bp.converged:
            return ExploreResult([], solution=node.faults | bp.estimate)
        i = check_selection(node.syndrome)
        children = [
            (j, node.cost + bp_cost_increment(float(bp.lpr_buffered[j])))
            for j in H.rows[i]
            if j not in node.faults
        ]
        return ExploreResult(children)


def dtd_decode(
    problem: DecodingProblem,
    syndrome: Syndrome,
    explorer,
    node_cap: int | None = None,
    time_budget: float | None = None,
    debug: bool = False,
) -> DecodeOutcome:
    """Run the decision-tree decoder main loop.

    Extracts the cheapest live node (ties broken first-in-first-out), returns
    its fault set when its syndrome is empty, and otherwise explores it.
    Stops with CAP_EXCEEDED once the explorer has been invoked ``node_cap``
    times (or the time budget, in seconds, is spent), and with NO_SOLUTION
    when the live set drains.
    """
    start = time.perf_counter_ns()
    deadline = None if time_budget is None else start + int(time_budget * 1e9)
    H = problem.H
    sigma_in = frozenset(syndrome)
    for i in sigma_in:
        if not 0 <= i < H.M:
            raise ValueError(f"syndrome index {i} out of range [0, {H.M})")
    root = TreeNode(frozenset(), sigma_in, explorer.initial_cost, 0)
    seen: set[FaultSet] = {root.faults}
    live: list[tuple[Cost, int, TreeNode]] = [(root.cost, 0, root)]
    nu = 0
    seq = 0

    def outcome(status: DecodeStatus, correction: FaultSet | None) -> DecodeOutcome:
        return DecodeOutcome(status, correction, nu, time.perf_counter_ns() - start, len(seen))

    while live:
        cost, _, node = heapq.heappop(live)
        if debug and live:
            assert cost <= min(entry[0] for entry in live), "extracted node is not the cheapest"
        if not node.syndrome:
            return outcome(DecodeStatus.FOUND, node.faults)
        if node_cap is not None and nu >= node_cap:
            return outcome(DecodeStatus.CAP_EXCEEDED, None)
        if deadline is not None and time.perf_counter_ns() > deadline:
            return outcome(DecodeStatus.CAP_EXCEEDED, None)
        nu += 1
        result = explorer.explore(node)
        if result.abort:
            return outcome(DecodeStatus.CAP_EXCEEDED, None)
        if result.solution is not None:
            if __debug__:
                from .core import syndrome_of

                assert syndrome_of(H, result.solution) == sigma_in
            return outcome(DecodeStatus.FOUND, result.solution)
        for j, child_cost in result.children:
            child_faults = node.faults | {j}
            if child_faults in seen:
                continue
            seen.add(child_faults)
            seq += 1
            child = TreeNode(child_faults, node.syndrome ^ H.col_sets[j], child_cost, seq)
            heapq.heappush(live, (child_cost, seq, child))
    return outcome(DecodeStatus.NO_SOLUTION, None)
