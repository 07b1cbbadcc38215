"""Lower bounds on the syndrome height, plus the exact brute-force oracle.

The syndrome height h(sigma) is the minimum weight of any fault set producing
sigma.  Every bound here follows from one requirement: each unsatisfied check
must have at least one fault in its neighborhood.

Bound values are cardinality bounds computed under uniform weights; callers
decoding with non-uniform weights multiply by the smallest fault weight to
keep the bound sound.  A check with no fault neighbors makes the syndrome
infeasible, reported as math.inf.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .codes import CheckColoring
from .core import CheckMatrix, FaultSet, Syndrome, WeightVector, set_to_mask


def h1(sigma: Syndrome, c: int) -> int:
    """Degree bound: ceil(|sigma| / c); a single fault explains at most c checks."""
    if c < 1:
        raise ValueError("fault degree must be at least 1")
    return -(-len(sigma) // c)


@dataclass(frozen=True)
class SensitivityProfile:
    """Sensitivity histogram of a syndrome.

    ``sen[i]`` is, for each check i in the syndrome, the largest number of
    syndrome checks any single neighboring fault touches.  ``a[l]`` counts
    syndrome checks of sensitivity l (index 0 unused), and ``q[l]`` is the
    remainder cascade: q[c] = 0, q[l] = (q[l+1] + a[l+1]) mod (l+1).
    """

    a: tuple[int, ...]
    q: tuple[int, ...]
    sen: dict[int, int]
    c: int
    infeasible: bool = False


def sensitivity_profile(sigma: Syndrome, H: CheckMatrix) -> SensitivityProfile:
    """Per-check sensitivities and their histogram for ``sigma`` on H."""
    c = max(H.c, 1)
    a = [0] * (c + 1)
    sen: dict[int, int] = {}
    infeasible = False
    for i in sigma:
        row = H.rows[i]
        if not row:
            infeasible = True
            continue
        best = 1
        for j in row:
            touch = sum(1 for i2 in H.cols[j] if i2 in sigma)
            if touch > best:
                best = touch
        sen[i] = best
        a[best] += 1
    q = [0] * (c + 1)
    for l in range(c - 1, 0, -1):
        q[l] = (q[l + 1] + a[l + 1]) % (l + 1)
    return SensitivityProfile(tuple(a), tuple(q), sen, c, infeasible)


def _h2_from_counts(a: Iterable[int], c: int) -> int:
    """Descending remainder cascade: h2 = sum_l floor((q_l + a_l) / l)."""
    a = list(a)
    total = 0
    q = 0
    for l in range(c, 0, -1):
        total += (q + a[l]) // l
        q = (q + a[l]) % l
    return total


def h2(sigma: Syndrome, H: CheckMatrix) -> float:
    """Sensitivity-cascade bound; the tightest of the four histogram bounds."""
    if not sigma:
        return 0
    prof = sensitivity_profile(sigma, H)
    if prof.infeasible:
        return math.inf
    return _h2_from_counts(prof.a, prof.c)


def h3(sigma: Syndrome, H: CheckMatrix) -> float:
    """Fractional bound: ceil(sum_l a_l / l)."""
    if not sigma:
        return 0
    prof = sensitivity_profile(sigma, H)
    if prof.infeasible:
        return math.inf
    return math.ceil(sum(Fraction(prof.a[l], l) for l in range(1, prof.c + 1)))


def _max_touch_faults(sigma: Syndrome, H: CheckMatrix) -> int:
    """|B_c|: number of faults touching exactly c syndrome checks."""
    c = H.c
    count = 0
    seen: set[int] = set()
    for i in sigma:
        for j in H.rows[i]:
            if j in seen:
                continue
            seen.add(j)
            if sum(1 for i2 in H.cols[j] if i2 in sigma) == c:
                count += 1
    return count


def h4(sigma: Syndrome, H: CheckMatrix) -> float:
    """Excess bound: ceil((|sigma| - |B_c|) / (c - 1)); falls back to h3 for c < 2."""
    if not sigma:
        return 0
    if H.c < 2:
        return h3(sigma, H)
    prof = sensitivity_profile(sigma, H)
    if prof.infeasible:
        return math.inf
    return max(0, -(-(len(sigma) - _max_touch_faults(sigma, H)) // (H.c - 1)))


def color_subset_bound(sigma: Syndrome, coloring: CheckColoring) -> int:
    """Largest single-color subset of the syndrome.

    Within one color class no two checks share a fault, so each needs its own
    fault and the class size lower-bounds the height.
    """
    counts = [0] * coloring.k_colors
    for i in sigma:
        counts[coloring.color[i]] += 1
    return max(counts, default=0)


def syndrome_clusters(sigma: Syndrome, H: CheckMatrix) -> list[Syndrome]:
    """Partition sigma into components with disjoint fault neighborhoods."""
    remaining = set(sigma)
    clusters: list[Syndrome] = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        frontier = [seed]
        remaining.remove(seed)
        while frontier:
            i = frontier.pop()
            for j in H.rows[i]:
                for i2 in H.cols[j]:
                    if i2 in remaining:
                        remaining.remove(i2)
                        comp.add(i2)
                        frontier.append(i2)
        clusters.append(frozenset(comp))
    clusters.sort(key=min)
    return clusters


def cluster_bound(sigma: Syndrome, H: CheckMatrix, inner: Callable[[Syndrome], float]) -> float:
    """Sum of ``inner`` over the disjoint clusters of sigma."""
    return sum(inner(comp) for comp in syndrome_clusters(sigma, H))


@dataclass(frozen=True)
class BoundConfig:
    """Which height bounds to combine.

    h2 dominates h1, h3, and h4, so only h2 and the color-subset bound are on
    by default; cluster decomposition applies the per-cluster maximum and sums
    the pieces.  ``color_subset`` requires a coloring.
    """

    use_h1: bool = False
    use_h2: bool = True
    use_h3: bool = False
    use_h4: bool = False
    color_subset: bool = True
    cluster: bool = True
    coloring: CheckColoring | None = None

    def __post_init__(self):
        if self.color_subset and self.coloring is None:
            object.__setattr__(self, "color_subset", False)

    @classmethod
    def for_matrix(cls, H: CheckMatrix, max_colors: int = 4, **kwargs) -> BoundConfig:
        """Default config for H: try a 3- then 4-coloring for the subset bound."""
        from .codes import check_coloring

        coloring = None
        for k in range(3, max_colors + 1):
            coloring = check_coloring(H, k)
            if coloring is not None:
                break
        return cls(coloring=coloring, **kwargs)


def _pointwise_bound(sigma: Syndrome, H: CheckMatrix, cfg: BoundConfig) -> float:
    if not sigma:
        return 0
    best: float = 0
    prof = None
    if cfg.use_h2 or cfg.use_h3 or cfg.use_h4:
        prof = sensitivity_profile(sigma, H)
        if prof.infeasible:
            return math.inf
    if cfg.use_h1:
        best = max(best, h1(sigma, max(H.c, 1)))
    if cfg.use_h2 and prof is not None:
        best = max(best, _h2_from_counts(prof.a, prof.c))
    if cfg.use_h3 and prof is not None:
        best = max(best, math.ceil(sum(Fraction(prof.a[l], l) for l in range(1, prof.c + 1))))
    if cfg.use_h4:
        best = max(best, h4(sigma, H))
    if cfg.color_subset and cfg.coloring is not None:
        best = max(best, color_subset_bound(sigma, cfg.coloring))
    return best


def combined_bound(
    sigma: Syndrome,
    H: CheckMatrix,
    cfg: BoundConfig,
    cache: dict[Syndrome, float] | None = None,
) -> float:
    """Best enabled lower bound, with cluster decomposition around the maximum."""
    if not sigma:
        return 0
    if not cfg.cluster:
        return _pointwise_bound(sigma, H, cfg)
    total: float = 0
    for comp in syndrome_clusters(sigma, H):
        if cache is not None:
            b = cache.get(comp)
            if b is None:
                b = _pointwise_bound(comp, H, cfg)
                cache[comp] = b
        else:
            b = _pointwise_bound(comp, H, cfg)
        total += b
    return total


# ---------------------------------------------------------------------------
# Exact height by exhaustive search (the testing oracle)
# ---------------------------------------------------------------------------


def brute_force_height(
    sigma: Syndrome,
    H: CheckMatrix,
    weights: WeightVector,
    cap: float | None = None,
) -> tuple[float, FaultSet | None] | None:
    """Exact syndrome height by exhaustive search in order of increasing weight.

    Returns (height, witness) when a solution is found, (inf, None) when the
    entire search space is exhausted without one, and None when the weight cap
    was hit first (so nothing can be concluded).  Intended for small N or
    small caps only.
    """
    target = set_to_mask(sigma)
    masks = H.col_masks
    n = H.N
    if target == 0:
        return (0.0, frozenset())
    if weights.is_uniform:
        max_k = n if cap is None else min(n, int(math.floor(cap + 1e-9)))
        for k in range(1, max_k + 1):
            for comb in itertools.combinations(range(n), k):
                acc = 0
                for j in comb:
                    acc ^= masks[j]
                if acc == target:
                    return (float(k), frozenset(comb))
        if max_k == n:
            return (math.inf, None)
        return None
    # non-uniform weights: enumerate subsets in increasing total weight
    order = sorted(range(n), key=lambda j: (weights.w[j], j))
    w_sorted = [weights.w[j] for j in order]
    syn_sorted = [masks[j] for j in order]
    # heap of (total weight, last position, positions); children append or
    # slide the last element, generating every subset exactly once
    heap: list[tuple[float, int, tuple[int, ...]]] = []
    if n:
        heapq.heappush(heap, (w_sorted[0], 0, (0,)))
    popped = 0
    while heap:
        tw, last, subset = heapq.heappop(heap)
        if cap is not None and tw > cap + 1e-12:
            return None
        acc = 0
        for pos in subset:
            acc ^= syn_sorted[pos]
        if acc == target:
            return (tw, frozenset(order[p] for p in subset))
        popped += 1
        if last + 1 < n:
            heapq.heappush(heap, (tw + w_sorted[last + 1], last + 1, subset + (last + 1,)))
            heapq.heappush(
                heap, (tw - w_sorted[last] + w_sorted[last + 1], last + 1, subset[:-1] + (last + 1,))
            )
    return (math.inf, None)
