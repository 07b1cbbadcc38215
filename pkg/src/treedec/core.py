"""Sparse GF(2) primitives shared by every decoder.

Fault sets and syndromes are plain ``frozenset[int]`` index sets, which keeps
symmetric differences, hashing (the decoder's seen-set key), and equality at
C speed.  Check matrices store both row and column adjacency so that decoders
can walk the decoding graph in either direction without transposing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

FaultSet = frozenset[int]
Syndrome = frozenset[int]


def _sorted_unique(indices: Iterable[int], limit: int, what: str) -> tuple[int, ...]:
    out = tuple(indices)
    for a, b in zip(out, out[1:]):
        if b <= a:
            raise ValueError(f"{what} indices must be strictly increasing, got {out}")
    if out and (out[0] < 0 or out[-1] >= limit):
        raise ValueError(f"{what} index out of range [0, {limit}): {out}")
    return out


@dataclass(frozen=True)
class CheckMatrix:
    """A binary M x N matrix stored as per-row and per-column index lists.

    ``rows[i]`` lists the fault (column) indices checked by check ``i``;
    ``cols[j]`` lists the check (row) indices touching fault ``j``.  The two
    views are transposes of each other, and every index list is strictly
    increasing.
    """

    rows: tuple[tuple[int, ...], ...]
    cols: tuple[tuple[int, ...], ...]

    @property
    def M(self) -> int:
        return len(self.rows)

    @property
    def N(self) -> int:
        return len(self.cols)

    @property
    def r(self) -> int:
        """Maximum row weight (check degree)."""
        return max((len(row) for row in self.rows), default=0)

    @property
    def c(self) -> int:
        """Maximum column weight (fault degree)."""
        return max((len(col) for col in self.cols), default=0)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], n: int) -> CheckMatrix:
        """Build from per-row column indices; rejects duplicates and bad ranges."""
        if n < 0:
            raise ValueError("column count must be non-negative")
        row_tuples = []
        cols: list[list[int]] = [[] for _ in range(n)]
        for i, row in enumerate(rows):
            row_t = _sorted_unique(sorted(row), n, f"row {i}")
            row_tuples.append(row_t)
            for j in row_t:
                cols[j].append(i)
        return cls(tuple(row_tuples), tuple(tuple(c) for c in cols))

    @classmethod
    def from_dense(cls, arr) -> CheckMatrix:
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        rows = [np.flatnonzero(a[i] % 2).tolist() for i in range(a.shape[0])]
        return cls.from_rows(rows, a.shape[1])

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.M, self.N), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            out[i, list(row)] = 1
        return out

    @cached_property
    def row_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(row) for row in self.rows)

    @cached_property
    def col_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(col) for col in self.cols)

    @cached_property
    def row_masks(self) -> tuple[int, ...]:
        """Rows as int bitmasks (bit j = column j)."""
        return tuple(sum(1 << j for j in row) for row in self.rows)

    @cached_property
    def col_masks(self) -> tuple[int, ...]:
        """Columns as int bitmasks (bit i = check i); the column's syndrome."""
        return tuple(sum(1 << i for i in col) for col in self.cols)

    @cached_property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """(check, fault) index arrays for every edge, sorted by (check, fault)."""
        ec = np.array([i for i, row in enumerate(self.rows) for _ in row], dtype=np.intp)
        ef = np.array([j for row in self.rows for j in row], dtype=np.intp)
        return ec, ef


def syndrome_of(H: CheckMatrix, faults: Iterable[int]) -> Syndrome:
    """Syndrome of a fault set: symmetric difference of column neighborhoods."""
    out: frozenset[int] = frozenset()
    for j in faults:
        if not 0 <= j < H.N:
            raise ValueError(f"fault index {j} out of range [0, {H.N})")
        out ^= H.col_sets[j]
    return out


def weight_of(faults: Iterable[int], weights: WeightVector) -> float:
    """Total weight of a fault set; equals its cardinality under uniform weights."""
    fs = frozenset(faults)
    if fs and max(fs) >= weights.n:
        raise ValueError("fault index out of range for weight vector")
    if weights.is_uniform:
        return float(len(fs))
    return sum(weights.w[j] for j in fs)


def decimate(H: CheckMatrix, faults: Iterable[int]) -> tuple[CheckMatrix, tuple[int, ...]]:
    """Remove the columns in ``faults``.

    Returns the decimated matrix together with the column map from new column
    indices to the original ones.
    """
    drop = frozenset(faults)
    if drop and (min(drop) < 0 or max(drop) >= H.N):
        raise ValueError("decimated index out of range")
    col_map = tuple(j for j in range(H.N) if j not in drop)
    renumber = {old: new for new, old in enumerate(col_map)}
    rows = [[renumber[j] for j in row if j not in drop] for row in H.rows]
    return CheckMatrix.from_rows(rows, len(col_map)), col_map


# ---------------------------------------------------------------------------
# GF(2) elimination on int bitmasks (bit j = column j)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gf2Reduction:
    """Result of GF(2) Gauss-Jordan elimination."""

    rank: int
    pivot_cols: tuple[int, ...]
    rows: tuple[int, ...]
    n_cols: int


def _reduce_masks(masks: Sequence[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of bitmask rows; returns (pivots, reduced rows)."""
    work = list(masks)
    pivots: list[int] = []
    for col in range(n_cols):
        bit = 1 << col
        pivot_row = None
        for idx in range(len(pivots), len(work)):
            if work[idx] & bit:
                pivot_row = idx
                break
        if pivot_row is None:
            continue
        k = len(pivots)
        work[k], work[pivot_row] = work[pivot_row], work[k]
        piv = work[k]
        for idx in range(len(work)):
            if idx != k and work[idx] & bit:
                work[idx] ^= piv
        pivots.append(col)
        if len(pivots) == len(work):
            break
    return pivots, work[: len(pivots)]


def gf2_row_reduce(H: CheckMatrix) -> Gf2Reduction:
    """GF(2) rank, ascending pivot columns, and reduced rows of ``H``."""
    pivots, rows = _reduce_masks(list(H.row_masks), H.N)
    return Gf2Reduction(len(pivots), tuple(pivots), tuple(rows), H.N)


def gf2_rank(H: CheckMatrix) -> int:
    return gf2_row_reduce(H).rank


def gf2_kernel_basis(H: CheckMatrix) -> list[int]:
    """Basis of ker(H) over GF(2), as column bitmasks of length N."""
    red = gf2_row_reduce(H)
    pivot_of_col = {col: k for k, col in enumerate(red.pivot_cols)}
    basis = []
    for free in range(H.N):
        if free in pivot_of_col:
            continue
        v = 1 << free
        for k, col in enumerate(red.pivot_cols):
            if red.rows[k] & (1 << free):
                v |= 1 << col
        basis.append(v)
    return basis


def reduce_against(v: int, reduction: Gf2Reduction) -> int:
    """Reduce a bitmask vector modulo the rowspace captured by ``reduction``."""
    for k, col in enumerate(reduction.pivot_cols):
        if v & (1 << col):
            v ^= reduction.rows[k]
    return v


def mask_to_set(mask: int) -> frozenset[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return frozenset(out)


def set_to_mask(indices: Iterable[int]) -> int:
    return sum(1 << i for i in indices)


# ---------------------------------------------------------------------------
# Weights and decoding problems
# ---------------------------------------------------------------------------

_UNIFORM_PRIOR = 1.0 / (1.0 + math.e)  # the prior whose log-probability ratio is 1


@dataclass(frozen=True)
class WeightVector:
    """Per-fault weights w and the priors p they were derived from.

    The default relation is w_j = ln((1 - p_j) / p_j); uniform mode sets every
    w_j = 1 (equivalently p_j = 1/(1+e)).
    """

    w: tuple[float, ...]
    p: tuple[float, ...]
    is_uniform: bool = False

    def __post_init__(self):
        if len(self.w) != len(self.p):
            raise ValueError("w and p must have equal length")
        if any(not 0.0 < pj < 0.5 for pj in self.p):
            raise ValueError("priors must lie in (0, 1/2)")
        if any(wj <= 0.0 for wj in self.w):
            raise ValueError("weights must be positive")

    @classmethod
    def uniform(cls, n: int) -> WeightVector:
        return cls((1.0,) * n, (_UNIFORM_PRIOR,) * n, is_uniform=True)

    @classmethod
    def from_priors(cls, priors: Iterable[float]) -> WeightVector:
        p = tuple(float(x) for x in priors)
        if any(not 0.0 < pj < 0.5 for pj in p):
            raise ValueError("priors must lie in (0, 1/2)")
        w = tuple(math.log((1.0 - pj) / pj) for pj in p)
        return cls(w, p)

    @property
    def n(self) -> int:
        return len(self.w)

    @property
    def min_weight(self) -> float:
        return min(self.w) if self.w else 1.0

    @cached_property
    def w_array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=float)


@dataclass(frozen=True)
class DecodingProblem:
    """A check matrix, an optional logical action matrix, and fault weights."""

    H: CheckMatrix
    A: CheckMatrix | None
    weights: WeightVector

    def __post_init__(self):
        if self.A is not None and self.A.N != self.H.N:
            raise ValueError("logical action matrix must have the same column count as H")
        if self.weights.n != self.H.N:
            raise ValueError("weight vector length must equal the fault count")
