"""CSS code constructors, check-matrix file ingestion, and check coloring.

Triangular color codes are generated on a triangular grid of points (r, c)
with 0 <= c <= r <= 3(d-1)/2.  Points with (r + c) % 3 == 1 carry the faces
(one X and one Z stabilizer each); the remaining points carry the qubits.
Each face touches the up-to-six grid neighbors
(r, c-1), (r, c+1), (r-1, c-1), (r-1, c), (r+1, c), (r+1, c+1),
giving weight-6 interior faces and weight-4 boundary faces.  Any layout with
this face/vertex incidence produces the same decoding behavior because the
decoders only consume the check matrix.

Bivariate bicycle codes are built from two polynomials in the commuting
cyclic shifts x (order l) and y (order m): H_X = [A | B], H_Z = [B^T | A^T].
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .core import (
    CheckMatrix,
    DecodingProblem,
    Gf2Reduction,
    WeightVector,
    gf2_kernel_basis,
    gf2_row_reduce,
    mask_to_set,
    reduce_against,
)


class ParseError(ValueError):
    """Raised for malformed check-matrix or prior files."""


@dataclass(frozen=True)
class CssCode:
    """A CSS code: check matrices, logical action matrices, and parameters."""

    hx: CheckMatrix
    hz: CheckMatrix
    ax: CheckMatrix
    az: CheckMatrix
    n: int
    k: int
    d: int | None = None
    name: str = ""

    def problem_x(self, weights: WeightVector | None = None) -> DecodingProblem:
        """Decoding problem for X-type faults (checked by hx, judged by ax)."""
        return DecodingProblem(self.hx, self.ax, weights or WeightVector.uniform(self.n))

    def problem_z(self, weights: WeightVector | None = None) -> DecodingProblem:
        return DecodingProblem(self.hz, self.az, weights or WeightVector.uniform(self.n))


def _popcount_weight_reduce(v: int, row_masks: Sequence[int]) -> int:
    """Greedily add rows to v while this lowers its Hamming weight."""
    improved = True
    while improved:
        improved = False
        for h in row_masks:
            cand = v ^ h
            if cand.bit_count() < v.bit_count():
                v = cand
                improved = True
    return v


def _logical_rows(h_same: CheckMatrix, h_other: CheckMatrix) -> list[int]:
    """Independent representatives of ker(h_other) modulo rowspace(h_same)."""
    stab = gf2_row_reduce(h_same)
    chosen: list[int] = []
    pivots: list[int] = []
    rows: list[int] = []
    for v in gf2_kernel_basis(h_other):
        v = reduce_against(v, stab)
        v = reduce_against(v, Gf2Reduction(len(pivots), tuple(pivots), tuple(rows), h_same.N))
        if v == 0:
            continue
        chosen.append(v)
        pivots.append((v & -v).bit_length() - 1)
        rows.append(v)
    return [_popcount_weight_reduce(v, h_same.row_masks) for v in chosen]


def _check_css_commutation(hx: CheckMatrix, hz: CheckMatrix) -> None:
    for rx in hx.row_masks:
        for rz in hz.row_masks:
            if (rx & rz).bit_count() % 2:
                raise ValueError("CSS commutation violated: hx and hz rows overlap oddly")


def make_css_code(hx: CheckMatrix, hz: CheckMatrix, d: int | None = None, name: str = "") -> CssCode:
    """Assemble a CssCode from its check matrices, deriving logicals and k."""
    if hx.N != hz.N:
        raise ValueError("hx and hz must have the same qubit count")
    _check_css_commutation(hx, hz)
    n = hx.N
    k = n - gf2_row_reduce(hx).rank - gf2_row_reduce(hz).rank
    ax_rows = [sorted(mask_to_set(v)) for v in _logical_rows(hx, hz)]
    az_rows = [sorted(mask_to_set(v)) for v in _logical_rows(hz, hx)]
    if len(ax_rows) != k or len(az_rows) != k:
        raise ValueError("logical extraction produced an unexpected rank")
    ax = CheckMatrix.from_rows(ax_rows, n)
    az = CheckMatrix.from_rows(az_rows, n)
    return CssCode(hx, hz, ax, az, n, k, d, name)


# ---------------------------------------------------------------------------
# Triangular color codes
# ---------------------------------------------------------------------------


def color_code(d: int) -> CssCode:
    """The distance-d triangular color code; n = (3d^2 + 1)/4, k = 1."""
    if d < 3 or d % 2 == 0:
        raise ValueError("color code distance must be an odd integer >= 3")
    size = 3 * (d - 1) // 2
    points = [(r, c) for r in range(size + 1) for c in range(r + 1)]
    qubits = [p for p in points if (p[0] + p[1]) % 3 != 1]
    faces = [p for p in points if (p[0] + p[1]) % 3 == 1]
    index = {p: i for i, p in enumerate(qubits)}
    rows = []
    for r, c in faces:
        around = [(r, c - 1), (r, c + 1), (r - 1, c - 1), (r - 1, c), (r + 1, c), (r + 1, c + 1)]
        rows.append(sorted(index[p] for p in around if p in index))
    h = CheckMatrix.from_rows(rows, len(qubits))
    code = make_css_code(h, h, d=d, name=f"color_{d}")
    expected_n = (3 * d * d + 1) // 4
    if code.n != expected_n or code.k != 1:
        raise AssertionError("color code construction produced wrong parameters")
    return code


# ---------------------------------------------------------------------------
# Bivariate bicycle codes
# ---------------------------------------------------------------------------

Monomial = tuple[int, int]

GROSS_A: tuple[Monomial, ...] = ((3, 0), (0, 1), (0, 2))  # x^3 + y + y^2
GROSS_B: tuple[Monomial, ...] = ((0, 3), (1, 0), (2, 0))  # y^3 + x + x^2

_KNOWN_BB_DISTANCES = {
    (6, 6, frozenset(GROSS_A), frozenset(GROSS_B)): 6,
    (12, 6, frozenset(GROSS_A), frozenset(GROSS_B)): 12,
}


def _block_support(monomials: Iterable[Monomial], l: int, m: int, u: int, v: int, sign: int) -> set[int]:
    """Nonzero columns in row (u, v) of a polynomial block; mod-2 cancellation applies."""
    out: set[int] = set()
    for i, j in monomials:
        col = ((u + sign * i) % l) * m + (v + sign * j) % m
        out ^= {col}
    return out


def bivariate_bicycle(
    l: int,
    m: int,
    a_monomials: Sequence[Monomial],
    b_monomials: Sequence[Monomial],
) -> CssCode:
    """Bivariate bicycle code with H_X = [A | B] and H_Z = [B^T | A^T]."""
    if l < 1 or m < 1:
        raise ValueError("l and m must be at least 1")
    if not a_monomials or not b_monomials:
        raise ValueError("monomial lists must be non-empty")
    a = [(i % l, j % m) for i, j in a_monomials]
    b = [(i % l, j % m) for i, j in b_monomials]
    lm = l * m
    hx_rows = []
    hz_rows = []
    for u in range(l):
        for v in range(m):
            left = _block_support(a, l, m, u, v, +1)
            right = {lm + col for col in _block_support(b, l, m, u, v, +1)}
            hx_rows.append(sorted(left | right))
            # transposed blocks walk the shifts backwards
            left_t = _block_support(b, l, m, u, v, -1)
            right_t = {lm + col for col in _block_support(a, l, m, u, v, -1)}
            hz_rows.append(sorted(left_t | right_t))
    hx = CheckMatrix.from_rows(hx_rows, 2 * lm)
    hz = CheckMatrix.from_rows(hz_rows, 2 * lm)
    d = _KNOWN_BB_DISTANCES.get((l, m, frozenset(a), frozenset(b)))
    return make_css_code(hx, hz, d=d, name=f"bb_{l}x{m}")


def gross_code() -> CssCode:
    """The [[144, 12, 12]] bivariate bicycle code."""
    return bivariate_bicycle(12, 6, GROSS_A, GROSS_B)


# ---------------------------------------------------------------------------
# File ingestion
# ---------------------------------------------------------------------------


def load_check_matrix(path) -> CheckMatrix:
    """Parse the check-matrix text format.

    Line 1 is ``M N``; the next M lines list each row's ascending 0-based
    column indices (a blank row line is an empty row).  Lines starting with
    '#' are comments; blank lines after the M rows are ignored.
    """
    path = Path(path)
    header: tuple[int, int] | None = None
    rows: list[list[int]] = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line.startswith("#"):
                continue
            if header is None:
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise ParseError(f"{path}:{lineno}: header must be 'M N'")
                try:
                    mm, nn = int(parts[0]), int(parts[1])
                except ValueError:
                    raise ParseError(f"{path}:{lineno}: header must be 'M N'") from None
                if mm < 0 or nn < 0:
                    raise ParseError(f"{path}:{lineno}: negative dimensions")
                header = (mm, nn)
                continue
            if len(rows) >= header[0]:
                if line:
                    raise ParseError(f"{path}:{lineno}: extra data after {header[0]} rows")
                continue
            try:
                indices = [int(tok) for tok in line.split()]
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-integer row entry") from None
            for a, b in zip(indices, indices[1:]):
                if b == a:
                    raise ParseError(f"{path}:{lineno}: duplicate index {a}")
                if b < a:
                    raise ParseError(f"{path}:{lineno}: indices must be ascending")
            if indices and (indices[0] < 0 or indices[-1] >= header[1]):
                raise ParseError(f"{path}:{lineno}: index out of range [0, {header[1]})")
            rows.append(indices)
    if header is None:
        raise ParseError(f"{path}: missing header")
    if len(rows) != header[0]:
        raise ParseError(f"{path}: expected {header[0]} rows, found {len(rows)}")
    return CheckMatrix.from_rows(rows, header[1])


def save_check_matrix(H: CheckMatrix, path) -> None:
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"{H.M} {H.N}\n")
        for row in H.rows:
            fh.write(" ".join(str(j) for j in row) + "\n")


def load_priors(path, n: int) -> WeightVector:
    """Parse a priors file: n lines, one probability in (0, 1/2) per line."""
    path = Path(path)
    values: list[float] = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not a probability") from None
    if len(values) != n:
        raise ParseError(f"{path}: expected {n} priors, found {len(values)}")
    try:
        return WeightVector.from_priors(values)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


DEFAULT_PRIOR = 0.01


def load_problem(directory) -> DecodingProblem:
    """Load a decoding problem from a directory.

    Expects ``hx.chk``; optionally ``hz.chk``, ``ax.chk``, and ``priors.txt``
    (default: uniform prior 0.01).  The logical action matrix is taken from
    ax.chk when present, else derived from hz.chk, else omitted.
    """
    directory = Path(directory)
    hx = load_check_matrix(directory / "hx.chk")
    ax = None
    ax_path = directory / "ax.chk"
    hz_path = directory / "hz.chk"
    if ax_path.exists():
        ax = load_check_matrix(ax_path)
        if ax.N != hx.N:
            raise ParseError(f"{ax_path}: column count differs from hx.chk")
    elif hz_path.exists():
        hz = load_check_matrix(hz_path)
        if hz.N != hx.N:
            raise ParseError(f"{hz_path}: column count differs from hx.chk")
        rows = [sorted(mask_to_set(v)) for v in _logical_rows(hx, hz)]
        ax = CheckMatrix.from_rows(rows, hx.N)
    priors_path = directory / "priors.txt"
    if priors_path.exists():
        weights = load_priors(priors_path, hx.N)
    else:
        weights = WeightVector.from_priors([DEFAULT_PRIOR] * hx.N)
    return DecodingProblem(hx, ax, weights)


# ---------------------------------------------------------------------------
# Check coloring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckColoring:
    """An assignment of one of k_colors colors to every check vertex."""

    color: tuple[int, ...]
    k_colors: int


def is_valid_coloring(H: CheckMatrix, coloring: CheckColoring) -> bool:
    """No two checks sharing a fault neighbor may have the same color."""
    for col in H.cols:
        seen = set()
        for i in col:
            c = coloring.color[i]
            if c in seen:
                return False
            seen.add(c)
    return True


_COLORING_STEP_BUDGET = 1_000_000


def check_coloring(H: CheckMatrix, k_colors: int) -> CheckColoring | None:
    """Search for a proper k-coloring of the check-conflict graph.

    Exhaustive DSATUR-ordered backtracking; returns None when no coloring
    exists, when the matrix has more than 10^4 checks, or when the search
    budget runs out.  Absence of a coloring just disables the color-subset
    height bound.
    """
    n = H.M
    if n == 0:
        return CheckColoring((), k_colors)
    if n > 10_000:
        return None
    adj: list[set[int]] = [set() for _ in range(n)]
    for col in H.cols:
        for a in col:
            for b in col:
                if a != b:
                    adj[a].add(b)
    colors = [-1] * n
    neighbor_colors: list[set[int]] = [set() for _ in range(n)]
    steps = 0

    def next_vertex() -> int:
        best = -1
        best_key = None
        for u in range(n):
            if colors[u] != -1:
                continue
            key = (len(neighbor_colors[u]), len(adj[u]), -u)
            if best_key is None or key > best_key:
                best, best_key = u, key
        return best

    stack: list[tuple[int, int]] = []  # (vertex, color) assignment order
    max_colors: list[int] = []  # running max assigned color, parallel to stack
    v = next_vertex()
    trial = -1
    while True:
        steps += 1
        if steps > _COLORING_STEP_BUDGET:
            return None
        # allow at most one brand-new color (symmetry breaking)
        cap = min(k_colors, (max_colors[-1] if max_colors else -1) + 2)
        found = False
        for c in range(trial + 1, cap):
            if c not in neighbor_colors[v]:
                colors[v] = c
                stack.append((v, c))
                max_colors.append(max(max_colors[-1], c) if max_colors else c)
                for u in adj[v]:
                    neighbor_colors[u].add(c)
                found = True
                break
        if found:
            if len(stack) == n:
                return CheckColoring(tuple(colors), k_colors)
            v = next_vertex()
            trial = -1
            continue
        if not stack:
            return None
        v, c = stack.pop()
        max_colors.pop()
        colors[v] = -1
        for u in adj[v]:
            if all(colors[x] != c for x in adj[u] if x != v):
                neighbor_colors[u].discard(c)
        trial = c
