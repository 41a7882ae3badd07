"""Discretization, entropy, mutual information, and the maximal
information coefficient.

Everything is in bits (log base 2) so the textbook cases land on exact
values. The MIC search walks every grid resolution (b1, b2) with
b1*b2 <= ceil(n**alpha) and, per resolution, equipartitions one axis and
optimizes the other with an exact dynamic program over clump boundaries;
both orientations are evaluated and the larger kept, which also makes the
score symmetric in its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError
from .panel import AlignedPair

STRATEGIES = ("equal-width", "equal-frequency")
MIC_NORMALIZATIONS = ("min-entropy-grid", "max-entropy")

DEFAULT_MIC_ALPHA = 0.6
DEFAULT_MIC_CLUMPS = 15


def discretize(values, bins: int, strategy: str = "equal-frequency") -> np.ndarray:
    """Assign each value a bin label in [0, bins).

    equal-width spans [min, max] with the maximum placed in the top bin;
    a constant input collapses to bin 0. equal-frequency splits by rank,
    ties keeping their first-occurrence order.
    """
    if bins < 2:
        raise DomainError(f"bins must be >= 2, got {bins}")
    if strategy not in STRATEGIES:
        raise DomainError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    v = np.asarray(values, dtype=float)
    n = len(v)
    if n < bins:
        raise InsufficientDataError(f"{n} values cannot fill {bins} bins")
    if strategy == "equal-width":
        lo, hi = v.min(), v.max()
        if lo == hi:
            return np.zeros(n, dtype=np.intp)
        labels = ((v - lo) / (hi - lo) * bins).astype(np.intp)
        return np.minimum(labels, bins - 1)
    order = np.argsort(v, kind="stable")
    labels = np.empty(n, dtype=np.intp)
    labels[order] = np.arange(n) * bins // n
    return labels


def entropy(labels) -> float:
    """Shannon entropy in bits of a label sequence."""
    arr = np.asarray(labels)
    if arr.size == 0:
        raise DomainError("entropy of an empty sequence is undefined")
    _, counts = np.unique(arr, return_counts=True)
    p = counts / arr.size
    return float(-np.sum(p * np.log2(p)))


@dataclass(frozen=True)
class JointHistogram:
    """Grid of co-occurrence counts for two label sequences."""

    counts: np.ndarray
    n: int

    @classmethod
    def from_labels(cls, lx, ly, bins_x: int, bins_y: int) -> "JointHistogram":
        lx = np.asarray(lx, dtype=np.intp)
        ly = np.asarray(ly, dtype=np.intp)
        if lx.shape != ly.shape:
            raise DomainError("label sequences differ in length")
        counts = np.zeros((bins_x, bins_y), dtype=np.int64)
        np.add.at(counts, (lx, ly), 1)
        return cls(counts=counts, n=int(lx.size))

    def mi_bits(self) -> float:
        """Mutual information of the joint distribution, in bits."""
        if self.n == 0:
            raise DomainError("empty histogram")
        joint = self.counts / self.n
        px = joint.sum(axis=1, keepdims=True)
        py = joint.sum(axis=0, keepdims=True)
        nz = joint > 0
        mi = float(np.sum(joint[nz] * np.log2(joint[nz] / (px @ py)[nz])))
        return max(0.0, mi)


@dataclass(frozen=True)
class MutualInfoResult:
    mi: float
    bins_x: int
    bins_y: int
    strategy: str


def mutual_information(pair: AlignedPair, bins: int,
                       strategy: str = "equal-frequency") -> MutualInfoResult:
    """Discretize both sequences and measure their shared information."""
    if pair.n < max(bins, 4):
        raise InsufficientDataError(
            f"need at least max(bins, 4) = {max(bins, 4)} observations, got {pair.n}"
        )
    lx = discretize(pair.x, bins, strategy)
    ly = discretize(pair.y, bins, strategy)
    hist = JointHistogram.from_labels(lx, ly, bins, bins)
    return MutualInfoResult(mi=hist.mi_bits(), bins_x=bins, bins_y=bins,
                            strategy=strategy)


def default_mi_bins(n: int) -> int:
    """Rank-based default: sqrt(n) capped at 10, floor 2."""
    return max(2, min(int(math.isqrt(n)), 10))


@dataclass(frozen=True)
class MicResult:
    mic: float
    best_b1: int
    best_b2: int
    grid_bound: int
    normalization: str
    degenerate: bool = False


def grid_bound(n: int, alpha: float) -> int:
    return int(math.ceil(n ** alpha))


def mic(pair: AlignedPair, alpha: float = DEFAULT_MIC_ALPHA,
        clumps: int = DEFAULT_MIC_CLUMPS,
        normalization: str = "min-entropy-grid") -> MicResult:
    """Maximal information coefficient over all bounded grid resolutions.

    ``clumps`` scales the candidate-boundary budget (clumps * columns) of
    the per-resolution optimizer; raising it trades time for exactness.
    The default normalization divides each resolution's score by
    log2(min(b1, b2)); "max-entropy" divides by the larger marginal
    entropy of the maximizing grid instead.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must be in (0, 1], got {alpha}")
    if clumps < 1:
        raise DomainError(f"clumps must be >= 1, got {clumps}")
    if normalization not in MIC_NORMALIZATIONS:
        raise DomainError(
            f"normalization must be one of {MIC_NORMALIZATIONS}, got {normalization!r}"
        )
    n = pair.n
    if n < 25:
        raise InsufficientDataError(f"need at least 25 observations, got {n}")
    x = np.asarray(pair.x, dtype=float)
    y = np.asarray(pair.y, dtype=float)
    bound = grid_bound(n, alpha)
    if np.all(x == x[0]) or np.all(y == y[0]):
        return MicResult(0.0, 0, 0, bound, normalization, degenerate=True)

    eq7 = normalization == "max-entropy"
    cells: dict[tuple[int, int], float] = {}
    _fill_cells(cells, x, y, bound, clumps, eq7, transpose=False)
    _fill_cells(cells, y, x, bound, clumps, eq7, transpose=True)

    # Reduce after the full sweep so evaluation order cannot matter; ties
    # go to the lexicographically smallest resolution.
    best_key, best_val = None, -math.inf
    for key in sorted(cells):
        if cells[key] > best_val:
            best_key, best_val = key, cells[key]
    assert best_key is not None
    return MicResult(
        mic=min(1.0, max(0.0, best_val)),
        best_b1=best_key[0],
        best_b2=best_key[1],
        grid_bound=bound,
        normalization=normalization,
    )


# -- grid-search internals --------------------------------------------------
#
# All of this operates on ranks and tie patterns only, never on numeric
# magnitudes, so the score is invariant under strictly monotone transforms
# of either axis.

def _equipartition(values: np.ndarray, k: int) -> np.ndarray:
    """Assign samples to at most k ordered groups of near-equal size.

    Tied values always share a group. The running target size is
    re-estimated from the remaining points whenever a group closes.
    """
    n = len(values)
    order = np.argsort(values, kind="stable")
    assign = np.empty(n, dtype=np.intp)
    group = 0
    in_group = 0
    desired = n / k
    i = 0
    while i < n:
        j = i + 1
        while j < n and values[order[j]] == values[order[i]]:
            j += 1
        tie = j - i
        if (in_group > 0 and group < k - 1
                and abs(in_group + tie - desired) >= abs(in_group - desired)):
            group += 1
            in_group = 0
            desired = (n - i) / (k - group)
        assign[order[i:j]] = group
        in_group += tie
        i = j
    return assign


def _clump_ends(x_sorted: np.ndarray, rows_x_order: np.ndarray) -> np.ndarray:
    """Prefix point counts at clump boundaries (index 0 is the empty prefix).

    A clump is a maximal run of x-consecutive points sharing a row; points
    with identical x are fused first and, when their rows disagree, pinned
    as an unmergeable run of their own.
    """
    n = len(x_sorted)
    groups: list[tuple[int, int]] = []  # (token, end)
    i = 0
    while i < n:
        j = i + 1
        while j < n and x_sorted[j] == x_sorted[i]:
            j += 1
        rows = rows_x_order[i:j]
        token = int(rows[0]) if np.all(rows == rows[0]) else -1 - i
        groups.append((token, j))
        i = j
    ends = [0]
    prev_token = None
    for token, end in groups:
        if prev_token is not None and token == prev_token and token >= 0:
            ends[-1] = end
        else:
            ends.append(end)
        prev_token = token
    return np.asarray(ends, dtype=np.intp)


def _superclump_ends(ends: np.ndarray, budget: int) -> np.ndarray:
    """Merge clumps down to at most ``budget`` candidates, clumps intact."""
    k = len(ends) - 1
    if k <= budget:
        return ends
    n = int(ends[-1])
    clump_idx = np.empty(n, dtype=float)
    for t in range(k):
        clump_idx[ends[t]:ends[t + 1]] = t
    assign = _equipartition(clump_idx, budget)
    change = np.nonzero(np.diff(assign))[0] + 1
    return np.concatenate(([0], change, [n])).astype(np.intp)


def _xlog2x(a: np.ndarray) -> np.ndarray:
    out = np.zeros(a.shape, dtype=float)
    nz = a > 0
    out[nz] = a[nz] * np.log2(a[nz])
    return out


def _entropy_counts(counts: np.ndarray) -> float:
    total = counts.sum()
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log2(p)))


def _optimize_axis(cum: np.ndarray, n: int, max_cols: int, hq: float,
                   want_partitions: bool):
    """Exact DP over the boundary set: best I(P;Q) per column count.

    ``cum[t, r]`` counts points of row r in the first t clumps. For an
    interval (s, t] forming one column, the contribution
    sum_r c_r*log2(c_r) - m*log2(m) is additive across columns, so prefix
    optima compose exactly. Returns {l: score} for l = 2..max_cols (column
    counts beyond the number of clumps reuse the best achievable) and,
    when asked, {l: column sizes of the maximizing partition}.
    """
    k = cum.shape[0] - 1
    tot = cum.sum(axis=1)
    G = np.full((k + 1, k + 1), -np.inf)
    for s in range(k):
        seg = cum[s + 1:] - cum[s]
        m = tot[s + 1:] - tot[s]
        G[s, s + 1:] = _xlog2x(seg).sum(axis=1) - _xlog2x(m)

    W = G[0].copy()
    argmax_at: dict[int, np.ndarray] = {}
    best_w: dict[int, float] = {}
    for level in range(2, min(max_cols, k) + 1):
        M = W[:, None] + G
        if want_partitions:
            argmax_at[level] = M.argmax(axis=0)
        W = M.max(axis=0)
        best_w[level] = W[k]

    scores: dict[int, float] = {}
    partitions: dict[int, np.ndarray] = {}
    for l in range(2, max_cols + 1):
        reach = min(l, k)
        scores[l] = hq + best_w[reach] / n
        if want_partitions:
            chain = [k]
            for level in range(reach, 1, -1):
                chain.append(int(argmax_at[level][chain[-1]]))
            chain.append(0)
            bounds = tot[np.asarray(chain[::-1])]
            partitions[l] = np.diff(bounds)
    return scores, partitions


def _fill_cells(cells: dict, col_vals: np.ndarray, row_vals: np.ndarray,
                bound: int, clumps: int, eq7: bool, transpose: bool) -> None:
    n = len(col_vals)
    order = np.argsort(col_vals, kind="stable")
    col_sorted = col_vals[order]
    for n_rows in range(2, bound // 2 + 1):
        max_cols = bound // n_rows
        if max_cols < 2:
            break
        row_assign = _equipartition(row_vals, n_rows)
        row_count = int(row_assign.max()) + 1
        hq = _entropy_counts(np.bincount(row_assign, minlength=row_count))
        rows_x_order = row_assign[order]
        ends = _clump_ends(col_sorted, rows_x_order)
        ends = _superclump_ends(ends, max(clumps * max_cols, max_cols))
        cum = np.zeros((len(ends), row_count))
        for t in range(len(ends) - 1):
            cum[t + 1] = cum[t] + np.bincount(
                rows_x_order[ends[t]:ends[t + 1]], minlength=row_count
            )
        scores, partitions = _optimize_axis(cum, n, max_cols, hq, eq7)
        for l in range(2, max_cols + 1):
            raw = scores[l]
            if eq7:
                hp = _entropy_counts(partitions[l])
                denom = max(hp, hq)
                value = raw / denom if denom > 0 else 0.0
            else:
                value = raw / math.log2(min(l, n_rows))
            key = (n_rows, l) if transpose else (l, n_rows)
            if value > cells.get(key, -math.inf):
                cells[key] = value
