"""Online objective-subset selection from signed nonlinear correlations.

Each generation the pairwise dependence of the population's objective
columns is summarized in a symmetric matrix with entries in [-1, 1]
(rank-grid entropy strength, Spearman sign). The matrices of the last
``window`` generations are averaged and a greedy conflict-first loop picks
a representative subset: repeatedly take the most conflicting column (or,
when nothing conflicts, the one most positively correlated with
everything), then discard all remaining columns whose averaged correlation
with the pick exceeds the threshold tau. The first ``warmup`` generations
always return the full set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import InsufficientHistory, TooFewSamples


def signed_ncc(x, y) -> float:
    """Signed rank-grid dependence of two samples, in [-1, 1].

    Both vectors are ranked (average ranks on ties) and each rank is put in
    one of b = floor(sqrt(N)) quantile bins; the strength is
    2 + sum_ij (n_ij/N) log_b (n_ij/N), clamped into [0, 1], and the sign is
    the sign of the Spearman rank correlation. A constant vector carries no
    rank information and yields 0.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.size != y.size:
        raise ValueError("vectors must have equal lengths")
    n = x.size
    if n < 4:
        raise TooFewSamples(f"need at least 4 samples, got {n}")
    b = int(np.floor(np.sqrt(n)))
    return _pair_value(_prepare_column(x, n, b), _prepare_column(y, n, b), n, b)


def _prepare_column(col: np.ndarray, n: int, b: int):
    """(centered ranks, bin index per sample), or None for a constant column."""
    if np.all(col == col[0]):
        return None
    ranks = rankdata(col)
    bins = np.clip(np.ceil(ranks * b / n).astype(np.int64) - 1, 0, b - 1)
    return ranks - ranks.mean(), bins


def _pair_value(prep_x, prep_y, n: int, b: int) -> float:
    if prep_x is None or prep_y is None:
        return 0.0
    centered_x, bins_x = prep_x
    centered_y, bins_y = prep_y
    counts = np.bincount(bins_x * b + bins_y, minlength=b * b).astype(np.float64)
    freq = counts[counts > 0] / n
    strength = 2.0 + float(np.sum(freq * (np.log(freq) / np.log(b))))
    strength = min(1.0, max(0.0, strength))
    sign = np.sign(float(centered_x @ centered_y))
    return float(sign * strength)


def mncie_matrix(objective_values: np.ndarray) -> np.ndarray:
    """Pairwise signed_ncc over the columns of a (population x objectives)
    matrix; symmetric with unit diagonal. Columns are ranked once."""
    values = np.asarray(objective_values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("expected a 2-D matrix of objective values")
    n, m = values.shape
    if n < 4:
        raise TooFewSamples("need at least 4 population members")
    b = int(np.floor(np.sqrt(n)))
    prepared = [_prepare_column(values[:, j], n, b) for j in range(m)]
    nc = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            nc[i, j] = nc[j, i] = _pair_value(prepared[i], prepared[j], n, b)
    return nc


@dataclass
class CorrelationHistory:
    """Generation-ordered sequence of correlation matrices."""

    matrices: list = field(default_factory=list)
    window: int = 10

    def append(self, matrix: np.ndarray) -> None:
        self.matrices.append(np.asarray(matrix, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.matrices)


def averaged_matrix(history: CorrelationHistory) -> np.ndarray:
    """Elementwise mean of the last ``window`` matrices."""
    w = history.window
    if len(history) < w:
        raise InsufficientHistory(
            f"need {w} matrices to average, have {len(history)}"
        )
    return np.mean(np.stack(history.matrices[-w:]), axis=0)


def select_from_matrix(ncr: np.ndarray, tau: float) -> tuple[int, ...]:
    """Greedy representative-subset loop on an averaged correlation matrix.

    While candidates remain: if no candidate column contains a negative
    entry, pick the candidate with the largest full-column sum; otherwise
    pick the candidate whose negative entries sum lowest. The pick joins
    the subset and every remaining candidate correlated with it above tau
    is discarded. Ties break toward the smallest index.
    """
    ncr = np.asarray(ncr, dtype=np.float64)
    if ncr.ndim != 2 or ncr.shape[0] != ncr.shape[1]:
        raise ValueError("correlation matrix must be square")
    m = ncr.shape[0]
    candidates = list(range(m))
    selected: list[int] = []
    while candidates:
        sub = ncr[:, candidates]
        if np.all(sub >= 0.0):
            scores = sub.sum(axis=0)
            pick = candidates[int(np.argmax(scores))]
        else:
            neg_sums = np.where(sub < 0.0, sub, 0.0).sum(axis=0)
            pick = candidates[int(np.argmin(neg_sums))]
        selected.append(pick)
        candidates.remove(pick)
        candidates = [j for j in candidates if ncr[pick, j] <= tau]
    return tuple(sorted(selected))


def select_representative(t: int, history: CorrelationHistory, tau: float,
                          n_objectives: int, warmup: int = 10) -> tuple[int, ...]:
    """Mask of active objective indices for generation t (1-based).

    Generations below ``warmup`` keep the full set; afterwards the loop
    runs on the window-averaged matrix.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")
    if t < warmup:
        return tuple(range(n_objectives))
    return select_from_matrix(averaged_matrix(history), tau)
