"""Rank-based comparison of algorithms over blocks (datasets or runs)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2, rankdata

from .errors import TooFewPoints


@dataclass
class FriedmanResult:
    statistic: float
    pvalue: float
    significant: bool
    mean_ranks: np.ndarray


def friedman_test(values, significance: float = 0.05) -> FriedmanResult:
    """Friedman chi-squared statistic over a blocks x algorithms matrix.

    Values are ranked ascending within each block with average ranks on
    ties; the statistic is 12/(n k (k+1)) * sum_j R_j^2 - 3 n (k+1) with
    R_j the rank sum of algorithm j, compared against chi-squared with
    k - 1 degrees of freedom.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 2:
        raise ValueError("expected a blocks x algorithms matrix")
    n, k = vals.shape
    if k < 2:
        raise TooFewPoints("need at least 2 algorithms")
    if n < 2:
        raise TooFewPoints("need at least 2 blocks")
    ranks = np.vstack([rankdata(row) for row in vals])
    rank_sums = ranks.sum(axis=0)
    statistic = 12.0 / (n * k * (k + 1)) * float(np.sum(rank_sums ** 2)) - 3.0 * n * (k + 1)
    pvalue = float(chi2.sf(statistic, k - 1))
    return FriedmanResult(
        statistic=float(statistic),
        pvalue=pvalue,
        significant=bool(pvalue < significance),
        mean_ranks=rank_sums / n,
    )


@dataclass
class ComparisonReport:
    algorithms: list
    n_blocks: int
    means: dict
    stds: dict
    mean_ranks: dict
    statistic: float
    pvalue: float
    significant: bool
    baseline: str
    win_tie_loss: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "algorithms": self.algorithms,
            "n_blocks": self.n_blocks,
            "means": self.means,
            "stds": self.stds,
            "mean_ranks": self.mean_ranks,
            "statistic": self.statistic,
            "pvalue": self.pvalue,
            "significant": self.significant,
            "baseline": self.baseline,
            "win_tie_loss": self.win_tie_loss,
        }


def friedman_compare(samples: dict, higher_better: bool = True,
                     baseline: str | None = None,
                     significance: float = 0.05) -> ComparisonReport:
    """Compare algorithms from per-block indicator values.

    samples maps algorithm name to a sequence of values, one per block
    (all the same length, blocks aligned by position). win/tie/loss counts
    each non-baseline algorithm's blocks against the baseline (the last
    algorithm by default).
    """
    names = list(samples)
    if len(names) < 2:
        raise TooFewPoints("need at least 2 algorithms")
    columns = [np.asarray(samples[name], dtype=np.float64) for name in names]
    lengths = {c.size for c in columns}
    if len(lengths) != 1:
        raise ValueError("algorithms must cover the same blocks")
    matrix = np.column_stack(columns)

    result = friedman_test(matrix, significance)
    baseline = baseline or names[-1]
    if baseline not in names:
        raise ValueError(f"baseline {baseline!r} not among algorithms")
    base = matrix[:, names.index(baseline)]

    wtl = {}
    for i, name in enumerate(names):
        if name == baseline:
            continue
        col = matrix[:, i]
        better = col > base if higher_better else col < base
        worse = col < base if higher_better else col > base
        wtl[name] = (int(better.sum()), int((col == base).sum()), int(worse.sum()))

    return ComparisonReport(
        algorithms=names,
        n_blocks=matrix.shape[0],
        means={n: float(np.mean(matrix[:, i])) for i, n in enumerate(names)},
        stds={n: float(np.std(matrix[:, i])) for i, n in enumerate(names)},
        mean_ranks={n: float(result.mean_ranks[i]) for i, n in enumerate(names)},
        statistic=result.statistic,
        pvalue=result.pvalue,
        significant=result.significant,
        baseline=baseline,
        win_tie_loss=wtl,
    )
