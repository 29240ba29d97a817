"""Group confusion rates, the 25 raw fairness measures and the transformed
minimized objectives.

Measures are computed between the unprivileged group (g_u) and the
privileged group (g_p). Conventions used throughout (all chosen so no NaN
ever reaches selection):

* a rate whose denominator is zero is 0 and flagged degenerate;
* a ratio of two rates is 1.0 when both are zero and +inf when only the
  denominator is zero, so the ratio transform 1 - min(r, 1/r) lands on 0
  (perfect parity) and 1 (maximal disparity) respectively;
* 0 * ln 0 is 0, and a benefit group with zero mean contributes zero
  entropy (everyone in it is equally badly off).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import PRIVILEGED, UNPRIVILEGED, EncodedDataset
from .errors import EmptyDataset, MissingGroup
from .network import NetworkShape, cross_entropy_of_probs, forward


@dataclass(frozen=True)
class MetricsConfig:
    """Knobs of the entropy-family measures.

    alpha is the generalized-entropy exponent (positive, not 0 or 1);
    dirichlet_concentration smooths the outcome probabilities inside the
    differential-fairness measure.
    """

    alpha: float = 2.0
    dirichlet_concentration: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0 or self.alpha in (0.0, 1.0):
            raise ValueError("alpha must be positive and different from 0 and 1")
        if self.dirichlet_concentration <= 0:
            raise ValueError("dirichlet_concentration must be positive")


@dataclass
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int
    degenerate: set = field(default_factory=set)

    @property
    def size(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def _rate(self, num: int, den: int, name: str) -> float:
        if den == 0:
            self.degenerate.add(name)
            return 0.0
        return num / den

    @property
    def tpr(self) -> float:
        return self._rate(self.tp, self.tp + self.fn, "tpr")

    @property
    def fnr(self) -> float:
        return self._rate(self.fn, self.tp + self.fn, "fnr")

    @property
    def fpr(self) -> float:
        return self._rate(self.fp, self.fp + self.tn, "fpr")

    @property
    def tnr(self) -> float:
        return self._rate(self.tn, self.tn + self.fp, "tnr")

    @property
    def ppv(self) -> float:
        return self._rate(self.tp, self.tp + self.fp, "ppv")

    @property
    def fdr(self) -> float:
        return self._rate(self.fp, self.tp + self.fp, "fdr")

    @property
    def npv(self) -> float:
        return self._rate(self.tn, self.tn + self.fn, "npv")

    @property
    def false_omission(self) -> float:
        return self._rate(self.fn, self.tn + self.fn, "for")

    @property
    def err(self) -> float:
        return self._rate(self.fn + self.fp, self.size, "err")

    @property
    def selection_rate(self) -> float:
        return self._rate(self.tp + self.fp, self.size, "selection_rate")


@dataclass
class GroupRates:
    unprivileged: ConfusionCounts
    privileged: ConfusionCounts


def _as_arrays(y, yhat, groups):
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    yhat = np.asarray(yhat, dtype=np.int64).reshape(-1)
    groups = np.asarray(groups, dtype=np.int64).reshape(-1)
    if not (y.shape == yhat.shape == groups.shape):
        raise ValueError("y, yhat and groups must have equal lengths")
    return y, yhat, groups


def group_confusion(y, yhat, groups) -> GroupRates:
    """Per-group confusion counts; raises MissingGroup if a group is absent."""
    y, yhat, groups = _as_arrays(y, yhat, groups)
    rates = {}
    for tag in (UNPRIVILEGED, PRIVILEGED):
        sel = groups == tag
        if not np.any(sel):
            raise MissingGroup(f"group {tag} absent from the data")
        yy, hh = y[sel], yhat[sel]
        rates[tag] = ConfusionCounts(
            tp=int(np.sum((yy == 1) & (hh == 1))),
            fp=int(np.sum((yy == 0) & (hh == 1))),
            fn=int(np.sum((yy == 1) & (hh == 0))),
            tn=int(np.sum((yy == 0) & (hh == 0))),
        )
    return GroupRates(unprivileged=rates[UNPRIVILEGED], privileged=rates[PRIVILEGED])


def benefit_vector(y, yhat) -> np.ndarray:
    """Componentwise yhat - y + 1, values in {0, 1, 2}."""
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    yhat = np.asarray(yhat, dtype=np.int64).reshape(-1)
    if y.shape != yhat.shape:
        raise ValueError("y and yhat must have equal lengths")
    return (yhat - y + 1).astype(np.float64)


def _rate_ratio(numerator: float, denominator: float) -> float:
    if denominator == 0.0:
        return 1.0 if numerator == 0.0 else np.inf
    return numerator / denominator


def _generalized_entropy(b: np.ndarray, alpha: float) -> float:
    mu = float(np.mean(b))
    if mu == 0.0:
        return 0.0
    n = b.size
    return float(np.sum((b / mu) ** alpha - 1.0) / (n * alpha * (alpha - 1.0)))


def _between_group_entropy(b: np.ndarray, group_masks, alpha: float) -> float:
    mu = float(np.mean(b))
    if mu == 0.0:
        return 0.0
    n = b.size
    total = 0.0
    for mask in group_masks:
        n_g = int(np.sum(mask))
        mu_g = float(np.mean(b[mask]))
        total += n_g * ((mu_g / mu) ** alpha - 1.0)
    return total / (n * alpha * (alpha - 1.0))


def _theil(b: np.ndarray) -> float:
    mu = float(np.mean(b))
    if mu == 0.0:
        return 0.0
    t = b / mu
    terms = np.where(t > 0.0, t * np.log(np.where(t > 0.0, t, 1.0)), 0.0)
    return float(np.mean(terms))


def _sqrt_theil(value: float) -> float:
    # Theil is nonnegative; the max absorbs float round-off before the sqrt.
    return 2.0 * np.sqrt(max(value, 0.0))


def _smoothed_outcome_disparity(z, groups, concentration: float) -> float:
    """Largest absolute log-ratio of smoothed per-group outcome probabilities."""
    z = np.asarray(z, dtype=np.int64)
    groups = np.asarray(groups, dtype=np.int64)
    logp = {}
    for tag in (UNPRIVILEGED, PRIVILEGED):
        sel = groups == tag
        if not np.any(sel):
            raise MissingGroup(f"group {tag} absent from the data")
        n_g = int(np.sum(sel))
        ones = int(np.sum(z[sel] == 1))
        logp[tag] = {
            1: np.log((ones + concentration / 2.0) / (n_g + concentration)),
            0: np.log((n_g - ones + concentration / 2.0) / (n_g + concentration)),
        }
    return max(
        abs(logp[UNPRIVILEGED][o] - logp[PRIVILEGED][o]) for o in (0, 1)
    )


def fair25_bias_amplification(y, yhat, groups, cfg: MetricsConfig) -> float:
    """Smoothed differential-fairness disparity of the predictions minus the
    same quantity of the true labels."""
    y, yhat, groups = _as_arrays(y, yhat, groups)
    c = cfg.dirichlet_concentration
    return _smoothed_outcome_disparity(yhat, groups, c) - _smoothed_outcome_disparity(
        y, groups, c
    )


def raw_measures(y, yhat, groups, cfg: MetricsConfig | None = None) -> np.ndarray:
    """The 25 raw fairness measures, in f1..f25 order."""
    cfg = cfg or MetricsConfig()
    y, yhat, groups = _as_arrays(y, yhat, groups)
    rates = group_confusion(y, yhat, groups)
    u, p = rates.unprivileged, rates.privileged

    b = benefit_vector(y, yhat)
    mask_u = groups == UNPRIVILEGED
    mask_p = groups == PRIVILEGED
    alpha = cfg.alpha

    theil_u = _theil(b[mask_u])
    theil_p = _theil(b[mask_p])
    between_gei = _between_group_entropy(b, (mask_u, mask_p), alpha)

    out = np.empty(25)
    out[0] = u.tpr - p.tpr
    out[1] = u.fpr - p.fpr
    out[2] = u.fnr - p.fnr
    out[3] = u.false_omission - p.false_omission
    out[4] = u.fdr - p.fdr
    out[5] = u.err - p.err
    out[6] = _rate_ratio(u.fpr, p.fpr)
    out[7] = _rate_ratio(u.fnr, p.fnr)
    out[8] = _rate_ratio(u.false_omission, p.false_omission)
    out[9] = _rate_ratio(u.fdr, p.fdr)
    out[10] = _rate_ratio(u.err, p.err)
    out[11] = 0.5 * ((u.tpr - p.tpr) + (u.fpr - p.fpr))
    out[12] = 0.5 * (abs(u.tpr - p.tpr) + abs(u.fpr - p.fpr))
    out[13] = _rate_ratio(u.selection_rate, p.selection_rate)
    out[14] = u.selection_rate - p.selection_rate
    out[15] = _generalized_entropy(b, alpha)
    out[16] = between_gei
    out[17] = between_gei  # two-group special case of the group decomposition
    out[18] = _theil(b)
    out[19] = _sqrt_theil(_theil(b))
    out[20] = theil_u + theil_p
    out[21] = _sqrt_theil(theil_u) + _sqrt_theil(theil_p)
    out[22] = theil_u + theil_p
    out[23] = _sqrt_theil(theil_u) + _sqrt_theil(theil_p)
    out[24] = fair25_bias_amplification(y, yhat, groups, cfg)
    return out


_ABS_MEASURES = (1, 2, 3, 4, 5, 6, 12, 13, 15)
_RATIO_MEASURES = (7, 8, 9, 10, 11, 14)


def transform(raw: np.ndarray) -> np.ndarray:
    """Map the 25 raw measures onto minimized objectives f1..f25 (optimum 0).

    Difference measures take their absolute value, ratio measures r become
    1 - min(r, 1/r), the entropy family passes through unchanged and the
    bias-amplification measure takes its absolute value.
    """
    raw = np.asarray(raw, dtype=np.float64).reshape(-1)
    if raw.size != 25:
        raise ValueError("expected 25 raw measures")
    f = raw.copy()
    for k in _ABS_MEASURES:
        f[k - 1] = abs(raw[k - 1])
    for k in _RATIO_MEASURES:
        r = raw[k - 1]
        inv = np.inf if r == 0.0 else 1.0 / r
        f[k - 1] = 1.0 - min(r, inv)
    f[24] = abs(raw[24])
    return f


def objective_vector(p: np.ndarray, y, groups, cfg: MetricsConfig | None = None,
                     threshold: float = 0.5) -> np.ndarray:
    """[ce, f1..f25] from predicted probabilities, true labels and groups."""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    yhat = (p >= threshold).astype(np.int64)
    f = transform(raw_measures(y, yhat, groups, cfg))
    return np.concatenate([[cross_entropy_of_probs(p, y)], f])


def evaluate_individual(genome: np.ndarray, shape: NetworkShape,
                        validation: EncodedDataset,
                        cfg: MetricsConfig | None = None) -> np.ndarray:
    """Evaluate one genome on a dataset: cross-entropy from its probabilities
    plus the 25 transformed fairness objectives from its thresholded labels."""
    if len(validation) == 0:
        raise EmptyDataset("cannot evaluate on an empty dataset")
    p = forward(genome, validation.features, shape)
    return objective_vector(p, validation.labels, validation.groups, cfg)
