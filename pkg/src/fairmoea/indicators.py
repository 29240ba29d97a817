"""Solution-set quality indicators for minimized objective vectors.

GD is the mean Euclidean distance to the nearest reference point, SP is
Schott's spacing over L1 nearest-neighbor distances, PD is the greedy
pure-diversity accumulation with L_{0.1} dissimilarity, and HV is the
dominated share of the [0, ref]^m box, Monte-Carlo estimated for high
dimension with an exact sweep for m <= 3 as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooHigh,
    TooFewPoints,
)

DEFAULT_REFERENCE = 1.2
DEFAULT_HV_SAMPLES = 100_000


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise ValueError("point set must be a 2-D array")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point set contains non-finite values")
    return pts


def nondominated_filter(points) -> np.ndarray:
    """Keep the points not dominated by any other; exact duplicates collapse
    to their first occurrence."""
    pts = _as_points(points)
    _, first = np.unique(pts, axis=0, return_index=True)
    pts = pts[np.sort(first)]
    n = pts.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        if not keep[i]:
            continue
        p = pts[i]
        dominated = np.all(pts <= p, axis=1) & np.any(pts < p, axis=1)
        if np.any(dominated & keep):
            keep[i] = False
    return pts[keep]


def build_pseudo_front(pooled) -> np.ndarray:
    """Nondominated subset of the concatenation of several point sets."""
    sets = [_as_points(s) for s in pooled if len(s)]
    if not sets:
        raise ValueError("empty pool")
    width = {s.shape[1] for s in sets}
    if len(width) != 1:
        raise DimensionMismatch(f"pooled sets have mixed widths {sorted(width)}")
    return nondominated_filter(np.vstack(sets))


@dataclass(frozen=True)
class NormalizationBounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")

    @classmethod
    def from_points(cls, points) -> "NormalizationBounds":
        pts = _as_points(points)
        return cls(lower=pts.min(axis=0), upper=pts.max(axis=0))

    def normalize(self, points) -> np.ndarray:
        """Map points into [0, 1] per axis; axes with equal bounds go to 0."""
        pts = _as_points(points)
        span = self.upper - self.lower
        safe = np.where(span > 0, span, 1.0)
        out = (pts - self.lower) / safe
        out[:, span == 0] = 0.0
        return out


def gd(point_set, reference) -> float:
    """Mean Euclidean distance from each point to its nearest reference point."""
    pts = _as_points(point_set)
    ref = _as_points(reference)
    if pts.shape[1] != ref.shape[1]:
        raise DimensionMismatch(
            f"set width {pts.shape[1]} != reference width {ref.shape[1]}"
        )
    deltas = pts[:, None, :] - ref[None, :, :]
    dists = np.sqrt(np.sum(deltas ** 2, axis=2))
    return float(np.mean(dists.min(axis=1)))


def spacing(point_set) -> float:
    """Schott's metric: spread of the L1 nearest-neighbor distances."""
    pts = _as_points(point_set)
    n = pts.shape[0]
    if n < 2:
        raise TooFewPoints("spacing needs at least 2 points")
    dists = np.sum(np.abs(pts[:, None, :] - pts[None, :, :]), axis=2)
    np.fill_diagonal(dists, np.inf)
    d = dists.min(axis=1)
    d_bar = d.mean()
    return float(np.sqrt(np.sum((d_bar - d) ** 2) / (n - 1)))


def _pd_dissimilarity(points: np.ndarray) -> np.ndarray:
    """Pairwise (sum_k |a_k - b_k|^0.1)^10 matrix."""
    diff = np.abs(points[:, None, :] - points[None, :, :]) ** 0.1
    return diff.sum(axis=2) ** 10


def pure_diversity(point_set) -> float:
    """Greedy evaluation of PD(S) = max_s [PD(S - s) + d(s, S - s)]:
    repeatedly accumulate and remove the most isolated point. Ties (mutual
    nearest pairs share a distance exactly) break toward the
    lexicographically smallest point, so the value depends only on the set.
    """
    pts = _as_points(point_set)
    n = pts.shape[0]
    if n <= 1:
        return 0.0
    dis = _pd_dissimilarity(pts)
    np.fill_diagonal(dis, np.inf)
    keys = [tuple(p) for p in pts]
    alive = np.ones(n, dtype=bool)
    total = 0.0
    for _ in range(n - 1):
        idx = np.flatnonzero(alive)
        nearest = dis[np.ix_(idx, idx)].min(axis=1)
        best = nearest.max()
        tied = idx[nearest == best]
        pick = min(tied, key=lambda i: keys[i])
        total += float(best)
        alive[pick] = False
    return total


def hypervolume_mc(point_set, bounds: NormalizationBounds | None = None,
                   reference: float = DEFAULT_REFERENCE,
                   n_samples: int = DEFAULT_HV_SAMPLES, seed: int = 0) -> float:
    """Monte-Carlo dominated volume of [0, reference]^m after normalization.

    Points are normalized into [0, 1] by the bounds (identity when bounds is
    None) and clipped into [0, reference]; the estimate is the dominated
    sample fraction times reference^m. Deterministic per seed.
    """
    pts = _as_points(point_set)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if bounds is not None:
        pts = bounds.normalize(pts)
    pts = np.clip(pts, 0.0, reference)
    m = pts.shape[1]
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = max(1, min(n_samples, 8_000_000 // max(1, pts.shape[0] * m)))
    remaining = n_samples
    while remaining > 0:
        take = min(chunk, remaining)
        samples = rng.uniform(0.0, reference, size=(take, m))
        dominated = np.zeros(take, dtype=bool)
        for p in pts:
            dominated |= np.all(samples >= p, axis=1)
        hits += int(dominated.sum())
        remaining -= take
    return hits / n_samples * reference ** m


def hypervolume_exact_smallm(point_set, reference: float = DEFAULT_REFERENCE) -> float:
    """Exact dominated volume for m <= 3 by coordinate sweep."""
    pts = _as_points(point_set)
    m = pts.shape[1]
    if m > 3:
        raise DimensionTooHigh("exact hypervolume supports at most 3 objectives")
    pts = pts[np.all(pts < reference, axis=1)]
    pts = np.clip(pts, 0.0, reference)
    if pts.shape[0] == 0:
        return 0.0
    if m == 1:
        return float(reference - pts.min())
    if m == 2:
        return _hv2(pts, reference)
    zs = np.unique(pts[:, 2])
    total = 0.0
    levels = list(zs) + [reference]
    for low, high in zip(levels[:-1], levels[1:]):
        slab = pts[pts[:, 2] <= low][:, :2]
        if slab.shape[0]:
            total += _hv2(slab, reference) * (high - low)
    return total


def _hv2(pts: np.ndarray, reference: float) -> float:
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    skyline = []
    best_y = reference
    for x, y in pts:
        if y < best_y:
            skyline.append((x, y))
            best_y = y
    area = 0.0
    for i, (x, y) in enumerate(skyline):
        next_x = skyline[i + 1][0] if i + 1 < len(skyline) else reference
        area += (next_x - x) * (reference - y)
    return area
