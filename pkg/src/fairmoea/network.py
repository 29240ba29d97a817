"""One-hidden-layer binary MLP with a flat real-vector genome.

The genome stores, in layer order, the hidden weight matrix (row major),
the hidden biases, the output weights and the output bias:
length = n_hidden * (n_inputs + 1) + (n_hidden + 1).
Hidden activation is tanh, output is a sigmoid probability.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .data import EncodedDataset
from .errors import EmptyDataset, ShapeMismatch

CE_PROB_CLAMP = 1e-7


@dataclass(frozen=True)
class NetworkShape:
    n_inputs: int
    n_hidden: int

    def __post_init__(self):
        if self.n_inputs < 1 or self.n_hidden < 1:
            raise ShapeMismatch("n_inputs and n_hidden must be >= 1")

    @property
    def genome_length(self) -> int:
        return self.n_hidden * (self.n_inputs + 1) + (self.n_hidden + 1)


def decode(genome: np.ndarray, shape: NetworkShape):
    """Split a genome into (W1, b1, w2, b2). Inverse of encode, bit exact."""
    g = np.asarray(genome, dtype=np.float64)
    if g.shape != (shape.genome_length,):
        raise ShapeMismatch(
            f"genome length {g.shape} does not match shape {shape} "
            f"(expected {shape.genome_length})"
        )
    h, d = shape.n_hidden, shape.n_inputs
    w1 = g[: h * d].reshape(h, d)
    b1 = g[h * d: h * d + h]
    w2 = g[h * d + h: h * d + 2 * h]
    b2 = g[-1]
    return w1, b1, w2, b2


def encode(w1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: float) -> np.ndarray:
    return np.concatenate([np.ravel(w1), np.ravel(b1), np.ravel(w2), [b2]])


def init_genome(shape: NetworkShape, rng: np.random.Generator) -> np.ndarray:
    """Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out)) per layer), zero biases."""
    h, d = shape.n_hidden, shape.n_inputs
    s1 = np.sqrt(6.0 / (d + h))
    s2 = np.sqrt(6.0 / (h + 1))
    w1 = rng.uniform(-s1, s1, size=(h, d))
    b1 = np.zeros(h)
    w2 = rng.uniform(-s2, s2, size=h)
    b2 = 0.0
    return encode(w1, b1, w2, b2)


def forward(genome: np.ndarray, features: np.ndarray, shape: NetworkShape) -> np.ndarray:
    """Probability of the positive class for one row or a matrix of rows."""
    w1, b1, w2, b2 = decode(genome, shape)
    x = np.asarray(features, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != shape.n_inputs:
        raise ShapeMismatch(f"feature width {x.shape[1]} != n_inputs {shape.n_inputs}")
    hidden = np.tanh(x @ w1.T + b1)
    p = expit(hidden @ w2 + b2)
    return p[0] if single else p


def predict_labels(genome: np.ndarray, dataset: EncodedDataset, shape: NetworkShape,
                   threshold: float = 0.5) -> np.ndarray:
    """Hard labels: 1 iff p >= threshold."""
    p = forward(genome, dataset.features, shape)
    return (p >= threshold).astype(np.int64)


def cross_entropy(genome: np.ndarray, dataset: EncodedDataset, shape: NetworkShape) -> float:
    if len(dataset) == 0:
        raise EmptyDataset("cross entropy of an empty dataset")
    p = forward(genome, dataset.features, shape)
    return cross_entropy_of_probs(p, dataset.labels)


def cross_entropy_of_probs(p: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy with probabilities clamped away from 0 and 1."""
    p = np.clip(np.asarray(p, dtype=np.float64), CE_PROB_CLAMP, 1.0 - CE_PROB_CLAMP)
    y = np.asarray(y, dtype=np.float64)
    if p.size == 0:
        raise EmptyDataset("cross entropy of an empty dataset")
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))


def ce_gradient(genome: np.ndarray, features: np.ndarray, labels: np.ndarray,
                shape: NetworkShape) -> np.ndarray:
    """Gradient of the mean cross-entropy of a batch w.r.t. the genome."""
    w1, b1, w2, b2 = decode(genome, shape)
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    y = np.asarray(labels, dtype=np.float64).reshape(-1)
    n = x.shape[0]

    z1 = x @ w1.T + b1
    hidden = np.tanh(z1)
    p = expit(hidden @ w2 + b2)

    dz2 = (p - y) / n                       # d mean-CE / d preactivation
    g_w2 = hidden.T @ dz2
    g_b2 = float(np.sum(dz2))
    dz1 = np.outer(dz2, w2) * (1.0 - hidden ** 2)
    g_w1 = dz1.T @ x
    g_b1 = dz1.sum(axis=0)
    return encode(g_w1, g_b1, g_w2, g_b2)


def partial_train(genome: np.ndarray, train: EncodedDataset, shape: NetworkShape,
                  learning_rate: float, epochs: int = 1, batch_size: int = 32,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Plain SGD on cross-entropy over shuffled minibatches.

    Returns a new genome; the input is never mutated. Deterministic for a
    fixed rng stream.
    """
    if learning_rate < 0:
        raise ValueError("learning_rate must be >= 0")
    if rng is None:
        rng = np.random.default_rng(0)
    g = np.array(genome, dtype=np.float64, copy=True)
    n = len(train)
    for _ in range(max(0, int(epochs))):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = order[start:start + batch_size]
            grad = ce_gradient(g, train.features[batch], train.labels[batch], shape)
            g -= learning_rate * grad
    return g


def dump_genomes(genomes, path) -> None:
    """Write genomes as little-endian float64 records, each prefixed with a
    little-endian uint64 element count."""
    with open(path, "wb") as fh:
        for g in genomes:
            arr = np.asarray(g, dtype="<f8")
            fh.write(struct.pack("<Q", arr.size))
            fh.write(arr.tobytes())


def load_genomes(path) -> list[np.ndarray]:
    out = []
    with open(path, "rb") as fh:
        while True:
            header = fh.read(8)
            if not header:
                break
            (count,) = struct.unpack("<Q", header)
            data = fh.read(8 * count)
            if len(data) != 8 * count:
                raise ValueError("truncated genome record")
            out.append(np.frombuffer(data, dtype="<f8").astype(np.float64))
    return out
