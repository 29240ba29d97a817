"""Two-archive many-objective evolution of partially trained classifiers.

The population is the union of a convergence archive (survival by
additive-epsilon indicator fitness) and a diversity archive (nondominated
members truncated by fractional-norm dissimilarity). Parents pair one
member of each archive, offspring come from componentwise convex weight
crossover plus isotropic Gaussian mutation, and every new genome gets a
short SGD refinement before evaluation. All selection decisions look only
at the objective columns of the current mask.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .data import SplitBundle
from .errors import EmptyPopulation, InvalidValue, ShapeMismatch
from .metrics import MetricsConfig, evaluate_individual
from .network import NetworkShape, init_genome, partial_train
from .objectives import FULL_MASK
from .reduction import CorrelationHistory, averaged_matrix, mncie_matrix, select_from_matrix

EPSILON_FITNESS_KAPPA = 0.05

MODE_DYNAMIC = "famoel"       # per-generation objective selection
MODE_FULL = "moel"            # all 26 objectives every generation
MODE_STATIC = "static-mask"   # a fixed subset every generation
MODES = (MODE_DYNAMIC, MODE_FULL, MODE_STATIC)


@dataclass
class Individual:
    genome: np.ndarray
    objectives: np.ndarray
    id: int


@dataclass(frozen=True)
class EvolutionConfig:
    archive_capacity: int = 100
    offspring_count: int = 100
    generations: int = 100
    mutation_strength: float = 0.05
    learning_rate: float = 0.001
    epochs: int = 1
    batch_size: int = 32
    tau: float = 0.22
    warmup: int = 10
    window: int = 10
    mode: str = MODE_DYNAMIC
    static_mask: tuple | None = None
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidValue(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == MODE_STATIC and not self.static_mask:
            raise InvalidValue("static-mask mode needs a static_mask")
        if not 0.0 < self.tau < 1.0:
            raise InvalidValue("tau must lie in (0, 1)")
        for name in ("archive_capacity", "offspring_count", "generations",
                     "epochs", "batch_size"):
            if getattr(self, name) <= 0:
                raise InvalidValue(f"{name} must be positive")
        if self.mutation_strength < 0 or self.learning_rate < 0:
            raise InvalidValue("mutation_strength and learning_rate must be >= 0")


@dataclass
class GenerationLog:
    generation: int
    mask: tuple
    ids: list
    objectives: np.ndarray
    seconds: float


@dataclass
class EvolutionResult:
    config: EvolutionConfig
    shape: NetworkShape
    logs: list
    final_population: list
    convergence: list = field(default_factory=list)
    diversity: list = field(default_factory=list)
    history: CorrelationHistory = field(default_factory=CorrelationHistory)


def gaussian_mutation(genome: np.ndarray, sigma: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Add an independent Normal(0, sigma^2) draw to every component."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    g = np.asarray(genome, dtype=np.float64)
    return g + rng.normal(0.0, sigma, size=g.shape)


def weight_crossover(p: np.ndarray, q: np.ndarray, rng: np.random.Generator):
    """Componentwise convex blend with shared uniform weights:
    o1 = u*p + (1-u)*q and o2 = u*q + (1-u)*p."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ShapeMismatch("parents have different genome lengths")
    u = rng.uniform(0.0, 1.0, size=p.shape)
    return u * p + (1.0 - u) * q, u * q + (1.0 - u) * p


def epsilon_indicator_fitness(objectives: np.ndarray, mask,
                              kappa: float = EPSILON_FITNESS_KAPPA) -> np.ndarray:
    """Additive-epsilon indicator fitness of each candidate (higher is better).

    fitness_k = sum_{j != k} -exp(-I(j, k) / kappa) where I(j, k) is the
    largest masked-objective gap obj_j - obj_k after min-max normalization
    over the candidates; constant columns contribute 0.
    """
    vals = np.asarray(objectives, dtype=np.float64)[:, list(mask)]
    n = vals.shape[0]
    if n < 2:
        raise ValueError("need at least 2 candidates")
    lo = vals.min(axis=0)
    span = vals.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    norm = (vals - lo) / safe
    norm[:, span == 0] = 0.0
    indicator = (norm[:, None, :] - norm[None, :, :]).max(axis=2)
    contrib = -np.exp(-indicator / kappa)
    # drop each candidate's self term (always -1)
    return contrib.sum(axis=0) + 1.0


def _merge_by_id(*groups) -> list:
    seen = {}
    for group in groups:
        for ind in group:
            seen[ind.id] = ind
    return [seen[i] for i in sorted(seen)]


def _objective_matrix(pool) -> np.ndarray:
    return np.vstack([ind.objectives for ind in pool])


def update_convergence_archive(archive, newcomers, mask, capacity: int) -> list:
    """Keep the capacity best members of archive + newcomers by iteratively
    dropping the worst epsilon-indicator fitness (ties drop the lowest id)."""
    pool = _merge_by_id(archive, newcomers)
    while len(pool) > capacity:
        fitness = epsilon_indicator_fitness(_objective_matrix(pool), mask)
        pool.pop(int(np.argmin(fitness)))
    return pool


def _dominates(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(np.all(a <= b) and np.any(a < b))


def _mask_nondominated(pool, mask) -> list:
    cols = list(mask)
    vals = [ind.objectives[cols] for ind in pool]
    keep = []
    for i, ind in enumerate(pool):
        if not any(_dominates(vals[j], vals[i]) for j in range(len(pool)) if j != i):
            keep.append(ind)
    return keep


def _fractional_dissimilarity(values: np.ndarray, m: int) -> np.ndarray:
    """Pairwise (sum_k |a_k - b_k|^(1/m))^m over masked objectives."""
    diff = np.abs(values[:, None, :] - values[None, :, :]) ** (1.0 / m)
    return diff.sum(axis=2) ** m


def update_diversity_archive(archive, newcomers, mask, capacity: int) -> list:
    """Mask-nondominated pool truncated by greedily removing the member whose
    removal least reduces total pairwise fractional-norm dissimilarity
    (ties drop the lowest id). Duplicates are kept until truncation."""
    pool = _mask_nondominated(_merge_by_id(archive, newcomers), mask)
    if len(pool) <= capacity:
        return pool
    cols = list(mask)
    vals = np.vstack([ind.objectives[cols] for ind in pool])
    dis = _fractional_dissimilarity(vals, len(cols))
    alive = np.ones(len(pool), dtype=bool)
    while int(alive.sum()) > capacity:
        idx = np.flatnonzero(alive)
        rowsums = dis[np.ix_(idx, idx)].sum(axis=1)
        alive[idx[int(np.argmin(rowsums))]] = False
    return [pool[i] for i in np.flatnonzero(alive)]


def mating_selection(convergence, diversity, phi: int,
                     rng: np.random.Generator) -> list:
    """ceil(phi/2) parent pairs, first from the convergence archive and
    second from the diversity archive (either side falls back to the other
    when empty)."""
    if not convergence and not diversity:
        raise EmptyPopulation("both archives are empty")
    first = convergence or diversity
    second = diversity or convergence
    pairs = []
    for _ in range((phi + 1) // 2):
        a = first[int(rng.integers(len(first)))]
        b = second[int(rng.integers(len(second)))]
        pairs.append((a, b))
    return pairs


def _stream(seed: int, *key) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def _resolve_mask(config: EvolutionConfig, t: int,
                  history: CorrelationHistory, population) -> tuple:
    if config.mode == MODE_FULL:
        return FULL_MASK
    if config.mode == MODE_STATIC:
        return tuple(sorted(config.static_mask))
    history.append(mncie_matrix(_objective_matrix(population)))
    if t < config.warmup:
        return FULL_MASK
    return select_from_matrix(averaged_matrix(history), config.tau)


def run_evolution(config: EvolutionConfig, splits: SplitBundle, shape: NetworkShape,
                  metrics_cfg: MetricsConfig | None = None) -> EvolutionResult:
    """Run the full loop: seeded initialization with partial training, then
    per generation mask resolution, mating, crossover + mutation, partial
    training, evaluation and survival selection into both archives.
    Fully deterministic for a fixed config."""
    metrics_cfg = metrics_cfg or MetricsConfig()
    capacity = config.archive_capacity
    seed = config.seed

    t0 = time.perf_counter()
    initial = []
    for k in range(capacity):
        genome = init_genome(shape, _stream(seed, 0, k))
        genome = partial_train(genome, splits.train, shape, config.learning_rate,
                               config.epochs, config.batch_size, _stream(seed, 1, k))
        obj = evaluate_individual(genome, shape, splits.validation, metrics_cfg)
        initial.append(Individual(genome, obj, k))
    next_id = capacity

    convergence = update_convergence_archive([], initial, FULL_MASK, capacity)
    diversity = update_diversity_archive([], initial, FULL_MASK, capacity)
    history = CorrelationHistory(window=config.window)

    population = _merge_by_id(convergence, diversity)
    logs = [GenerationLog(0, FULL_MASK, [i.id for i in population],
                          _objective_matrix(population), time.perf_counter() - t0)]

    for t in range(1, config.generations + 1):
        t0 = time.perf_counter()
        mask = _resolve_mask(config, t, history, population)

        pairs = mating_selection(convergence, diversity, config.offspring_count,
                                 _stream(seed, 2, t))
        rng_repro = _stream(seed, 3, t)
        offspring = []
        for a, b in pairs:
            for child in weight_crossover(a.genome, b.genome, rng_repro):
                if len(offspring) >= config.offspring_count:
                    break
                genome = gaussian_mutation(child, config.mutation_strength, rng_repro)
                genome = partial_train(genome, splits.train, shape,
                                       config.learning_rate, config.epochs,
                                       config.batch_size, _stream(seed, 4, next_id))
                obj = evaluate_individual(genome, shape, splits.validation, metrics_cfg)
                offspring.append(Individual(genome, obj, next_id))
                next_id += 1

        convergence = update_convergence_archive(convergence, offspring, mask, capacity)
        diversity = update_diversity_archive(diversity, offspring, mask, capacity)
        population = _merge_by_id(convergence, diversity)
        logs.append(GenerationLog(t, mask, [i.id for i in population],
                                  _objective_matrix(population),
                                  time.perf_counter() - t0))

    return EvolutionResult(config=config, shape=shape, logs=logs,
                           final_population=population, convergence=convergence,
                           diversity=diversity, history=history)
