"""Experiment configuration, multi-trial orchestration and run artifacts.

A run directory holds run.json (the fully resolved configuration),
generations.csv (per-generation mask size and GD/SP/PD/HV against the
run's pooled validation pseudo-front), mask.csv (generation x 26 binary
matrix), final_objectives.csv / final_test_objectives.csv (population x 26
on validation and test), timings.csv and optionally genomes.bin. The
experiment root aggregates one summary.csv row per run.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .data import DatasetSchema, load_dataset, kfold, make_split_bundle, split
from .errors import InvalidValue
from .evolution import (
    MODE_DYNAMIC,
    MODE_STATIC,
    MODES,
    EvolutionConfig,
    EvolutionResult,
    run_evolution,
)
from .indicators import (
    NormalizationBounds,
    build_pseudo_front,
    gd,
    hypervolume_mc,
    nondominated_filter,
    pure_diversity,
    spacing,
)
from .metrics import MetricsConfig, evaluate_individual
from .network import NetworkShape, dump_genomes
from .objectives import OBJECTIVE_NAMES, mask_to_row, parse_mask

# Per-dataset hyperparameters (learning rate, mutation strength, hidden nodes).
PRESETS = {
    "heart": (0.0001, 0.0001, 16),
    "titanic": (0.001, 0.0001, 8),
    "german": (0.0001, 0.05, 64),
    "student": (0.001, 0.0001, 64),
    "compas": (0.001, 0.05, 64),
    "bank": (0.001, 0.005, 64),
    "adult": (0.001, 0.05, 64),
    "drug": (0.001, 0.0001, 64),
    "patient": (0.0001, 0.0001, 64),
    "lsat": (0.001, 0.005, 64),
    "default": (0.001, 0.01, 64),
    "dutch": (0.001, 0.01, 64),
}


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = ""
    schema: str = ""
    out: str = "runs"
    mode: str = MODE_DYNAMIC
    preset: str | None = None
    folds: int = 1
    trials: int = 1
    generations: int = 100
    tau: float = 0.22
    warmup: int = 10
    window: int = 10
    archive_capacity: int = 100
    offspring_count: int = 100
    learning_rate: float = 0.001
    mutation_strength: float = 0.05
    hidden_nodes: int = 64
    epochs: int = 1
    batch_size: int = 32
    alpha: float = 2.0
    dirichlet_concentration: float = 1.0
    hv_samples: int = 100_000
    seed: int = 0
    static_mask: str | None = None
    dump_genomes: bool = False

    def validate(self) -> "ExperimentConfig":
        if self.mode not in MODES:
            raise InvalidValue(f"mode must be one of {MODES}")
        if not 0.0 < self.tau < 1.0:
            raise InvalidValue(f"tau must lie in (0, 1), got {self.tau}")
        for name in ("folds", "trials", "generations", "warmup", "window",
                     "archive_capacity", "offspring_count", "hidden_nodes",
                     "epochs", "batch_size", "hv_samples"):
            if getattr(self, name) < 1:
                raise InvalidValue(f"{name} must be >= 1")
        if self.learning_rate < 0 or self.mutation_strength < 0:
            raise InvalidValue("learning_rate and mutation_strength must be >= 0")
        if self.alpha <= 0 or self.alpha == 1.0:
            raise InvalidValue("alpha must be positive and != 1")
        if self.mode == MODE_STATIC and not self.static_mask:
            raise InvalidValue("static-mask mode needs --static-mask")
        if self.static_mask:
            try:
                parse_mask(self.static_mask)
            except ValueError as exc:
                raise InvalidValue(str(exc)) from None
        return self


def parse_config(config_path: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Resolve a config: flag overrides beat file values beat preset values
    beat dataclass defaults."""
    file_values: dict = {}
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            file_values = json.load(fh)
        unknown = set(file_values) - set(ExperimentConfig.__dataclass_fields__)
        if unknown:
            raise InvalidValue(f"unknown config keys: {sorted(unknown)}")
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    merged = dict(file_values)
    merged.update(overrides)

    preset = merged.get("preset")
    if preset:
        if preset not in PRESETS:
            raise InvalidValue(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        lr, sigma, nodes = PRESETS[preset]
        merged.setdefault("learning_rate", lr)
        merged.setdefault("mutation_strength", sigma)
        merged.setdefault("hidden_nodes", nodes)

    try:
        cfg = ExperimentConfig(**merged)
    except TypeError as exc:
        raise InvalidValue(str(exc)) from None
    return cfg.validate()


def derive_seed(root: int, *key: int) -> int:
    """Deterministic child seed; injective over distinct key tuples."""
    ss = np.random.SeedSequence(entropy=root, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


# spawn-key namespaces for derive_seed
_NS_SPLIT = 11
_NS_FOLD_SPLIT = 12
_NS_RUN = 13
_NS_HV = 14


def run_seed_for(root: int, fold: int, trial: int) -> int:
    return derive_seed(root, _NS_RUN, fold, trial)


def _fold_bundles(raw, schema, cfg: ExperimentConfig):
    """Per-fold SplitBundles: a single 6:2:2 split when folds == 1, else the
    fold holdout is the test set and the rest splits 3:1 into train and
    validation (6:2:2 overall)."""
    n = len(raw)
    bundles = []
    if cfg.folds == 1:
        seed = derive_seed(cfg.seed, _NS_SPLIT, 0)
        train, val, test = split(n, (0.6, 0.2, 0.2), seed)
        bundles.append(make_split_bundle(raw, schema, train, val, test, seed))
    else:
        folds = kfold(n, cfg.folds, derive_seed(cfg.seed, _NS_SPLIT))
        for f, (rest, holdout) in enumerate(folds):
            sub_seed = derive_seed(cfg.seed, _NS_FOLD_SPLIT, f)
            rng = np.random.default_rng(sub_seed)
            order = rng.permutation(len(rest))
            # 3:1 of the remainder, so five folds give 6:2:2 overall
            n_train = int(np.floor(0.75 * len(rest)))
            train = np.sort(rest[order[:n_train]])
            val = np.sort(rest[order[n_train:]])
            bundles.append(make_split_bundle(raw, schema, train, val, holdout, sub_seed))
    return bundles


def _write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([str(v) for v in row])


def _set_indicators(norm_points: np.ndarray, norm_front: np.ndarray,
                    hv_samples: int, hv_seed: int) -> dict:
    values = {
        "gd": gd(norm_points, norm_front),
        "sp": spacing(norm_points) if norm_points.shape[0] >= 2 else 0.0,
        "pd": pure_diversity(norm_points),
        "hv": hypervolume_mc(norm_points, n_samples=hv_samples, seed=hv_seed),
    }
    return values


def indicators_against_front(points: np.ndarray, front: np.ndarray,
                             hv_samples: int, hv_seed: int) -> dict:
    bounds = NormalizationBounds.from_points(front)
    return _set_indicators(bounds.normalize(points), bounds.normalize(front),
                           hv_samples, hv_seed)


def write_run_artifacts(result: EvolutionResult, bundle, shape: NetworkShape,
                        metrics_cfg: MetricsConfig, out_dir, hv_samples: int,
                        run_info: dict, dump: bool = False) -> dict:
    """Write the artifact directory for one run; returns the summary row."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    run_seed = result.config.seed

    front = build_pseudo_front([log.objectives for log in result.logs])
    bounds = NormalizationBounds.from_points(front)
    norm_front = bounds.normalize(front)

    gen_rows = []
    for log in result.logs:
        vals = _set_indicators(bounds.normalize(log.objectives), norm_front,
                               hv_samples, derive_seed(run_seed, _NS_HV, log.generation))
        gen_rows.append([log.generation, len(log.mask),
                         vals["gd"], vals["sp"], vals["pd"], vals["hv"]])
    _write_csv(out / "generations.csv",
               ["generation", "mask_size", "gd", "sp", "pd", "hv"], gen_rows)

    _write_csv(out / "mask.csv", ["generation"] + OBJECTIVE_NAMES,
               [[log.generation] + mask_to_row(log.mask)
                for log in result.logs if log.generation >= 1])

    final_val = np.vstack([ind.objectives for ind in result.final_population])
    _write_csv(out / "final_objectives.csv", OBJECTIVE_NAMES, final_val.tolist())

    test_rows = np.vstack([
        evaluate_individual(ind.genome, shape, bundle.test, metrics_cfg)
        for ind in result.final_population
    ])
    _write_csv(out / "final_test_objectives.csv", OBJECTIVE_NAMES, test_rows.tolist())

    _write_csv(out / "timings.csv", ["generation", "seconds"],
               [[log.generation, f"{log.seconds:.6f}"] for log in result.logs])

    if dump:
        dump_genomes([ind.genome for ind in result.final_population],
                     out / "genomes.bin")

    test_front = nondominated_filter(test_rows)
    test_vals = indicators_against_front(test_rows, test_front, hv_samples,
                                         derive_seed(run_seed, _NS_HV, 10_000))

    payload = dict(run_info)
    payload["resolved_seed"] = run_seed
    payload["package_version"] = __version__
    payload["n_inputs"] = shape.n_inputs
    payload["n_hidden"] = shape.n_hidden
    with open(out / "run.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    last = gen_rows[-1]
    return {
        "final_gd": last[2], "final_sp": last[3], "final_pd": last[4],
        "final_hv": last[5],
        "test_gd": test_vals["gd"], "test_sp": test_vals["sp"],
        "test_pd": test_vals["pd"], "test_hv": test_vals["hv"],
    }


def run_experiment(cfg: ExperimentConfig) -> Path:
    """Run folds x trials evolution runs and write all artifacts; returns the
    experiment root directory."""
    cfg = cfg.validate()
    schema = DatasetSchema.from_json(cfg.schema)
    raw = load_dataset(cfg.dataset, schema)
    bundles = _fold_bundles(raw, schema, cfg)

    root = Path(cfg.out)
    root.mkdir(parents=True, exist_ok=True)
    metrics_cfg = MetricsConfig(alpha=cfg.alpha,
                                dirichlet_concentration=cfg.dirichlet_concentration)
    static = parse_mask(cfg.static_mask) if cfg.static_mask else None

    summary_rows = []
    for fold, bundle in enumerate(bundles):
        shape = NetworkShape(n_inputs=bundle.train.n_features, n_hidden=cfg.hidden_nodes)
        for trial in range(cfg.trials):
            run_seed = run_seed_for(cfg.seed, fold, trial)
            evo_cfg = EvolutionConfig(
                archive_capacity=cfg.archive_capacity,
                offspring_count=cfg.offspring_count,
                generations=cfg.generations,
                mutation_strength=cfg.mutation_strength,
                learning_rate=cfg.learning_rate,
                epochs=cfg.epochs,
                batch_size=cfg.batch_size,
                tau=cfg.tau,
                warmup=cfg.warmup,
                window=cfg.window,
                mode=cfg.mode,
                static_mask=static,
                seed=run_seed,
            )
            result = run_evolution(evo_cfg, bundle, shape, metrics_cfg)
            run_dir = root / f"fold{fold}_trial{trial}"
            info = asdict(cfg)
            info.update({"fold": fold, "trial": trial})
            row = write_run_artifacts(result, bundle, shape, metrics_cfg, run_dir,
                                      cfg.hv_samples, info, dump=cfg.dump_genomes)
            summary_rows.append({"fold": fold, "trial": trial, "seed": run_seed, **row})

    header = ["fold", "trial", "seed", "final_gd", "final_sp", "final_pd",
              "final_hv", "test_gd", "test_sp", "test_pd", "test_hv"]
    _write_csv(root / "summary.csv", header,
               [[r[h] for h in header] for r in summary_rows])
    return root
