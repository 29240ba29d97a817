import json

import pandas as pd
import pytest

from fairmoea.errors import InvalidValue
from fairmoea.experiment import (
    ExperimentConfig,
    PRESETS,
    derive_seed,
    parse_config,
    run_experiment,
    run_seed_for,
)


def experiment_config(credit_files, tmp_path, **kw):
    csv_path, schema_path = credit_files
    base = dict(dataset=str(csv_path), schema=str(schema_path),
                out=str(tmp_path / "runs"), generations=3, archive_capacity=5,
                offspring_count=5, hidden_nodes=4, hv_samples=2000,
                learning_rate=0.001, mutation_strength=0.05, seed=7,
                mode="moel")
    base.update(kw)
    return ExperimentConfig(**base)


def test_preset_values():
    assert PRESETS["adult"] == (0.001, 0.05, 64)
    assert PRESETS["german"] == (0.0001, 0.05, 64)
    assert PRESETS["titanic"] == (0.001, 0.0001, 8)


def test_parse_config_preset_and_overrides(tmp_path):
    cfg_file = tmp_path / "c.json"
    cfg_file.write_text(json.dumps({"preset": "adult", "tau": 0.22}))
    cfg = parse_config(str(cfg_file), {"tau": 0.3})
    assert cfg.learning_rate == 0.001
    assert cfg.mutation_strength == 0.05
    assert cfg.hidden_nodes == 64
    assert cfg.tau == 0.3  # flag beats file


def test_parse_config_flag_beats_preset(tmp_path):
    cfg = parse_config(None, {"preset": "adult", "learning_rate": 0.5})
    assert cfg.learning_rate == 0.5
    assert cfg.hidden_nodes == 64


def test_parse_config_rejects_bad_values(tmp_path):
    with pytest.raises(InvalidValue):
        parse_config(None, {"tau": 1.5})
    with pytest.raises(InvalidValue):
        parse_config(None, {"generations": -1})
    with pytest.raises(InvalidValue):
        parse_config(None, {"preset": "nope"})
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"not_a_field": 1}))
    with pytest.raises(InvalidValue):
        parse_config(str(bad), {})
    with pytest.raises(InvalidValue):
        parse_config(None, {"mode": "static-mask", "static_mask": "f99"})


def test_child_seed_derivation_injective():
    seen = set()
    for fold in range(5):
        for trial in range(10):
            seen.add(run_seed_for(123, fold, trial))
    assert len(seen) == 50
    assert run_seed_for(123, 1, 2) == run_seed_for(123, 1, 2)
    assert derive_seed(5, 1) != derive_seed(6, 1)


def test_run_experiment_artifact_layout(credit_files, tmp_path):
    cfg = experiment_config(credit_files, tmp_path)
    root = run_experiment(cfg)
    run_dir = root / "fold0_trial0"
    for name in ("run.json", "generations.csv", "mask.csv",
                 "final_objectives.csv", "final_test_objectives.csv",
                 "timings.csv"):
        assert (run_dir / name).exists(), name
    assert (root / "summary.csv").exists()

    gens = pd.read_csv(run_dir / "generations.csv")
    assert list(gens.columns) == ["generation", "mask_size", "gd", "sp", "pd", "hv"]
    assert gens["generation"].tolist() == [0, 1, 2, 3]
    assert (gens["mask_size"] == 26).all()

    mask = pd.read_csv(run_dir / "mask.csv")
    assert len(mask) == 3
    assert mask.drop(columns="generation").to_numpy().sum() == 3 * 26

    final = pd.read_csv(run_dir / "final_objectives.csv")
    assert final.shape[1] == 26

    info = json.loads((run_dir / "run.json").read_text())
    assert info["fold"] == 0 and info["trial"] == 0
    assert info["resolved_seed"] == run_seed_for(7, 0, 0)


def test_run_experiment_folds_times_trials(credit_files, tmp_path):
    cfg = experiment_config(credit_files, tmp_path, folds=2, trials=2,
                            generations=2, hv_samples=500)
    root = run_experiment(cfg)
    run_dirs = sorted(p.name for p in root.glob("fold*_trial*"))
    assert run_dirs == ["fold0_trial0", "fold0_trial1",
                        "fold1_trial0", "fold1_trial1"]
    summary = pd.read_csv(root / "summary.csv")
    assert len(summary) == 4


def test_summary_matches_generations_files(credit_files, tmp_path):
    cfg = experiment_config(credit_files, tmp_path)
    root = run_experiment(cfg)
    summary = pd.read_csv(root / "summary.csv")
    for _, row in summary.iterrows():
        run_dir = root / f"fold{int(row['fold'])}_trial{int(row['trial'])}"
        last = pd.read_csv(run_dir / "generations.csv").iloc[-1]
        for key in ("gd", "sp", "pd", "hv"):
            assert row[f"final_{key}"] == pytest.approx(last[key], rel=1e-12)


def test_rerun_is_byte_identical(credit_files, tmp_path):
    cfg_a = experiment_config(credit_files, tmp_path / "a", generations=2,
                              hv_samples=500)
    cfg_b = experiment_config(credit_files, tmp_path / "b", generations=2,
                              hv_samples=500)
    root_a = run_experiment(cfg_a)
    root_b = run_experiment(cfg_b)
    for name in ("generations.csv", "mask.csv", "final_objectives.csv",
                 "final_test_objectives.csv"):
        a = (root_a / "fold0_trial0" / name).read_bytes()
        b = (root_b / "fold0_trial0" / name).read_bytes()
        assert a == b, name
    assert (root_a / "summary.csv").read_text() == (root_b / "summary.csv").read_text()


def test_dynamic_with_long_warmup_matches_full_mode_artifacts(credit_files, tmp_path):
    # a warm start covering the whole run disables reduction entirely, so
    # the artifacts coincide with the all-objectives mode
    shared = dict(generations=3, hv_samples=500)
    dyn = experiment_config(credit_files, tmp_path / "dyn", mode="famoel",
                            warmup=4, window=2, **shared)
    full = experiment_config(credit_files, tmp_path / "full", mode="moel",
                             **shared)
    root_dyn = run_experiment(dyn)
    root_full = run_experiment(full)
    for name in ("generations.csv", "mask.csv", "final_objectives.csv",
                 "final_test_objectives.csv"):
        a = (root_dyn / "fold0_trial0" / name).read_bytes()
        b = (root_full / "fold0_trial0" / name).read_bytes()
        assert a == b, name


def test_static_mask_run_logs_static_mask(credit_files, tmp_path):
    cfg = experiment_config(credit_files, tmp_path, mode="static-mask",
                            static_mask="ce,f4,f7,f10,f16,f17,f25",
                            generations=2, hv_samples=500)
    root = run_experiment(cfg)
    mask = pd.read_csv(root / "fold0_trial0" / "mask.csv")
    active = [c for c in mask.columns if c != "generation" and (mask[c] == 1).all()]
    inactive = [c for c in mask.columns if c != "generation" and (mask[c] == 0).all()]
    assert active == ["ce", "f4", "f7", "f10", "f16", "f17", "f25"]
    assert len(active) + len(inactive) == 26


def test_genome_dump_optional(credit_files, tmp_path):
    cfg = experiment_config(credit_files, tmp_path, dump_genomes=True,
                            generations=1, hv_samples=500)
    root = run_experiment(cfg)
    from fairmoea.network import load_genomes
    genomes = load_genomes(root / "fold0_trial0" / "genomes.bin")
    final = pd.read_csv(root / "fold0_trial0" / "final_objectives.csv")
    assert len(genomes) == len(final)
