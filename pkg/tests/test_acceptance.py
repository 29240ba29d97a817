"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and the logged reduced-scale comparison.
"""

import time

import numpy as np
import pandas as pd
import pytest

from fairmoea.cli import main
from fairmoea.evolution import EvolutionConfig, run_evolution
from fairmoea.experiment import (
    ExperimentConfig,
    indicators_against_front,
    run_experiment,
)
from fairmoea.indicators import (
    build_pseudo_front,
    gd,
    hypervolume_exact_smallm,
    hypervolume_mc,
    pure_diversity,
    spacing,
)
from fairmoea.metrics import raw_measures, transform
from fairmoea.network import NetworkShape, cross_entropy, ce_gradient, init_genome
from fairmoea.objectives import FULL_MASK, OBJECTIVE_NAMES
from fairmoea.reduction import mncie_matrix, signed_ncc
from fairmoea.stats import friedman_test

from conftest import make_dataset
from oracles import fd_gradient, oracle_measures, oracle_signed_ncc, oracle_transform

GERMAN_RUN = dict(generations=30, archive_capacity=20, offspring_count=20,
                  folds=1, trials=1, tau=0.22, hv_samples=100_000, seed=101,
                  preset="german", mode="famoel")


def _passed(number, text):
    print(f"CRITERION {number:2d} PASS: {text}")


@pytest.fixture(scope="module")
def determinism_runs(credit_files, tmp_path_factory):
    """The criterion-7 run executed twice with the same root seed."""
    csv_path, schema_path = credit_files
    roots = []
    t0 = time.time()
    for tag in ("first", "second"):
        out = tmp_path_factory.mktemp(f"det_{tag}")
        cfg = ExperimentConfig(dataset=str(csv_path), schema=str(schema_path),
                               out=str(out / "runs"), **GERMAN_RUN)
        roots.append(run_experiment(cfg))
    return roots, time.time() - t0


def test_criterion_01_warm_start_exactness(credit_bundle, determinism_runs):
    shape = NetworkShape(credit_bundle.train.n_features, 4)
    cfg = EvolutionConfig(archive_capacity=6, offspring_count=6, generations=9,
                          learning_rate=0.001, mutation_strength=0.05,
                          mode="famoel", seed=3)
    result = run_evolution(cfg, credit_bundle, shape)
    for log in result.logs[1:]:
        assert log.mask == FULL_MASK, f"generation {log.generation}"

    # and in the 30-generation determinism run's artifacts
    (root_a, _), _ = determinism_runs
    mask = pd.read_csv(root_a / "fold0_trial0" / "mask.csv")
    early = mask[mask["generation"] <= 9][OBJECTIVE_NAMES].to_numpy()
    assert early.shape == (9, 26) and early.sum() == 9 * 26
    _passed(1, "generations 1-9 keep the full 26-objective mask")


def test_criterion_02_selection_golden_traces(tmp_path, capsys):
    ncr1 = tmp_path / "all_point_nine.csv"
    header = "a,b,c\n"
    ncr1.write_text(header + "1.0,0.9,0.9\n0.9,1.0,0.9\n0.9,0.9,1.0\n")
    assert main(["reduce", str(ncr1), "--tau", "0.22"]) == 0
    assert capsys.readouterr().out.strip() == "0"

    ncr2 = tmp_path / "conflict.csv"
    ncr2.write_text(header + "1.0,-0.8,0.1\n-0.8,1.0,0.1\n0.1,0.1,1.0\n")
    assert main(["reduce", str(ncr2), "--tau", "0.22"]) == 0
    assert capsys.readouterr().out.strip() == "0,1,2"
    with capsys.disabled():
        _passed(2, "both hand-traced selection cases reproduce via `reduce`")


def test_criterion_03_correlation_pinning():
    x = np.random.default_rng(0).normal(size=400)
    assert signed_ncc(x, x) == pytest.approx(1.0, abs=1e-12)
    assert signed_ncc(x, -x) == pytest.approx(-1.0, abs=1e-12)

    nc = mncie_matrix(np.random.default_rng(1).normal(size=(50, 8)))
    np.testing.assert_allclose(nc, nc.T, atol=1e-12)
    np.testing.assert_allclose(np.diag(nc), 1.0, atol=1e-12)

    for seed in range(10):
        cols = np.random.default_rng(seed).uniform(size=(400, 2))
        value = signed_ncc(cols[:, 0], cols[:, 1])
        assert abs(value) < 0.2
        assert value == pytest.approx(
            oracle_signed_ncc(cols[:, 0], cols[:, 1]), abs=1e-12)

    rng = np.random.default_rng(42)
    for n in (16, 50, 100, 400):
        a = rng.normal(size=n)
        b = 0.6 * a + rng.normal(size=n)
        assert signed_ncc(a, b) == pytest.approx(oracle_signed_ncc(a, b), abs=1e-12)
    _passed(3, "dependence measure pinned: +1/-1 anchors, symmetry, "
               "independence bound, oracle agreement")


def test_criterion_04_fairness_oracle_equivalence():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        y = rng.integers(0, 2, 50)
        yhat = rng.integers(0, 2, 50)
        groups = np.zeros(50, dtype=np.int64)
        groups[rng.choice(50, int(rng.integers(10, 40)), replace=False)] = 1
        ours_raw = raw_measures(y, yhat, groups)
        ref_raw = oracle_measures(y, yhat, groups)
        for k in range(24):
            if np.isinf(ref_raw[k]):
                assert np.isinf(ours_raw[k])
            else:
                assert ours_raw[k] == pytest.approx(ref_raw[k], abs=1e-12)
        np.testing.assert_allclose(transform(ours_raw), oracle_transform(ref_raw),
                                   atol=1e-12)

    y = np.array([1, 0, 1, 0, 1, 0, 1, 0])
    groups = np.array([0, 0, 0, 0, 1, 1, 1, 1])
    np.testing.assert_allclose(transform(raw_measures(y, y, groups)), 0.0,
                               atol=1e-15)

    for _ in range(1000):
        n = int(rng.integers(6, 40))
        y = rng.integers(0, 2, n)
        yhat = rng.integers(0, 2, n)
        groups = np.zeros(n, dtype=np.int64)
        groups[rng.choice(n, max(1, int(rng.integers(1, n))), replace=False)] = 1
        if groups.min() == groups.max():
            groups[0] = 1 - groups[0]
        f = transform(raw_measures(y, yhat, groups))
        ratios = f[[6, 7, 8, 9, 10, 13]]
        assert np.all((ratios >= 0.0) & (ratios <= 1.0))
        assert np.all(f[15:] >= -1e-12)
    _passed(4, "Fair1-Fair24 and f1-f25 match the independent evaluator; "
               "ranges hold on 1000 instances")


def test_criterion_05_gradient_check():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(100):
        shape = NetworkShape(int(rng.integers(2, 7)), int(rng.integers(2, 6)))
        x = rng.normal(size=shape.n_inputs)
        y = np.array([int(rng.integers(0, 2))])
        genome = init_genome(shape, rng) + rng.normal(0, 0.4, shape.genome_length)
        analytic = ce_gradient(genome, x, y, shape)
        data = make_dataset(x[None, :], y, [0])
        numeric = fd_gradient(lambda g: cross_entropy(g, data, shape), genome)
        err = np.abs(analytic - numeric) / np.maximum(
            1e-6, np.maximum(np.abs(analytic), np.abs(numeric)))
        worst = max(worst, float(err.max()))
    assert worst <= 1e-4
    _passed(5, f"gradients match central differences (worst rel err {worst:.2e})")


def test_criterion_06_indicator_oracles():
    assert gd([[0.5, 0.5]], [[0.0, 0.0]]) == pytest.approx(np.sqrt(0.5), abs=1e-9)
    assert spacing([[0, 0], [0, 1], [0, 3]]) == pytest.approx(np.sqrt(1 / 3),
                                                             abs=1e-9)
    assert pure_diversity([[0.0, 0.0], [1.0, 1.0]]) == pytest.approx(1024.0,
                                                                     abs=1e-9)

    assert hypervolume_mc([[0.0, 0.0]], n_samples=100_000, seed=0) == pytest.approx(
        1.44, abs=0.01)
    assert hypervolume_mc([[0.5, 1.0], [1.0, 0.5]], n_samples=100_000,
                          seed=1) == pytest.approx(0.24, abs=0.01)

    rng = np.random.default_rng(6)
    worst = 0.0
    for k in range(20):
        m = 2 if k % 2 == 0 else 3
        pts = rng.uniform(0.0, 1.2, size=(int(rng.integers(2, 9)), m))
        exact = hypervolume_exact_smallm(pts)
        estimate = hypervolume_mc(pts, n_samples=100_000, seed=100 + k)
        worst = max(worst, abs(estimate - exact))
    assert worst <= 0.01
    _passed(6, f"hypervolume MC within 0.01 of exact on 20 sets "
               f"(worst {worst:.4f}); GD/SP/PD fixtures exact")


def test_criterion_07_determinism(determinism_runs):
    (root_a, root_b), elapsed = determinism_runs
    for name in ("generations.csv", "mask.csv", "final_objectives.csv"):
        a = (root_a / "fold0_trial0" / name).read_bytes()
        b = (root_b / "fold0_trial0" / name).read_bytes()
        assert a == b, f"{name} differs between identically seeded runs"
    _passed(7, f"two identically seeded runs are byte-identical "
               f"({elapsed:.0f}s for both)")


def test_criterion_08_dynamic_selection_behavior(determinism_runs):
    (root_a, _), _ = determinism_runs
    mask = pd.read_csv(root_a / "fold0_trial0" / "mask.csv")
    rows = mask[OBJECTIVE_NAMES].to_numpy()
    gens = mask["generation"].to_numpy()
    after = rows[gens > 10]
    distinct = {tuple(r) for r in after}
    assert len(distinct) >= 2, "mask never changes after generation 10"
    sizes = rows.sum(axis=1)
    assert sizes.min() < 26, "mask never shrinks below the full set"
    _passed(8, f"{len(distinct)} distinct masks after generation 10, "
               f"smallest mask {int(sizes.min())} objectives")


def test_criterion_09_optimization_progress(determinism_runs):
    (root_a, _), _ = determinism_runs
    gens = pd.read_csv(root_a / "fold0_trial0" / "generations.csv")
    first, last = gens["hv"].iloc[0], gens["hv"].iloc[-1]
    assert last > first
    _passed(9, f"validation hypervolume rises {first:.3f} -> {last:.3f}")


def test_criterion_10_reduced_scale_trend(credit_files, tmp_path):
    # informational: log the direction, do not hard-fail (full-scale effect)
    csv_path, schema_path = credit_files
    finals = {}
    for mode in ("famoel", "moel"):
        cfg = ExperimentConfig(dataset=str(csv_path), schema=str(schema_path),
                               out=str(tmp_path / f"trend_{mode}"), mode=mode,
                               generations=30, archive_capacity=20,
                               offspring_count=20, trials=10, tau=0.22,
                               preset="german", hv_samples=20_000, seed=77)
        root = run_experiment(cfg)
        finals[mode] = [pd.read_csv(p / "final_test_objectives.csv").to_numpy()
                        for p in sorted(root.glob("fold*_trial*"))]
    front = build_pseudo_front([m for sets in finals.values() for m in sets])
    means = {}
    for mode, sets in finals.items():
        values = [indicators_against_front(s, front, 100_000, i)["hv"]
                  for i, s in enumerate(sets)]
        means[mode] = float(np.mean(values))
    direction = "matches" if means["famoel"] >= means["moel"] else "reverses"
    _passed(10, f"logged mean final test HV over 10 seeds: "
                f"dynamic {means['famoel']:.3f} vs full-set {means['moel']:.3f} "
                f"({direction} the full-scale direction; informational only)")


def test_criterion_11_static_mask_fidelity(credit_files, tmp_path):
    csv_path, schema_path = credit_files
    cfg = ExperimentConfig(dataset=str(csv_path), schema=str(schema_path),
                           out=str(tmp_path / "static"), mode="static-mask",
                           static_mask="ce,f4,f7,f10,f16,f17,f25",
                           generations=8, archive_capacity=8, offspring_count=8,
                           preset="german", hv_samples=2000, seed=5)
    root = run_experiment(cfg)
    mask = pd.read_csv(root / "fold0_trial0" / "mask.csv")
    expected = {"ce", "f4", "f7", "f10", "f16", "f17", "f25"}
    for name in OBJECTIVE_NAMES:
        want = 1 if name in expected else 0
        assert (mask[name] == want).all(), name
    _passed(11, "static mask {CE, f4, f7, f10, f16, f17, f25} logged at "
                "every generation")


def test_criterion_12_friedman_sanity():
    base = np.arange(12, dtype=float)
    unanimous = friedman_test(np.column_stack([base + 1.0, base]))
    assert unanimous.statistic == pytest.approx(12.0, abs=1e-12)
    assert unanimous.significant

    identical = friedman_test(np.tile(base[:, None], (1, 2)))
    assert not identical.significant
    _passed(12, "unanimous winner gives statistic 12 (significant); "
                "identical samples give none")
