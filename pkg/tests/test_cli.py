import csv
import json

import numpy as np
import pandas as pd
import pytest

from fairmoea.cli import main
from fairmoea.metrics import MetricsConfig, objective_vector, raw_measures

from oracles import oracle_measures


def write_matrix(path, matrix, header=None):
    matrix = np.asarray(matrix)
    header = header or [f"c{i}" for i in range(matrix.shape[1])]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(matrix.tolist())
    return path


def test_reduce_golden_trace_singleton(tmp_path, capsys):
    ncr = np.full((3, 3), 0.9)
    np.fill_diagonal(ncr, 1.0)
    path = write_matrix(tmp_path / "ncr.csv", ncr)
    assert main(["reduce", str(path), "--tau", "0.22"]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_reduce_golden_trace_conflict(tmp_path, capsys):
    ncr = [[1.0, -0.8, 0.1], [-0.8, 1.0, 0.1], [0.1, 0.1, 1.0]]
    path = write_matrix(tmp_path / "ncr.csv", ncr)
    assert main(["reduce", str(path), "--tau", "0.22"]) == 0
    assert capsys.readouterr().out.strip() == "0,1,2"


def test_reduce_from_objective_values(tmp_path, capsys):
    rng = np.random.default_rng(0)
    base = rng.normal(size=100)
    values = np.column_stack([base, base * 2.0 + 1.0, rng.normal(size=100)])
    path = write_matrix(tmp_path / "obj.csv", values)
    # tau above the small-sample dependence floor (~0.22 at N=100): the two
    # rank-identical columns collapse to one pick, the independent survives
    assert main(["reduce", str(path), "--kind", "objectives", "--tau", "0.4"]) == 0
    out = capsys.readouterr().out.strip()
    assert out in ("0,2", "1,2")


def test_reduce_bad_tau_exit_code(tmp_path):
    path = write_matrix(tmp_path / "ncr.csv", np.eye(2))
    assert main(["reduce", str(path), "--tau", "1.5"]) == 2


def test_reduce_nonsquare_matrix_is_data_error(tmp_path):
    path = write_matrix(tmp_path / "ncr.csv", np.zeros((2, 3)))
    assert main(["reduce", str(path)]) == 3


def test_reduce_empty_or_text_input_is_data_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert main(["reduce", str(empty)]) == 3
    text = tmp_path / "text.csv"
    text.write_text("a,b\nfoo,bar\n")
    assert main(["reduce", str(text)]) == 3


def test_metrics_subcommand_matches_library(tmp_path):
    rng = np.random.default_rng(1)
    n = 40
    y = rng.integers(0, 2, n)
    p = rng.uniform(size=n)
    groups = np.array(["privileged" if g else "unprivileged"
                       for g in rng.integers(0, 2, n)])
    if len(set(groups)) == 1:
        groups[0] = "privileged" if groups[0] == "unprivileged" else "unprivileged"
    pred = tmp_path / "pred.csv"
    pd.DataFrame({"y": y, "p": p, "group": groups}).to_csv(pred, index=False)
    out = tmp_path / "out"
    assert main(["metrics", str(pred), "--out", str(out)]) == 0

    measures = pd.read_csv(out / "measures.csv")
    objectives = pd.read_csv(out / "objectives.csv")
    assert len(measures) == 25 and len(objectives) == 26

    grp = (groups == "privileged").astype(int)
    yhat = (p >= 0.5).astype(int)
    expected_raw = raw_measures(y, yhat, grp, MetricsConfig())
    ref = oracle_measures(y.tolist(), yhat.tolist(), grp.tolist())
    got = measures["value"].to_numpy()
    finite = np.isfinite(expected_raw)
    np.testing.assert_allclose(got[finite], expected_raw[finite], atol=1e-12)
    np.testing.assert_allclose(got[finite], ref[finite], atol=1e-12)
    expected_obj = objective_vector(p, y, grp)
    np.testing.assert_allclose(objectives["value"].to_numpy(), expected_obj,
                               atol=1e-12)


def test_metrics_missing_columns_is_data_error(tmp_path):
    pred = tmp_path / "pred.csv"
    pd.DataFrame({"y": [1, 0]}).to_csv(pred, index=False)
    assert main(["metrics", str(pred)]) == 3


def test_indicators_subcommand(tmp_path):
    set_a = write_matrix(tmp_path / "a.csv", [[0.0, 1.0], [1.0, 0.0]])
    set_b = write_matrix(tmp_path / "b.csv", [[0.5, 0.5], [1.0, 1.0]])
    out = tmp_path / "ind.csv"
    assert main(["indicators", str(set_a), str(set_b), "--hv-samples", "20000",
                 "--out", str(out)]) == 0
    table = pd.read_csv(out)
    assert list(table.columns) == ["set", "gd", "sp", "pd", "hv"]
    assert len(table) == 2
    # the front is pooled from both sets, so set a (all nondominated) has gd 0
    # while set b contains the dominated point (1, 1)
    assert table.loc[0, "gd"] == 0.0
    assert table.loc[1, "gd"] > 0.0
    # exact dominated areas: a -> 0.24 + 0.24 - 0.04, b -> 0.7^2
    assert table.loc[0, "hv"] == pytest.approx(0.44, abs=0.02)
    assert table.loc[1, "hv"] == pytest.approx(0.49, abs=0.02)


def test_indicators_external_front(tmp_path):
    set_a = write_matrix(tmp_path / "a.csv", [[0.5, 0.5]])
    front = write_matrix(tmp_path / "front.csv", [[0.0, 1.0], [1.0, 0.0]])
    out = tmp_path / "ind.csv"
    assert main(["indicators", str(set_a), "--front", str(front),
                 "--hv-samples", "5000", "--out", str(out)]) == 0
    table = pd.read_csv(out)
    # front bounds are the unit square, so the point keeps its coordinates
    # and its nearest front member is sqrt(0.5) away
    assert table.loc[0, "gd"] == pytest.approx(np.sqrt(0.5), abs=1e-12)


def test_indicators_missing_file_is_data_error(tmp_path):
    assert main(["indicators", str(tmp_path / "missing.csv")]) == 3


def test_run_requires_dataset(tmp_path):
    assert main(["run", "--out", str(tmp_path / "r")]) == 2


def test_run_and_compare_roundtrip(credit_files, tmp_path):
    csv_path, schema_path = credit_files
    common = ["run", "--dataset", str(csv_path), "--schema", str(schema_path),
              "--generations", "2", "--archive-capacity", "5", "--offspring", "5",
              "--hidden-nodes", "4", "--hv-samples", "500", "--seed", "3",
              "--trials", "2", "--learning-rate", "0.001", "--sigma", "0.05"]
    out_a = tmp_path / "full"
    out_b = tmp_path / "static"
    assert main(common + ["--mode", "moel", "--out", str(out_a)]) == 0
    assert main(common + ["--mode", "static-mask",
                          "--static-mask", "ce,f4,f7,f10,f16,f17,f25",
                          "--out", str(out_b)]) == 0

    report_path = tmp_path / "report.json"
    code = main(["compare", f"full={out_a}", f"static={out_b}",
                 "--indicator", "hv", "--hv-samples", "2000",
                 "--out", str(report_path)])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["algorithms"] == ["full", "static"]
    assert report["n_blocks"] == 2
    assert "statistic" in report and "per_run_values" in report


def test_preset_flag_applies_table_values(credit_files, tmp_path):
    csv_path, schema_path = credit_files
    out = tmp_path / "preset_run"
    assert main(["run", "--dataset", str(csv_path), "--schema", str(schema_path),
                 "--preset", "titanic", "--generations", "1",
                 "--archive-capacity", "4", "--offspring", "4",
                 "--hv-samples", "500", "--out", str(out)]) == 0
    info = json.loads((out / "fold0_trial0" / "run.json").read_text())
    assert info["learning_rate"] == 0.001
    assert info["mutation_strength"] == 0.0001
    assert info["hidden_nodes"] == 8
