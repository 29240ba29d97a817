"""Command line interface.

Subcommands: run (train populations and write run artifacts), indicators
(score point-set CSVs), reduce (objective-subset selection from a
correlation matrix or an objective-value matrix), metrics (fairness
measures of a predictions CSV), plot (SVG charts from run artifacts) and
compare (pooled-front indicators plus a Friedman report across run
groups). Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import (
    FairmoeaError,
    InvalidValue,
    MalformedCsv,
    MissingArtifacts,
    MissingGroup,
    SchemaMismatch,
)
from .experiment import (
    ExperimentConfig,
    indicators_against_front,
    parse_config,
    run_experiment,
)
from .indicators import build_pseudo_front, nondominated_filter
from .metrics import MetricsConfig, objective_vector, raw_measures
from .objectives import MEASURE_NAMES, OBJECTIVE_NAMES
from .plots import emit_plots
from .reduction import mncie_matrix, select_from_matrix
from .stats import friedman_compare

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3

_CONFIG_ERRORS = (InvalidValue,)
_DATA_ERRORS = (MalformedCsv, SchemaMismatch, MissingGroup, MissingArtifacts,
                FileNotFoundError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairmoea")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train populations and write run artifacts")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--dataset", help="CSV dataset path")
    run.add_argument("--schema", help="JSON schema path")
    run.add_argument("--out", help="output directory")
    run.add_argument("--mode", choices=["famoel", "moel", "static-mask"])
    run.add_argument("--preset", help="per-dataset hyperparameter preset name")
    run.add_argument("--seed", type=int)
    run.add_argument("--tau", type=float)
    run.add_argument("--generations", type=int)
    run.add_argument("--folds", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--warmup", type=int)
    run.add_argument("--window", type=int)
    run.add_argument("--archive-capacity", type=int, dest="archive_capacity")
    run.add_argument("--offspring", type=int, dest="offspring_count")
    run.add_argument("--learning-rate", type=float, dest="learning_rate")
    run.add_argument("--sigma", type=float, dest="mutation_strength")
    run.add_argument("--hidden-nodes", type=int, dest="hidden_nodes")
    run.add_argument("--epochs", type=int)
    run.add_argument("--batch-size", type=int, dest="batch_size")
    run.add_argument("--alpha", type=float)
    run.add_argument("--concentration", type=float, dest="dirichlet_concentration")
    run.add_argument("--hv-samples", type=int, dest="hv_samples")
    run.add_argument("--static-mask", dest="static_mask",
                     help="comma list of objective names or indices")
    run.add_argument("--dump-genomes", action="store_true", default=None,
                     dest="dump_genomes")

    ind = sub.add_parser("indicators", help="GD/SP/PD/HV of point-set CSVs")
    ind.add_argument("sets", nargs="+", help="point-set CSVs, one row per point")
    ind.add_argument("--front", help="external reference front CSV "
                                     "(default: pool the input sets)")
    ind.add_argument("--hv-samples", type=int, default=100_000, dest="hv_samples")
    ind.add_argument("--seed", type=int, default=0)
    ind.add_argument("--out", help="output CSV (default stdout)")

    red = sub.add_parser("reduce", help="select a representative objective subset")
    red.add_argument("matrix", help="CSV: correlation matrix, or population "
                                    "objective values with --kind objectives")
    red.add_argument("--kind", choices=["matrix", "objectives"], default="matrix")
    red.add_argument("--tau", type=float, default=0.22)
    red.add_argument("--out", help="output file (default stdout)")

    met = sub.add_parser("metrics", help="fairness measures of a predictions CSV")
    met.add_argument("predictions", help="CSV with columns y, group and p or yhat")
    met.add_argument("--alpha", type=float, default=2.0)
    met.add_argument("--concentration", type=float, default=1.0)
    met.add_argument("--out", help="output directory (default stdout)")

    plot = sub.add_parser("plot", help="emit SVG charts from run directories")
    plot.add_argument("runs", nargs="+", help="run directories")
    plot.add_argument("--out", default="plots", help="output directory")

    cmp_ = sub.add_parser("compare", help="pooled-front comparison of run groups")
    cmp_.add_argument("groups", nargs="+",
                      help="name=dir pairs; dir holds run subdirectories")
    cmp_.add_argument("--indicator", default="hv",
                      choices=["gd", "sp", "pd", "hv"])
    cmp_.add_argument("--on", default="test", choices=["test", "validation"])
    cmp_.add_argument("--hv-samples", type=int, default=100_000, dest="hv_samples")
    cmp_.add_argument("--out", help="output JSON (default stdout)")
    return parser


def _load_points(path) -> np.ndarray:
    try:
        frame = pd.read_csv(path)
        return frame.to_numpy(dtype=float)
    except (pd.errors.EmptyDataError, pd.errors.ParserError, ValueError) as exc:
        raise MalformedCsv(f"{path}: {exc}") from exc


def cmd_run(args) -> int:
    overrides = {
        key: getattr(args, key)
        for key in ExperimentConfig.__dataclass_fields__
        if hasattr(args, key)
    }
    cfg = parse_config(args.config, overrides)
    if not cfg.dataset or not cfg.schema:
        raise InvalidValue("run needs --dataset and --schema (or a config file)")
    root = run_experiment(cfg)
    print(root)
    return EXIT_OK


def cmd_indicators(args) -> int:
    sets = {path: _load_points(path) for path in args.sets}
    if args.front:
        front = nondominated_filter(_load_points(args.front))
    else:
        front = build_pseudo_front(list(sets.values()))
    rows = []
    for path, points in sets.items():
        vals = indicators_against_front(points, front, args.hv_samples, args.seed)
        rows.append([path, vals["gd"], vals["sp"], vals["pd"], vals["hv"]])
    _emit_csv(args.out, ["set", "gd", "sp", "pd", "hv"], rows)
    return EXIT_OK


def cmd_reduce(args) -> int:
    values = _load_points(args.matrix)
    if args.kind == "objectives":
        ncr = mncie_matrix(values)
    else:
        if values.shape[0] != values.shape[1]:
            raise MalformedCsv("correlation matrix must be square")
        ncr = values
    if not 0.0 < args.tau < 1.0:
        raise InvalidValue("tau must lie in (0, 1)")
    selected = select_from_matrix(ncr, args.tau)
    text = ",".join(str(i) for i in selected)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def cmd_metrics(args) -> int:
    frame = pd.read_csv(args.predictions)
    cols = {c.lower(): c for c in frame.columns}
    if "y" not in cols or "group" not in cols:
        raise SchemaMismatch("predictions CSV needs columns y and group")
    y = frame[cols["y"]].to_numpy(dtype=int)
    group_raw = frame[cols["group"]].astype(str).str.lower()
    mapping = {"privileged": 1, "unprivileged": 0, "1": 1, "0": 0}
    try:
        groups = group_raw.map(mapping).to_numpy(dtype=int)
    except (ValueError, TypeError):
        raise SchemaMismatch("group column must be privileged/unprivileged or 1/0")
    cfg = MetricsConfig(alpha=args.alpha, dirichlet_concentration=args.concentration)
    if "p" in cols:
        p = frame[cols["p"]].to_numpy(dtype=float)
    elif "yhat" in cols:
        p = frame[cols["yhat"]].to_numpy(dtype=float)
    else:
        raise SchemaMismatch("predictions CSV needs a p or yhat column")

    yhat = (p >= 0.5).astype(int)
    raw = raw_measures(y, yhat, groups, cfg)
    objectives = objective_vector(p, y, groups, cfg)

    measure_rows = [[f"fair{k+1}", MEASURE_NAMES[k], raw[k]] for k in range(25)]
    objective_rows = [[OBJECTIVE_NAMES[k], objectives[k]] for k in range(26)]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _emit_csv(out / "measures.csv", ["measure", "name", "value"], measure_rows)
        _emit_csv(out / "objectives.csv", ["objective", "value"], objective_rows)
    else:
        _emit_csv(None, ["measure", "name", "value"], measure_rows)
        _emit_csv(None, ["objective", "value"], objective_rows)
    return EXIT_OK


def cmd_plot(args) -> int:
    written = emit_plots(args.runs, args.out)
    for path in written:
        print(path)
    return EXIT_OK


def _run_dirs(root: Path) -> list:
    dirs = sorted(p.parent for p in Path(root).glob("*/final_test_objectives.csv"))
    if not dirs:
        if (Path(root) / "final_test_objectives.csv").exists():
            return [Path(root)]
        raise MissingArtifacts(f"no run directories under {root}")
    return dirs


def cmd_compare(args) -> int:
    groups = {}
    for item in args.groups:
        if "=" not in item:
            raise InvalidValue(f"expected name=dir, got {item!r}")
        name, _, path = item.partition("=")
        groups[name] = _run_dirs(Path(path))

    source = ("final_test_objectives.csv" if args.on == "test"
              else "final_objectives.csv")
    matrices = {
        name: [_load_points(d / source) for d in dirs]
        for name, dirs in groups.items()
    }
    front = build_pseudo_front([m for mats in matrices.values() for m in mats])

    samples = {}
    for name, mats in matrices.items():
        values = []
        for i, points in enumerate(mats):
            vals = indicators_against_front(points, front, args.hv_samples, i)
            values.append(vals[args.indicator])
        samples[name] = values
    higher_better = args.indicator in ("hv", "pd")
    report = friedman_compare(samples, higher_better=higher_better)
    payload = report.as_dict()
    payload["indicator"] = args.indicator
    payload["per_run_values"] = samples
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def _emit_csv(path, header, rows) -> None:
    if path:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows([[str(v) for v in row] for row in rows])
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows([[str(v) for v in row] for row in rows])


_COMMANDS = {
    "run": cmd_run,
    "indicators": cmd_indicators,
    "reduce": cmd_reduce,
    "metrics": cmd_metrics,
    "plot": cmd_plot,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FairmoeaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
