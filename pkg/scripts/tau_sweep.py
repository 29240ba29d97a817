#!/usr/bin/env python3
"""Sensitivity sweep of the selection threshold tau: run the dynamic mode
over a tau grid and plot the final hypervolume against tau."""

import argparse
import tempfile
from pathlib import Path

from fairmoea.cli import main as cli
from fairmoea.datagen import write_credit_dataset
from fairmoea.plots import emit_plots


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="tau_sweep_out")
    parser.add_argument("--taus", default="0.1,0.2,0.22,0.3,0.4,0.5")
    parser.add_argument("--generations", type=int, default=25)
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    out = Path(args.out)
    data_dir = Path(tempfile.mkdtemp(prefix="fairmoea_tau_"))
    write_credit_dataset(data_dir / "credit.csv", data_dir / "credit.schema.json",
                         n=1000, seed=20240)

    run_dirs = []
    for tau in (t.strip() for t in args.taus.split(",")):
        root = out / f"tau_{tau}"
        code = cli([
            "run",
            "--dataset", str(data_dir / "credit.csv"),
            "--schema", str(data_dir / "credit.schema.json"),
            "--preset", "german",
            "--mode", "famoel",
            "--tau", tau,
            "--trials", str(args.trials),
            "--generations", str(args.generations),
            "--archive-capacity", "15",
            "--offspring", "15",
            "--seed", str(args.seed),
            "--hv-samples", "10000",
            "--out", str(root),
        ])
        if code != 0:
            raise SystemExit(code)
        run_dirs.extend(sorted(root.glob("fold*_trial*")))

    written = emit_plots(run_dirs, out / "plots")
    for path in written:
        print(path)


if __name__ == "__main__":
    main()
