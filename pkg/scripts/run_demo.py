#!/usr/bin/env python3
"""End-to-end demo: synthesize data, train with dynamic objective selection,
then render the hypervolume curve, mask heatmap and selection frequencies."""

import argparse
import tempfile
from pathlib import Path

from fairmoea.cli import main as cli


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo_out")
    parser.add_argument("--generations", type=int, default=30)
    parser.add_argument("--archive-capacity", type=int, default=20)
    parser.add_argument("--seed", type=int, default=101)
    args = parser.parse_args()

    out = Path(args.out)
    data_dir = Path(tempfile.mkdtemp(prefix="fairmoea_demo_"))

    from fairmoea.datagen import write_credit_dataset
    write_credit_dataset(data_dir / "credit.csv", data_dir / "credit.schema.json",
                         n=1000, seed=20240)

    code = cli([
        "run",
        "--dataset", str(data_dir / "credit.csv"),
        "--schema", str(data_dir / "credit.schema.json"),
        "--preset", "german",
        "--mode", "famoel",
        "--generations", str(args.generations),
        "--archive-capacity", str(args.archive_capacity),
        "--offspring", str(args.archive_capacity),
        "--seed", str(args.seed),
        "--hv-samples", "20000",
        "--out", str(out / "runs"),
    ])
    if code != 0:
        raise SystemExit(code)

    code = cli(["plot", str(out / "runs" / "fold0_trial0"),
                "--out", str(out / "plots")])
    raise SystemExit(code)


if __name__ == "__main__":
    main()
