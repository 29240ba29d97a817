#!/usr/bin/env python3
"""Generate a synthetic credit-scoring dataset plus its schema file."""

import argparse
from pathlib import Path

from fairmoea.datagen import write_credit_dataset


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data", help="output directory")
    parser.add_argument("--rows", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--group-shift", type=float, default=0.9,
                        help="label-odds tilt toward the privileged group")
    parser.add_argument("--missing-rate", type=float, default=0.0)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "credit.csv"
    schema_path = out / "credit.schema.json"
    write_credit_dataset(csv_path, schema_path, n=args.rows, seed=args.seed,
                         group_shift=args.group_shift,
                         missing_rate=args.missing_rate)
    print(csv_path)
    print(schema_path)


if __name__ == "__main__":
    main()
